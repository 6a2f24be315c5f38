//! Command-line front end: parse the two polynomials, run the pipeline,
//! print the isomorphisms with exact rational coefficients or a JSON
//! report with all integers as decimal strings.

use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use fieldiso::{
    find_isomorphism_with, method2_baseline_with, pre_processing_with, parse_poly, Config, Error,
    IntPoly, IsoCandidate, IsoResult, RunReport,
};

#[derive(Parser)]
#[command(name = "fieldiso", version, about = "Compute all isomorphisms between number fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute all field isomorphisms Q[x]/(g) -> Q[x]/(f)
    Iso(IsoArgs),
}

#[derive(Args)]
struct IsoArgs {
    /// Defining polynomial f: an expression like "x^3 - 2", a coefficient
    /// list like "[-2, 0, 1]", or a path to a file containing one
    f: String,
    /// Defining polynomial g, same forms as f
    g: String,
    /// Emit a JSON report on stdout
    #[arg(long)]
    json: bool,
    /// Skip the shared lattice stage (per-root reduction only)
    #[arg(long)]
    baseline: bool,
    /// Stop after pre-processing and report the lattice dimension
    #[arg(long, conflicts_with = "baseline")]
    pre_only: bool,
    /// Start the prime search after this value
    #[arg(long, value_name = "N")]
    start_prime: Option<u64>,
    /// Print progress diagnostics on stderr
    #[arg(long)]
    verbose: bool,
    /// Abort with an error after this many seconds
    #[arg(long, value_name = "N")]
    max_seconds: Option<u64>,
}

#[derive(Serialize)]
struct JsonIso {
    coeffs_num: Vec<String>,
    denom: String,
}

#[derive(Serialize)]
struct JsonOut {
    isomorphic: Option<bool>,
    count: usize,
    isomorphisms: Vec<JsonIso>,
    preprocessing_dim: usize,
    primes_used: Vec<u64>,
}

fn load_poly(arg: &str, which: &str) -> Result<IntPoly, String> {
    let text = if Path::new(arg).is_file() {
        std::fs::read_to_string(arg).map_err(|e| format!("cannot read {}: {}", arg, e))?
    } else {
        arg.to_string()
    };
    let poly = parse_poly(text.trim()).map_err(|e| format!("{}: {}", which, e))?;
    if poly.deg() < 1 {
        return Err(format!("{}: degree must be at least 1", which));
    }
    Ok(poly)
}

fn json_iso(cand: &IsoCandidate, n: usize) -> JsonIso {
    let num = cand.h.numerator();
    let coeffs_num = (0..n).map(|i| num.coeff(i).to_string()).collect();
    JsonIso {
        coeffs_num,
        denom: cand.h.denominator().to_string(),
    }
}

fn print_human(result: &IsoResult, report: &RunReport, pre_only: bool) {
    match result {
        IsoResult::NoIsomorphism => println!("no isomorphism"),
        IsoResult::Isomorphisms(isos) => {
            println!(
                "isomorphic: {} isomorphism{}",
                isos.len(),
                if isos.len() == 1 { "" } else { "s" }
            );
            for c in isos {
                println!("  h(x) = {}", c.h);
            }
        }
        IsoResult::Undecided(ls) => {
            if pre_only {
                println!("undecided after pre-processing: lattice dimension {}", ls.dim());
            } else {
                println!("undecided");
            }
        }
    }
    if pre_only {
        println!("pre-processing dimension: {}", report.preprocessing_dim);
    }
}

fn print_json(result: &IsoResult, report: &RunReport, n: usize) {
    let (isomorphic, isos): (Option<bool>, Vec<JsonIso>) = match result {
        IsoResult::NoIsomorphism => (Some(false), Vec::new()),
        IsoResult::Isomorphisms(v) => (Some(true), v.iter().map(|c| json_iso(c, n)).collect()),
        IsoResult::Undecided(_) => (None, Vec::new()),
    };
    let out = JsonOut {
        isomorphic,
        count: isos.len(),
        isomorphisms: isos,
        preprocessing_dim: report.preprocessing_dim,
        primes_used: report.primes_used.clone(),
    };
    println!("{}", serde_json::to_string(&out).expect("serializable"));
}

fn run_iso(args: &IsoArgs) -> ExitCode {
    let f = match load_poly(&args.f, "f") {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {}", e);
            return ExitCode::from(2);
        }
    };
    let g = match load_poly(&args.g, "g") {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {}", e);
            return ExitCode::from(2);
        }
    };
    let n = f.deg();

    let mut cfg = Config::default();
    if let Some(bp) = args.start_prime {
        cfg.start_prime = bp;
    }
    if let Some(secs) = args.max_seconds {
        cfg.deadline = Some(Instant::now() + Duration::from_secs(secs));
    }

    if f.degree() != g.degree() {
        eprintln!("note: degrees differ; the fields cannot be isomorphic");
        let result = IsoResult::NoIsomorphism;
        let report = RunReport::default();
        if args.json {
            print_json(&result, &report, n);
        } else {
            print_human(&result, &report, args.pre_only);
        }
        return ExitCode::SUCCESS;
    }

    let started = Instant::now();
    let outcome = if args.pre_only {
        pre_processing_with(&f, &g, &cfg)
    } else if args.baseline {
        method2_baseline_with(&f, &g, &cfg)
    } else {
        find_isomorphism_with(&f, &g, &cfg)
    };

    match outcome {
        Ok((result, report)) => {
            if !matches!(result, IsoResult::NoIsomorphism) {
                if !report.certified_f {
                    eprintln!("warning: no irreducibility certificate found for f; results assume f is irreducible");
                }
                if !report.certified_g {
                    eprintln!("warning: no irreducibility certificate found for g; results assume g is irreducible");
                }
            }
            if args.verbose {
                eprintln!(
                    "primes used: {:?}; pre dim {}; swaps {} (pre) + {} (per-root); doublings {}; {:.3}s",
                    report.primes_used,
                    report.preprocessing_dim,
                    report.pre_swaps,
                    report.per_root_swaps,
                    report.precision_doublings,
                    started.elapsed().as_secs_f64()
                );
            }
            if args.json {
                print_json(&result, &report, n);
            } else {
                print_human(&result, &report, args.pre_only);
            }
            ExitCode::SUCCESS
        }
        Err(Error::Timeout) => {
            eprintln!("error: timed out after {:?} seconds", args.max_seconds);
            ExitCode::FAILURE
        }
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::FAILURE
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Command::Iso(args) => run_iso(args),
    }
}
