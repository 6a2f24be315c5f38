//! The top-level pipeline: prime search, lattice pre-processing shared by
//! every root pairing, the per-root phase that finishes the job, a
//! baseline that skips the shared stage, and exact verification.
//!
//! The central invariant, maintained through every reduction: for every
//! true isomorphism `h`, the integer vector `(lc(g)*vec(h), lc(g))` lies
//! in the row space of the working matrix `C`. Reductions only ever add
//! sub-trace congruences (valid for all isomorphisms at once) or per-root
//! evaluation congruences (valid for the isomorphism matching that root),
//! and removals never drop vectors below the removal bound.

use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lattice::{self, IntMatrix};
use crate::modpoly::{self, DistinctDegreeFactorization, ModPoly};
use crate::polyz::{self, BoundData, IntPoly, RatPoly};
use crate::subtrace;

/// Tunables of the pipeline. The defaults match the reference procedure;
/// they are exposed so tests and the CLI can tighten or relax them.
#[derive(Debug, Clone)]
pub struct Config {
    /// Prime search starts at the first prime strictly greater than this.
    pub start_prime: u64,
    /// Single-block primes tolerated before concluding the fields look Galois.
    pub galois_limit: u32,
    /// Uninformative primes (C*T = 0) tolerated before giving the lattice up.
    pub uninformative_limit: u32,
    /// Scale factor applied to nonzero congruence residue columns.
    pub rescale: BigInt,
    /// Cap on p-adic precision doublings in the per-root phase.
    pub max_precision_doublings: u32,
    /// Primes above this abort the search (safety net, not a tunable).
    pub prime_cap: u64,
    /// Optional wall-clock deadline.
    pub deadline: Option<Instant>,
    /// Test hook: vectors asserted to remain in the row space of `C`
    /// after every pre-processing reduction.
    pub track_vectors: Vec<Vec<BigInt>>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            start_prime: 3,
            galois_limit: 25,
            uninformative_limit: 10,
            rescale: BigInt::from(10u64).pow(20),
            max_precision_doublings: 8,
            prime_cap: 1_000_000,
            deadline: None,
            track_vectors: Vec::new(),
        }
    }
}

/// One suitable prime: matching distinct-degree patterns of `f` and `g`
/// Hensel-lifted to `p^a`.
#[derive(Debug, Clone)]
pub struct PrimeData {
    pub p: u64,
    pub a: u32,
    pub modulus: BigInt,
    /// Number of distinct factor degrees.
    pub m: usize,
    /// `(d, F_d, G_d)` ascending in `d`, all monic mod `p^a`.
    pub pairs: Vec<(usize, ModPoly, ModPoly)>,
    /// Degree of the linear block of `f` (0 when absent).
    pub deg_f1: usize,
}

impl PrimeData {
    pub fn from_factorizations(
        p: u64,
        a: u32,
        df: &DistinctDegreeFactorization,
        dg: &DistinctDegreeFactorization,
    ) -> PrimeData {
        assert_eq!(df.pattern(), dg.pattern());
        let pairs: Vec<(usize, ModPoly, ModPoly)> = df
            .entries()
            .iter()
            .zip(dg.entries())
            .map(|((d, fd), (_, gd))| (*d, fd.clone(), gd.clone()))
            .collect();
        PrimeData {
            p,
            a,
            modulus: BigInt::from(p).pow(a),
            m: pairs.len(),
            deg_f1: df.deg_f1(),
            pairs,
        }
    }

    fn linear_pair(&self) -> Option<(&ModPoly, &ModPoly)> {
        self.pairs
            .iter()
            .find(|(d, _, _)| *d == 1)
            .map(|(_, fd, gd)| (fd, gd))
    }
}

/// The lattice handed back when pre-processing cannot decide on its own.
#[derive(Debug, Clone)]
pub struct LatticeState {
    /// Rows span a lattice containing `(lc(g)*vec(h), lc(g))` for every
    /// isomorphism `h`.
    pub c: IntMatrix,
    pub bound: BoundData,
    /// Uninformative primes consumed.
    pub uninformative: u32,
    /// Whether the prime search concluded the fields look Galois.
    pub galois_suspect: bool,
}

impl LatticeState {
    pub fn dim(&self) -> usize {
        self.c.n_rows()
    }
}

/// A verified isomorphism `beta -> h(alpha)` in rational representation:
/// `numerator` holds the integer coordinates of `lc(g) * f'(alpha) *
/// h(alpha)` over the power basis, and `h` is the reduced rational form.
#[derive(Debug, Clone)]
pub struct IsoCandidate {
    pub numerator: IntPoly,
    pub denom: BigInt,
    pub h: RatPoly,
}

impl PartialEq for IsoCandidate {
    fn eq(&self, other: &Self) -> bool {
        self.h == other.h
    }
}
impl Eq for IsoCandidate {}

impl std::fmt::Display for IsoCandidate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.h)
    }
}

/// Outcome of a pipeline stage.
#[derive(Debug, Clone)]
pub enum IsoResult {
    NoIsomorphism,
    /// All isomorphisms, each exactly verified.
    Isomorphisms(Vec<IsoCandidate>),
    /// Pre-processing only: the surviving lattice. The full pipeline
    /// never returns this.
    Undecided(LatticeState),
}

impl IsoResult {
    pub fn is_decided(&self) -> bool {
        !matches!(self, IsoResult::Undecided(_))
    }

    pub fn count(&self) -> usize {
        match self {
            IsoResult::Isomorphisms(v) => v.len(),
            _ => 0,
        }
    }

    pub fn isomorphisms(&self) -> &[IsoCandidate] {
        match self {
            IsoResult::Isomorphisms(v) => v,
            _ => &[],
        }
    }
}

/// Diagnostics of one pipeline run.
#[derive(Debug, Clone, Default)]
pub struct RunReport {
    pub primes_used: Vec<u64>,
    /// Rows of `C` when the shared stage finished (0 or 1 when it decided).
    pub preprocessing_dim: usize,
    pub pre_swaps: u64,
    pub per_root_swaps: u64,
    pub precision_doublings: u32,
    pub uninformative_primes: u32,
    pub galois_suspect: bool,
    /// Whether some prime certified irreducibility (single block of
    /// degree n) for `f` and `g` respectively.
    pub certified_f: bool,
    pub certified_g: bool,
}

impl RunReport {
    pub fn total_swaps(&self) -> u64 {
        self.pre_swaps + self.per_root_swaps
    }
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

enum PrimeOutcome {
    Found(PrimeData),
    GaloisSuspect,
    PatternMismatch,
}

struct Session<'a> {
    f: &'a IntPoly,
    g: &'a IntPoly,
    n: usize,
    disc_f: BigInt,
    disc_g: BigInt,
    bound: BoundData,
    /// `(f')^{-1} mod f` over Q, for rebuilding `h` from lattice rows.
    inv_fprime_q: RatPoly,
    f_rat: RatPoly,
    cfg: &'a Config,
    cursor: u64,
    stored: Vec<PrimeData>,
    report: RunReport,
}

impl<'a> Session<'a> {
    fn new(f: &'a IntPoly, g: &'a IntPoly, cfg: &'a Config) -> Result<Self> {
        let n = f.degree().ok_or(Error::ZeroPolynomial)?;
        let ng = g.degree().ok_or(Error::ZeroPolynomial)?;
        if n == 0 || ng == 0 {
            return Err(Error::ZeroPolynomial);
        }
        if n != ng {
            return Err(Error::DegreeMismatch(n, ng));
        }
        let disc_f = polyz::discriminant(f)?;
        let disc_g = polyz::discriminant(g)?;
        if disc_f.is_zero() || disc_g.is_zero() {
            return Err(Error::NotSquarefree);
        }
        let bound = polyz::iso_vector_bound(f, g)?;
        let f_rat = RatPoly::from_int(f.clone());
        let fprime_rat = RatPoly::from_int(f.derivative());
        let inv_fprime_q =
            polyz::invmod_rational(&fprime_rat, &f_rat).map_err(|_| Error::NotSquarefree)?;
        Ok(Session {
            f,
            g,
            n,
            disc_f,
            disc_g,
            bound,
            inv_fprime_q,
            f_rat,
            cfg,
            cursor: cfg.start_prime,
            stored: Vec::new(),
            report: RunReport::default(),
        })
    }

    fn check_deadline(&self) -> Result<()> {
        if let Some(d) = self.cfg.deadline {
            if Instant::now() > d {
                return Err(Error::Timeout);
            }
        }
        Ok(())
    }

    fn divides(p: u64, x: &BigInt) -> bool {
        (x % BigInt::from(p)).is_zero()
    }

    /// Smallest precision `a >= 1` with `p^a >= b^(e/10) * 2^(e/4)`,
    /// compared exactly through 20th powers.
    fn precision_for(&self, p: u64, e: usize) -> u32 {
        let b = &self.bound.b;
        let target: BigInt = b.numer().pow(2 * e as u32) << (5 * e);
        let mut acc: BigInt = b.denom().pow(2 * e as u32);
        let pw = BigInt::from(p).pow(20);
        let mut a = 0u32;
        while acc < target || a == 0 {
            acc *= &pw;
            a += 1;
        }
        a
    }

    fn note_patterns(&mut self, df: &DistinctDegreeFactorization, dg: Option<&DistinctDegreeFactorization>) {
        let n = self.n;
        if df.pattern() == [(n, n)] {
            self.report.certified_f = true;
        }
        if let Some(dg) = dg {
            if dg.pattern() == [(n, n)] {
                self.report.certified_g = true;
            }
        }
    }

    /// Scan primes past the cursor for one with matching distinct-degree
    /// patterns. In the default mode, primes where `f` stays in a single
    /// block are skipped and counted toward the Galois verdict; the
    /// fallback mode (`accept_single_block`) compares patterns for those
    /// too and can additionally insist on a nonempty linear block.
    fn search_prime(
        &mut self,
        e: usize,
        accept_single_block: bool,
        require_linear: bool,
    ) -> Result<PrimeOutcome> {
        let mut counter = 0u32;
        loop {
            self.check_deadline()?;
            let mut p = self.cursor + 1;
            while !is_prime_u64(p) {
                p += 1;
            }
            if p > self.cfg.prime_cap {
                return Err(Error::PrimeSearchExhausted);
            }
            self.cursor = p;
            if Self::divides(p, &self.f.lc()) || Self::divides(p, &self.disc_f) {
                continue;
            }
            if Self::divides(p, &self.g.lc()) || Self::divides(p, &self.disc_g) {
                continue;
            }
            let df = modpoly::ddf(self.f, p)?;
            if df.num_degrees() == 1 && !accept_single_block {
                self.note_patterns(&df, None);
                counter += 1;
                if counter >= self.cfg.galois_limit {
                    return Ok(PrimeOutcome::GaloisSuspect);
                }
                continue;
            }
            let dg = modpoly::ddf(self.g, p)?;
            self.note_patterns(&df, Some(&dg));
            if df.pattern() != dg.pattern() {
                return Ok(PrimeOutcome::PatternMismatch);
            }
            if require_linear && df.deg_f1() == 0 {
                continue;
            }
            let a = self.precision_for(p, e);
            let df = modpoly::hensel_lift_factors(self.f, &df, p, a)?;
            let dg = modpoly::hensel_lift_factors(self.g, &dg, p, a)?;
            let pd = PrimeData::from_factorizations(p, a, &df, &dg);
            if pd.deg_f1 > 0 {
                self.stored.push(pd.clone());
            }
            self.report.primes_used.push(p);
            return Ok(PrimeOutcome::Found(pd));
        }
    }

    /// Append the congruence columns `C*T` and the modulus rows, reduce
    /// with removals, and re-reduce with the residue block rescaled until
    /// it vanishes. Returns the new `C`.
    fn reduce_with_congruences(
        &mut self,
        c: IntMatrix,
        ct_sym: Vec<Vec<BigInt>>,
        modulus: &BigInt,
        per_root: bool,
    ) -> IntMatrix {
        let w = c.n_cols();
        let m = ct_sym.first().map_or(0, |r| r.len());
        let mut rows: Vec<Vec<BigInt>> = c
            .rows()
            .iter()
            .zip(&ct_sym)
            .map(|(ci, ti)| {
                let mut row = ci.clone();
                row.extend(ti.iter().cloned());
                row
            })
            .collect();
        for l in 0..m {
            let mut row = vec![BigInt::zero(); w + m];
            row[w + l] = modulus.clone();
            rows.push(row);
        }
        let mut a_mat = IntMatrix::new(rows, w + m);
        loop {
            let red = lattice::lll_with_removals(&a_mat, &self.bound.b_ext);
            if per_root {
                self.report.per_root_swaps += red.swaps;
            } else {
                self.report.pre_swaps += red.swaps;
            }
            let mut c_rows = Vec::with_capacity(red.basis.n_rows());
            let mut b_rows = Vec::with_capacity(red.basis.n_rows());
            let mut b_nonzero = false;
            for row in red.basis.rows() {
                c_rows.push(row[..w].to_vec());
                let b: Vec<BigInt> = row[w..].to_vec();
                if b.iter().any(|x| !x.is_zero()) {
                    b_nonzero = true;
                }
                b_rows.push(b);
            }
            if !b_nonzero {
                return IntMatrix::new(c_rows, w);
            }
            let rows: Vec<Vec<BigInt>> = c_rows
                .into_iter()
                .zip(b_rows)
                .map(|(mut cr, br)| {
                    cr.extend(br.into_iter().map(|x| x * &self.cfg.rescale));
                    cr
                })
                .collect();
            a_mat = IntMatrix::new(rows, w + m);
        }
    }

    fn assert_tracked(&self, c: &IntMatrix) {
        for v in &self.cfg.track_vectors {
            assert!(
                lattice::z_span_contains(c, v).unwrap_or(false),
                "tracked isomorphism vector fell out of the lattice"
            );
        }
    }

    /// Build the candidate from the single surviving row and verify it
    /// exactly; `None` when the row cannot carry an isomorphism.
    fn candidate_from_row(&self, row: &[BigInt]) -> Option<IsoCandidate> {
        let n = self.n;
        let v = &row[n];
        if v.is_zero() {
            return None;
        }
        let gn = self.g.lc();
        if !(&gn % v).is_zero() {
            return None;
        }
        let k = &gn / v;
        let w = IntPoly::new(row[..n].iter().map(|x| x * &k).collect());
        let h = RatPoly::from_int(w.clone())
            .mul(&self.inv_fprime_q)
            .rem(&self.f_rat)
            .ok()?
            .mul_rational(&num_rational::BigRational::new(BigInt::one(), gn.clone()));
        let cand = IsoCandidate {
            numerator: w,
            denom: gn,
            h,
        };
        if verify_isomorphism(self.f, self.g, &cand) {
            // the accepted vector must satisfy the removal bound
            let mut norm_sq: BigInt = cand.numerator.norm2_sq();
            norm_sq += &cand.denom * &cand.denom;
            assert!(
                norm_sq <= self.bound.b_ext_sq(),
                "verified isomorphism vector exceeds the removal bound"
            );
            Some(cand)
        } else {
            None
        }
    }

    /// The shared stage: intersect the candidate lattice with sub-trace
    /// congruences, one suitable prime at a time.
    fn pre_processing(&mut self) -> Result<IsoResult> {
        let n = self.n;
        let mut c = IntMatrix::identity(n + 1);
        let mut uninformative = 0u32;
        let outcome = loop {
            self.check_deadline()?;
            let e = c.n_rows();
            let pd = match self.search_prime(e, false, false)? {
                PrimeOutcome::GaloisSuspect => {
                    self.report.galois_suspect = true;
                    break IsoResult::Undecided(self.lattice_state(c, uninformative));
                }
                PrimeOutcome::PatternMismatch => break IsoResult::NoIsomorphism,
                PrimeOutcome::Found(pd) => pd,
            };
            let t = subtrace::build_t(self.f, self.g, &pd)?;
            let ct = c.mul(t.matrix());
            let mut all_zero = true;
            let ct_sym: Vec<Vec<BigInt>> = ct
                .rows()
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|x| {
                            let r = x.mod_floor(&pd.modulus);
                            if !r.is_zero() {
                                all_zero = false;
                            }
                            let half = &pd.modulus / BigInt::from(2);
                            if r > half {
                                r - &pd.modulus
                            } else {
                                r
                            }
                        })
                        .collect()
                })
                .collect();
            if all_zero {
                uninformative += 1;
                self.report.uninformative_primes = uninformative;
                if uninformative >= self.cfg.uninformative_limit {
                    break IsoResult::Undecided(self.lattice_state(c, uninformative));
                }
                continue;
            }
            c = self.reduce_with_congruences(c, ct_sym, &pd.modulus.clone(), false);
            debug_assert!(c.n_rows() <= e, "row count must never grow");
            self.assert_tracked(&c);
            match c.n_rows() {
                0 => break IsoResult::NoIsomorphism,
                1 => {
                    break match self.candidate_from_row(c.row(0)) {
                        Some(cand) => IsoResult::Isomorphisms(vec![cand]),
                        None => IsoResult::NoIsomorphism,
                    }
                }
                _ => {}
            }
        };
        self.report.preprocessing_dim = match &outcome {
            IsoResult::Undecided(ls) => ls.dim(),
            IsoResult::Isomorphisms(_) => 1,
            IsoResult::NoIsomorphism => 0,
        };
        Ok(outcome)
    }

    fn lattice_state(&self, c: IntMatrix, uninformative: u32) -> LatticeState {
        LatticeState {
            c,
            bound: self.bound.clone(),
            uninformative,
            galois_suspect: self.report.galois_suspect,
        }
    }

    /// Pick the stored prime with the smallest linear block, searching
    /// further (accepting single-block primes) when none is stored.
    fn choose_linear_prime(&mut self, e: usize) -> Result<std::result::Result<PrimeData, IsoResult>> {
        if let Some(pd) = self
            .stored
            .iter()
            .filter(|pd| pd.deg_f1 > 0)
            .min_by_key(|pd| pd.deg_f1)
        {
            return Ok(Ok(pd.clone()));
        }
        match self.search_prime(e, true, true)? {
            PrimeOutcome::Found(pd) => Ok(Ok(pd)),
            PrimeOutcome::PatternMismatch => Ok(Err(IsoResult::NoIsomorphism)),
            PrimeOutcome::GaloisSuspect => unreachable!("galois counter disabled in fallback"),
        }
    }

    /// Sweep the p-adic roots of `f`, holding the first root of `g`
    /// fixed; each sweep index contributes at most one isomorphism.
    fn per_root_phase(&mut self, c0: IntMatrix) -> Result<IsoResult> {
        let pd = match self.choose_linear_prime(c0.n_rows())? {
            Ok(pd) => pd,
            Err(verdict) => return Ok(verdict),
        };
        let (f1, g1) = pd.linear_pair().expect("chosen prime has a linear block");
        let alphas = modpoly::lift_roots(f1, pd.p, pd.a)?;
        let betas = modpoly::lift_roots(g1, pd.p, pd.a)?;
        let beta1 = betas[0].clone();
        let mut found = Vec::new();
        for alpha in alphas {
            if let Some(cand) = self.per_root_single(c0.clone(), pd.p, pd.a, alpha, beta1.clone())? {
                debug_assert!(!found.contains(&cand), "duplicate isomorphism across roots");
                found.push(cand);
            }
        }
        if found.is_empty() {
            Ok(IsoResult::NoIsomorphism)
        } else {
            Ok(IsoResult::Isomorphisms(found))
        }
    }

    /// Constrain the lattice by `h(alpha_j) = beta_1` at increasing
    /// p-adic precision until the dimension drops to one or the root
    /// pairing is ruled out.
    fn per_root_single(
        &mut self,
        mut c: IntMatrix,
        p: u64,
        a0: u32,
        mut alpha: BigInt,
        mut beta: BigInt,
    ) -> Result<Option<IsoCandidate>> {
        let n = self.n;
        let mut a = a0;
        let mut basis = subtrace::base_polynomials(self.f, p, a)?;
        let mut doublings = 0u32;
        loop {
            self.check_deadline()?;
            let modulus = BigInt::from(p).pow(a);
            let half = &modulus / BigInt::from(2);
            let mut t_col: Vec<BigInt> = basis
                .base()
                .iter()
                .map(|b| b.evaluate(&alpha))
                .collect();
            t_col.push((-&beta).mod_floor(&modulus));
            debug_assert_eq!(t_col.len(), n + 1);

            let mut informative = false;
            let ct_sym: Vec<Vec<BigInt>> = c
                .rows()
                .iter()
                .map(|row| {
                    let dot: BigInt = row.iter().zip(&t_col).map(|(x, y)| x * y).sum();
                    let r = dot.mod_floor(&modulus);
                    if !r.is_zero() {
                        informative = true;
                    }
                    vec![if r > half { r - &modulus } else { r }]
                })
                .collect();

            if informative {
                c = self.reduce_with_congruences(c, ct_sym, &modulus, true);
                match c.n_rows() {
                    0 => return Ok(None),
                    1 => return Ok(self.candidate_from_row(c.row(0))),
                    _ => {}
                }
            }

            doublings += 1;
            self.report.precision_doublings += 1;
            if doublings > self.cfg.max_precision_doublings {
                return Err(Error::PrecisionCapExceeded(doublings));
            }
            a *= 2;
            let fm = modpoly::monic_reduction(self.f, p, a)?;
            alpha = modpoly::newton_root_step(&fm, &alpha, a)?;
            let gm = modpoly::monic_reduction(self.g, p, a)?;
            beta = modpoly::newton_root_step(&gm, &beta, a)?;
            basis = subtrace::base_polynomials(self.f, p, a)?;
        }
    }

    fn find_isomorphism(&mut self) -> Result<IsoResult> {
        match self.pre_processing()? {
            IsoResult::Undecided(ls) => self.per_root_phase(ls.c),
            decided => Ok(decided),
        }
    }

    fn method2(&mut self) -> Result<IsoResult> {
        let c = IntMatrix::identity(self.n + 1);
        self.report.preprocessing_dim = c.n_rows();
        self.per_root_phase(c)
    }
}

/// Exact test that `cand` is an isomorphism: `g(h(x)) = 0 mod f(x)`
/// over Q, no p-adic shortcuts.
pub fn verify_isomorphism(f: &IntPoly, g: &IntPoly, cand: &IsoCandidate) -> bool {
    let f_rat = RatPoly::from_int(f.clone());
    let mut acc = RatPoly::zero();
    for i in (0..=g.deg()).rev() {
        acc = acc.mul(&cand.h).add(&RatPoly::from_int(IntPoly::constant(g.coeff(i))));
        match acc.rem(&f_rat) {
            Ok(r) => acc = r,
            Err(_) => return false,
        }
    }
    acc.is_zero()
}

/// Run pre-processing alone: either a verdict or the surviving lattice.
pub fn pre_processing(f: &IntPoly, g: &IntPoly) -> Result<IsoResult> {
    Ok(pre_processing_with(f, g, &Config::default())?.0)
}

pub fn pre_processing_with(f: &IntPoly, g: &IntPoly, cfg: &Config) -> Result<(IsoResult, RunReport)> {
    let mut s = Session::new(f, g, cfg)?;
    let r = s.pre_processing()?;
    Ok((r, s.report))
}

/// Compute the set of all isomorphisms `Q[x]/(g) -> Q[x]/(f)`. Inputs are
/// trusted to be irreducible of equal degree; check
/// [`RunReport::certified_f`] when that matters.
pub fn find_isomorphism(f: &IntPoly, g: &IntPoly) -> Result<IsoResult> {
    Ok(find_isomorphism_with(f, g, &Config::default())?.0)
}

pub fn find_isomorphism_with(
    f: &IntPoly,
    g: &IntPoly,
    cfg: &Config,
) -> Result<(IsoResult, RunReport)> {
    let mut s = Session::new(f, g, cfg)?;
    let r = s.find_isomorphism()?;
    Ok((r, s.report))
}

/// The baseline that skips the shared lattice stage: per-root LLL from
/// the identity lattice. Same output contract as [`find_isomorphism`];
/// kept for differential testing and benchmarks.
pub fn method2_baseline(f: &IntPoly, g: &IntPoly) -> Result<IsoResult> {
    Ok(method2_baseline_with(f, g, &Config::default())?.0)
}

pub fn method2_baseline_with(
    f: &IntPoly,
    g: &IntPoly,
    cfg: &Config,
) -> Result<(IsoResult, RunReport)> {
    let mut s = Session::new(f, g, cfg)?;
    let r = s.method2()?;
    Ok((r, s.report))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ip(coeffs: &[i64]) -> IntPoly {
        IntPoly::from_i64(coeffs)
    }

    fn rat(coeffs: &[i64]) -> RatPoly {
        RatPoly::from_int(ip(coeffs))
    }

    fn iso_set(result: &IsoResult) -> Vec<RatPoly> {
        let mut v: Vec<RatPoly> = result.isomorphisms().iter().map(|c| c.h.clone()).collect();
        v.sort_by_key(|h| format!("{}", h));
        v
    }

    #[test]
    fn first_suitable_prime_for_cubics() {
        let f = ip(&[-2, 0, 0, 1]);
        let g = ip(&[-16, 0, 0, 1]);
        let cfg = Config::default();
        let mut s = Session::new(&f, &g, &cfg).unwrap();
        match s.search_prime(4, false, false).unwrap() {
            PrimeOutcome::Found(pd) => {
                assert_eq!(pd.p, 5);
                assert_eq!(pd.m, 2);
                assert_eq!(
                    pd.pairs.iter().map(|(d, fd, _)| (*d, fd.deg())).collect::<Vec<_>>(),
                    vec![(1, 1), (2, 2)]
                );
            }
            _ => panic!("expected a suitable prime"),
        }
    }

    #[test]
    fn galois_looking_inputs_hit_the_counter() {
        let f = ip(&[-2, 0, 1]);
        let cfg = Config::default();
        let mut s = Session::new(&f, &f, &cfg).unwrap();
        match s.search_prime(3, false, false).unwrap() {
            PrimeOutcome::GaloisSuspect => {}
            _ => panic!("quadratics always factor in a single block"),
        }
    }

    #[test]
    fn pattern_mismatch_proves_non_isomorphic() {
        let f = ip(&[-2, 0, 1]);
        let g = ip(&[-3, 0, 1]);
        let r = find_isomorphism(&f, &g).unwrap();
        assert!(matches!(r, IsoResult::NoIsomorphism));
    }

    #[test]
    fn preprocessing_decides_scaled_cubic() {
        let f = ip(&[-2, 0, 0, 1]);
        let g = ip(&[-16, 0, 0, 1]);
        let (r, report) = pre_processing_with(&f, &g, &Config::default()).unwrap();
        assert_eq!(r.count(), 1);
        assert_eq!(report.preprocessing_dim, 1);
        assert_eq!(iso_set(&r), vec![rat(&[0, 2])]);
    }

    #[test]
    fn preprocessing_tracks_the_isomorphism_vector() {
        let f = ip(&[-2, 0, 0, 1]);
        let g = ip(&[-16, 0, 0, 1]);
        let mut cfg = Config::default();
        // vector (12, 0, 0, 1) for h = 2x
        cfg.track_vectors = vec![vec![
            BigInt::from(12),
            BigInt::zero(),
            BigInt::zero(),
            BigInt::one(),
        ]];
        let (r, _) = find_isomorphism_with(&f, &g, &cfg).unwrap();
        assert_eq!(r.count(), 1);
    }

    #[test]
    fn identity_is_the_only_automorphism_of_pure_cubic() {
        let f = ip(&[-2, 0, 0, 1]);
        let r = find_isomorphism(&f, &f).unwrap();
        assert_eq!(iso_set(&r), vec![rat(&[0, 1])]);
    }

    #[test]
    fn galois_quadratic_pair_has_two_isomorphisms() {
        let f = ip(&[-2, 0, 1]);
        let g = ip(&[-8, 0, 1]);
        let r = find_isomorphism(&f, &g).unwrap();
        assert_eq!(iso_set(&r), vec![rat(&[0, -2]), rat(&[0, 2])]);
    }

    #[test]
    fn baseline_agrees_on_quadratic_pair() {
        let f = ip(&[-2, 0, 1]);
        let g = ip(&[-8, 0, 1]);
        let a = find_isomorphism(&f, &g).unwrap();
        let b = method2_baseline(&f, &g).unwrap();
        assert_eq!(iso_set(&a), iso_set(&b));
    }

    #[test]
    fn cyclotomic_octic_field_has_four_automorphisms() {
        let f = ip(&[1, 0, 0, 0, 1]);
        let (r, report) = find_isomorphism_with(&f, &f, &Config::default()).unwrap();
        assert!(report.galois_suspect);
        assert_eq!(r.count(), 4);
        for c in r.isomorphisms() {
            assert!(verify_isomorphism(&f, &f, c));
        }
    }

    #[test]
    fn degree_one_fields_are_isomorphic() {
        let f = ip(&[1, 1]); // alpha = -1
        let g = ip(&[-1, 1]); // beta = 1
        let r = find_isomorphism(&f, &g).unwrap();
        assert_eq!(iso_set(&r), vec![rat(&[1])]);
    }

    #[test]
    fn rescale_loop_enforces_congruence_columns() {
        // modulus far below the removal bound: rows with nonzero residue
        // part survive the first reduction and must be pushed out by the
        // rescale loop, leaving exactly the solutions of v . t = 0 mod 7
        let f = ip(&[-2, 0, 1]);
        let g = ip(&[-8, 0, 1]);
        let cfg = Config::default();
        let mut s = Session::new(&f, &g, &cfg).unwrap();
        let c = IntMatrix::identity(3);
        let ct: Vec<Vec<BigInt>> = vec![
            vec![BigInt::one()],
            vec![BigInt::zero()],
            vec![BigInt::zero()],
        ];
        let out = s.reduce_with_congruences(c, ct, &BigInt::from(7), false);
        assert_eq!(out.n_rows(), 3);
        let seven = [BigInt::from(7), BigInt::zero(), BigInt::zero()];
        let one = [BigInt::one(), BigInt::zero(), BigInt::zero()];
        let e2 = [BigInt::zero(), BigInt::one(), BigInt::zero()];
        assert!(lattice::z_span_contains(&out, &seven).unwrap());
        assert!(lattice::z_span_contains(&out, &e2).unwrap());
        assert!(!lattice::z_span_contains(&out, &one).unwrap());
    }

    #[test]
    fn verify_examples() {
        let f = ip(&[-2, 0, 1]);
        let g = ip(&[-8, 0, 1]);
        let mk = |h: RatPoly| IsoCandidate {
            numerator: IntPoly::zero(),
            denom: BigInt::one(),
            h,
        };
        assert!(verify_isomorphism(&f, &g, &mk(rat(&[0, 2]))));
        assert!(!verify_isomorphism(&f, &g, &mk(rat(&[0, 1]))));
        assert!(verify_isomorphism(&f, &f, &mk(rat(&[0, 1]))));
    }

    #[test]
    fn mismatched_degrees_error() {
        let f = ip(&[-2, 0, 1]);
        let g = ip(&[-2, 0, 0, 1]);
        assert!(matches!(
            find_isomorphism(&f, &g),
            Err(Error::DegreeMismatch(2, 3))
        ));
    }

    #[test]
    fn non_monic_pair_with_isomorphism() {
        // f non-monic: 2x^2 - 3 over Q(sqrt(3/2)); g = minpoly of 2*alpha = x^2 - 6
        let f = ip(&[-3, 0, 2]);
        let g = polyz::resultant_minpoly(&f, &rat(&[0, 2])).unwrap();
        assert_eq!(g, ip(&[-6, 0, 1]));
        let r = find_isomorphism(&f, &g).unwrap();
        assert_eq!(r.count(), 2);
        assert!(iso_set(&r).contains(&rat(&[0, 2])));
        for c in r.isomorphisms() {
            assert!(verify_isomorphism(&f, &g, c));
        }
    }
}
