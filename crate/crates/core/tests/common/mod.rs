//! Shared test machinery: random input generators and an independent
//! oracle for the set of roots of `g` in `Q[x]/(f)` at small degree.
//!
//! The oracle never touches the lattice pipeline. It picks a prime where
//! `f` splits completely, lifts all roots of `f` and `g` p-adically,
//! solves a Vandermonde system for each root-pairing permutation, and
//! keeps exactly the candidates that verify `g(h(x)) = 0 mod f` over Q.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use fieldiso::polyz::{self, IntPoly, RatPoly};

/// Plain mod-p polynomial helpers over u64 (p far below 2^32), used by
/// the oracle's prime scan and the generator's irreducibility test.
pub mod smallmod {
    pub fn trim(v: &mut Vec<u64>) {
        while v.last() == Some(&0) {
            v.pop();
        }
    }

    pub fn from_bigints(coeffs: &[num_bigint::BigInt], p: u64) -> Vec<u64> {
        use num_integer::Integer;
        let pb = num_bigint::BigInt::from(p);
        let mut v: Vec<u64> = coeffs
            .iter()
            .map(|c| {
                let r = c.mod_floor(&pb);
                let (_, digits) = r.to_u64_digits();
                digits.first().copied().unwrap_or(0)
            })
            .collect();
        trim(&mut v);
        v
    }

    pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + (x as u128 * y as u128 % p as u128) as u64) % p;
            }
        }
        trim(&mut out);
        out
    }

    pub fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        assert!(!m.is_empty());
        let inv_lc = modinv_u64(*m.last().unwrap(), p);
        let mut r = a.to_vec();
        while r.len() >= m.len() && !r.is_empty() {
            let k = r.len() - m.len();
            let factor = (*r.last().unwrap() as u128 * inv_lc as u128 % p as u128) as u64;
            if factor != 0 {
                for (i, &c) in m.iter().enumerate() {
                    let sub = (factor as u128 * c as u128 % p as u128) as u64;
                    r[k + i] = (r[k + i] + p - sub) % p;
                }
            }
            r.pop();
            trim(&mut r);
            if r.len() < m.len() {
                break;
            }
        }
        r
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut r0 = a.to_vec();
        let mut r1 = b.to_vec();
        while !r1.is_empty() {
            let r = rem(&r0, &r1, p);
            r0 = r1;
            r1 = r;
        }
        r0
    }

    pub fn derivative(a: &[u64], p: u64) -> Vec<u64> {
        if a.len() <= 1 {
            return Vec::new();
        }
        let mut out: Vec<u64> = a
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| (c as u128 * (i as u64 % p) as u128 % p as u128) as u64)
            .collect();
        trim(&mut out);
        out
    }

    pub fn modinv_u64(x: u64, p: u64) -> u64 {
        // Fermat
        let mut acc = 1u64;
        let mut base = x % p;
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                acc = (acc as u128 * base as u128 % p as u128) as u64;
            }
            base = (base as u128 * base as u128 % p as u128) as u64;
            e >>= 1;
        }
        acc
    }

    /// `x^(p^k) mod m` by iterated Frobenius.
    pub fn frobenius_power(m: &[u64], p: u64, k: usize) -> Vec<u64> {
        let mut w = rem(&[0, 1], m, p);
        for _ in 0..k {
            w = pow_mod(&w, p, m, p);
        }
        w
    }

    pub fn pow_mod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
        let mut acc = rem(&[1], m, p);
        let mut b = rem(base, m, p);
        while e > 0 {
            if e & 1 == 1 {
                acc = rem(&mul(&acc, &b, p), m, p);
            }
            b = rem(&mul(&b, &b, p), m, p);
            e >>= 1;
        }
        acc
    }

    pub fn eval(f: &[u64], x: u64, p: u64) -> u64 {
        let mut acc = 0u64;
        for &c in f.iter().rev() {
            acc = ((acc as u128 * x as u128 + c as u128) % p as u128) as u64;
        }
        acc
    }

    pub fn is_squarefree(f: &[u64], p: u64) -> bool {
        let d = derivative(f, p);
        if d.is_empty() {
            return false;
        }
        gcd(f, &d, p).len() == 1
    }

    /// All irreducible factors of degree 1, i.e. `x^p = x mod f`.
    pub fn is_totally_split(f: &[u64], p: u64) -> bool {
        let w = frobenius_power(f, p, 1);
        let x = rem(&[0, 1], f, p);
        w == x
    }

    /// Rabin's irreducibility test for monic squarefree `f` of degree n.
    pub fn is_irreducible(f: &[u64], p: u64) -> bool {
        let n = f.len() - 1;
        if n == 0 {
            return false;
        }
        let w = frobenius_power(f, p, n);
        let x = rem(&[0, 1], f, p);
        if w != x {
            return false;
        }
        let mut qs = Vec::new();
        let mut m = n;
        let mut q = 2;
        while q * q <= m {
            if m % q == 0 {
                qs.push(q);
                while m % q == 0 {
                    m /= q;
                }
            }
            q += 1;
        }
        if m > 1 {
            qs.push(m);
        }
        for q in qs {
            let w = frobenius_power(f, p, n / q);
            let mut diff = w.clone();
            // w - x
            if diff.len() < 2 {
                diff.resize(2, 0);
            }
            diff[1] = (diff[1] + p - 1) % p;
            trim(&mut diff);
            if gcd(f, &diff, p).len() != 1 {
                return false;
            }
        }
        true
    }
}

fn sieve_primes(limit: u64) -> Vec<u64> {
    let mut sieve = vec![true; limit as usize + 1];
    let mut out = Vec::new();
    for i in 2..=limit as usize {
        if sieve[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= limit as usize {
                sieve[j] = false;
                j += i;
            }
        }
    }
    out
}

/// Primes for the oracle's split-prime scan; generous because totally
/// split primes have density 1/|Galois group| (1/5040 at degree 7).
fn scan_primes() -> &'static [u64] {
    use std::sync::OnceLock;
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| sieve_primes(2_000_000))
}

fn small_primes(limit: u64) -> Vec<u64> {
    sieve_primes(limit)
}

fn divides(p: u64, x: &BigInt) -> bool {
    (x % BigInt::from(p)).is_zero()
}

fn modinv_big(x: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = x.extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// Newton-lift a simple root of `f` from mod p to mod p^a.
fn lift_root(f: &IntPoly, fprime: &IntPoly, root_mod_p: u64, p: u64, a: u32) -> BigInt {
    let mut root = BigInt::from(root_mod_p);
    let mut k = 1u32;
    while k < a {
        let k2 = (2 * k).min(a);
        let m = BigInt::from(p).pow(k2);
        let fx = f.evaluate(&root).mod_floor(&m);
        let dfx = fprime.evaluate(&root).mod_floor(&m);
        let inv = modinv_big(&dfx, &m).expect("simple root");
        root = (&root - fx * inv).mod_floor(&m);
        k = k2;
    }
    root
}

/// Inverse of an n x n matrix over Z/p^a (unit determinant mod p), by
/// Gaussian elimination with unit pivots.
fn invert_matrix_mod(mat: &[Vec<BigInt>], p: u64, modulus: &BigInt) -> Vec<Vec<BigInt>> {
    let n = mat.len();
    let mut a: Vec<Vec<BigInt>> = mat.iter().map(|r| r.to_vec()).collect();
    let mut inv: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect();
    let pb = BigInt::from(p);
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !(&a[r][col] % &pb).is_zero())
            .expect("matrix invertible mod p");
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let pinv = modinv_big(&a[col][col], modulus).expect("unit pivot");
        for j in 0..n {
            a[col][j] = (&a[col][j] * &pinv).mod_floor(modulus);
            inv[col][j] = (&inv[col][j] * &pinv).mod_floor(modulus);
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for j in 0..n {
                a[r][j] = (&a[r][j] - &factor * &a[col][j]).mod_floor(modulus);
                inv[r][j] = (&inv[r][j] - &factor * &inv[col][j]).mod_floor(modulus);
            }
        }
    }
    inv
}

fn heaps_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut items: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    fn go(k: usize, items: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(items.clone());
            return;
        }
        for i in 0..k {
            go(k - 1, items, out);
            if k % 2 == 0 {
                items.swap(i, k - 1);
            } else {
                items.swap(0, k - 1);
            }
        }
    }
    go(n, &mut items, &mut out);
    out
}

/// All roots of `g` in `Q[x]/(f)`, for small degree and `f`, `g`
/// irreducible of the same degree. Empty when the fields are not
/// isomorphic. Exact: every returned `h` satisfies `g(h(x)) = 0 mod f`.
pub fn oracle_isomorphisms(f: &IntPoly, g: &IntPoly) -> Vec<RatPoly> {
    let n = f.deg();
    if g.deg() != n || n == 0 {
        return Vec::new();
    }
    let fprime = f.derivative();
    let gprime = g.derivative();
    let gn = g.lc();

    // entry bound: |w_i| <= ||w|| <= |lc(g)| * n * S * ||f|| with the
    // Cauchy root bound for S
    let lcg = BigRational::from_integer(g.lc().abs());
    let mut max_ratio = BigRational::zero();
    for i in 0..n {
        let r = BigRational::from_integer(g.coeff(i).abs()) / lcg.clone();
        if r > max_ratio {
            max_ratio = r;
        }
    }
    let nn = BigRational::from_integer(BigInt::from(n));
    let s = &nn * (BigRational::one() + max_ratio);
    let norm_f = {
        let nsq = f.norm2_sq();
        let mut s = nsq.sqrt();
        if &s * &s < nsq {
            s += 1;
        }
        BigRational::from_integer(s)
    };
    let bound = (lcg * nn * s * norm_f).ceil().to_integer() + BigInt::one();

    // a prime where f splits completely and stays squarefree
    let mut chosen: Option<u64> = None;
    for &p in scan_primes() {
        if p < 3 || divides(p, &f.lc()) || divides(p, &g.lc()) {
            continue;
        }
        let fp = smallmod::from_bigints(f.coeffs(), p);
        if fp.len() != n + 1 || !smallmod::is_squarefree(&fp, p) {
            continue;
        }
        if !smallmod::is_totally_split(&fp, p) {
            continue;
        }
        let gp = smallmod::from_bigints(g.coeffs(), p);
        if gp.len() != n + 1 || !smallmod::is_squarefree(&gp, p) {
            continue; // bad prime for g, cannot conclude anything
        }
        if !smallmod::is_totally_split(&gp, p) {
            // matching patterns are necessary for an isomorphism
            return Vec::new();
        }
        chosen = Some(p);
        break;
    }
    let p = chosen.expect("a totally split prime below the scan limit");

    // precision: p^a > 2 * bound
    let target: BigInt = &bound * BigInt::from(2) + 1;
    let mut modulus = BigInt::from(p);
    let mut a = 1u32;
    while modulus < target {
        modulus *= BigInt::from(p);
        a += 1;
    }

    let roots_mod_p = |poly: &IntPoly| -> Vec<u64> {
        let pp = smallmod::from_bigints(poly.coeffs(), p);
        (0..p).filter(|&z| smallmod::eval(&pp, z, p) == 0).collect()
    };
    let alphas: Vec<BigInt> = roots_mod_p(f)
        .into_iter()
        .map(|r| lift_root(f, &fprime, r, p, a))
        .collect();
    let betas: Vec<BigInt> = roots_mod_p(g)
        .into_iter()
        .map(|r| lift_root(g, &gprime, r, p, a))
        .collect();
    assert_eq!(alphas.len(), n);
    assert_eq!(betas.len(), n);

    // Vandermonde in the alphas, inverted once
    let vand: Vec<Vec<BigInt>> = alphas
        .iter()
        .map(|al| {
            let mut row = Vec::with_capacity(n);
            let mut pw = BigInt::one();
            for _ in 0..n {
                row.push(pw.clone());
                pw = (pw * al).mod_floor(&modulus);
            }
            row
        })
        .collect();
    let vinv = invert_matrix_mod(&vand, p, &modulus);

    let fprime_at: Vec<BigInt> = alphas
        .iter()
        .map(|al| fprime.evaluate(al).mod_floor(&modulus))
        .collect();

    let f_rat = RatPoly::from_int(f.clone());
    let u_rat = polyz::invmod_rational(&RatPoly::from_int(fprime.clone()), &f_rat)
        .expect("f squarefree over Q");
    let half = &modulus / BigInt::from(2);

    let mut found: Vec<RatPoly> = Vec::new();
    'perm: for perm in heaps_permutations(n) {
        // y_i = lc(g) * f'(alpha_i) * beta_perm(i)
        let y: Vec<BigInt> = (0..n)
            .map(|i| (&gn * &fprime_at[i] * &betas[perm[i]]).mod_floor(&modulus))
            .collect();
        let mut w = Vec::with_capacity(n);
        for row in &vinv {
            let mut acc = BigInt::zero();
            for (c, yv) in row.iter().zip(&y) {
                acc += c * yv;
            }
            let r = acc.mod_floor(&modulus);
            let r = if r > half { r - &modulus } else { r };
            if r.abs() > bound {
                continue 'perm;
            }
            w.push(r);
        }
        // h = w(x) * (f')^{-1} / lc(g) mod f over Q, then verify exactly
        let h = RatPoly::from_int(IntPoly::new(w))
            .mul(&u_rat)
            .rem(&f_rat)
            .unwrap()
            .mul_rational(&BigRational::new(BigInt::one(), gn.clone()));
        let mut acc = RatPoly::zero();
        for i in (0..=g.deg()).rev() {
            acc = acc
                .mul(&h)
                .add(&RatPoly::from_int(IntPoly::constant(g.coeff(i))))
                .rem(&f_rat)
                .unwrap();
        }
        if acc.is_zero() && !found.contains(&h) {
            found.push(h);
        }
    }
    found.sort_by_key(|h| format!("{:?}", h));
    found
}

/// Random polynomial of the given degree with a positive leading
/// coefficient, certified irreducible by Rabin's test at some small
/// prime not dividing the leading coefficient.
pub fn random_irreducible(rng: &mut ChaCha8Rng, deg: usize, height: i64, monic: bool) -> IntPoly {
    let primes = small_primes(300);
    loop {
        let mut coeffs: Vec<i64> = (0..deg).map(|_| rng.gen_range(-height..=height)).collect();
        if coeffs[0] == 0 {
            coeffs[0] = 1;
        }
        coeffs.push(if monic { 1 } else { rng.gen_range(1..=height.max(1)) });
        let f = IntPoly::from_i64(&coeffs);
        for &p in &primes {
            if p < 3 || divides(p, &f.lc()) {
                continue;
            }
            let fp = smallmod::from_bigints(f.coeffs(), p);
            if fp.len() != deg + 1 || !smallmod::is_squarefree(&fp, p) {
                continue;
            }
            if smallmod::is_irreducible(&fp, p) {
                return f;
            }
        }
        // no certificate at any small prime; draw again
    }
}

/// Integer vector `(lc(g) * vec(h), lc(g))` of a root `h` of `g` in
/// `Q[x]/(f)`; panics when the coordinates are not integral, which would
/// contradict `h` being an isomorphism image.
pub fn iso_vector(f: &IntPoly, g: &IntPoly, h: &RatPoly) -> Vec<BigInt> {
    let n = f.deg();
    let f_rat = RatPoly::from_int(f.clone());
    let gn = g.lc();
    let w = RatPoly::from_int(f.derivative())
        .mul(h)
        .rem(&f_rat)
        .unwrap()
        .mul_rational(&BigRational::from_integer(gn.clone()));
    assert!(
        w.denominator().is_one(),
        "lc(g) * vec(h) must be integral for an isomorphism"
    );
    let mut v: Vec<BigInt> = (0..n).map(|i| w.numerator().coeff(i)).collect();
    v.push(gn);
    v
}
