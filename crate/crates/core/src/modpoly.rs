//! Polynomial arithmetic over `Z/p^a`: distinct-degree factorization,
//! multifactor Hensel lifting, root lifting, modular inverses of `f'`,
//! and power sums of factor roots via Newton's identities.
//!
//! Factorization-related routines work with the monic normalization
//! `f / lc(f)`, which is legal for good primes and keeps the lifting
//! division-free. Equal-degree splitting is never needed here: the
//! pipeline only consumes the distinct-degree product polynomials.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::polyz::IntPoly;

/// Dense polynomial over `Z/p^a` with every coefficient reduced into
/// `[0, p^a)`. The modulus travels with the value; mixing moduli panics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModPoly {
    coeffs: Vec<BigInt>,
    p: u64,
    a: u32,
    modulus: BigInt,
}

fn modinv(x: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = x.extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

impl ModPoly {
    pub fn new(coeffs: Vec<BigInt>, p: u64, a: u32) -> Self {
        let modulus = BigInt::from(p).pow(a);
        let mut coeffs: Vec<BigInt> = coeffs.into_iter().map(|c| c.mod_floor(&modulus)).collect();
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        ModPoly { coeffs, p, a, modulus }
    }

    pub fn from_intpoly(f: &IntPoly, p: u64, a: u32) -> Self {
        ModPoly::new(f.coeffs().to_vec(), p, a)
    }

    pub fn zero(p: u64, a: u32) -> Self {
        ModPoly::new(Vec::new(), p, a)
    }

    pub fn constant(c: BigInt, p: u64, a: u32) -> Self {
        ModPoly::new(vec![c], p, a)
    }

    pub fn x(p: u64, a: u32) -> Self {
        ModPoly::new(vec![BigInt::zero(), BigInt::one()], p, a)
    }

    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.a
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn lc(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().map_or(false, |c| c.is_one())
    }

    fn same_modulus(&self, other: &ModPoly) {
        assert_eq!(
            self.modulus, other.modulus,
            "modulus mismatch in ModPoly arithmetic"
        );
    }

    /// Re-reduce to a (smaller or equal) precision `a`.
    pub fn truncate_to(&self, a: u32) -> ModPoly {
        ModPoly::new(self.coeffs.clone(), self.p, a)
    }

    /// Reinterpret the canonical representatives at a higher precision.
    pub fn lift_to(&self, a: u32) -> ModPoly {
        assert!(a >= self.a);
        ModPoly::new(self.coeffs.clone(), self.p, a)
    }

    pub fn add(&self, other: &ModPoly) -> ModPoly {
        self.same_modulus(other);
        let n = self.coeffs.len().max(other.coeffs.len());
        ModPoly::new(
            (0..n).map(|i| self.coeff(i) + other.coeff(i)).collect(),
            self.p,
            self.a,
        )
    }

    pub fn sub(&self, other: &ModPoly) -> ModPoly {
        self.same_modulus(other);
        let n = self.coeffs.len().max(other.coeffs.len());
        ModPoly::new(
            (0..n).map(|i| self.coeff(i) - other.coeff(i)).collect(),
            self.p,
            self.a,
        )
    }

    pub fn neg(&self) -> ModPoly {
        ModPoly::new(self.coeffs.iter().map(|c| -c).collect(), self.p, self.a)
    }

    pub fn mul(&self, other: &ModPoly) -> ModPoly {
        self.same_modulus(other);
        if self.is_zero() || other.is_zero() {
            return ModPoly::zero(self.p, self.a);
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (j, d) in other.coeffs.iter().enumerate() {
                out[i + j] += c * d;
            }
        }
        ModPoly::new(out, self.p, self.a)
    }

    pub fn mul_scalar(&self, c: &BigInt) -> ModPoly {
        ModPoly::new(self.coeffs.iter().map(|x| x * c).collect(), self.p, self.a)
    }

    pub fn derivative(&self) -> ModPoly {
        if self.coeffs.len() <= 1 {
            return ModPoly::zero(self.p, self.a);
        }
        ModPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
            self.p,
            self.a,
        )
    }

    /// Horner evaluation; the result is reduced into `[0, p^a)`.
    pub fn evaluate(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = (acc * x + c).mod_floor(&self.modulus);
        }
        acc
    }

    /// Scale by the inverse of the leading coefficient. Errors when the
    /// leading coefficient is not a unit mod `p^a`.
    pub fn make_monic(&self) -> Result<ModPoly> {
        if self.is_zero() {
            return Err(Error::ZeroDivisor);
        }
        if self.is_monic() {
            return Ok(self.clone());
        }
        let inv = modinv(&self.lc(), &self.modulus).ok_or(Error::BadPrime(self.p))?;
        Ok(self.mul_scalar(&inv))
    }

    /// Remainder modulo a monic divisor; exact over `Z/p^a`.
    pub fn rem_monic(&self, d: &ModPoly) -> ModPoly {
        self.same_modulus(d);
        assert!(d.is_monic(), "rem_monic requires a monic divisor");
        let dd = d.deg();
        let mut r = self.coeffs.clone();
        while r.len() > dd {
            let top = r.last().unwrap().clone();
            if top.is_zero() {
                r.pop();
                continue;
            }
            let k = r.len() - 1 - dd;
            for i in 0..dd {
                let t = (&r[k + i] - &top * &d.coeffs[i]).mod_floor(&self.modulus);
                r[k + i] = t;
            }
            r.pop();
        }
        ModPoly::new(r, self.p, self.a)
    }

    /// Quotient and remainder modulo a monic divisor.
    pub fn divrem_monic(&self, d: &ModPoly) -> (ModPoly, ModPoly) {
        self.same_modulus(d);
        assert!(d.is_monic(), "divrem_monic requires a monic divisor");
        let dd = d.deg();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (ModPoly::zero(self.p, self.a), self.clone());
        }
        let mut q = vec![BigInt::zero(); r.len() - dd];
        while r.len() > dd {
            let top = r.last().unwrap().clone();
            if top.is_zero() {
                r.pop();
                continue;
            }
            let k = r.len() - 1 - dd;
            for i in 0..dd {
                let t = (&r[k + i] - &top * &d.coeffs[i]).mod_floor(&self.modulus);
                r[k + i] = t;
            }
            r.pop();
            q[k] = top;
        }
        (ModPoly::new(q, self.p, self.a), ModPoly::new(r, self.p, self.a))
    }

    /// Exact division by a monic divisor; panics if the division is inexact.
    fn div_exact_monic(&self, d: &ModPoly) -> ModPoly {
        let (q, r) = self.divrem_monic(d);
        assert!(r.is_zero(), "inexact division by a supposed factor");
        q
    }

    /// `self^e mod (m, p^a)` by square-and-multiply; `m` must be monic.
    pub fn powmod(&self, e: u64, m: &ModPoly) -> ModPoly {
        self.same_modulus(m);
        assert!(m.is_monic());
        let mut result = ModPoly::constant(BigInt::one(), self.p, self.a);
        let mut base = self.rem_monic(m);
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base).rem_monic(m);
            }
            base = base.mul(&base).rem_monic(m);
            e >>= 1;
        }
        result
    }

    /// Monic gcd over a prime modulus. Errors when called with `a > 1`.
    pub fn gcd(&self, other: &ModPoly) -> Result<ModPoly> {
        self.same_modulus(other);
        if self.a != 1 {
            return Err(Error::CompositeModulusGcd);
        }
        let mut r0 = self.clone();
        let mut r1 = other.clone();
        while !r1.is_zero() {
            let m = r1.make_monic()?;
            let r = r0.rem_monic(&m);
            r0 = r1;
            r1 = r;
        }
        if r0.is_zero() {
            Ok(r0)
        } else {
            r0.make_monic()
        }
    }

    /// Extended gcd over a prime modulus: `(g, s, t)` monic with
    /// `s*self + t*other = g`.
    pub fn xgcd(&self, other: &ModPoly) -> Result<(ModPoly, ModPoly, ModPoly)> {
        self.same_modulus(other);
        if self.a != 1 {
            return Err(Error::CompositeModulusGcd);
        }
        let (p, a) = (self.p, self.a);
        let mut r0 = self.clone();
        let mut r1 = other.clone();
        let mut s0 = ModPoly::constant(BigInt::one(), p, a);
        let mut s1 = ModPoly::zero(p, a);
        let mut t0 = ModPoly::zero(p, a);
        let mut t1 = ModPoly::constant(BigInt::one(), p, a);
        while !r1.is_zero() {
            let lc_inv = modinv(&r1.lc(), &self.modulus).ok_or(Error::BadPrime(p))?;
            let r1m = r1.mul_scalar(&lc_inv);
            let (q_m, r) = r0.divrem_monic(&r1m);
            let q = q_m.mul_scalar(&lc_inv);
            let s = s0.sub(&q.mul(&s1));
            let t = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
            t0 = t1;
            t1 = t;
        }
        if r0.is_zero() {
            return Ok((r0, s0, t0));
        }
        let lc_inv = modinv(&r0.lc(), &self.modulus).ok_or(Error::BadPrime(p))?;
        Ok((
            r0.mul_scalar(&lc_inv),
            s0.mul_scalar(&lc_inv),
            t0.mul_scalar(&lc_inv),
        ))
    }

    /// Balanced representative in `(-p^a/2, p^a/2]`, as an integer polynomial.
    pub fn to_intpoly_symmetric(&self) -> IntPoly {
        let half = &self.modulus / BigInt::from(2);
        IntPoly::new(
            self.coeffs
                .iter()
                .map(|c| {
                    if c > &half {
                        c - &self.modulus
                    } else {
                        c.clone()
                    }
                })
                .collect(),
        )
    }
}

/// The distinct-degree factorization `monic(f) = prod_d F_d mod p^a`,
/// where `F_d` collects every irreducible factor of degree exactly `d`.
/// Entries are sorted by ascending `d` and each `F_d` is monic and
/// nonconstant.
#[derive(Debug, Clone)]
pub struct DistinctDegreeFactorization {
    p: u64,
    a: u32,
    entries: Vec<(usize, ModPoly)>,
}

impl DistinctDegreeFactorization {
    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.a
    }

    pub fn entries(&self) -> &[(usize, ModPoly)] {
        &self.entries
    }

    /// Number of distinct factor degrees present.
    pub fn num_degrees(&self) -> usize {
        self.entries.len()
    }

    /// The multiset of `(d, deg F_d)` pairs, ascending in `d`.
    pub fn pattern(&self) -> Vec<(usize, usize)> {
        self.entries.iter().map(|(d, f)| (*d, f.deg())).collect()
    }

    /// Degree of the linear-factor block (0 when `f` has no roots mod `p`).
    pub fn deg_f1(&self) -> usize {
        self.entries
            .iter()
            .find(|(d, _)| *d == 1)
            .map(|(_, f)| f.deg())
            .unwrap_or(0)
    }
}

/// Monic normalization `f / lc(f) mod p^a`. Errors when `p | lc(f)`.
pub fn monic_reduction(f: &IntPoly, p: u64, a: u32) -> Result<ModPoly> {
    let fp = ModPoly::from_intpoly(f, p, a);
    if fp.degree() != f.degree() {
        return Err(Error::BadPrime(p));
    }
    fp.make_monic()
}

/// Distinct-degree factorization of `f mod p` for a good prime `p`
/// (`p` dividing neither `lc(f)` nor `disc(f)`). Iterates Frobenius
/// powers `x^(p^d)` and splits off `gcd(f, x^(p^d) - x)`.
pub fn ddf(f: &IntPoly, p: u64) -> Result<DistinctDegreeFactorization> {
    let fbar = monic_reduction(f, p, 1)?;
    if fbar.deg() == 0 {
        return Err(Error::ZeroPolynomial);
    }
    let sq = fbar.gcd(&fbar.derivative())?;
    if sq.deg() > 0 {
        return Err(Error::BadPrime(p));
    }
    let mut entries = Vec::new();
    let mut rem = fbar;
    let x = ModPoly::x(p, 1);
    let mut w = x.rem_monic(&rem);
    let mut d = 1usize;
    while rem.deg() > 0 {
        if 2 * d > rem.deg() {
            let deg = rem.deg();
            entries.push((deg, rem));
            break;
        }
        w = w.powmod(p, &rem);
        let g = rem.gcd(&w.sub(&x))?;
        if g.deg() > 0 {
            rem = rem.div_exact_monic(&g);
            if rem.deg() > 0 {
                w = w.rem_monic(&rem);
            }
            entries.push((d, g));
        }
        d += 1;
    }
    debug_assert!(entries.iter().all(|(d, fd)| fd.deg() % d == 0));
    Ok(DistinctDegreeFactorization { p, a: 1, entries })
}

/// Quadratic Hensel step: given `target ≡ u*v` and `s*u + t*v ≡ 1` at the
/// previous precision, produce the same data modulo `p^a2`. All of `u`,
/// `v` and the target are monic.
fn hensel_step(
    target: &ModPoly,
    u: &ModPoly,
    v: &ModPoly,
    s: &ModPoly,
    t: &ModPoly,
    p: u64,
    a2: u32,
) -> Result<(ModPoly, ModPoly, ModPoly, ModPoly)> {
    let up = u.lift_to(a2);
    let vp = v.lift_to(a2);
    let sp = s.lift_to(a2);
    let tp = t.lift_to(a2);

    let e = target.sub(&up.mul(&vp));
    let (q, r) = sp.mul(&e).divrem_monic(&vp);
    let u_new = up.add(&tp.mul(&e)).add(&q.mul(&up));
    let v_new = vp.add(&r);
    if !u_new.is_monic() || !v_new.is_monic() {
        return Err(Error::BadPrimeLeak(p));
    }

    let one = ModPoly::constant(BigInt::one(), p, a2);
    let b = sp.mul(&u_new).add(&tp.mul(&v_new)).sub(&one);
    let (c, d0) = sp.mul(&b).divrem_monic(&v_new);
    let s_new = sp.sub(&d0);
    let t_new = tp.sub(&tp.mul(&b)).sub(&c.mul(&u_new));
    Ok((u_new, v_new, s_new, t_new))
}

/// Lift the coprime pair `u*v ≡ monic(f) mod p` to precision `p^a` by
/// doubling, truncating to `p^a` at the end.
fn hensel_pair(f: &IntPoly, u: &ModPoly, v: &ModPoly, p: u64, a: u32) -> Result<(ModPoly, ModPoly)> {
    let (g, s, t) = u.xgcd(v)?;
    if g.deg() != 0 {
        return Err(Error::BadPrimeLeak(p));
    }
    let mut u = u.clone();
    let mut v = v.clone();
    let mut s = s;
    let mut t = t;
    let mut k = 1u32;
    while k < a {
        let k2 = (2 * k).min(a);
        let target = monic_reduction(f, p, k2)?;
        let (u2, v2, s2, t2) = hensel_step(&target, &u, &v, &s, &t, p, k2)?;
        u = u2;
        v = v2;
        s = s2;
        t = t2;
        k = k2;
    }
    Ok((u, v))
}

/// Hensel lift a distinct-degree factorization of `f` from `p` to `p^a`.
/// Factors stay monic, reduce mod `p` to their inputs, and multiply to
/// `monic(f) mod p^a`.
pub fn hensel_lift_factors(
    f: &IntPoly,
    ddf: &DistinctDegreeFactorization,
    p: u64,
    a: u32,
) -> Result<DistinctDegreeFactorization> {
    assert_eq!(ddf.prime(), p);
    assert_eq!(ddf.precision(), 1, "input factorization must be mod p");
    if a == 1 {
        return Ok(ddf.clone());
    }
    let mut lifted = Vec::with_capacity(ddf.entries.len());
    if ddf.entries.len() == 1 {
        let (d, _) = &ddf.entries[0];
        lifted.push((*d, monic_reduction(f, p, a)?));
        return Ok(DistinctDegreeFactorization { p, a, entries: lifted });
    }
    // peel factors off one at a time, lifting (head, product of the rest)
    let mut remaining: Vec<(usize, ModPoly)> = ddf.entries.clone();
    let mut cofactor_target = f.clone();
    while remaining.len() > 1 {
        let (d, head) = remaining.remove(0);
        let mut rest = ModPoly::constant(BigInt::one(), p, 1);
        for (_, g) in &remaining {
            rest = rest.mul(g);
        }
        let (head_lifted, rest_lifted) = hensel_pair(&cofactor_target, &head, &rest, p, a)?;
        lifted.push((d, head_lifted));
        // the rest recurses against its own lifted product as the target
        cofactor_target = rest_lifted.to_intpoly_symmetric();
        if remaining.len() == 1 {
            let (d_last, _) = remaining[0].clone();
            lifted.push((d_last, rest_lifted.truncate_to(a).make_monic()?));
            remaining.clear();
        }
    }
    Ok(DistinctDegreeFactorization { p, a, entries: lifted })
}

/// One Newton step for a simple root: given `poly(root) ≡ 0 mod p^k`,
/// returns the root mod `p^a2` for `a2 <= 2k`.
pub fn newton_root_step(poly: &ModPoly, root: &BigInt, a2: u32) -> Result<BigInt> {
    let lifted = poly.lift_to(a2);
    let fx = lifted.evaluate(root);
    let dfx = lifted.derivative().evaluate(root);
    let inv = modinv(&dfx, lifted.modulus()).ok_or(Error::RepeatedRoots)?;
    Ok((root - fx * inv).mod_floor(lifted.modulus()))
}

/// All roots of `f1` in `Z/p^a`, where `f1` is a product of distinct
/// monic linear factors mod `p`. Found by scanning mod `p` and lifting
/// each root by Newton iteration. Sorted ascending.
pub fn lift_roots(f1: &ModPoly, p: u64, a: u32) -> Result<Vec<BigInt>> {
    assert_eq!(f1.prime(), p);
    assert!(p < 10_000_000, "root scan needs a small prime");
    let d = f1.deg();
    let f1_mod_p = f1.truncate_to(1);
    let mut roots_p = Vec::with_capacity(d);
    for z in 0..p {
        let z = BigInt::from(z);
        if f1_mod_p.evaluate(&z).is_zero() {
            roots_p.push(z);
        }
    }
    if roots_p.len() != d {
        return Err(Error::RepeatedRoots);
    }
    let base = f1.lift_to(a.max(f1.precision()));
    let mut out = Vec::with_capacity(d);
    for r in roots_p {
        let mut root = r;
        let mut k = 1u32;
        while k < a {
            let k2 = (2 * k).min(a);
            root = newton_root_step(&base.truncate_to(k2), &root, k2)?;
            k = k2;
        }
        out.push(root.mod_floor(&BigInt::from(p).pow(a)));
    }
    out.sort();
    Ok(out)
}

/// The polynomial `u` of degree `< n` with `u * f' ≡ 1 mod (f, p^a)`,
/// computed by extended gcd mod `p` followed by Newton lifting
/// `u <- u*(2 - f'*u)`. The identity is re-checked before returning.
pub fn inv_fprime(f: &IntPoly, p: u64, a: u32) -> Result<ModPoly> {
    let fmonic_p = monic_reduction(f, p, 1)?;
    let fprime_p = ModPoly::from_intpoly(&f.derivative(), p, 1).rem_monic(&fmonic_p);
    let (g, s, _) = fprime_p.xgcd(&fmonic_p)?;
    if g.deg() != 0 {
        return Err(Error::BadPrime(p));
    }
    let mut u = s.rem_monic(&fmonic_p);
    let mut k = 1u32;
    while k < a {
        let k2 = (2 * k).min(a);
        let fmonic = monic_reduction(f, p, k2)?;
        let fprime = ModPoly::from_intpoly(&f.derivative(), p, k2).rem_monic(&fmonic);
        let up = u.lift_to(k2);
        let two = ModPoly::constant(BigInt::from(2), p, k2);
        u = up
            .mul(&two.sub(&fprime.mul(&up).rem_monic(&fmonic)))
            .rem_monic(&fmonic);
        k = k2;
    }
    let fmonic = monic_reduction(f, p, a)?;
    let fprime = ModPoly::from_intpoly(&f.derivative(), p, a).rem_monic(&fmonic);
    let check = u.mul(&fprime).rem_monic(&fmonic);
    if check.deg() != 0 || !check.coeff(0).is_one() {
        return Err(Error::BadPrimeLeak(p));
    }
    Ok(u)
}

/// Power sums `P_0 .. P_kmax` of the roots of a monic `F` over `Z/p^a`,
/// from the coefficients via Newton's identities. Division-free.
pub fn power_sums(f: &ModPoly, k_max: usize) -> Result<Vec<BigInt>> {
    if !f.is_monic() {
        return Err(Error::NonMonic);
    }
    let e = f.deg();
    let m = f.modulus().clone();
    // a_i = coefficient of x^(e-i), zero beyond the degree
    let a = |i: usize| -> BigInt {
        if i == 0 {
            BigInt::one()
        } else if i <= e {
            f.coeff(e - i)
        } else {
            BigInt::zero()
        }
    };
    let mut sums = Vec::with_capacity(k_max + 1);
    sums.push(BigInt::from(e).mod_floor(&m));
    for k in 1..=k_max {
        let mut acc = BigInt::from(k) * a(k);
        for i in 1..k.min(e + 1) {
            acc += a(i) * &sums[k - i];
        }
        sums.push((-acc).mod_floor(&m));
    }
    Ok(sums)
}
