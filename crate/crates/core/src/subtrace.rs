//! Sub-trace data: the `Base_i` polynomials representing the rational
//! representation basis mod `p^a`, sub-traces of `f`'s basis elements and
//! of `g`'s generator over each distinct-degree block, and the assembled
//! T matrix of congruence constraints.
//!
//! A sub-trace over the block `F_d` is the sum of `h(gamma)` over the
//! roots `gamma` of `F_d`. With `Base_i = sum_j c_ij x^j` it equals
//! `sum_j c_ij P_j(F_d)`, so power sums replace any root arithmetic in
//! unramified extensions.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::driver::PrimeData;
use crate::error::{Error, Result};
use crate::lattice::IntMatrix;
use crate::modpoly::{self, ModPoly};
use crate::polyz::IntPoly;

/// The polynomials `Base_1 .. Base_n` with `Base_i = x^(i-1) * u mod
/// (f, p^a)` where `u * f' = 1`; equivalently `Base_i` represents
/// `alpha^(i-1) / f'(alpha)`.
#[derive(Debug, Clone)]
pub struct BasisImage {
    p: u64,
    a: u32,
    base: Vec<ModPoly>,
}

impl BasisImage {
    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.a
    }

    /// `Base_i` for `i = 1..=n`, zero-indexed.
    pub fn base(&self) -> &[ModPoly] {
        &self.base
    }
}

/// Build `Base_1 .. Base_n` for `f` mod `p^a` and re-check the defining
/// identity `Base_i * f' = x^(i-1) mod (f, p^a)` before returning.
pub fn base_polynomials(f: &IntPoly, p: u64, a: u32) -> Result<BasisImage> {
    let n = f.degree().ok_or(Error::ZeroPolynomial)?;
    let u = modpoly::inv_fprime(f, p, a)?;
    let fmonic = modpoly::monic_reduction(f, p, a)?;
    let fprime = ModPoly::from_intpoly(&f.derivative(), p, a).rem_monic(&fmonic);
    let x = ModPoly::x(p, a);
    let mut base = Vec::with_capacity(n);
    let mut cur = u;
    for i in 0..n {
        let expect = x.powmod(i as u64, &fmonic);
        if cur.mul(&fprime).rem_monic(&fmonic) != expect {
            return Err(Error::BadPrimeLeak(p));
        }
        base.push(cur.clone());
        if i + 1 < n {
            cur = cur.mul(&x).rem_monic(&fmonic);
        }
    }
    Ok(BasisImage { p, a, base })
}

/// Sub-traces of `Base_1 .. Base_n` over the roots of the block `F_d`:
/// entry `i` is `sum_j c_ij * P_j(F_d)` for `Base_i = sum_j c_ij x^j`.
pub fn subtrace_f(basis: &BasisImage, f_d: &ModPoly) -> Result<Vec<BigInt>> {
    if f_d.prime() != basis.p || f_d.precision() != basis.a {
        return Err(Error::ModulusMismatch);
    }
    let n = basis.base.len();
    let sums = modpoly::power_sums(f_d, n.saturating_sub(1))?;
    let m = f_d.modulus();
    Ok(basis
        .base
        .iter()
        .map(|b| {
            let mut acc = BigInt::zero();
            for (j, s) in sums.iter().enumerate() {
                acc += b.coeff(j) * s;
            }
            acc.mod_floor(m)
        })
        .collect())
}

/// Sub-trace of the generator itself over the block `G_d`: the first
/// power sum of the roots of `G_d`.
pub fn subtrace_g(g_d: &ModPoly) -> Result<BigInt> {
    Ok(modpoly::power_sums(g_d, 1)?.remove(1))
}

/// The `(n+1) x m` matrix of sub-trace congruences for one prime: column
/// per distinct degree `d` (ascending), rows `1..n` the sub-traces of
/// `f`'s basis, row `n+1` the negated sub-trace of `g`'s generator. Every
/// isomorphism vector `(lc(g)*vec(h), lc(g))` annihilates each column
/// modulo `p^a`.
#[derive(Debug, Clone)]
pub struct SubTraceMatrix {
    modulus: BigInt,
    matrix: IntMatrix,
}

impl SubTraceMatrix {
    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    /// Residue matrix, `(n+1) x m`, entries in `[0, p^a)`.
    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn n_cols(&self) -> usize {
        self.matrix.n_cols()
    }
}

/// Assemble the T matrix from the lifted factor pairs of one suitable
/// prime. The sign convention puts `-Tr(g, beta)` in the last row so the
/// advertised lattice membership holds literally.
pub fn build_t(f: &IntPoly, g: &IntPoly, prime_data: &PrimeData) -> Result<SubTraceMatrix> {
    let n = f.degree().ok_or(Error::ZeroPolynomial)?;
    if g.degree() != Some(n) {
        return Err(Error::DegreeMismatch(n, g.deg()));
    }
    let basis = base_polynomials(f, prime_data.p, prime_data.a)?;
    let modulus = prime_data.modulus.clone();
    let m = prime_data.pairs.len();
    let mut cols = Vec::with_capacity(m);
    for (_, f_d, g_d) in &prime_data.pairs {
        let mut col = subtrace_f(&basis, f_d)?;
        let tr_g = subtrace_g(g_d)?;
        col.push((-tr_g).mod_floor(&modulus));
        cols.push(col);
    }
    let rows: Vec<Vec<BigInt>> = (0..=n)
        .map(|i| cols.iter().map(|c| c[i].clone()).collect())
        .collect();
    Ok(SubTraceMatrix {
        modulus,
        matrix: IntMatrix::new(rows, m),
    })
}

/// Column sums of the sub-trace matrix of `f` alone; used by the Euler
/// identity checks: for monic `f` the total trace of `Base_i` is 0 for
/// `i <= n-1` and 1 for `i = n`, and `1/lc(f)` in general.
pub fn eulerian_column_sum(f: &IntPoly, p: u64, a: u32) -> Result<Vec<BigInt>> {
    let basis = base_polynomials(f, p, a)?;
    let ddf = modpoly::ddf(f, p)?;
    let lifted = modpoly::hensel_lift_factors(f, &ddf, p, a)?;
    let n = f.deg();
    let modulus = BigInt::from(p).pow(a);
    let mut total = vec![BigInt::zero(); n];
    for (_, f_d) in lifted.entries() {
        let col = subtrace_f(&basis, f_d)?;
        for (t, c) in total.iter_mut().zip(col) {
            *t = (&*t + c).mod_floor(&modulus);
        }
    }
    Ok(total)
}
