//! Exact integer LLL and LLL-with-removals.
//!
//! The reduction keeps the de Weger all-integer representation: `d[i]` is
//! the Gram determinant of the first `i` rows and `lam[i][j] = d[j+1] *
//! mu_ij`, so every Gram-Schmidt quantity is exact and the squared GSO
//! length of row `i` is the rational `d[i+1]/d[i]`. Removal decisions
//! compare those exact rationals against the squared bound, never floats.
//!
//! Removals happen on trailing rows after a full reduction sweep, looping
//! reduce -> remove until stable: a vector of the row space with norm at
//! most the bound is always a Z-combination of the surviving rows.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Rectangular matrix of arbitrary-precision integers, stored by rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: Vec<Vec<BigInt>>,
    ncols: usize,
}

impl IntMatrix {
    pub fn new(rows: Vec<Vec<BigInt>>, ncols: usize) -> Self {
        for r in &rows {
            assert_eq!(r.len(), ncols, "ragged rows");
        }
        IntMatrix { rows, ncols }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let ncols = rows.first().map_or(0, |r| r.len());
        IntMatrix::new(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
            ncols,
        )
    }

    pub fn identity(n: usize) -> Self {
        let mut rows = vec![vec![BigInt::zero(); n]; n];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = BigInt::one();
        }
        IntMatrix { rows, ncols: n }
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.ncols
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<Vec<BigInt>> {
        self.rows
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.ncols, other.n_rows());
        let mut out = vec![vec![BigInt::zero(); other.ncols]; self.rows.len()];
        for (i, row) in self.rows.iter().enumerate() {
            for (k, a) in row.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (j, b) in other.rows[k].iter().enumerate() {
                    out[i][j] += a * b;
                }
            }
        }
        IntMatrix::new(out, other.ncols)
    }
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Exact squared Gram-Schmidt lengths, one per basis row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GsoProfile {
    lengths_sq: Vec<BigRational>,
}

impl GsoProfile {
    pub fn lengths_sq(&self) -> &[BigRational] {
        &self.lengths_sq
    }
}

/// Gram determinants `d[0]=1, d[i] = det Gram(rows 0..i)` and the integer
/// `lam[i][j] = d[j+1] * mu_ij`. Errors on dependent rows.
fn gram_setup(rows: &[Vec<BigInt>]) -> Result<(Vec<BigInt>, Vec<Vec<BigInt>>)> {
    let m = rows.len();
    let mut d = Vec::with_capacity(m + 1);
    d.push(BigInt::one());
    let mut lam: Vec<Vec<BigInt>> = (0..m).map(|i| vec![BigInt::zero(); i]) .collect();
    for i in 0..m {
        for j in 0..=i {
            let mut u = dot(&rows[i], &rows[j]);
            for k in 0..j {
                u = (&d[k + 1] * u - &lam[i][k] * &lam[j][k]) / &d[k];
            }
            if j < i {
                lam[i][j] = u;
            } else {
                if u.is_zero() {
                    return Err(Error::DependentRows);
                }
                d.push(u);
            }
        }
    }
    Ok((d, lam))
}

/// Exact squared GSO norms of the rows of `b`.
pub fn gso_lengths(b: &IntMatrix) -> Result<GsoProfile> {
    let (d, _) = gram_setup(b.rows())?;
    let lengths_sq = (0..b.n_rows())
        .map(|i| BigRational::new(d[i + 1].clone(), d[i].clone()))
        .collect();
    Ok(GsoProfile { lengths_sq })
}

/// Result of a reduction, with the number of row swaps performed
/// (the unit of LLL work used for cross-run comparisons).
#[derive(Debug, Clone)]
pub struct Reduction {
    pub basis: IntMatrix,
    pub swaps: u64,
}

struct LllState {
    rows: Vec<Vec<BigInt>>,
    d: Vec<BigInt>,
    lam: Vec<Vec<BigInt>>,
    swaps: u64,
}

impl LllState {
    fn new(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let (d, lam) = gram_setup(&rows)?;
        Ok(LllState { rows, d, lam, swaps: 0 })
    }

    fn m(&self) -> usize {
        self.rows.len()
    }

    /// Size-reduce row k against row l < k.
    fn reduce(&mut self, k: usize, l: usize) {
        let two_lam: BigInt = &self.lam[k][l] * 2;
        if two_lam.abs() <= self.d[l + 1] {
            return;
        }
        // nearest integer to lam / d[l+1]  (d positive)
        let q = num_integer::Integer::div_floor(
            &(&two_lam + &self.d[l + 1]),
            &(&self.d[l + 1] * 2),
        );
        if q.is_zero() {
            return;
        }
        for c in 0..self.rows[l].len() {
            let t = &self.rows[l][c] * &q;
            self.rows[k][c] -= t;
        }
        for j in 0..l {
            let t = &self.lam[l][j] * &q;
            self.lam[k][j] -= t;
        }
        let t = &self.d[l + 1] * &q;
        self.lam[k][l] -= t;
    }

    /// Lovasz condition with delta = 3/4 at index k (rows k-1, k).
    fn lovasz_ok(&self, k: usize) -> bool {
        let lam = &self.lam[k][k - 1];
        let lhs: BigInt = (&self.d[k - 1] * &self.d[k + 1] + lam * lam) * 4;
        let rhs: BigInt = (&self.d[k] * &self.d[k]) * 3;
        lhs >= rhs
    }

    /// Exchange rows k-1 and k, updating d and lam exactly.
    fn swap(&mut self, k: usize) {
        self.swaps += 1;
        self.rows.swap(k - 1, k);
        for j in 0..k - 1 {
            let t = self.lam[k][j].clone();
            self.lam[k][j] = self.lam[k - 1][j].clone();
            self.lam[k - 1][j] = t;
        }
        let l0 = self.lam[k][k - 1].clone();
        let d0 = self.d[k - 1].clone();
        let d1 = self.d[k].clone();
        let d2 = self.d[k + 1].clone();
        for i in k + 1..self.m() {
            let l1 = self.lam[i][k - 1].clone();
            let l2 = self.lam[i][k].clone();
            self.lam[i][k - 1] = (&l0 * &l1 + &l2 * &d0) / &d1;
            self.lam[i][k] = (&l1 * &d2 - &l2 * &l0) / &d1;
        }
        self.d[k] = (&d0 * &d2 + &l0 * &l0) / &d1;
    }

    fn reduce_all(&mut self) {
        let m = self.m();
        if m <= 1 {
            return;
        }
        let mut k = 1;
        while k < m {
            self.reduce(k, k - 1);
            if self.lovasz_ok(k) {
                for l in (0..k - 1).rev() {
                    self.reduce(k, l);
                }
                k += 1;
            } else {
                self.swap(k);
                k = (k - 1).max(1);
            }
        }
    }

    /// Drop trailing rows whose squared GSO length exceeds `bound_sq`.
    fn remove_tail(&mut self, bound_sq: &BigInt) -> usize {
        let mut removed = 0;
        while let Some(m) = self.m().checked_sub(1) {
            // GS^2 of last row = d[m+1]/d[m] > bound_sq ?
            if self.d[m + 1] > bound_sq * &self.d[m] {
                self.rows.pop();
                self.d.pop();
                self.lam.pop();
                removed += 1;
            } else {
                break;
            }
        }
        removed
    }
}

/// Replace a possibly dependent row set by an independent basis of the
/// same Z-row-space, by Euclidean row reduction. Zero rows vanish.
fn independent_basis(rows: Vec<Vec<BigInt>>, ncols: usize) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<Vec<BigInt>> = rows
        .into_iter()
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .collect();
    let mut fixed = 0;
    for col in 0..ncols {
        loop {
            let mut live: Vec<usize> = (fixed..rows.len())
                .filter(|&r| !rows[r][col].is_zero())
                .collect();
            if live.is_empty() {
                break;
            }
            if live.len() == 1 {
                rows.swap(fixed, live[0]);
                fixed += 1;
                break;
            }
            live.sort_by_key(|&r| rows[r][col].abs());
            let piv = live[0];
            for &other in &live[1..] {
                let q = num_integer::Integer::div_floor(&rows[other][col], &rows[piv][col]);
                if q.is_zero() {
                    continue;
                }
                for c in 0..ncols {
                    let t = &rows[piv][c] * &q;
                    rows[other][c] -= t;
                }
            }
            rows.retain(|r| r.iter().any(|x| !x.is_zero()));
        }
    }
    rows.truncate(fixed);
    rows
}

/// LLL-reduce (delta = 3/4) the row space of `a` and remove trailing rows
/// whose Gram-Schmidt length exceeds `bound`, iterating until stable.
/// Every vector of the row space with norm at most `bound` remains a
/// Z-combination of the output rows. Dependent or zero input rows are
/// replaced by an independent basis of the same row space first. The
/// output may be empty.
pub fn lll_with_removals(a: &IntMatrix, bound: &BigInt) -> Reduction {
    assert!(bound.is_positive(), "removal bound must be positive");
    let ncols = a.n_cols();
    let rows: Vec<Vec<BigInt>> = a
        .rows()
        .iter()
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .cloned()
        .collect();
    if rows.is_empty() {
        return Reduction { basis: IntMatrix::new(Vec::new(), ncols), swaps: 0 };
    }
    let mut state = match LllState::new(rows) {
        Ok(s) => s,
        Err(_) => {
            let basis = independent_basis(a.rows().to_vec(), ncols);
            LllState::new(basis).expect("independent basis after row reduction")
        }
    };
    let bound_sq = bound * bound;
    loop {
        state.reduce_all();
        if state.remove_tail(&bound_sq) == 0 {
            break;
        }
    }
    Reduction {
        basis: IntMatrix::new(state.rows, ncols),
        swaps: state.swaps,
    }
}

/// Whether `v` is an integer combination of the rows of `basis`.
/// The rows must be linearly independent.
pub fn z_span_contains(basis: &IntMatrix, v: &[BigInt]) -> Result<bool> {
    assert_eq!(v.len(), basis.n_cols());
    let r = basis.n_rows();
    if r == 0 {
        return Ok(v.iter().all(|x| x.is_zero()));
    }
    // solve x * basis = v by elimination on the transposed system
    let ncols = basis.n_cols();
    let mut aug: Vec<Vec<BigRational>> = (0..ncols)
        .map(|c| {
            let mut row: Vec<BigRational> = (0..r)
                .map(|i| BigRational::from_integer(basis.row(i)[c].clone()))
                .collect();
            row.push(BigRational::from_integer(v[c].clone()));
            row
        })
        .collect();
    let mut pivot_rows = Vec::with_capacity(r);
    let mut next = 0;
    for unknown in 0..r {
        let Some(pr) = (next..ncols).find(|&row| !aug[row][unknown].is_zero()) else {
            return Err(Error::DependentRows);
        };
        aug.swap(next, pr);
        let pv = aug[next][unknown].clone();
        for row in 0..ncols {
            if row == next || aug[row][unknown].is_zero() {
                continue;
            }
            let factor = &aug[row][unknown] / &pv;
            for c in unknown..=r {
                let t = &factor * &aug[next][c];
                aug[row][c] -= t;
            }
        }
        pivot_rows.push(next);
        next += 1;
    }
    // consistency on the remaining equations
    for row in aug.iter().skip(next) {
        if !row[r].is_zero() {
            return Ok(false);
        }
    }
    for (unknown, &pr) in pivot_rows.iter().enumerate() {
        let x = &aug[pr][r] / &aug[pr][unknown];
        if !x.is_integer() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Check size reduction (|mu_ij| <= 1/2) and the delta = 3/4 Lovasz
/// condition from exact rational Gram-Schmidt data.
pub fn is_lll_reduced(b: &IntMatrix) -> Result<bool> {
    let m = b.n_rows();
    if m <= 1 {
        return Ok(true);
    }
    let (d, lam) = gram_setup(b.rows())?;
    for i in 0..m {
        for j in 0..i {
            // |lam[i][j]| <= d[j+1] / 2
            if &lam[i][j].abs() * 2 > d[j + 1] {
                return Ok(false);
            }
        }
    }
    for k in 1..m {
        let l = &lam[k][k - 1];
        if (&d[k - 1] * &d[k + 1] + l * l) * 4 < &d[k] * &d[k] * 3 {
            return Ok(false);
        }
    }
    Ok(true)
}
