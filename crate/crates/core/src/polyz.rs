//! Exact univariate polynomial arithmetic over Z and Q: ring operations,
//! resultants via the subresultant PRS, discriminants, 2-norms and the
//! root-sum / isomorphism-vector bounds used by the lattice stage.
//!
//! All bound computations are carried out in rational arithmetic with
//! explicit upward rounding of square roots, so removal decisions never
//! depend on floating point.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Dense univariate polynomial with arbitrary-precision integer
/// coefficients, index `i` holding the coefficient of `x^i`.
///
/// The zero polynomial is the empty coefficient vector; otherwise the
/// last entry is nonzero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        IntPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: BigInt) -> Self {
        IntPoly::new(vec![c])
    }

    /// The monomial `c * x^k`.
    pub fn monomial(c: BigInt, k: usize) -> Self {
        if c.is_zero() {
            return IntPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = c;
        IntPoly { coeffs }
    }

    pub fn x() -> Self {
        IntPoly::monomial(BigInt::one(), 1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    /// Degree treating the zero polynomial as degree 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `x^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Leading coefficient; zero for the zero polynomial.
    pub fn lc(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) + other.coeff(i));
        }
        IntPoly::new(out)
    }

    pub fn sub(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) - other.coeff(i));
        }
        IntPoly::new(out)
    }

    pub fn neg(&self) -> IntPoly {
        IntPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    pub fn mul_scalar(&self, c: &BigInt) -> IntPoly {
        if c.is_zero() {
            return IntPoly::zero();
        }
        IntPoly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn derivative(&self) -> IntPoly {
        if self.coeffs.len() <= 1 {
            return IntPoly::zero();
        }
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// Horner evaluation at an integer point.
    pub fn evaluate(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn evaluate_rational(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    /// Gcd of the coefficients, nonnegative; zero for the zero polynomial.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// `self / content`, keeping the sign of the leading coefficient.
    pub fn primitive_part(&self) -> IntPoly {
        let c = self.content();
        if c.is_zero() || c.is_one() {
            return self.clone();
        }
        IntPoly {
            coeffs: self.coeffs.iter().map(|a| a / &c).collect(),
        }
    }

    /// Exact sum of squared coefficients (the squared 2-norm).
    pub fn norm2_sq(&self) -> BigInt {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    /// Rational upper bound on the 2-norm, exact for perfect squares.
    pub fn norm2_upper(&self) -> BigRational {
        sqrt_upper(&BigRational::from_integer(self.norm2_sq()))
    }

    /// Pseudo-remainder: `lc(d)^(deg self - deg d + 1) * self mod d`.
    fn pseudo_rem(&self, d: &IntPoly) -> IntPoly {
        assert!(!d.is_zero());
        let dd = d.deg();
        let lc_d = d.lc();
        let mut r = self.clone();
        if r.deg() < dd || r.is_zero() {
            let e = self.deg() as u32 + 1 - dd as u32;
            return r.mul_scalar(&lc_d.pow(e));
        }
        let mut reps = r.deg() - dd + 1;
        while !r.is_zero() && r.deg() >= dd {
            let k = r.deg() - dd;
            let top = r.lc();
            r = r.mul_scalar(&lc_d).sub(&d.mul(&IntPoly::monomial(top, k)));
            reps -= 1;
        }
        // keep the power of lc(d) consistent even when degrees collapse early
        if reps > 0 {
            r = r.mul_scalar(&lc_d.pow(reps as u32));
        }
        r
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            match (i, mag.is_one()) {
                (0, _) => write!(f, "{}", mag)?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{}*x", mag)?,
                (_, true) => write!(f, "x^{}", i)?,
                (_, false) => write!(f, "{}*x^{}", mag, i)?,
            }
        }
        Ok(())
    }
}

/// Polynomial with rational coefficients, stored as an integer numerator
/// over a single positive denominator with `gcd(content(num), den) = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatPoly {
    num: IntPoly,
    den: BigInt,
}

impl RatPoly {
    pub fn new(num: IntPoly, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let mut num = num;
        let mut den = den;
        if den.is_negative() {
            num = num.neg();
            den = -den;
        }
        if num.is_zero() {
            return RatPoly {
                num,
                den: BigInt::one(),
            };
        }
        let g = num.content().gcd(&den);
        if !g.is_one() {
            num = IntPoly {
                coeffs: num.coeffs.iter().map(|c| c / &g).collect(),
            };
            den /= &g;
        }
        RatPoly { num, den }
    }

    pub fn from_int(p: IntPoly) -> Self {
        RatPoly {
            num: p,
            den: BigInt::one(),
        }
    }

    pub fn zero() -> Self {
        RatPoly::from_int(IntPoly::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn numerator(&self) -> &IntPoly {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn degree(&self) -> Option<usize> {
        self.num.degree()
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        BigRational::new(self.num.coeff(i), self.den.clone())
    }

    fn from_rationals(coeffs: Vec<BigRational>) -> Self {
        let mut den = BigInt::one();
        for c in &coeffs {
            den = den.lcm(c.denom());
        }
        let num = IntPoly::new(
            coeffs
                .iter()
                .map(|c| c.numer() * (&den / c.denom()))
                .collect(),
        );
        RatPoly::new(num, den)
    }

    fn rational_coeffs(&self) -> Vec<BigRational> {
        self.num
            .coeffs
            .iter()
            .map(|c| BigRational::new(c.clone(), self.den.clone()))
            .collect()
    }

    pub fn add(&self, other: &RatPoly) -> RatPoly {
        let num = self
            .num
            .mul_scalar(&other.den)
            .add(&other.num.mul_scalar(&self.den));
        RatPoly::new(num, &self.den * &other.den)
    }

    pub fn sub(&self, other: &RatPoly) -> RatPoly {
        let num = self
            .num
            .mul_scalar(&other.den)
            .sub(&other.num.mul_scalar(&self.den));
        RatPoly::new(num, &self.den * &other.den)
    }

    pub fn neg(&self) -> RatPoly {
        RatPoly {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &RatPoly) -> RatPoly {
        RatPoly::new(self.num.mul(&other.num), &self.den * &other.den)
    }

    pub fn mul_rational(&self, c: &BigRational) -> RatPoly {
        RatPoly::new(self.num.mul_scalar(c.numer()), &self.den * c.denom())
    }

    /// Exact quotient and remainder over Q.
    pub fn divrem(&self, divisor: &RatPoly) -> Result<(RatPoly, RatPoly)> {
        if divisor.is_zero() {
            return Err(Error::ZeroDivisor);
        }
        let dd = divisor.degree().unwrap();
        let mut rem = self.rational_coeffs();
        if rem.len() <= dd {
            return Ok((RatPoly::zero(), self.clone()));
        }
        let div = divisor.rational_coeffs();
        let lc = div[dd].clone();
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        while rem.len() > dd {
            let top = rem.last().unwrap().clone();
            if top.is_zero() {
                rem.pop();
                continue;
            }
            let k = rem.len() - 1 - dd;
            let q = top / lc.clone();
            for i in 0..dd {
                let t = &q * &div[i];
                rem[k + i] -= t;
            }
            rem.pop();
            quot[k] = q;
        }
        Ok((
            RatPoly::from_rationals(quot),
            RatPoly::from_rationals(rem),
        ))
    }

    pub fn rem(&self, modulus: &RatPoly) -> Result<RatPoly> {
        Ok(self.divrem(modulus)?.1)
    }

    pub fn evaluate(&self, x: &BigRational) -> BigRational {
        self.num.evaluate_rational(x) / BigRational::from_integer(self.den.clone())
    }
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        write!(f, "({})/{}", self.num, self.den)
    }
}

/// Extended Euclid over Q: the inverse of `a` modulo `m`, when
/// `gcd(a, m) = 1` in `Q[x]`.
pub fn invmod_rational(a: &RatPoly, m: &RatPoly) -> Result<RatPoly> {
    if a.is_zero() {
        return Err(Error::ZeroDivisor);
    }
    // r0 = m, r1 = a; track t-coefficients so t1*a ≡ r1 mod m.
    let mut r0 = m.clone();
    let mut r1 = a.rem(m)?;
    let mut t0 = RatPoly::zero();
    let mut t1 = RatPoly::from_int(IntPoly::constant(BigInt::one()));
    while !r1.is_zero() {
        let (q, r) = r0.divrem(&r1)?;
        let t = t0.sub(&q.mul(&t1));
        r0 = r1;
        r1 = r;
        t0 = t1;
        t1 = t;
    }
    match r0.degree() {
        Some(0) => {
            let c = r0.coeff(0);
            Ok(t0.mul_rational(&c.recip()))
        }
        _ => Err(Error::ZeroDivisor),
    }
}

/// Resultant of two integer polynomials via the subresultant PRS
/// (Cohen, Alg. 3.3.7). Exact, including sign.
pub fn resultant(a: &IntPoly, b: &IntPoly) -> BigInt {
    if a.is_zero() || b.is_zero() {
        return BigInt::zero();
    }
    let mut a = a.clone();
    let mut b = b.clone();
    let mut sign = 1i8;
    if a.deg() < b.deg() {
        if a.deg() % 2 == 1 && b.deg() % 2 == 1 {
            sign = -sign;
        }
        std::mem::swap(&mut a, &mut b);
    }
    if b.deg() == 0 {
        let r = b.lc().pow(a.deg() as u32);
        return if sign < 0 { -r } else { r };
    }
    let ca = a.content();
    let cb = b.content();
    a = a.primitive_part();
    b = b.primitive_part();
    let mut t = ca.pow(b.deg() as u32) * cb.pow(a.deg() as u32);
    if sign < 0 {
        t = -t;
    }
    let mut g = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let da = a.deg();
        let db = b.deg();
        let delta = (da - db) as u32;
        if da % 2 == 1 && db % 2 == 1 {
            t = -t;
        }
        let r = a.pseudo_rem(&b);
        a = b;
        let divisor = &g * h.pow(delta);
        b = IntPoly {
            coeffs: r.coeffs.iter().map(|c| c / &divisor).collect(),
        };
        g = a.lc();
        if delta > 0 {
            h = g.pow(delta) / h.pow(delta - 1);
        }
        if b.is_zero() {
            // nonconstant gcd
            return BigInt::zero();
        }
        if b.deg() == 0 {
            let e = a.deg() as u32;
            let res = b.lc().pow(e) / h.pow(e.saturating_sub(1));
            return t * res;
        }
    }
}

/// Discriminant of `f`: `(-1)^(n(n-1)/2) * Res(f, f') / lc(f)`.
pub fn discriminant(f: &IntPoly) -> Result<BigInt> {
    let n = f.degree().ok_or(Error::ZeroPolynomial)?;
    if n == 0 {
        return Err(Error::ZeroPolynomial);
    }
    let res = resultant(f, &f.derivative());
    let signed = if (n * (n - 1) / 2) % 2 == 1 { -res } else { res };
    Ok(signed / f.lc())
}

/// Rational upper bound on `sqrt(q)` for `q >= 0`, tight to about 2^-32
/// relative error and exact on perfect squares.
pub fn sqrt_upper(q: &BigRational) -> BigRational {
    assert!(!q.is_negative(), "sqrt of a negative rational");
    if q.is_zero() {
        return BigRational::zero();
    }
    let scaled: BigInt = (q.numer() * q.denom()) << 64u32;
    let mut s = scaled.sqrt();
    if &s * &s < scaled {
        s += 1;
    }
    BigRational::new(s, q.denom() * (BigInt::one() << 32u32))
}

/// Integer ceiling of `sqrt(q)` for `q >= 0`.
pub fn ceil_sqrt(q: &BigRational) -> BigInt {
    let s = sqrt_upper(q);
    s.ceil().to_integer()
}

/// Upper bound `S >= sum of |roots of g|`: the minimum of the Cauchy
/// root bound times the degree and the Mahler-measure bound
/// `||g||/|lc| + (n-1)`.
pub fn sum_abs_roots_bound(g: &IntPoly) -> Result<BigRational> {
    let n = g.degree().ok_or(Error::ZeroPolynomial)?;
    if n == 0 {
        return Err(Error::ZeroPolynomial);
    }
    let lc = BigRational::from_integer(g.lc().abs());
    let mut max_ratio = BigRational::zero();
    for i in 0..n {
        let r = BigRational::from_integer(g.coeff(i).abs()) / lc.clone();
        if r > max_ratio {
            max_ratio = r;
        }
    }
    let nn = BigRational::from_integer(BigInt::from(n));
    let cauchy = &nn * (BigRational::one() + max_ratio);
    let mahler = g.norm2_upper() / lc + (nn - BigRational::one());
    Ok(cauchy.min(mahler))
}

/// The removal bound for the isomorphism vector lattice.
#[derive(Debug, Clone)]
pub struct BoundData {
    /// Upper bound on the sum of the absolute values of the roots of `g`.
    pub s: BigRational,
    /// Upper bound on the 2-norm of `f`.
    pub norm_f: BigRational,
    /// `b = n * S * ||f||`, bounding the vector part alone.
    pub b: BigRational,
    /// Integer bound covering the appended coordinate as well:
    /// `ceil(sqrt(b^2 * lc(g)^2 + lc(g)^2))`.
    pub b_ext: BigInt,
}

impl BoundData {
    pub fn b_ext_sq(&self) -> BigInt {
        &self.b_ext * &self.b_ext
    }
}

/// Bound data for the lattice containing `(lc(g)*vec(h), lc(g))` for every
/// isomorphism `h`.
pub fn iso_vector_bound(f: &IntPoly, g: &IntPoly) -> Result<BoundData> {
    let nf = f.degree().ok_or(Error::ZeroPolynomial)?;
    let ng = g.degree().ok_or(Error::ZeroPolynomial)?;
    if nf != ng {
        return Err(Error::DegreeMismatch(nf, ng));
    }
    let s = sum_abs_roots_bound(g)?;
    let norm_f = f.norm2_upper();
    let b = BigRational::from_integer(BigInt::from(nf)) * &s * &norm_f;
    let gn_sq = BigRational::from_integer(g.lc() * g.lc());
    let b_ext = ceil_sqrt(&(&b * &b * &gn_sq + &gn_sq));
    Ok(BoundData { s, norm_f, b, b_ext })
}

/// Characteristic polynomial of `r(alpha)` in `Q[x]/(f)`, cleared of
/// denominators and made primitive with a positive leading coefficient.
/// Errors when the result is not squarefree, i.e. `r(alpha)` generates a
/// proper subfield.
///
/// Computed as `Res_y(f(y), x - r(y))` by evaluating the resultant at
/// `deg(f) + 1` integer points and interpolating.
pub fn resultant_minpoly(f: &IntPoly, r: &RatPoly) -> Result<IntPoly> {
    let n = f.degree().ok_or(Error::ZeroPolynomial)?;
    if n == 0 {
        return Err(Error::ZeroPolynomial);
    }
    if r.degree().map_or(false, |d| d >= n) {
        return Err(Error::DegreeMismatch(n, r.degree().unwrap()));
    }
    let num = r.numerator().clone();
    let den = r.denominator().clone();
    let k = num.deg() as u32;
    let fn_pow = BigRational::from_integer(f.lc().pow(k));

    // values of prod (y - num(alpha_i)) at y = 0..n
    let mut points = Vec::with_capacity(n + 1);
    for t in 0..=n {
        let shifted = IntPoly::constant(BigInt::from(t)).sub(&num);
        let v = BigRational::from_integer(resultant(f, &shifted)) / fn_pow.clone();
        points.push((BigRational::from_integer(BigInt::from(t)), v));
    }
    let q = lagrange_interpolate(&points);

    // minpoly of num(alpha)/den: substitute y -> den*x and clear denominators
    let mut subst = vec![BigRational::zero(); q.len()];
    let den_rat = BigRational::from_integer(den);
    let mut pow = BigRational::one();
    for (i, c) in q.iter().enumerate() {
        subst[i] = c * &pow;
        pow *= &den_rat;
    }
    let mut m = RatPoly::from_rationals(subst).num;
    m = m.primitive_part();
    if m.lc().is_negative() {
        m = m.neg();
    }
    if m.deg() != n {
        return Err(Error::NotSquarefree);
    }
    if discriminant(&m)?.is_zero() {
        return Err(Error::NotSquarefree);
    }
    Ok(m)
}

/// Coefficients (low to high) of the unique polynomial of degree
/// `< points.len()` through the given points.
fn lagrange_interpolate(points: &[(BigRational, BigRational)]) -> Vec<BigRational> {
    let n = points.len();
    let mut acc = vec![BigRational::zero(); n];
    for (i, (xi, yi)) in points.iter().enumerate() {
        // basis polynomial prod_{j != i} (x - x_j) / (x_i - x_j)
        let mut basis = vec![BigRational::zero(); n];
        basis[0] = BigRational::one();
        let mut deg = 0;
        let mut denom = BigRational::one();
        for (j, (xj, _)) in points.iter().enumerate() {
            if j == i {
                continue;
            }
            denom *= xi - xj;
            for k in (0..=deg).rev() {
                let t = basis[k].clone();
                basis[k + 1] += &t;
                basis[k] = -(xj * &t);
            }
            deg += 1;
        }
        let scale = yi / denom;
        for k in 0..n {
            let t = &basis[k] * &scale;
            acc[k] += t;
        }
    }
    acc
}
