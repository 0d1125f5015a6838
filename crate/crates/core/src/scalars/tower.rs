//! Scalars in a single radical extension `Q(zeta_M)[y]/(y^k - v)`.
//!
//! The ring is a field when `y^k - v` is irreducible. When it is not, ring
//! equality is coarser than equality at the selected analytic root, and the
//! zero test falls back on certified interval evaluation (see
//! [`Scalar::decide_zero`]).

use super::cyclo::Cyclotomic;
use super::interval::{principal_root_interval, root_of_unity, ComplexInterval};
use num_bigint::BigInt;
use num_rational::BigRational;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

/// Default precision ceiling for certified zero tests, in bits.
pub const DEFAULT_MAX_PRECISION: u32 = 4096;

/// A formal root `y` of `y^k = v`, pinned to the analytic value
/// `exp(2 pi i branch / k)` times the principal root.
#[derive(Clone, Debug)]
pub struct Radical {
    degree: u32,
    value: Cyclotomic,
    branch: u32,
    max_precision: u32,
}

impl Radical {
    pub fn new(degree: u32, value: Cyclotomic, branch: u32) -> Self {
        Self::with_precision(degree, value, branch, DEFAULT_MAX_PRECISION)
    }

    pub fn with_precision(degree: u32, value: Cyclotomic, branch: u32, max_precision: u32) -> Self {
        assert!(degree >= 1);
        assert!(!value.is_zero(), "radical of zero");
        Radical {
            degree,
            value,
            branch: branch % degree,
            max_precision,
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn value(&self) -> &Cyclotomic {
        &self.value
    }

    pub fn branch(&self) -> u32 {
        self.branch
    }

    pub fn max_precision(&self) -> u32 {
        self.max_precision
    }

    fn same(&self, other: &Radical) -> bool {
        self.degree == other.degree && self.branch == other.branch && self.value == other.value
    }

    /// Encloses the root on branch `j` (not necessarily the selected one).
    fn root_interval(&self, j: u32, p: u32) -> Option<ComplexInterval> {
        let base = principal_root_interval(&self.value, self.degree, p)?;
        if j.is_multiple_of(self.degree) {
            Some(base)
        } else {
            Some(base.mul(&root_of_unity(self.degree, j, p)))
        }
    }
}

/// Outcome of a certified zero test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZeroTest {
    Zero,
    NonZero,
    Undecided,
}

/// The zero test could not be settled within the precision ceiling.
#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
#[error("zero test undecided at the configured precision")]
pub struct Undecided;

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero test undecided at the configured precision")]
    Undecided,
}

impl From<Undecided> for ScalarError {
    fn from(_: Undecided) -> Self {
        ScalarError::Undecided
    }
}

/// An algebraic number `sum_j c_j y^j` with cyclotomic `c_j`.
#[derive(Clone, Debug)]
pub struct Scalar {
    radical: Option<Arc<Radical>>,
    coeffs: Vec<Cyclotomic>,
}

/// Name used for the type in reports and documentation.
pub type AlgebraicScalar = Scalar;

impl From<Cyclotomic> for Scalar {
    fn from(c: Cyclotomic) -> Self {
        Scalar {
            radical: None,
            coeffs: vec![c],
        }
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from(Cyclotomic::from_int(n))
    }
}

impl From<BigRational> for Scalar {
    fn from(q: BigRational) -> Self {
        Scalar::from(Cyclotomic::from_rational(q))
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::from(0)
    }

    pub fn one() -> Self {
        Scalar::from(1)
    }

    pub fn rational(n: i64, d: i64) -> Self {
        Scalar::from(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn i() -> Self {
        Scalar::from(Cyclotomic::i())
    }

    pub fn alpha() -> Self {
        Scalar::from(Cyclotomic::alpha())
    }

    pub fn sqrt2() -> Self {
        Scalar::from(Cyclotomic::sqrt2())
    }

    /// `i^r`.
    pub fn i_pow(r: i64) -> Self {
        Scalar::from(Cyclotomic::zeta_power(4, r))
    }

    /// `alpha^r`.
    pub fn alpha_pow(r: i64) -> Self {
        Scalar::from(Cyclotomic::zeta_power(8, r))
    }

    pub fn zeta_power(m: u32, j: i64) -> Self {
        Scalar::from(Cyclotomic::zeta_power(m, j))
    }

    /// The generator `y` of a radical extension.
    pub fn generator(radical: Arc<Radical>) -> Self {
        let k = radical.degree as usize;
        let order = radical.value.order();
        let mut coeffs = vec![Cyclotomic::zero(order); k];
        if k == 1 {
            coeffs[0] = radical.value.clone();
            return Scalar {
                radical: None,
                coeffs,
            };
        }
        coeffs[1] = Cyclotomic::from_rational_in(BigRational::from_integer(1.into()), order);
        Scalar {
            radical: Some(radical),
            coeffs,
        }
    }

    /// Builds `sum_j coeffs[j] y^j`.
    pub fn from_parts(radical: Option<Arc<Radical>>, coeffs: Vec<Cyclotomic>) -> Self {
        let k = radical.as_ref().map_or(1, |r| r.degree as usize);
        assert_eq!(coeffs.len(), k, "coefficient count must equal the radical degree");
        Scalar { radical, coeffs }
    }

    pub fn radical(&self) -> Option<&Arc<Radical>> {
        self.radical.as_ref()
    }

    pub fn coeffs(&self) -> &[Cyclotomic] {
        &self.coeffs
    }

    /// The value as a cyclotomic number when no power of `y` appears.
    pub fn as_cyclotomic(&self) -> Option<&Cyclotomic> {
        if self.coeffs[1..].iter().all(Cyclotomic::is_zero) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        self.as_cyclotomic().and_then(Cyclotomic::as_rational)
    }

    /// Ring-level zero: every coefficient vanishes.
    pub fn is_zero_exact(&self) -> bool {
        self.coeffs.iter().all(Cyclotomic::is_zero)
    }

    /// Whether `self` and `other` live in one ring (at most one radical
    /// between them), so that arithmetic on the pair is defined.
    pub fn compatible(&self, other: &Scalar) -> bool {
        match (&self.radical, &other.radical) {
            (Some(a), Some(b)) => Arc::ptr_eq(a, b) || a.same(b),
            _ => true,
        }
    }

    fn merged(&self, other: &Scalar) -> Option<Arc<Radical>> {
        match (&self.radical, &other.radical) {
            (None, None) => None,
            (Some(r), None) | (None, Some(r)) => Some(Arc::clone(r)),
            (Some(a), Some(b)) => {
                assert!(
                    Arc::ptr_eq(a, b) || a.same(b),
                    "arithmetic mixes two distinct radicals"
                );
                Some(Arc::clone(a))
            }
        }
    }

    fn lifted(&self, radical: &Option<Arc<Radical>>) -> Vec<Cyclotomic> {
        let k = radical.as_ref().map_or(1, |r| r.degree as usize);
        if self.coeffs.len() == k {
            return self.coeffs.clone();
        }
        let mut c = self.coeffs.clone();
        let order = c[0].order();
        c.resize(k, Cyclotomic::zero(order));
        c
    }

    /// Re-expresses a plain scalar inside the ring of `radical`.
    pub fn lift_to(&self, radical: &Arc<Radical>) -> Scalar {
        let r = self.merged(&Scalar::generator(Arc::clone(radical)));
        Scalar {
            coeffs: self.lifted(&r),
            radical: r,
        }
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut acc = Scalar::one();
        let mut b = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            e >>= 1;
            if e > 0 {
                b = &b * &b;
            }
        }
        acc
    }

    /// Multiplication matrix of `self` on the basis `1, y, ..., y^(k-1)`;
    /// column `j` holds `self * y^j`.
    fn mult_matrix(&self) -> Vec<Vec<Cyclotomic>> {
        let rad = self.radical.as_ref().expect("radical");
        let k = rad.degree as usize;
        let order = self.coeffs[0].order();
        let mut m = vec![vec![Cyclotomic::zero(order); k]; k];
        for j in 0..k {
            for (l, c) in self.coeffs.iter().enumerate() {
                let e = l + j;
                if e < k {
                    m[e][j] = &m[e][j] + c;
                } else {
                    m[e - k][j] = &m[e - k][j] + &(c * &rad.value);
                }
            }
        }
        m
    }

    /// Determinant of the multiplication matrix: the product of the values at
    /// all `k` roots of `y^k - v`.
    pub fn norm_to_base(&self) -> Cyclotomic {
        if self.radical.is_none() {
            return self.coeffs[0].clone();
        }
        let mut m = self.mult_matrix();
        let k = m.len();
        let mut det = Cyclotomic::one();
        for col in 0..k {
            let Some(piv) = (col..k).find(|&r| !m[r][col].is_zero()) else {
                return Cyclotomic::zero(8);
            };
            if piv != col {
                m.swap(piv, col);
                det = -det;
            }
            det = &det * &m[col][col];
            let inv = m[col][col].inv().expect("nonzero pivot");
            for r in col + 1..k {
                if m[r][col].is_zero() {
                    continue;
                }
                let f = &m[r][col] * &inv;
                for c in col..k {
                    let t = &f * &m[col][c];
                    m[r][c] = &m[r][c] - &t;
                }
            }
        }
        det
    }

    /// Certified enclosure at the selected root, or `None` when the root
    /// itself cannot be enclosed at precision `p`.
    pub fn interval(&self, p: u32) -> Option<ComplexInterval> {
        let branch = self.radical.as_ref().map_or(0, |r| r.branch);
        self.interval_at(branch, p)
    }

    fn interval_at(&self, branch: u32, p: u32) -> Option<ComplexInterval> {
        let first = super::interval::cyclotomic_interval(&self.coeffs[0], p);
        let Some(rad) = &self.radical else {
            return Some(first);
        };
        let y = rad.root_interval(branch, p)?;
        let mut acc = first;
        let mut pw = ComplexInterval::one(p);
        for c in &self.coeffs[1..] {
            pw = pw.mul(&y);
            if !c.is_zero() {
                acc = acc.add(&super::interval::cyclotomic_interval(c, p).mul(&pw));
            }
        }
        Some(acc)
    }

    /// Floating-point approximation of the selected value.
    pub fn to_f64(&self) -> (f64, f64) {
        self.interval(64)
            .or_else(|| self.interval(256))
            .map_or((f64::NAN, f64::NAN), |b| b.mid_f64())
    }

    /// Sound three-valued zero test at the selected root.
    ///
    /// `Zero` is reported only when the exact norm vanishes and every other
    /// conjugate is certified nonzero; `NonZero` only when the ring norm is
    /// nonzero or the enclosure at the selected root excludes zero.
    pub fn decide_zero(&self, max_precision: u32) -> ZeroTest {
        if self.is_zero_exact() {
            return ZeroTest::Zero;
        }
        let Some(rad) = self.radical.clone() else {
            return ZeroTest::NonZero;
        };
        if self.as_cyclotomic().is_some() {
            return ZeroTest::NonZero;
        }
        if let Some(b) = self.interval(64) {
            if !b.contains_zero() {
                return ZeroTest::NonZero;
            }
        }
        if !self.norm_to_base().is_zero() {
            return ZeroTest::NonZero;
        }
        let mut p = 64;
        while p <= max_precision.max(64) {
            if let Some(b) = self.interval(p) {
                if !b.contains_zero() {
                    return ZeroTest::NonZero;
                }
            }
            let others_nonzero = (0..rad.degree).filter(|&j| j != rad.branch).all(|j| {
                self.interval_at(j, p)
                    .is_some_and(|b| !b.contains_zero())
            });
            if others_nonzero {
                return ZeroTest::Zero;
            }
            p *= 2;
        }
        ZeroTest::Undecided
    }

    /// Zero test at the radical's configured precision ceiling.
    pub fn is_zero(&self) -> Result<bool, Undecided> {
        let max = self
            .radical
            .as_ref()
            .map_or(DEFAULT_MAX_PRECISION, |r| r.max_precision);
        match self.decide_zero(max) {
            ZeroTest::Zero => Ok(true),
            ZeroTest::NonZero => Ok(false),
            ZeroTest::Undecided => Err(Undecided),
        }
    }

    pub fn equals(&self, other: &Scalar) -> Result<bool, Undecided> {
        (self - other).is_zero()
    }

    /// Multiplicative inverse at the selected root.
    pub fn try_inv(&self) -> Result<Scalar, ScalarError> {
        if let Some(c) = self.as_cyclotomic() {
            let inv = c.inv().ok_or(ScalarError::DivisionByZero)?;
            let mut coeffs = vec![inv];
            if let Some(r) = &self.radical {
                coeffs.resize(r.degree as usize, Cyclotomic::zero(coeffs[0].order()));
            }
            return Ok(Scalar {
                radical: self.radical.clone(),
                coeffs,
            });
        }
        let mut m = self.mult_matrix();
        let k = m.len();
        let order = self.coeffs[0].order();
        let mut rhs = vec![Cyclotomic::zero(order); k];
        rhs[0] = Cyclotomic::one();
        for col in 0..k {
            let Some(piv) = (col..k).find(|&r| !m[r][col].is_zero()) else {
                return Err(if self.is_zero()? {
                    ScalarError::DivisionByZero
                } else {
                    ScalarError::Undecided
                });
            };
            m.swap(piv, col);
            rhs.swap(piv, col);
            let inv = m[col][col].inv().expect("nonzero pivot");
            for c in col..k {
                m[col][c] = &m[col][c] * &inv;
            }
            rhs[col] = &rhs[col] * &inv;
            for r in 0..k {
                if r == col || m[r][col].is_zero() {
                    continue;
                }
                let f = m[r][col].clone();
                for c in col..k {
                    let t = &f * &m[col][c];
                    m[r][c] = &m[r][c] - &t;
                }
                let t = &f * &rhs[col];
                rhs[r] = &rhs[r] - &t;
            }
        }
        Ok(Scalar {
            radical: self.radical.clone(),
            coeffs: rhs,
        })
    }

    pub fn try_div(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        Ok(self * &other.try_inv()?)
    }

    /// `r` with `self = i^r`, if any.
    pub fn is_power_of_i(&self) -> Result<Option<u8>, Undecided> {
        if let Some(c) = self.as_cyclotomic() {
            for r in 0..4u8 {
                if *c == Cyclotomic::zeta_power(4, r as i64) {
                    return Ok(Some(r));
                }
            }
            if self.radical.is_none() {
                return Ok(None);
            }
        }
        for r in 0..4u8 {
            if self.equals(&Scalar::i_pow(r as i64))? {
                return Ok(Some(r));
            }
        }
        Ok(None)
    }

    /// Complex conjugate of a plain cyclotomic value.
    pub fn conj_cyclotomic(&self) -> Option<Scalar> {
        if self.radical.is_some() {
            return None;
        }
        Some(Scalar::from(self.coeffs[0].conj()))
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        let r = self.merged(rhs);
        let a = self.lifted(&r);
        let b = rhs.lifted(&r);
        Scalar {
            coeffs: a.iter().zip(&b).map(|(x, y)| x + y).collect(),
            radical: r,
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        let r = self.merged(rhs);
        let a = self.lifted(&r);
        let b = rhs.lifted(&r);
        Scalar {
            coeffs: a.iter().zip(&b).map(|(x, y)| x - y).collect(),
            radical: r,
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        let r = self.merged(rhs);
        let Some(rad) = r.clone() else {
            return Scalar::from(&self.coeffs[0] * &rhs.coeffs[0]);
        };
        if let Some(c) = self.as_cyclotomic() {
            let b = rhs.lifted(&r);
            return Scalar {
                coeffs: b.iter().map(|x| c * x).collect(),
                radical: r,
            };
        }
        if let Some(c) = rhs.as_cyclotomic() {
            let a = self.lifted(&r);
            return Scalar {
                coeffs: a.iter().map(|x| x * c).collect(),
                radical: r,
            };
        }
        let k = rad.degree as usize;
        let order = self.coeffs[0].order();
        let mut out = vec![Cyclotomic::zero(order); 2 * k - 1];
        for (i, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in rhs.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    out[i + j] = &out[i + j] + &(x * y);
                }
            }
        }
        for e in (k..2 * k - 1).rev() {
            let c = std::mem::replace(&mut out[e], Cyclotomic::zero(order));
            if !c.is_zero() {
                out[e - k] = &out[e - k] + &(&c * &rad.value);
            }
        }
        out.truncate(k);
        Scalar {
            coeffs: out,
            radical: r,
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            radical: self.radical.clone(),
        }
    }
}

macro_rules! owned_binop {
    ($tr:ident, $f:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $f(self, rhs: Scalar) -> Scalar {
                (&self).$f(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $f(self, rhs: &Scalar) -> Scalar {
                (&self).$f(rhs)
            }
        }
        impl<'a> $tr<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $f(self, rhs: Scalar) -> Scalar {
                self.$f(&rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::parse::format_scalar(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn y_with(v: Cyclotomic, k: u32, branch: u32) -> Scalar {
        Scalar::generator(Arc::new(Radical::new(k, v, branch)))
    }

    #[test]
    fn defining_relation_holds() {
        let v = &Cyclotomic::one() + &Cyclotomic::i();
        let y = y_with(v.clone(), 2, 0);
        assert!((&y * &y).equals(&Scalar::from(v)).unwrap());
    }

    #[test]
    fn sqrt2_radical_minus_cyclotomic_sqrt2_is_zero() {
        let y = y_with(Cyclotomic::from_int(2), 2, 0);
        let s = &y - &Scalar::sqrt2();
        assert!(!s.is_zero_exact());
        assert_ne!(s.decide_zero(DEFAULT_MAX_PRECISION), ZeroTest::NonZero);
        assert_eq!(s.decide_zero(DEFAULT_MAX_PRECISION), ZeroTest::Zero);
        // the other branch is -sqrt 2
        let t = &y_with(Cyclotomic::from_int(2), 2, 1) + &Scalar::sqrt2();
        assert_eq!(t.decide_zero(DEFAULT_MAX_PRECISION), ZeroTest::Zero);
    }

    #[test]
    fn one_plus_root_is_nonzero() {
        let v = &Cyclotomic::one() + &Cyclotomic::i();
        for b in 0..2 {
            let s = &Scalar::one() + &y_with(v.clone(), 2, b);
            assert_eq!(s.decide_zero(DEFAULT_MAX_PRECISION), ZeroTest::NonZero);
        }
    }

    #[test]
    fn inverse_in_irreducible_tower() {
        let v = &Cyclotomic::one() + &Cyclotomic::i();
        let y = y_with(v, 2, 0);
        let x = &Scalar::from(3) + &(&y * &Scalar::alpha());
        let inv = x.try_inv().unwrap();
        assert!((&x * &inv).equals(&Scalar::one()).unwrap());
    }

    #[test]
    fn inverse_in_reducible_tower_is_undecided_or_correct() {
        // y^2 = 2 is reducible over Q(zeta_8); y + sqrt2 is a zero divisor
        let y = y_with(Cyclotomic::from_int(2), 2, 0);
        let x = &y + &Scalar::sqrt2();
        assert_eq!(x.try_inv().unwrap_err(), ScalarError::Undecided);
        let z = &y - &Scalar::sqrt2();
        assert_eq!(z.try_inv().unwrap_err(), ScalarError::DivisionByZero);
    }

    #[test]
    fn powers_of_i() {
        assert_eq!(Scalar::from(-1).is_power_of_i().unwrap(), Some(2));
        assert_eq!(Scalar::alpha().is_power_of_i().unwrap(), None);
        let s = Scalar::sqrt2().pow(2) * Scalar::rational(1, 2);
        assert_eq!(s.is_power_of_i().unwrap(), Some(0));
    }

    #[test]
    fn norm_is_product_of_conjugates() {
        let v = Cyclotomic::from_int(3);
        let y = y_with(v, 3, 0);
        let x = &Scalar::from(1) + &y;
        // (1 + c)(1 + w c)(1 + w^2 c) = 1 + c^3 = 4
        assert_eq!(x.norm_to_base(), Cyclotomic::from_int(4));
    }
}
