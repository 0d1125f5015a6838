//! Elements of the cyclotomic field Q(zeta_M).
//!
//! An element is a polynomial in `zeta_M` of degree below `phi(M)`, fully
//! reduced modulo the cyclotomic polynomial, so two elements of the same
//! order are equal exactly when their coefficient vectors agree. Orders are
//! always multiples of 8 so that `i`, `alpha = zeta_8` and `sqrt 2` are
//! available everywhere; binary operations promote to the lcm of the orders.

use super::poly::{cyclotomic_polynomial, euler_phi, lcm};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::ops::{Add, Mul, Neg, Sub};

/// Exact element of `Q(zeta_M)`.
#[derive(Clone, Debug)]
pub struct Cyclotomic {
    order: u32,
    coeffs: Vec<BigRational>,
}

/// Smallest multiple of 8 divisible by `m`.
pub fn normalize_order(m: u32) -> u32 {
    lcm(m.max(1), 8)
}

fn reduce(mut p: Vec<BigRational>, m: u32) -> Vec<BigRational> {
    let d = euler_phi(m) as usize;
    if p.len() <= d {
        p.resize(d, BigRational::zero());
        return p;
    }
    if m.is_power_of_two() {
        // Phi_m = x^(m/2) + 1
        for i in (d..p.len()).rev() {
            let c = std::mem::replace(&mut p[i], BigRational::zero());
            if !c.is_zero() {
                p[i - d] -= c;
            }
        }
    } else {
        let phi = cyclotomic_polynomial(m);
        let phi: Vec<BigRational> = phi
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect();
        for i in (d..p.len()).rev() {
            let c = std::mem::replace(&mut p[i], BigRational::zero());
            if c.is_zero() {
                continue;
            }
            for (t, f) in phi.iter().enumerate().take(d) {
                if !f.is_zero() {
                    p[i - d + t] -= &c * f;
                }
            }
        }
    }
    p.truncate(d);
    p
}

/// Integer numerators over a common denominator.
fn integral(c: &[BigRational]) -> (Vec<BigInt>, BigInt) {
    let den = c.iter().fold(BigInt::one(), |d, x| d.lcm(x.denom()));
    let nums = c
        .iter()
        .map(|x| x.numer() * (&den / x.denom()))
        .collect();
    (nums, den)
}

/// `reduce` over the integers; `Phi_m` is monic so no denominators appear.
fn reduce_int(mut p: Vec<BigInt>, m: u32) -> Vec<BigInt> {
    let d = euler_phi(m) as usize;
    if p.len() <= d {
        p.resize(d, BigInt::zero());
        return p;
    }
    let phi = cyclotomic_polynomial(m);
    let terms: Vec<(usize, &BigInt)> = phi
        .iter()
        .enumerate()
        .take(d)
        .filter(|(_, f)| !f.is_zero())
        .collect();
    for i in (d..p.len()).rev() {
        let c = std::mem::replace(&mut p[i], BigInt::zero());
        if c.is_zero() {
            continue;
        }
        for &(t, f) in &terms {
            p[i - d + t] -= &c * f;
        }
    }
    p.truncate(d);
    p
}

impl Cyclotomic {
    /// Builds an element from coefficients of `1, zeta, zeta^2, ...` of any
    /// length; the result is reduced.
    pub fn from_coeffs(order: u32, coeffs: Vec<BigRational>) -> Self {
        let m = normalize_order(order);
        let coeffs = if m == order {
            reduce(coeffs, m)
        } else {
            let step = (m / order) as usize;
            let mut p = vec![BigRational::zero(); (coeffs.len().max(1) - 1) * step + 1];
            for (j, c) in coeffs.into_iter().enumerate() {
                p[j * step] = c;
            }
            reduce(p, m)
        };
        Cyclotomic { order: m, coeffs }
    }

    pub fn zero(order: u32) -> Self {
        let m = normalize_order(order);
        Cyclotomic {
            order: m,
            coeffs: vec![BigRational::zero(); euler_phi(m) as usize],
        }
    }

    pub fn from_rational(q: BigRational) -> Self {
        Self::from_rational_in(q, 8)
    }

    pub fn from_rational_in(q: BigRational, order: u32) -> Self {
        let mut z = Self::zero(order);
        z.coeffs[0] = q;
        z
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// `zeta_m^j` for any integer `j`.
    pub fn zeta_power(m: u32, j: i64) -> Self {
        let big = normalize_order(m);
        let e = (j.rem_euclid(m as i64) as u64 * (big / m) as u64) as usize;
        let mut p = vec![BigRational::zero(); e + 1];
        p[e] = BigRational::one();
        Cyclotomic {
            order: big,
            coeffs: reduce(p, big),
        }
    }

    pub fn zeta(m: u32) -> Self {
        Self::zeta_power(m, 1)
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Self::zeta_power(4, 1)
    }

    /// `alpha = zeta_8 = (1 + i)/sqrt 2`.
    pub fn alpha() -> Self {
        Self::zeta_power(8, 1)
    }

    /// `sqrt 2 = alpha - alpha^3`.
    pub fn sqrt2() -> Self {
        &Self::zeta_power(8, 1) - &Self::zeta_power(8, 3)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The rational value, when the element lies in Q.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Re-expresses the element in `Q(zeta_m)`; `m` must be a multiple of the
    /// current order.
    pub fn promote(&self, m: u32) -> Self {
        let m = normalize_order(m);
        assert!(m.is_multiple_of(self.order), "cannot promote order {} to {}", self.order, m);
        if m == self.order {
            return self.clone();
        }
        let step = (m / self.order) as usize;
        let mut p = vec![BigRational::zero(); (self.coeffs.len() - 1) * step + 1];
        for (j, c) in self.coeffs.iter().enumerate() {
            p[j * step] = c.clone();
        }
        Cyclotomic {
            order: m,
            coeffs: reduce(p, m),
        }
    }

    /// The same number in the smallest field `Q(zeta_m)`, `m` a power of two
    /// at least 8, reachable by halving a power-of-two order.
    pub fn demote(&self) -> Self {
        let mut c = self.clone();
        while c.order > 8 && c.order.is_power_of_two() && c.coeffs.iter().skip(1).step_by(2).all(|x| x.is_zero()) {
            c = Cyclotomic {
                order: c.order / 2,
                coeffs: c.coeffs.iter().step_by(2).cloned().collect(),
            };
        }
        c
    }

    fn aligned(a: &Self, b: &Self) -> (Self, Self) {
        let m = lcm(a.order, b.order);
        (a.promote(m), b.promote(m))
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        Cyclotomic {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    /// The automorphism `zeta -> zeta^a`, `a` coprime to the order.
    pub fn galois(&self, a: u32) -> Self {
        let m = self.order as usize;
        debug_assert_eq!(a.gcd(&self.order), 1);
        let mut p = vec![BigRational::zero(); m];
        for (j, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                p[(a as usize * j) % m] += c;
            }
        }
        Cyclotomic {
            order: self.order,
            coeffs: reduce(p, self.order),
        }
    }

    /// Complex conjugate.
    pub fn conj(&self) -> Self {
        self.galois(self.order - 1)
    }

    fn units(&self) -> impl Iterator<Item = u32> + '_ {
        (1..self.order).filter(move |a| a.gcd(&self.order) == 1)
    }

    /// Field norm down to Q.
    pub fn norm(&self) -> BigRational {
        let mut acc = self.clone();
        for a in self.units().skip(1) {
            acc = &acc * &self.galois(a);
        }
        acc.as_rational().expect("norm is rational")
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if let Some(q) = self.as_rational() {
            return Some(Self::from_rational_in(q.recip(), self.order));
        }
        let mut acc = Self::from_rational_in(BigRational::one(), self.order);
        for a in self.units().skip(1) {
            acc = &acc * &self.galois(a);
        }
        let n = (&acc * self).as_rational().expect("norm is rational");
        Some(acc.scale(&n.recip()))
    }

    pub fn pow(&self, e: i64) -> Option<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::from_rational_in(BigRational::one(), self.order);
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            e >>= 1;
            if e > 0 {
                b = &b * &b;
            }
        }
        Some(acc)
    }

    /// Writes the element as `zeta_M^j * q` with `q` a positive rational, if
    /// possible.
    pub fn as_root_of_unity_times_rational(&self) -> Option<(u32, BigRational)> {
        if self.is_zero() {
            return None;
        }
        let m = self.order as usize;
        let d = self.coeffs.len();
        let mut cur = self.coeffs.clone();
        for j in 0..m {
            if cur[1..].iter().all(Zero::is_zero) {
                let q = cur[0].clone();
                return Some(if q.is_positive() {
                    (j as u32, q)
                } else {
                    (((j + m / 2) % m) as u32, -q)
                });
            }
            // multiply by zeta^-1 = zeta^(m-1)
            let mut p = vec![BigRational::zero(); m];
            for (t, c) in cur.iter().enumerate() {
                p[(t + m - 1) % m] = c.clone();
            }
            cur = reduce(p, self.order);
            debug_assert_eq!(cur.len(), d);
        }
        None
    }

    /// Value at the embedding `zeta -> exp(2 pi i a / M)`, in floating point.
    pub fn embed_f64(&self, a: u32) -> (f64, f64) {
        let m = self.order as f64;
        let mut re = 0.0;
        let mut im = 0.0;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let cf = c.to_f64().unwrap_or(f64::NAN);
            let th = 2.0 * std::f64::consts::PI * ((a as u64 * j as u64) % self.order as u64) as f64 / m;
            re += cf * th.cos();
            im += cf * th.sin();
        }
        (re, im)
    }

    pub fn to_f64(&self) -> (f64, f64) {
        self.embed_f64(1)
    }

    /// Least common denominator of the coefficients.
    pub fn denominator(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            self.coeffs == other.coeffs
        } else {
            let (a, b) = Self::aligned(self, other);
            a.coeffs == b.coeffs
        }
    }
}

impl Eq for Cyclotomic {}

impl<'a> Add<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        if self.order == rhs.order {
            Cyclotomic {
                order: self.order,
                coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(x, y)| x + y).collect(),
            }
        } else {
            let (a, b) = Cyclotomic::aligned(self, rhs);
            &a + &b
        }
    }
}

impl<'a> Sub<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        if self.order == rhs.order {
            Cyclotomic {
                order: self.order,
                coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(x, y)| x - y).collect(),
            }
        } else {
            let (a, b) = Cyclotomic::aligned(self, rhs);
            &a - &b
        }
    }
}

impl<'a> Mul<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        if self.order != rhs.order {
            let (a, b) = Cyclotomic::aligned(self, rhs);
            return &a * &b;
        }
        if let Some(q) = self.as_rational() {
            return rhs.scale(&q);
        }
        if let Some(q) = rhs.as_rational() {
            return self.scale(&q);
        }
        let (a, da) = integral(&self.coeffs);
        let (b, db) = integral(&rhs.coeffs);
        let mut p = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    p[i + j] += x * y;
                }
            }
        }
        let den = da * db;
        Cyclotomic {
            order: self.order,
            coeffs: reduce_int(p, self.order)
                .into_iter()
                .map(|c| BigRational::new(c, den.clone()))
                .collect(),
        }
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! owned_binop {
    ($tr:ident, $f:ident) => {
        impl $tr<Cyclotomic> for Cyclotomic {
            type Output = Cyclotomic;
            fn $f(self, rhs: Cyclotomic) -> Cyclotomic {
                (&self).$f(&rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}
