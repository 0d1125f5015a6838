//! Certified complex interval arithmetic on fixed-point dyadics.
//!
//! A value at precision `p` is a box `[mid.re +- rad.re] + i[mid.im +- rad.im]`
//! with all four numbers stored as integers scaled by `2^-p`. Every operation
//! rounds outward, so the box always contains the exact result.

use super::cyclo::Cyclotomic;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Real interval `[(mid - rad) 2^-p, (mid + rad) 2^-p]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealBall {
    pub mid: BigInt,
    pub rad: BigInt,
}

/// Certified enclosure of a complex number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexInterval {
    pub re: RealBall,
    pub im: RealBall,
    pub precision: u32,
}

fn shr_floor(x: &BigInt, p: u32) -> BigInt {
    x >> p as usize
}

fn shr_ceil(x: &BigInt, p: u32) -> BigInt {
    -((-x) >> p as usize)
}

impl RealBall {
    fn exact(mid: BigInt) -> Self {
        RealBall {
            mid,
            rad: BigInt::zero(),
        }
    }

    fn from_rational(q: &BigRational, p: u32) -> Self {
        let scaled = q.numer() << p as usize;
        let (d, r) = scaled.div_mod_floor(q.denom());
        RealBall {
            mid: d,
            rad: if r.is_zero() {
                BigInt::zero()
            } else {
                BigInt::one()
            },
        }
    }

    fn add(&self, o: &Self) -> Self {
        RealBall {
            mid: &self.mid + &o.mid,
            rad: &self.rad + &o.rad,
        }
    }

    fn sub(&self, o: &Self) -> Self {
        RealBall {
            mid: &self.mid - &o.mid,
            rad: &self.rad + &o.rad,
        }
    }

    fn neg(&self) -> Self {
        RealBall {
            mid: -&self.mid,
            rad: self.rad.clone(),
        }
    }

    fn mul(&self, o: &Self, p: u32) -> Self {
        let prod = &self.mid * &o.mid;
        let mid = shr_floor(&prod, p);
        let err = self.mid.abs() * &o.rad + o.mid.abs() * &self.rad + &self.rad * &o.rad;
        let rad = shr_ceil(&err, p) + BigInt::one();
        RealBall { mid, rad }
    }

    fn contains_zero(&self) -> bool {
        self.mid.abs() <= self.rad
    }

    /// Upper bound on the absolute value (scaled).
    fn abs_upper(&self) -> BigInt {
        self.mid.abs() + &self.rad
    }

    /// Lower bound on the absolute value (scaled), clamped at zero.
    fn abs_lower(&self) -> BigInt {
        let l = self.mid.abs() - &self.rad;
        if l.is_negative() {
            BigInt::zero()
        } else {
            l
        }
    }
}

impl ComplexInterval {
    pub fn zero(p: u32) -> Self {
        Self::exact(BigInt::zero(), BigInt::zero(), p)
    }

    pub fn one(p: u32) -> Self {
        Self::exact(BigInt::one() << p as usize, BigInt::zero(), p)
    }

    fn exact(re: BigInt, im: BigInt, p: u32) -> Self {
        ComplexInterval {
            re: RealBall::exact(re),
            im: RealBall::exact(im),
            precision: p,
        }
    }

    pub fn from_rational(q: &BigRational, p: u32) -> Self {
        ComplexInterval {
            re: RealBall::from_rational(q, p),
            im: RealBall::exact(BigInt::zero()),
            precision: p,
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        ComplexInterval {
            re: self.re.add(&o.re),
            im: self.im.add(&o.im),
            precision: self.precision,
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        ComplexInterval {
            re: self.re.sub(&o.re),
            im: self.im.sub(&o.im),
            precision: self.precision,
        }
    }

    pub fn neg(&self) -> Self {
        ComplexInterval {
            re: self.re.neg(),
            im: self.im.neg(),
            precision: self.precision,
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let p = self.precision;
        let re = self.re.mul(&o.re, p).sub(&self.im.mul(&o.im, p));
        let im = self.re.mul(&o.im, p).add(&self.im.mul(&o.re, p));
        ComplexInterval {
            re,
            im,
            precision: p,
        }
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        self.mul(&Self::from_rational(q, self.precision))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.precision);
        let mut b = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        acc
    }

    /// True when the box contains the origin.
    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    /// Upper bound on `|z|`, scaled by `2^p`.
    fn abs_upper(&self) -> BigInt {
        self.re.abs_upper() + self.im.abs_upper()
    }

    /// Lower bound on `|z|`, scaled by `2^p`.
    fn abs_lower(&self) -> BigInt {
        self.re.abs_lower().max(self.im.abs_lower())
    }

    /// Midpoint as floating point.
    pub fn mid_f64(&self) -> (f64, f64) {
        let s = (self.precision as f64).exp2();
        (
            self.re.mid.to_f64().unwrap_or(f64::NAN) / s,
            self.im.mid.to_f64().unwrap_or(f64::NAN) / s,
        )
    }

    /// Largest radius as floating point.
    pub fn radius_f64(&self) -> f64 {
        let s = (self.precision as f64).exp2();
        self.re.rad.clone().max(self.im.rad.clone()).to_f64().unwrap_or(f64::INFINITY) / s
    }
}

/// Point arithmetic used for Newton iteration; not certified.
#[derive(Clone, Debug)]
struct Point {
    re: BigInt,
    im: BigInt,
}

impl Point {
    fn from_f64(re: f64, im: f64, p: u32) -> Option<Self> {
        Some(Point {
            re: f64_to_fixed(re, p)?,
            im: f64_to_fixed(im, p)?,
        })
    }

    fn mul(&self, o: &Self, p: u32) -> Self {
        Point {
            re: shr_floor(&(&self.re * &o.re - &self.im * &o.im), p),
            im: shr_floor(&(&self.re * &o.im + &self.im * &o.re), p),
        }
    }

    fn pow(&self, e: u32, p: u32) -> Self {
        let mut acc = Point {
            re: BigInt::one() << p as usize,
            im: BigInt::zero(),
        };
        for _ in 0..e {
            acc = acc.mul(self, p);
        }
        acc
    }

    fn div(&self, o: &Self, p: u32) -> Option<Self> {
        let den = &o.re * &o.re + &o.im * &o.im;
        if den.is_zero() {
            return None;
        }
        let nre = (&self.re * &o.re + &self.im * &o.im) << p as usize;
        let nim = (&self.im * &o.re - &self.re * &o.im) << p as usize;
        Some(Point {
            re: nre.div_floor(&den),
            im: nim.div_floor(&den),
        })
    }

    fn ball(&self, p: u32) -> ComplexInterval {
        ComplexInterval::exact(self.re.clone(), self.im.clone(), p)
    }
}

fn f64_to_fixed(x: f64, p: u32) -> Option<BigInt> {
    if !x.is_finite() {
        return None;
    }
    let (m, e) = decompose_f64(x);
    let shift = e + p as i64;
    let m = BigInt::from(m);
    Some(if shift >= 0 {
        m << shift as usize
    } else {
        m >> (-shift) as usize
    })
}

/// `x = m * 2^e` with integer `m`.
fn decompose_f64(x: f64) -> (i64, i64) {
    if x == 0.0 {
        return (0, 0);
    }
    let bits = x.to_bits();
    let sign = if bits >> 63 == 0 { 1 } else { -1 };
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = (bits & 0xf_ffff_ffff_ffff) as i64;
    let (m, e) = if exp == 0 {
        (frac, -1074)
    } else {
        (frac | (1 << 52), exp - 1075)
    };
    (sign * m, e)
}

/// Encloses the root of `z^k = v` nearest to the floating-point `guess`.
///
/// `v` is given as a certified interval. Returns `None` when the enclosure
/// cannot be separated from the neighbouring roots at this precision.
fn certified_root(v: &ComplexInterval, k: u32, guess: (f64, f64)) -> Option<ComplexInterval> {
    let p = v.precision;
    let vmid = Point {
        re: v.re.mid.clone(),
        im: v.im.mid.clone(),
    };
    let mut z = Point::from_f64(guess.0, guess.1, p)?;
    let kk = Point {
        re: BigInt::from(k) << p as usize,
        im: BigInt::zero(),
    };
    let iterations = 3 + (p as f64 / 40.0).log2().ceil().max(0.0) as u32;
    for _ in 0..iterations {
        let zk1 = z.pow(k - 1, p);
        let zk = zk1.mul(&z, p);
        let f = Point {
            re: &zk.re - &vmid.re,
            im: &zk.im - &vmid.im,
        };
        let fp = zk1.mul(&kk, p);
        let step = f.div(&fp, p)?;
        z = Point {
            re: &z.re - &step.re,
            im: &z.im - &step.im,
        };
    }
    // root within |z^k - v| / |z^(k-1)| of z
    let zb = z.ball(p);
    let zk1 = zb.pow(k - 1);
    let resid = zk1.mul(&zb).sub(v);
    let upper = resid.abs_upper();
    let lower = zk1.abs_lower();
    if lower.is_zero() {
        return None;
    }
    let rho = (upper << p as usize).div_ceil(&lower) + BigInt::one();
    // separation check against neighbouring roots
    let (zr, zi) = z_f64(&z, p);
    let modulus = (zr * zr + zi * zi).sqrt();
    let sep = 2.0 * modulus * (std::f64::consts::PI / k as f64).sin();
    let rho_f = rho.to_f64().unwrap_or(f64::INFINITY) / (p as f64).exp2();
    let drift = ((zr - guess.0).powi(2) + (zi - guess.1).powi(2)).sqrt();
    if k > 1 && !(rho_f + drift < sep / 4.0) {
        return None;
    }
    Some(ComplexInterval {
        re: RealBall {
            mid: z.re,
            rad: rho.clone(),
        },
        im: RealBall { mid: z.im, rad: rho },
        precision: p,
    })
}

fn z_f64(z: &Point, p: u32) -> (f64, f64) {
    let s = (p as f64).exp2();
    (
        z.re.to_f64().unwrap_or(f64::NAN) / s,
        z.im.to_f64().unwrap_or(f64::NAN) / s,
    )
}

/// Encloses `zeta_m^j = exp(2 pi i j / m)`.
pub fn root_of_unity(m: u32, j: u32, p: u32) -> ComplexInterval {
    let j = j % m;
    let unit = BigInt::one() << p as usize;
    if j == 0 {
        return ComplexInterval::one(p);
    } else if 4 * j == m {
        return ComplexInterval::exact(BigInt::zero(), unit, p);
    } else if 2 * j == m {
        return ComplexInterval::exact(-unit, BigInt::zero(), p);
    } else if 4 * j == 3 * m {
        return ComplexInterval::exact(BigInt::zero(), -unit, p);
    }
    let th = 2.0 * std::f64::consts::PI * j as f64 / m as f64;
    let mut prec = p;
    loop {
        let one = ComplexInterval::one(prec);
        if let Some(b) = certified_root(&one, m, (th.cos(), th.sin())) {
            return rescale(&b, p);
        }
        prec += 32;
    }
}

/// Re-expresses an interval at a lower precision, rounding outward.
fn rescale(b: &ComplexInterval, p: u32) -> ComplexInterval {
    if b.precision == p {
        return b.clone();
    }
    assert!(b.precision > p);
    let d = b.precision - p;
    let f = |r: &RealBall| RealBall {
        mid: shr_floor(&r.mid, d),
        rad: shr_ceil(&r.rad, d) + BigInt::one(),
    };
    ComplexInterval {
        re: f(&b.re),
        im: f(&b.im),
        precision: p,
    }
}

/// Encloses a cyclotomic number at its standard embedding.
pub fn cyclotomic_interval(c: &Cyclotomic, p: u32) -> ComplexInterval {
    let z = root_of_unity(c.order(), 1, p);
    let mut acc = ComplexInterval::zero(p);
    let mut pw = ComplexInterval::one(p);
    for (j, q) in c.coeffs().iter().enumerate() {
        if j > 0 {
            pw = pw.mul(&z);
        }
        if !q.is_zero() {
            acc = acc.add(&pw.scale(q));
        }
    }
    acc
}

/// Encloses the principal `k`-th root of a nonzero cyclotomic `v`, the one
/// with argument in `(-pi/k, pi/k]`. `None` means more precision is needed.
pub fn principal_root_interval(v: &Cyclotomic, k: u32, p: u32) -> Option<ComplexInterval> {
    assert!(!v.is_zero(), "root of zero");
    let vb = cyclotomic_interval(v, p);
    if k == 1 {
        return Some(vb);
    }
    if vb.contains_zero() {
        return None;
    }
    let (re, im) = vb.mid_f64();
    let re_positive = vb.re.mid.is_positive() && !vb.re.contains_zero();
    let arg = if vb.im.contains_zero() && !re_positive {
        // possibly on the branch cut: settle realness exactly
        if v == &v.conj() && !vb.re.contains_zero() {
            std::f64::consts::PI
        } else {
            return None;
        }
    } else {
        im.atan2(re)
    };
    let r = (re * re + im * im).sqrt().powf(1.0 / k as f64);
    let th = arg / k as f64;
    certified_root(&vb, k, (r * th.cos(), r * th.sin()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn contains(b: &ComplexInterval, re: f64, im: f64) -> bool {
        let (mr, mi) = b.mid_f64();
        let r = b.radius_f64() + 1e-15;
        (mr - re).abs() <= r && (mi - im).abs() <= r
    }

    #[test]
    fn roots_of_unity_enclose_true_value() {
        for m in [3u32, 5, 8, 12, 16, 24, 40] {
            for j in 0..m {
                let b = root_of_unity(m, j, 128);
                let th = 2.0 * std::f64::consts::PI * j as f64 / m as f64;
                assert!(contains(&b, th.cos(), th.sin()), "zeta_{m}^{j}");
                assert!(b.radius_f64() < 1e-30);
            }
        }
    }

    #[test]
    fn sqrt2_interval_tightens() {
        let s = Cyclotomic::sqrt2();
        let lo = cyclotomic_interval(&s, 64);
        let hi = cyclotomic_interval(&s, 512);
        assert!(contains(&lo, 2f64.sqrt(), 0.0));
        assert!(hi.radius_f64() < lo.radius_f64());
        assert!(hi.radius_f64() < 1e-140);
    }

    #[test]
    fn principal_square_root_of_minus_one_is_i() {
        let b = principal_root_interval(&Cyclotomic::from_int(-1), 2, 128).unwrap();
        assert!(contains(&b, 0.0, 1.0));
    }

    #[test]
    fn principal_cube_root_of_rational() {
        let b = principal_root_interval(&Cyclotomic::from_rational(q(27, 8)), 3, 96).unwrap();
        assert!(contains(&b, 1.5, 0.0));
    }

    #[test]
    fn products_stay_certified() {
        let a = cyclotomic_interval(&Cyclotomic::alpha(), 80);
        let s = a.pow(8);
        assert!(contains(&s, 1.0, 0.0));
        assert!(!s.contains_zero());
    }
}
