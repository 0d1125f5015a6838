//! Exact roots of cyclotomic numbers.

use super::cyclo::Cyclotomic;
use super::poly::{euler_phi, lcm};
use super::tower::{Radical, Scalar, DEFAULT_MAX_PRECISION};
use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use std::sync::Arc;

/// Largest number of embedding-branch combinations the power recognizer tries.
const RECOGNIZER_COMBINATIONS: u64 = 4096;
/// Primes whose square roots are built from Gauss sums.
const GAUSS_SUM_PRIME_LIMIT: u64 = 50;

/// All `k` roots of `y^k = v` (a single zero when `v = 0`).
///
/// Roots that already lie in a cyclotomic field are returned as plain
/// cyclotomic scalars. Otherwise a formal radical is adjoined; the roots then
/// share one ring when `zeta_k` is available in the base field, and carry
/// distinct branch selectors when it is not.
pub fn kth_roots(v: &Cyclotomic, k: u32) -> Vec<Scalar> {
    kth_roots_with_precision(v, k, DEFAULT_MAX_PRECISION)
}

pub fn kth_roots_with_precision(v: &Cyclotomic, k: u32, max_precision: u32) -> Vec<Scalar> {
    assert!(k >= 1);
    if v.is_zero() {
        return vec![Scalar::zero()];
    }
    if k == 1 {
        return vec![Scalar::from(v.clone())];
    }
    if let Some(roots) = cyclotomic_roots(v, k) {
        return roots.into_iter().map(|c| Scalar::from(c.demote())).collect();
    }
    for p in prime_factors(k) {
        if let Some(w) = pth_root_in_field(v, p) {
            let mut out = Vec::with_capacity(k as usize);
            for m in 0..p {
                let u = &w * &Cyclotomic::zeta_power(p, m as i64);
                out.extend(kth_roots_with_precision(&u, k / p, max_precision));
            }
            return out;
        }
    }
    if v.order().is_multiple_of(k) {
        let rad = Arc::new(Radical::with_precision(k, v.clone(), 0, max_precision));
        let y = Scalar::generator(rad);
        (0..k)
            .map(|m| &y * &Scalar::zeta_power(k, m as i64))
            .collect()
    } else {
        (0..k)
            .map(|m| {
                Scalar::generator(Arc::new(Radical::with_precision(
                    k,
                    v.clone(),
                    m,
                    max_precision,
                )))
            })
            .collect()
    }
}

/// Roots when `v = zeta * q` with `q` rational and `q^(1/k)` cyclotomic.
fn cyclotomic_roots(v: &Cyclotomic, k: u32) -> Option<Vec<Cyclotomic>> {
    let (j, q) = v.as_root_of_unity_times_rational()?;
    let r = positive_real_root(&q, k)?;
    let m = v.order();
    let big = lcm(k * m, r.order());
    let base = &r * &Cyclotomic::zeta_power(k * m, j as i64);
    Some(
        (0..k)
            .map(|t| (&base * &Cyclotomic::zeta_power(k, t as i64)).promote(big))
            .collect(),
    )
}

fn exact_root(n: &BigInt, k: u32) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.nth_root(k);
    (r.pow(k) == *n).then_some(r)
}

/// `q^(1/k)` for positive rational `q`, as a cyclotomic number, when it is
/// one: a rational root, or the square root of a rational root.
pub fn positive_real_root(q: &BigRational, k: u32) -> Option<Cyclotomic> {
    assert!(q.is_positive());
    if let (Some(a), Some(b)) = (exact_root(q.numer(), k), exact_root(q.denom(), k)) {
        return Some(Cyclotomic::from_rational(BigRational::new(a, b)));
    }
    if !k.is_multiple_of(2) {
        return None;
    }
    let h = k / 2;
    let (a, b) = (exact_root(q.numer(), h)?, exact_root(q.denom(), h)?);
    // sqrt(a/b) = sqrt(a b) / b
    let s = sqrt_integer(&(&a * &b))?;
    Some(s.scale(&BigRational::new(BigInt::one(), b)))
}

/// Positive square root of a positive integer as a cyclotomic number.
fn sqrt_integer(n: &BigInt) -> Option<Cyclotomic> {
    let mut rest = n.clone();
    let mut square = BigInt::one();
    let mut acc = Cyclotomic::one();
    let mut p = 2u64;
    while BigInt::from(p * p) <= rest {
        let bp = BigInt::from(p);
        let mut e = 0;
        while rest.is_multiple_of(&bp) {
            rest /= &bp;
            e += 1;
        }
        for _ in 0..e / 2 {
            square *= &bp;
        }
        if e % 2 == 1 {
            if p > GAUSS_SUM_PRIME_LIMIT {
                return None;
            }
            acc = &acc * &sqrt_prime(p);
        }
        p += 1;
        if p > 1_000_000 {
            break;
        }
    }
    if !rest.is_one() {
        if let Some(r) = exact_root(&rest, 2) {
            square *= r;
        } else {
            let p = rest.to_u64().filter(|&p| p <= GAUSS_SUM_PRIME_LIMIT)?;
            acc = &acc * &sqrt_prime(p);
        }
    }
    Some(acc.scale(&BigRational::from_integer(square)))
}

/// `sqrt(p)` for a prime `p`, from `zeta_8` or a quadratic Gauss sum.
fn sqrt_prime(p: u64) -> Cyclotomic {
    if p == 2 {
        return Cyclotomic::sqrt2();
    }
    let pp = p as u32;
    let mut g = Cyclotomic::zero(pp);
    for a in 1..p {
        let legendre = BigInt::from(a).modpow(&BigInt::from((p - 1) / 2), &BigInt::from(p));
        let term = Cyclotomic::zeta_power(pp, a as i64);
        g = if legendre.is_one() { &g + &term } else { &g - &term };
    }
    // g^2 = p for p = 1 mod 4 and -p otherwise
    let s = if p % 4 == 1 { g } else { &g * &Cyclotomic::i() };
    if s.to_f64().0 < 0.0 {
        -s
    } else {
        s
    }
}

fn prime_factors(k: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut n = k;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Finds `w` in the same cyclotomic field with `w^p = v`, trying every
/// consistent choice of complex branches across the embeddings and
/// verifying candidates exactly. Returns `None` when no root exists or the
/// search is out of budget.
pub fn pth_root_in_field(v: &Cyclotomic, p: u32) -> Option<Cyclotomic> {
    if v.is_zero() {
        return Some(v.clone());
    }
    let norm = v.norm();
    if exact_root(&norm.numer().abs(), p).is_none() || exact_root(norm.denom(), p).is_none() {
        return None;
    }
    if p.is_multiple_of(2) && norm.numer().sign() == Sign::Minus {
        return None;
    }
    let m = v.order();
    let phi = euler_phi(m) as usize;
    let units: Vec<u32> = (1..m).filter(|a| a.gcd(&m) == 1).collect();
    let reps: Vec<u32> = units.iter().copied().filter(|&a| 2 * a < m).collect();
    let combos = (p as u64).checked_pow(reps.len() as u32)?;
    if combos > RECOGNIZER_COMBINATIONS {
        return None;
    }
    let den = v.denominator();
    let den_f = den.to_f64()?;
    // principal p-th roots at each representative embedding
    let principal: Vec<(f64, f64)> = reps
        .iter()
        .map(|&a| {
            let (re, im) = v.embed_f64(a);
            let r = (re * re + im * im).sqrt().powf(1.0 / p as f64);
            let th = im.atan2(re) / p as f64;
            (r * th.cos(), r * th.sin())
        })
        .collect();
    let vinv = vandermonde_inverse(m, &units)?;
    let w_unit = 2.0 * std::f64::consts::PI / p as f64;
    for code in 0..combos {
        let mut c = code;
        let mut values = vec![(0.0, 0.0); units.len()];
        for (t, &a) in reps.iter().enumerate() {
            let choice = (c % p as u64) as f64;
            c /= p as u64;
            let (zr, zi) = principal[t];
            let (cr, ci) = ((w_unit * choice).cos(), (w_unit * choice).sin());
            let val = (zr * cr - zi * ci, zr * ci + zi * cr);
            let ia = units.iter().position(|&u| u == a).expect("unit");
            let ib = units.iter().position(|&u| u == m - a).expect("unit");
            values[ia] = val;
            values[ib] = (val.0, -val.1);
        }
        let mut coeffs = Vec::with_capacity(phi);
        let mut ok = true;
        for row in vinv.iter() {
            let mut re = 0.0;
            for (col, &(zr, zi)) in row.iter().zip(&values) {
                re += col.0 * zr - col.1 * zi;
            }
            let scaled = re * den_f;
            let rounded = scaled.round();
            if (scaled - rounded).abs() > 1e-3 || rounded.abs() > 2f64.powi(50) {
                ok = false;
                break;
            }
            coeffs.push(BigRational::new(BigInt::from(rounded as i64), den.clone()));
        }
        if !ok {
            continue;
        }
        let w = Cyclotomic::from_coeffs(m, coeffs);
        if w.pow(p as i64).as_ref() == Some(v) {
            return Some(w);
        }
    }
    None
}

/// Inverse of the matrix `[zeta^(a j)]` over units `a` and `j < phi(m)`.
fn vandermonde_inverse(m: u32, units: &[u32]) -> Option<Vec<Vec<(f64, f64)>>> {
    let n = units.len();
    let th = 2.0 * std::f64::consts::PI / m as f64;
    let mut a: Vec<Vec<(f64, f64)>> = units
        .iter()
        .map(|&u| {
            (0..n)
                .map(|j| {
                    let t = th * ((u as u64 * j as u64) % m as u64) as f64;
                    (t.cos(), t.sin())
                })
                .collect()
        })
        .collect();
    let mut inv: Vec<Vec<(f64, f64)>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { (1.0, 0.0) } else { (0.0, 0.0) }).collect())
        .collect();
    let mul = |x: (f64, f64), y: (f64, f64)| (x.0 * y.0 - x.1 * y.1, x.0 * y.1 + x.1 * y.0);
    for col in 0..n {
        let piv = (col..n).max_by(|&r, &s| {
            let nr = a[r][col].0.hypot(a[r][col].1);
            let ns = a[s][col].0.hypot(a[s][col].1);
            nr.partial_cmp(&ns).unwrap_or(std::cmp::Ordering::Equal)
        })?;
        a.swap(piv, col);
        inv.swap(piv, col);
        let d = a[col][col];
        let dn = d.0 * d.0 + d.1 * d.1;
        if dn < 1e-24 {
            return None;
        }
        let dinv = (d.0 / dn, -d.1 / dn);
        for c in 0..n {
            a[col][c] = mul(a[col][c], dinv);
            inv[col][c] = mul(inv[col][c], dinv);
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = a[r][col];
            for c in 0..n {
                let t = mul(f, a[col][c]);
                a[r][c] = (a[r][c].0 - t.0, a[r][c].1 - t.1);
                let t = mul(f, inv[col][c]);
                inv[r][c] = (inv[r][c].0 - t.0, inv[r][c].1 - t.1);
            }
        }
    }
    Some(inv)
}

/// `r` in `0..4` with `s = i^r`.
pub fn is_power_of_i(s: &Scalar) -> Result<Option<u8>, super::tower::Undecided> {
    s.is_power_of_i()
}
