//! Rotation search for the twisted class `D_alpha A`.
//!
//! If `g = H f` lies in `D_alpha A` then `g-hat = mu^(2w(u) - n) f-hat(u)`
//! and `g-hat` is, up to scale, `(Z' D_alpha)^{(x) n} h` for a normalized
//! affine `h`. Every normalized `h` of arity `n` (an affine support times a
//! quadratic form with zero constant) is enumerated; the resulting
//! `g-hat` profiles are filtered against `f-hat`, and each surviving ratio
//! `mu^(2 Delta)` yields at most `2 Delta` rotations.

use crate::candidates::{hat_pivots, rotation_from_mu, verify_candidates, Candidate, CandidateSet, Check, Provenance};
use super::{is_affine_alpha, is_so2_invariant};
use crate::scalars::{kth_roots_with_precision, Cyclotomic, ScalarError};
use crate::signatures::{apply_transform, hat_transform, DenseSignature};
use num_rational::BigRational;
use rayon::prelude::*;
use std::collections::HashSet;

/// Element of `Z[alpha]` in the basis `1, alpha, alpha^2, alpha^3`.
type Z8 = [i64; 4];

/// Number of normalized affine signatures of arity `n`, saturating.
pub fn profile_count(n: usize) -> u64 {
    let mut total: u128 = 0;
    for r in 0..=n {
        let forms = 1u128
            .checked_shl((2 * r + r * r.saturating_sub(1) / 2) as u32)
            .unwrap_or(u128::MAX);
        let subspaces = gaussian_binomial(n, r).saturating_mul(1u128 << (n - r).min(127));
        total = total.saturating_add(subspaces.saturating_mul(forms));
    }
    u64::try_from(total).unwrap_or(u64::MAX)
}

/// Number of `r`-dimensional linear subspaces of `F_2^n`.
fn gaussian_binomial(n: usize, r: usize) -> u128 {
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for j in 0..r {
        num = num.saturating_mul((1u128 << (n - j)) - 1);
        den = den.saturating_mul((1u128 << (j + 1)) - 1);
    }
    num / den
}

/// Rotations `H` with `H f` in `D_alpha A`, or `CapExceeded` when the
/// profile enumeration is larger than `cap`.
pub fn so2_candidates_affine_alpha(
    f: &DenseSignature,
    cap: u64,
    max_precision: u32,
) -> Result<CandidateSet, ScalarError> {
    if is_so2_invariant(f)? {
        return Ok(CandidateSet::Invariant);
    }
    let n = f.arity();
    let required = profile_count(n);
    if required > cap {
        return Ok(CandidateSet::CapExceeded { required, cap });
    }
    let hat = hat_transform(f);
    let (u1, u2) = hat_pivots(&hat)?.expect("non-invariant signature");
    let target = HatProfile::new(&hat)?;
    let ratios = target.ratios(u1, u2)?;
    let delta = u2.count_ones() - u1.count_ones();
    let k = 2 * delta;
    let mut raw = Vec::new();
    for (idx, v) in ratios.iter().enumerate() {
        for (root, mu) in kth_roots_with_precision(v, k, max_precision).iter().enumerate() {
            raw.push(Candidate {
                transform: rotation_from_mu(mu, k, v),
                provenance: Provenance { r: idx, root },
            });
        }
    }
    Ok(verify_candidates(raw, |h| Check::of(is_affine_alpha(&apply_transform(h, f)))))
}

/// The support and weight classes of `f-hat`, exact and in floating point.
struct HatProfile {
    n: usize,
    exact: Vec<Cyclotomic>,
    approx: Vec<(f64, f64)>,
    support: Vec<bool>,
    /// Support points grouped by weight; the first of each group is its
    /// representative.
    classes: Vec<Vec<usize>>,
    /// Every point in evaluation order: representatives and the second
    /// member of each class first.
    order: Vec<Step>,
}

/// A point of `f-hat` and, for non-representatives, its class
/// representative `r` with `f-hat(u) / f-hat(r)` as `num / den` over
/// `Z[alpha]` when that fits in machine integers.
struct Step {
    u: usize,
    rep: Option<usize>,
    ratio: Option<(Z8, i64)>,
}

impl HatProfile {
    fn new(hat: &DenseSignature) -> Result<Self, ScalarError> {
        let exact: Vec<Cyclotomic> = hat
            .entries()
            .iter()
            .map(|e| e.as_cyclotomic().cloned().ok_or(ScalarError::Undecided))
            .collect::<Result<_, _>>()?;
        let approx = exact.iter().map(|c| c.to_f64()).collect();
        let support: Vec<bool> = exact.iter().map(|c| !c.is_zero()).collect();
        let n = hat.arity();
        let mut classes = Vec::new();
        for w in 0..=n as u32 {
            let class: Vec<usize> = (0..1usize << n)
                .filter(|&u| support[u] && u.count_ones() == w)
                .collect();
            if !class.is_empty() {
                classes.push(class);
            }
        }
        let mut pairs: Vec<(usize, Option<usize>)> = Vec::new();
        for class in &classes {
            pairs.push((class[0], None));
            if let Some(&u) = class.get(1) {
                pairs.push((u, Some(class[0])));
            }
        }
        for class in &classes {
            pairs.extend(class.iter().skip(2).map(|&u| (u, Some(class[0]))));
        }
        pairs.extend((0..1usize << n).filter(|&u| !support[u]).map(|u| (u, None)));
        let order = pairs
            .into_iter()
            .map(|(u, rep)| Step {
                u,
                rep,
                ratio: rep.and_then(|r| {
                    let q = &exact[u] * &exact[r].inv().expect("support point");
                    z8_fraction(&q.demote())
                }),
            })
            .collect();
        Ok(HatProfile {
            n,
            exact,
            approx,
            support,
            classes,
            order,
        })
    }

    /// `g_u f_r = g_r f_u`, screened in floating point and then checked
    /// exactly.
    fn proportional(&self, g: &[Z8], step: &Step, r: usize) -> bool {
        let u = step.u;
        let (gu, gr) = (to_complex(&g[u]), to_complex(&g[r]));
        let lhs = cmul(gu, self.approx[r]);
        let rhs = cmul(gr, self.approx[u]);
        let scale = cabs(lhs) + cabs(rhs);
        if cabs((lhs.0 - rhs.0, lhs.1 - rhs.1)) > 1e-9 * scale {
            return false;
        }
        if let Some((num, den)) = &step.ratio {
            let lhs = g[u].map(|c| c as i128 * *den as i128);
            return lhs == z8_mul(num, &g[r]);
        }
        &to_cyclotomic(&g[u]) * &self.exact[r] == &to_cyclotomic(&g[r]) * &self.exact[u]
    }

    /// Distinct values of `mu^(2 Delta)` compatible with some affine profile.
    fn ratios(&self, u1: usize, u2: usize) -> Result<Vec<Cyclotomic>, ScalarError> {
        let reps: Vec<usize> = self.classes.iter().map(|c| c[0]).collect();
        let profiles = self.admissible_profiles(&reps);
        let w1 = u1.count_ones() as i64;
        let delta = u2.count_ones() as i64 - w1;
        let mut out: Vec<Cyclotomic> = Vec::new();
        for g in profiles {
            let g1 = to_cyclotomic(&g[0]);
            let rho = |idx: usize, u: usize| -> Cyclotomic {
                let gu = to_cyclotomic(&g[idx]);
                let num = &gu * &self.exact[u1];
                let den = &g1 * &self.exact[u];
                &num * &den.inv().expect("nonzero entries")
            };
            let i2 = reps.iter().position(|&u| u == u2).expect("pivot is a representative");
            let v = rho(i2, u2);
            let consistent = reps.iter().enumerate().skip(1).all(|(idx, &u)| {
                let t = u.count_ones() as i64 - w1;
                rho(idx, u).pow(delta) == v.pow(t)
            });
            if consistent && !out.contains(&v) {
                out.push(v);
            }
        }
        Ok(out)
    }

    /// Values of `g-hat` at the class representatives for every normalized
    /// affine `h` passing `admits`, deduplicated.
    fn admissible_profiles(&self, reps: &[usize]) -> Vec<Vec<Z8>> {
        let n = self.n;
        let cosets: Vec<(usize, Vec<usize>)> = (0..=n)
            .flat_map(|r| subspaces(n, r))
            .flat_map(|(pivots, dirs)| {
                cosets(n, &pivots)
                    .into_iter()
                    .map(move |o| (o, dirs.clone()))
            })
            .collect();
        let found: Vec<Vec<Vec<Z8>>> = cosets
            .par_iter()
            .map(|(origin, dirs)| self.scan_coset(*origin, dirs, reps))
            .collect();
        let mut seen = HashSet::new();
        found
            .into_iter()
            .flatten()
            .filter(|g| seen.insert(g.clone()))
            .collect()
    }

    fn scan_coset(&self, origin: usize, dirs: &[usize], reps: &[usize]) -> Vec<Vec<Z8>> {
        let n = self.n;
        let r = dirs.len();
        let points: Vec<usize> = (0..1usize << r)
            .map(|z| {
                dirs.iter()
                    .enumerate()
                    .filter(|(k, _)| z >> k & 1 == 1)
                    .fold(origin, |p, (_, d)| p ^ d)
            })
            .collect();
        let pairs: Vec<(usize, usize)> = (0..r).flat_map(|k| (k + 1..r).map(move |l| (k, l))).collect();
        let base: Vec<u32> = points.iter().map(|p| 3 * p.count_ones()).collect();
        // twice the cross part of the form, per cross-term mask
        let cross_parts: Vec<Vec<u32>> = (0..1usize << pairs.len())
            .map(|cross| {
                (0..1usize << r)
                    .map(|z| {
                        let hits = pairs
                            .iter()
                            .enumerate()
                            .filter(|&(idx, &(k, l))| cross >> idx & 1 == 1 && z >> k & 1 == 1 && z >> l & 1 == 1)
                            .count();
                        4 * hits as u32
                    })
                    .collect()
            })
            .collect();
        let mut out = Vec::new();
        let mut g = vec![[0i64; 4]; 1 << n];
        let mut linear = vec![0u32; 1 << r];
        let mut exps = vec![0u32; 1 << r];
        for lin in 0..1usize << (2 * r) {
            for z in 1..1usize << r {
                let k = z.trailing_zeros() as usize;
                linear[z] = linear[z & (z - 1)] + 2 * (lin >> (2 * k) & 3) as u32;
            }
            for cross in &cross_parts {
                for (z, e) in exps.iter_mut().enumerate() {
                    *e = base[z] + linear[z] + cross[z];
                }
                if self.fits(&points, &exps, &mut g) {
                    out.push(reps.iter().map(|&u| g[u]).collect());
                }
            }
        }
        out
    }

    /// Whether `g-hat(u) = sum_z alpha^(e_z + 4 <u, x_z>)` can be `T f-hat`
    /// for a diagonal `T`: same support, and proportional to `f-hat` on
    /// every weight class. Fills `g` and stops at the first mismatch.
    fn fits(&self, points: &[usize], exps: &[u32], g: &mut [Z8]) -> bool {
        for step in &self.order {
            let u = step.u;
            let mut acc = [0i64; 4];
            for (&x, &e) in points.iter().zip(exps) {
                let e = (e + 4 * (u & x).count_ones()) % 8;
                acc[(e % 4) as usize] += if e < 4 { 1 } else { -1 };
            }
            if is_zero(&acc) == self.support[u] {
                return false;
            }
            g[u] = acc;
            if let Some(rep) = step.rep {
                if !self.proportional(g, step, rep) {
                    return false;
                }
            }
        }
        true
    }
}

/// Reduced echelon bases of every `r`-dimensional subspace of `F_2^n`,
/// with their pivot positions (0-based from the most significant bit).
fn subspaces(n: usize, r: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut out = Vec::new();
    for pivots in combinations(n, r) {
        let cells: Vec<(usize, usize)> = (0..r)
            .flat_map(|k| {
                let pivots = &pivots;
                (pivots[k] + 1..n)
                    .filter(move |j| !pivots.contains(j))
                    .map(move |j| (k, j))
            })
            .collect();
        for mask in 0..1usize << cells.len() {
            let mut rows: Vec<usize> = pivots.iter().map(|&p| 1 << (n - 1 - p)).collect();
            for (idx, &(k, j)) in cells.iter().enumerate() {
                if mask >> idx & 1 == 1 {
                    rows[k] |= 1 << (n - 1 - j);
                }
            }
            out.push((pivots.clone(), rows));
        }
    }
    out
}

/// Coset representatives: points that vanish on the pivot positions.
fn cosets(n: usize, pivots: &[usize]) -> Vec<usize> {
    let pivot_mask: usize = pivots.iter().map(|&p| 1 << (n - 1 - p)).sum();
    (0..1usize << n).filter(|x| x & pivot_mask == 0).collect()
}

fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    (0..1usize << n)
        .filter(|m| m.count_ones() as usize == r)
        .map(|m| (0..n).filter(|j| m >> j & 1 == 1).collect())
        .collect()
}

fn is_zero(x: &Z8) -> bool {
    x.iter().all(|&c| c == 0)
}

fn to_cyclotomic(x: &Z8) -> Cyclotomic {
    let coeffs = x.iter().map(|&c| BigRational::from_integer(c.into())).collect();
    Cyclotomic::from_coeffs(8, coeffs)
}

/// Product in `Z[alpha]`, using `alpha^4 = -1`.
fn z8_mul(a: &Z8, b: &Z8) -> [i128; 4] {
    let mut out = [0i128; 4];
    for (j, &x) in a.iter().enumerate() {
        for (k, &y) in b.iter().enumerate() {
            let t = x as i128 * y as i128;
            if j + k < 4 {
                out[j + k] += t;
            } else {
                out[j + k - 4] -= t;
            }
        }
    }
    out
}

/// `q` as `num / den` with `num` in `Z[alpha]`, when `q` lies in `Q(alpha)`
/// and the integers fit.
fn z8_fraction(q: &Cyclotomic) -> Option<(Z8, i64)> {
    if q.order() != 8 {
        return None;
    }
    let den = q.denominator();
    let mut num = [0i64; 4];
    for (slot, c) in num.iter_mut().zip(q.coeffs()) {
        *slot = i64::try_from(c.numer() * (&den / c.denom())).ok()?;
    }
    Some((num, i64::try_from(den).ok()?))
}

fn to_complex(x: &Z8) -> (f64, f64) {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let (c0, c1, c2, c3) = (x[0] as f64, x[1] as f64, x[2] as f64, x[3] as f64);
    (c0 + h * c1 - h * c3, h * c1 + c2 + h * c3)
}

fn cmul(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

fn cabs(a: (f64, f64)) -> f64 {
    a.0.hypot(a.1)
}

/// Lets tests compare the enumerated value set against the lattice.
#[cfg(test)]
pub(crate) fn hat_values(n: usize) -> HashSet<Z8> {
    let mut out = HashSet::new();
    for r in 0..=n {
        for (pivots, dirs) in subspaces(n, r) {
            for origin in cosets(n, &pivots) {
                let points: Vec<usize> = (0..1usize << r)
                    .map(|z| {
                        dirs.iter()
                            .enumerate()
                            .filter(|(k, _)| z >> k & 1 == 1)
                            .fold(origin, |p, (_, d)| p ^ d)
                    })
                    .collect();
                for lin in 0..1usize << (2 * r) {
                    for u in 0..1usize << n {
                        let mut acc = [0i64; 4];
                        for (z, &x) in points.iter().enumerate() {
                            let q: u32 = (0..r)
                                .filter(|k| z >> k & 1 == 1)
                                .map(|k| (lin >> (2 * k) & 3) as u32)
                                .sum();
                            let e = (3 * x.count_ones() + 2 * q + 4 * (u & x).count_ones()) % 8;
                            acc[(e % 4) as usize] += if e < 4 { 1 } else { -1 };
                        }
                        out.insert(acc);
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::Scalar;
    use crate::signatures::{rational_rotation, Transform};

    #[test]
    fn counts() {
        assert_eq!(profile_count(1), 2 + 4);
        assert_eq!(profile_count(4), 36720);
        assert!(profile_count(5) > 2_000_000);
        assert!(profile_count(5) > 1_000_000);
        assert_eq!(subspaces(4, 2).len(), 35);
        assert_eq!(profile_count(40), u64::MAX);
    }

    #[test]
    fn arity_five_exceeds_cap() {
        let f = DenseSignature::from_entries(
            (0..32).map(|x| Scalar::from(if x == 0 { 1 } else { 0 })).collect(),
        )
        .unwrap();
        assert!(matches!(
            so2_candidates_affine_alpha(&f, 1_000_000, 4096).unwrap(),
            CandidateSet::CapExceeded { .. }
        ));
    }

    #[test]
    fn equality_is_invariant() {
        let f = DenseSignature::from_ints(&[1, 0, 0, 1]);
        assert!(matches!(
            so2_candidates_affine_alpha(&f, 2_000_000, 4096).unwrap(),
            CandidateSet::Invariant
        ));
    }

    #[test]
    fn rotated_twisted_signature_is_recovered() {
        let g = DenseSignature::from_ints(&[1, 1, 1, -1]);
        let twisted = apply_transform(&Transform::d_alpha(), &g);
        let h0 = rational_rotation(&BigRational::new(1.into(), 3.into()));
        let f = apply_transform(&h0, &twisted);
        let set = so2_candidates_affine_alpha(&f, 2_000_000, 4096).unwrap();
        let found = set.candidates();
        assert!(!found.is_empty());
        assert!(found
            .iter()
            .any(|c| c.transform.equals(&h0.transpose()).unwrap_or(false)));
    }

    #[test]
    fn values_lie_in_the_lattice() {
        // Every hat value at arity 2 is d1 alpha + d2 i + d3 alpha^3 - d4
        // with |d1| + |d2| + |d3| + |d4| <= 4.
        for v in hat_values(2) {
            assert!(v.iter().map(|c| c.abs()).sum::<i64>() <= 4, "{v:?}");
        }
    }
}
