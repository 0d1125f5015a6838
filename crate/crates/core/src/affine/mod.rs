//! The affine class `A` and its twist `D_alpha A`.
//!
//! `f` is affine when `f = lambda * chi_S * i^Q(x)` with `S` an affine
//! subspace of `F_2^n` and `Q(x) = sum c_j x_j^2 + 2 sum c_kl x_k x_l + c`
//! over `Z_4`, written in the free coordinates of `S`.

mod alpha;
mod search;

pub use alpha::{profile_count, so2_candidates_affine_alpha};
pub use crate::candidates::{Candidate, CandidateSet, Provenance};
pub use search::{decide_a_transformable, so2_candidates_affine};

use crate::scalars::{Scalar, ScalarError, Undecided};
use crate::signatures::{apply_transform, hat_transform, DenseSignature, Transform};

/// An affine subspace of `{0,1}^n`, as found by growing a basis of support
/// points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSupport {
    pub arity: usize,
    /// Support points `b_0, ..., b_r` whose affine span is the support.
    pub basis: Vec<usize>,
    /// 1-based variables that parametrize the subspace.
    pub free_positions: Vec<usize>,
    /// The point whose free coordinates are all zero.
    pub origin: usize,
    /// `directions[k]` has bit `free_positions[k]` set and every other free
    /// bit clear.
    pub directions: Vec<usize>,
}

impl AffineSupport {
    pub fn dimension(&self) -> usize {
        self.free_positions.len()
    }

    /// The unique support point with free coordinates `x` (bit `k` of `x` is
    /// the coordinate of `free_positions[k]`).
    pub fn point(&self, x: usize) -> usize {
        let mut p = self.origin;
        for (k, d) in self.directions.iter().enumerate() {
            if x >> k & 1 == 1 {
                p ^= d;
            }
        }
        p
    }

    /// Free coordinates of a support point.
    pub fn coordinates(&self, p: usize) -> usize {
        let mut x = 0;
        for (k, &j) in self.free_positions.iter().enumerate() {
            x |= ((p >> (self.arity - j)) & 1) << k;
        }
        x
    }

    /// All points, in order of their coordinates.
    pub fn points(&self) -> Vec<usize> {
        (0..1usize << self.dimension()).map(|x| self.point(x)).collect()
    }
}

/// `Q(x) = c + sum_j c_j x_j + 2 sum_{k<l} c_kl x_k x_l (mod 4)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticForm {
    pub constant: u8,
    pub linear: Vec<u8>,
    /// `cross[k][l]` for `k < l`; only its parity matters.
    pub cross: Vec<Vec<u8>>,
}

impl QuadraticForm {
    pub fn zero(r: usize) -> Self {
        QuadraticForm {
            constant: 0,
            linear: vec![0; r],
            cross: vec![vec![0; r]; r],
        }
    }

    pub fn variables(&self) -> usize {
        self.linear.len()
    }

    /// Evaluates at coordinates `x` (bit `k` is `x_k`).
    pub fn eval(&self, x: usize) -> u8 {
        let r = self.variables();
        let mut acc = self.constant as u32;
        for k in 0..r {
            if x >> k & 1 == 1 {
                acc += self.linear[k] as u32;
                for l in k + 1..r {
                    if x >> l & 1 == 1 {
                        acc += 2 * self.cross[k][l] as u32;
                    }
                }
            }
        }
        (acc % 4) as u8
    }
}

/// Certificate that `f = scale * chi_support * i^form`.
#[derive(Clone, Debug)]
pub struct AffineWitness {
    pub scale: Scalar,
    pub support: AffineSupport,
    pub form: QuadraticForm,
}

impl AffineWitness {
    /// Rebuilds the dense signature the witness describes.
    pub fn reconstruct(&self) -> DenseSignature {
        let n = self.support.arity;
        let mut entries = vec![Scalar::zero(); 1 << n];
        if !self.scale.is_zero_exact() {
            for x in 0..1usize << self.support.dimension() {
                let p = self.support.point(x);
                entries[p] = &self.scale * &Scalar::i_pow(self.form.eval(x) as i64);
            }
        }
        DenseSignature::new(n, entries).expect("arity >= 1")
    }
}

/// Affine span of the support, built by adding one point at a time; `None`
/// when the support is not an affine subspace. The support must be nonempty.
pub fn affine_support_of(arity: usize, support: &[usize]) -> Option<AffineSupport> {
    let size = 1usize << arity;
    let mut in_support = vec![false; size];
    for &s in support {
        in_support[s] = true;
    }
    let b0 = *support.first().expect("nonempty support");
    let mut basis = vec![b0];
    let mut span = vec![b0];
    let mut in_span = vec![false; size];
    in_span[b0] = true;
    let mut dirs = Vec::new();
    while span.len() < support.len() {
        let next = *support.iter().find(|&&s| !in_span[s])?;
        let d = next ^ b0;
        let added: Vec<usize> = span.iter().map(|&p| p ^ d).collect();
        for &p in &added {
            if !in_support[p] {
                return None;
            }
            in_span[p] = true;
        }
        span.extend(added);
        basis.push(next);
        dirs.push(d);
    }
    if span.len() != support.len() {
        return None;
    }
    Some(echelon(arity, b0, basis, dirs))
}

/// Reduced echelon directions with pivots at the most significant
/// available bits.
fn echelon(arity: usize, b0: usize, basis: Vec<usize>, mut dirs: Vec<usize>) -> AffineSupport {
    let mut pivots = Vec::new();
    let mut row = 0;
    for j in 1..=arity {
        let bit = 1usize << (arity - j);
        let Some(pos) = (row..dirs.len()).find(|&k| dirs[k] & bit != 0) else {
            continue;
        };
        dirs.swap(row, pos);
        for k in 0..dirs.len() {
            if k != row && dirs[k] & bit != 0 {
                dirs[k] ^= dirs[row];
            }
        }
        pivots.push(j);
        row += 1;
    }
    let mut origin = b0;
    for (k, &j) in pivots.iter().enumerate() {
        if (origin >> (arity - j)) & 1 == 1 {
            origin ^= dirs[k];
        }
    }
    AffineSupport {
        arity,
        basis,
        free_positions: pivots,
        origin,
        directions: dirs,
    }
}

/// Affine support of a nonzero signature.
pub fn affine_support(f: &DenseSignature) -> Result<Option<AffineSupport>, Undecided> {
    let s = f.support()?;
    if s.is_empty() {
        return Ok(None);
    }
    Ok(affine_support_of(f.arity(), &s))
}

/// Fits `Q` to exponents `p_x` given on every coordinate vector.
pub fn fit_quadratic_form(r: usize, p: impl Fn(usize) -> u8) -> Option<QuadraticForm> {
    let mut q = QuadraticForm::zero(r);
    q.constant = p(0) % 4;
    for k in 0..r {
        q.linear[k] = (p(1 << k) + 4 - q.constant) % 4;
    }
    for k in 0..r {
        for l in k + 1..r {
            let rest = (q.constant + q.linear[k] + q.linear[l]) % 4;
            let twice = (p((1 << k) | (1 << l)) + 4 - rest) % 4;
            if twice % 2 == 1 {
                return None;
            }
            q.cross[k][l] = twice / 2;
        }
    }
    (0..1usize << r).all(|x| q.eval(x) == p(x) % 4).then_some(q)
}

/// Membership in `A` with a reconstruction certificate.
pub fn is_affine(f: &DenseSignature) -> Result<Option<AffineWitness>, ScalarError> {
    let n = f.arity();
    let Some(first) = f.first_nonzero()? else {
        let support = affine_support_of(n, &[0]).expect("single point");
        return Ok(Some(AffineWitness {
            scale: Scalar::zero(),
            support,
            form: QuadraticForm::zero(0),
        }));
    };
    let scale = f.entry(first).clone();
    let units: Vec<Scalar> = (0..4).map(|r| &Scalar::i_pow(r) * &scale).collect();
    let mut support = Vec::new();
    let mut exps = vec![0u8; 1 << n];
    for (x, e) in f.entries().iter().enumerate() {
        if e.is_zero()? {
            continue;
        }
        match unit_ratio(e, &units)? {
            Some(r) => exps[x] = r,
            None => return Ok(None),
        }
        support.push(x);
    }
    let Some(sup) = affine_support_of(n, &support) else {
        return Ok(None);
    };
    let form = fit_quadratic_form(sup.dimension(), |x| exps[sup.point(x)]);
    Ok(form.map(|form| AffineWitness {
        scale,
        support: sup,
        form,
    }))
}

/// The `r` with `e = units[r]`, comparing without division.
fn unit_ratio(e: &Scalar, units: &[Scalar]) -> Result<Option<u8>, Undecided> {
    for (r, u) in units.iter().enumerate() {
        if e.equals(u)? {
            return Ok(Some(r as u8));
        }
    }
    Ok(None)
}

/// Membership in `D_alpha A`, tested on `D_alpha^-1 f`.
pub fn is_affine_alpha(f: &DenseSignature) -> Result<Option<AffineWitness>, ScalarError> {
    is_affine(&untwist_alpha(f))
}

/// `diag(1, alpha^-1)^{(x) n} f`.
pub fn untwist_alpha(f: &DenseSignature) -> DenseSignature {
    apply_transform(&Transform::diag(Scalar::one(), Scalar::alpha_pow(-1)), f)
}

/// Hamming weights present in the support of `f-hat`.
pub fn hat_weights(f: &DenseSignature) -> Result<Vec<u32>, Undecided> {
    let hat = hat_transform(f);
    let mut ws: Vec<u32> = hat.support()?.iter().map(|u| u.count_ones()).collect();
    ws.sort_unstable();
    ws.dedup();
    Ok(ws)
}

/// Invariance (up to scale) under every `SO_2(C)` transformation.
pub fn is_so2_invariant(f: &DenseSignature) -> Result<bool, Undecided> {
    Ok(hat_weights(f)?.len() <= 1)
}
