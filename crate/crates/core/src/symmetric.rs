//! Symmetric signatures in succinct form.
//!
//! A non-degenerate symmetric signature of arity `n >= 3` that obeys a
//! second-order recurrence with nonzero discriminant splits as
//! `x0 u0^n + x1 u1^n` with independent vectors `u0`, `u1`. The invariant
//! `theta(u0, u1)` together with a few power conditions on the weights
//! places it in one of the classes `A1`, `A2`, `A3` (affine after an
//! orthogonal change of basis) or `P1`, `P2` (product type). The class of a
//! single pivot signature then pins a set down to a short list of candidate
//! transformations.
//!
//! Weights are kept apart from the vectors, so the power conditions are
//! stated multiplicatively and no `n`-th roots are taken.

use crate::candidates::{rotation_from_mu, Check};
use crate::decision::{Blocker, DecideOptions, Decision, Outcome};
use crate::scalars::{kth_roots_with_precision, Scalar, ScalarError, Undecided, DEFAULT_MAX_PRECISION};
use crate::signatures::{apply_transform_symmetric, Signature, SignatureSet, SymmetricSignature, Transform};
use rayon::prelude::*;
use std::cmp::Ordering;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SymmetricError {
    #[error("arity {arity} is below the required {min}")]
    ArityTooSmall { arity: usize, min: usize },
    #[error("signature is degenerate")]
    Degenerate,
    #[error("the recurrence is not unique")]
    NonUnique,
    #[error("theta is nonzero")]
    ThetaNonZero,
    #[error("signature {0} is not symmetric")]
    NotSymmetric(String),
    #[error("construction needs a second radical")]
    NestedRadical,
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

impl From<Undecided> for SymmetricError {
    fn from(e: Undecided) -> Self {
        SymmetricError::Scalar(e.into())
    }
}

type Vector = [Scalar; 2];

/// `a f_k + b f_(k+1) + c f_(k+2) = 0` for every `k`, normalized so the
/// first nonzero coefficient is `1`.
#[derive(Clone, Debug)]
pub struct SecondOrderRecurrence {
    pub a: Scalar,
    pub b: Scalar,
    pub c: Scalar,
}

impl SecondOrderRecurrence {
    /// `b^2 - 4ac`.
    pub fn discriminant(&self) -> Scalar {
        &(&self.b * &self.b) - &(&Scalar::from(4) * &(&self.a * &self.c))
    }
}

/// `f_w = x0 a0^(n-w) b0^w + x1 a1^(n-w) b1^w` with `u_j = (a_j, b_j)`.
#[derive(Clone, Debug)]
pub struct WeightedDecomposition {
    pub arity: usize,
    pub x: [Scalar; 2],
    pub u: [Vector; 2],
}

impl WeightedDecomposition {
    pub fn reconstruct(&self) -> SymmetricSignature {
        let values = (0..=self.arity)
            .map(|w| {
                &(&self.x[0] * &power_entry(&self.u[0], self.arity, w))
                    + &(&self.x[1] * &power_entry(&self.u[1], self.arity, w))
            })
            .collect();
        SymmetricSignature::new(values).expect("arity >= 1")
    }
}

/// Weight-`w` entry of `u^(x) n`.
fn power_entry(u: &Vector, n: usize, w: usize) -> Scalar {
    &u[0].pow((n - w) as u32) * &u[1].pow(w as u32)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClassLabel {
    A1,
    A2,
    A3,
    P1,
    P2,
}

impl ClassLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            ClassLabel::A1 => "A1",
            ClassLabel::A2 => "A2",
            ClassLabel::A3 => "A3",
            ClassLabel::P1 => "P1",
            ClassLabel::P2 => "P2",
        }
    }

    /// The pair `(p, q)` of the canonical form `p^n + beta q^n`.
    pub fn canonical_vectors(self) -> [Vector; 2] {
        let one = Scalar::one;
        match self {
            ClassLabel::A1 | ClassLabel::P1 => [[one(), one()], [one(), Scalar::from(-1)]],
            ClassLabel::A2 | ClassLabel::P2 => [[one(), Scalar::i()], [one(), -Scalar::i()]],
            ClassLabel::A3 => [[one(), Scalar::alpha()], [one(), -Scalar::alpha()]],
        }
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Membership of a symmetric signature in one class, with
/// `f = c H^{(x) n} (p^n + beta q^n)` for the label's canonical pair.
#[derive(Clone, Debug)]
pub struct ClassWitness {
    pub label: ClassLabel,
    pub transform: Transform,
    pub beta: Scalar,
    /// `(t, r)` with `beta = alpha^(tn + 2r)` for `A1`.
    pub t: Option<u8>,
    /// `r` of the `A1` exponent, or of `x1 c^n = i^r x0` for `A3`.
    pub r: Option<u8>,
    pub epsilon: Option<i8>,
    /// `H H^t = I`; otherwise `H H^t` is a nonzero multiple of `I`.
    pub orthogonal: bool,
}

impl ClassWitness {
    pub fn canonical_form(&self, n: usize) -> SymmetricSignature {
        let [p, q] = self.label.canonical_vectors();
        WeightedDecomposition {
            arity: n,
            x: [Scalar::one(), self.beta.clone()],
            u: [p, q],
        }
        .reconstruct()
    }

    /// `H^{(x) n}` applied to the canonical form.
    pub fn reconstruct(&self, n: usize) -> SymmetricSignature {
        apply_transform_symmetric(&self.transform, &self.canonical_form(n))
    }

    /// Whether `f` is a nonzero multiple of the reconstruction.
    pub fn verify(&self, f: &SymmetricSignature) -> Result<bool, ScalarError> {
        Ok(proportional(f, &self.reconstruct(f.arity()))?.is_some())
    }
}

/// `H` and `beta` with `H^{(x) n} f = lambda ((1,1)^n + beta (1,-1)^n)`.
#[derive(Clone, Debug)]
pub struct ThetaZeroForm {
    pub transform: Transform,
    pub beta: Scalar,
    pub orthogonal: bool,
}

/// `lambda` with `b = lambda a`, when `a` is nonzero and the two agree up to
/// that factor.
fn proportional(a: &SymmetricSignature, b: &SymmetricSignature) -> Result<Option<Scalar>, ScalarError> {
    if a.arity() != b.arity() {
        return Ok(None);
    }
    let Some(k) = first_nonzero(a.values())? else {
        return Ok(None);
    };
    let lambda = b.value(k).try_div(a.value(k))?;
    if lambda.is_zero()? {
        return Ok(None);
    }
    for (x, y) in a.values().iter().zip(b.values()) {
        if !(&lambda * x).equals(y)? {
            return Ok(None);
        }
    }
    Ok(Some(lambda))
}

fn first_nonzero(v: &[Scalar]) -> Result<Option<usize>, Undecided> {
    for (k, x) in v.iter().enumerate() {
        if !x.is_zero()? {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

/// Errors out when the scalars mention two different radicals.
fn ensure_one_ring<'a>(xs: impl IntoIterator<Item = &'a Scalar>) -> Result<(), SymmetricError> {
    let mut seen: Option<&Scalar> = None;
    for x in xs {
        if x.radical().is_none() {
            continue;
        }
        match seen {
            None => seen = Some(x),
            Some(s) if s.compatible(x) => {}
            Some(_) => return Err(SymmetricError::NestedRadical),
        }
    }
    Ok(())
}

/// A `k`-th root of `v` usable next to every scalar of `context`.
fn root_in(v: &Scalar, k: u32, context: &[&Scalar], prec: u32) -> Option<Scalar> {
    let c = v.as_cyclotomic()?;
    let root = kth_roots_with_precision(c, k, prec).into_iter().next()?;
    if root.radical().is_some() && context.iter().any(|s| !s.compatible(&root)) {
        return None;
    }
    Some(root)
}

/// Whether `f` is a tensor power of one unary: the `2 x n` matrix of
/// consecutive entries has rank at most one.
pub fn is_degenerate_symmetric(f: &SymmetricSignature) -> Result<bool, Undecided> {
    let v = f.values();
    let n = f.arity();
    for i in 0..n {
        for j in i + 1..n {
            let minor = &(&v[i] * &v[j + 1]) - &(&v[i + 1] * &v[j]);
            if !minor.is_zero()? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Kernel basis of a matrix with exact entries.
fn kernel(mut rows: Vec<Vec<Scalar>>, cols: usize) -> Result<Vec<Vec<Scalar>>, ScalarError> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let mut found = None;
        for (i, row) in rows.iter().enumerate().skip(r) {
            if !row[c].is_zero()? {
                found = Some(i);
                break;
            }
        }
        let Some(p) = found else { continue };
        rows.swap(r, p);
        let inv = rows[r][c].try_inv()?;
        rows[r] = rows[r].iter().map(|x| x * &inv).collect();
        for i in 0..rows.len() {
            if i == r || rows[i][c].is_zero()? {
                continue;
            }
            let factor = rows[i][c].clone();
            let pivot_row = rows[r].clone();
            for (x, y) in rows[i].iter_mut().zip(&pivot_row) {
                *x = &*x - &(&factor * y);
            }
        }
        pivots.push(c);
        r += 1;
    }
    Ok((0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![Scalar::zero(); cols];
            v[free] = Scalar::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -rows[row][free].clone();
            }
            v
        })
        .collect())
}

/// The second-order recurrence of `f`, when the `(n-1) x 3` system has a
/// one-dimensional kernel.
pub fn fit_recurrence(f: &SymmetricSignature) -> Result<Option<SecondOrderRecurrence>, SymmetricError> {
    let n = f.arity();
    if n < 2 {
        return Err(SymmetricError::ArityTooSmall { arity: n, min: 2 });
    }
    let v = f.values();
    let rows = (0..=n - 2).map(|k| v[k..k + 3].to_vec()).collect();
    let mut basis = kernel(rows, 3)?;
    match basis.len() {
        0 => Ok(None),
        1 => {
            let mut k = basis.pop().expect("one vector");
            let lead = first_nonzero(&k)?.expect("kernel vectors are nonzero");
            let inv = k[lead].try_inv()?;
            for x in k.iter_mut() {
                *x = &*x * &inv;
            }
            let [a, b, c]: [Scalar; 3] = k.try_into().expect("three coefficients");
            Ok(Some(SecondOrderRecurrence { a, b, c }))
        }
        _ => Err(SymmetricError::NonUnique),
    }
}

fn check_arity3(f: &SymmetricSignature) -> Result<(), SymmetricError> {
    if f.arity() < 3 {
        return Err(SymmetricError::ArityTooSmall { arity: f.arity(), min: 3 });
    }
    if is_degenerate_symmetric(f)? {
        return Err(SymmetricError::Degenerate);
    }
    Ok(())
}

/// Splits `f` as `x0 u0^n + x1 u1^n`.
///
/// The vectors come from the projective roots `(lambda : mu)` of
/// `c lambda^2 + b lambda mu + a mu^2`, with `u = (mu, lambda)`; finite roots
/// are scaled to `(1, lambda)` and come first, ordered by decreasing real
/// then imaginary part of `lambda`. `None` when there is no recurrence or
/// its discriminant vanishes.
pub fn decompose(f: &SymmetricSignature) -> Result<Option<WeightedDecomposition>, SymmetricError> {
    decompose_with(f, DEFAULT_MAX_PRECISION)
}

fn decompose_with(f: &SymmetricSignature, prec: u32) -> Result<Option<WeightedDecomposition>, SymmetricError> {
    check_arity3(f)?;
    let Some(rec) = fit_recurrence(f)? else {
        return Ok(None);
    };
    let disc = rec.discriminant();
    if disc.is_zero()? {
        return Ok(None);
    }
    let u = if rec.c.is_zero()? {
        let lambda = -rec.a.try_div(&rec.b)?;
        [[Scalar::one(), lambda], [Scalar::zero(), Scalar::one()]]
    } else {
        let context: Vec<&Scalar> = f.values().iter().collect();
        let sd = root_in(&disc, 2, &context, prec).ok_or(SymmetricError::NestedRadical)?;
        let two_c = &Scalar::from(2) * &rec.c;
        let mut roots = [
            (-&rec.b + &sd).try_div(&two_c)?,
            (-&rec.b - &sd).try_div(&two_c)?,
        ];
        let key = |s: &Scalar| s.to_f64();
        let (p, q) = (key(&roots[0]), key(&roots[1]));
        let order = q.0.partial_cmp(&p.0).unwrap_or(Ordering::Equal).then(q.1.partial_cmp(&p.1).unwrap_or(Ordering::Equal));
        if order == Ordering::Greater {
            roots.swap(0, 1);
        }
        let [l0, l1] = roots;
        [[Scalar::one(), l0], [Scalar::one(), l1]]
    };
    let Some(x) = solve_weights(f, &u)? else {
        return Ok(None);
    };
    let d = WeightedDecomposition { arity: f.arity(), x, u };
    if proportional(f, &d.reconstruct())?.is_none() {
        return Ok(None);
    }
    Ok(Some(d))
}

/// Weights `(x0, x1)` with `f = x0 u0^n + x1 u1^n`, solved on the first pair
/// of weights whose `2 x 2` system is nonsingular and then checked on every
/// entry.
fn solve_weights(f: &SymmetricSignature, u: &[Vector; 2]) -> Result<Option<[Scalar; 2]>, ScalarError> {
    let n = f.arity();
    let mut pairs = vec![(0, 1), (n - 1, n)];
    for w1 in 0..=n {
        for w2 in w1 + 1..=n {
            if !pairs.contains(&(w1, w2)) {
                pairs.push((w1, w2));
            }
        }
    }
    for (w1, w2) in pairs {
        let m = [
            [power_entry(&u[0], n, w1), power_entry(&u[1], n, w1)],
            [power_entry(&u[0], n, w2), power_entry(&u[1], n, w2)],
        ];
        let det = &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0]);
        if det.is_zero()? {
            continue;
        }
        let (f1, f2) = (f.value(w1), f.value(w2));
        let x0 = (&(f1 * &m[1][1]) - &(f2 * &m[0][1])).try_div(&det)?;
        let x1 = (&(f2 * &m[0][0]) - &(f1 * &m[1][0])).try_div(&det)?;
        for w in 0..=n {
            let v = &(&x0 * &power_entry(&u[0], n, w)) + &(&x1 * &power_entry(&u[1], n, w));
            if !v.equals(f.value(w))? {
                return Ok(None);
            }
        }
        return Ok(Some([x0, x1]));
    }
    Ok(None)
}

/// `((a0 a1 + b0 b1) / (a1 b0 - a0 b1))^2`.
pub fn theta(d: &WeightedDecomposition) -> Result<Scalar, ScalarError> {
    let [[a0, b0], [a1, b1]] = &d.u;
    let dot = &(a0 * a1) + &(b0 * b1);
    let det = &(a1 * b0) - &(a0 * b1);
    let q = dot.try_div(&det)?;
    Ok(&q * &q)
}

/// Divides `m` by `sqrt(s)` when that root is available next to the
/// entries of `m`; reports whether it was.
fn normalize(m: Transform, s: &Scalar, prec: u32) -> Result<(Transform, bool), ScalarError> {
    let context: Vec<&Scalar> = m.m.iter().flatten().collect();
    match root_in(s, 2, &context, prec) {
        Some(root) => Ok((m.scale(&root.try_inv()?), true)),
        None => Ok((m, false)),
    }
}

/// The change of basis for `theta = 0`: with `a1 = k b0`, `b1 = -k a0` and
/// `c = a0^2 + b0^2`, `H = [[1,1],[1,-1]] [[a0,b0],[b0,-a0]] / sqrt(2c)`
/// and `beta = x1 k^n / x0`. When `sqrt(2c)` would need a second radical
/// the factor is dropped and `H` is orthogonal only up to scale.
pub fn construct_h_theta0(d: &WeightedDecomposition) -> Result<ThetaZeroForm, SymmetricError> {
    construct_h_theta0_with(d, DEFAULT_MAX_PRECISION)
}

fn construct_h_theta0_with(d: &WeightedDecomposition, prec: u32) -> Result<ThetaZeroForm, SymmetricError> {
    let [[a0, b0], [a1, b1]] = &d.u;
    if !(&(a0 * a1) + &(b0 * b1)).is_zero()? {
        return Err(SymmetricError::ThetaNonZero);
    }
    let k = if !b0.is_zero()? {
        a1.try_div(b0)?
    } else {
        -b1.try_div(a0)?
    };
    let base = Transform::new(
        a0 + b0,
        b0 - a0,
        a0 - b0,
        b0 + a0,
    );
    let two_c = &Scalar::from(2) * &(&(a0 * a0) + &(b0 * b0));
    let (transform, orthogonal) = normalize(base, &two_c, prec)?;
    let beta = (&d.x[1] * &k.pow(d.arity as u32)).try_div(&d.x[0])?;
    Ok(ThetaZeroForm {
        transform,
        beta,
        orthogonal,
    })
}

fn equals_value(s: &Scalar, v: Scalar) -> Result<bool, Undecided> {
    s.equals(&v)
}

/// Which class `theta` points to.
enum ThetaClass {
    Zero,
    MinusOne,
    MinusHalf,
    Other,
}

fn theta_class(th: &Scalar) -> Result<ThetaClass, Undecided> {
    Ok(if th.is_zero()? {
        ThetaClass::Zero
    } else if equals_value(th, Scalar::from(-1))? {
        ThetaClass::MinusOne
    } else if equals_value(th, Scalar::rational(-1, 2))? {
        ThetaClass::MinusHalf
    } else {
        ThetaClass::Other
    })
}

/// Renders `theta` as `0`, `-1`, `-1/2` or `other`.
pub fn theta_label(th: &Scalar) -> Result<&'static str, Undecided> {
    Ok(match theta_class(th)? {
        ThetaClass::Zero => "0",
        ThetaClass::MinusOne => "-1",
        ThetaClass::MinusHalf => "-1/2",
        ThetaClass::Other => "other",
    })
}

/// The class of `f` among `A1`, `A2`, `A3`, with a witness.
pub fn classify_affine(f: &SymmetricSignature) -> Result<Option<ClassWitness>, SymmetricError> {
    classify_affine_with(f, DEFAULT_MAX_PRECISION)
}

fn classify_affine_with(f: &SymmetricSignature, prec: u32) -> Result<Option<ClassWitness>, SymmetricError> {
    let Some(d) = decompose_with(f, prec)? else {
        return Ok(None);
    };
    match theta_class(&theta(&d)?)? {
        ThetaClass::Zero => a1_witness(&d, prec),
        ThetaClass::MinusOne => a2_witness(&d, ClassLabel::A2, prec),
        ThetaClass::MinusHalf => a3_witness(&d, prec),
        ThetaClass::Other => Ok(None),
    }
}

/// The class of `f` among `P1`, `P2`, with a witness.
pub fn classify_product(f: &SymmetricSignature) -> Result<Option<ClassWitness>, SymmetricError> {
    classify_product_with(f, DEFAULT_MAX_PRECISION)
}

fn classify_product_with(f: &SymmetricSignature, prec: u32) -> Result<Option<ClassWitness>, SymmetricError> {
    let Some(d) = decompose_with(f, prec)? else {
        return Ok(None);
    };
    match theta_class(&theta(&d)?)? {
        ThetaClass::Zero => {
            let form = construct_h_theta0_with(&d, prec)?;
            Ok(Some(ClassWitness {
                label: ClassLabel::P1,
                transform: form.transform.inverse()?,
                beta: form.beta,
                t: None,
                r: None,
                epsilon: None,
                orthogonal: form.orthogonal,
            }))
        }
        ThetaClass::MinusOne => a2_witness(&d, ClassLabel::P2, prec),
        _ => Ok(None),
    }
}

/// `A1` test: `theta = 0` and `x1 a1^n = alpha^(tn+2r) x0 b0^n != 0` or
/// `x1 b1^n = alpha^(tn+2r) x0 a0^n != 0` for some `t` in `{0,1}` and `r` in
/// `0..4`, tried in that order.
fn a1_witness(d: &WeightedDecomposition, prec: u32) -> Result<Option<ClassWitness>, SymmetricError> {
    let n = d.arity as u32;
    let [[a0, b0], [a1, b1]] = &d.u;
    let [x0, x1] = &d.x;
    let lhs = [&d.x[1] * &a1.pow(n), x1 * &b1.pow(n)];
    let rhs = [x0 * &b0.pow(n), x0 * &a0.pow(n)];
    let mut found = None;
    'search: for t in 0..2u8 {
        for r in 0..4u8 {
            let beta = Scalar::alpha_pow((t as i64) * n as i64 + 2 * r as i64);
            for (second, (l, rr)) in lhs.iter().zip(&rhs).enumerate() {
                if !l.is_zero()? && l.equals(&(&beta * rr))? {
                    found = Some((t, r, second == 1, beta));
                    break 'search;
                }
            }
        }
    }
    let Some((t, r, second, beta)) = found else {
        return Ok(None);
    };
    let form = construct_h_theta0_with(d, prec)?;
    // the second condition fixes beta only after swapping the basis vectors
    let mut h = form.transform.inverse()?;
    if second {
        h = h.mul(&Transform::x());
    }
    Ok(Some(ClassWitness {
        label: ClassLabel::A1,
        transform: h,
        beta,
        t: Some(t),
        r: Some(r),
        epsilon: None,
        orthogonal: form.orthogonal,
    }))
}

/// Indices `(p, q)` with `u_p` proportional to `(1, i)` and `u_q` to
/// `(1, -i)`.
fn a2_indices(d: &WeightedDecomposition) -> Result<Option<(usize, usize)>, Undecided> {
    let on = |j: usize, s: Scalar| -> Result<bool, Undecided> {
        let [a, b] = &d.u[j];
        Ok(!a.is_zero()? && b.equals(&(&s * a))?)
    };
    for (p, q) in [(0, 1), (1, 0)] {
        if on(p, Scalar::i())? && on(q, -Scalar::i())? {
            return Ok(Some((p, q)));
        }
    }
    Ok(None)
}

/// `nu` with `f` proportional to `(1,i)^n + nu (1,-i)^n`.
fn a2_ratio(d: &WeightedDecomposition, p: usize, q: usize) -> Result<Scalar, ScalarError> {
    let n = d.arity as u32;
    (&d.x[q] * &d.u[q][0].pow(n)).try_div(&(&d.x[p] * &d.u[p][0].pow(n)))
}

/// `A2`: the vectors are `(1, i)` and `(1, -i)` up to scale. With
/// `a + bi = nu^(1/2n)` the matrix `[[a, b], [b, -a]]` is its own inverse
/// and takes `f` to a multiple of `(1,-i)^n + (1,i)^n`.
fn a2_witness(d: &WeightedDecomposition, label: ClassLabel, prec: u32) -> Result<Option<ClassWitness>, SymmetricError> {
    let Some((p, q)) = a2_indices(d)? else {
        return Ok(None);
    };
    let nu = a2_ratio(d, p, q)?;
    let mu = root_in(&nu, 2 * d.arity as u32, &[], prec).ok_or(SymmetricError::NestedRadical)?;
    let mu_inv = mu.try_inv()?;
    let half = Scalar::rational(1, 2);
    let a = &(&mu + &mu_inv) * &half;
    let b = &(&(&mu - &mu_inv) * &half) * &Scalar::i_pow(3);
    let h = Transform::new(a.clone(), b.clone(), b, -a);
    Ok(Some(ClassWitness {
        label,
        transform: h,
        beta: Scalar::one(),
        t: None,
        r: None,
        epsilon: None,
        orthogonal: true,
    }))
}

/// `A3`: for `epsilon = 1` then `-1` and either order of the vectors,
/// `a1 (sqrt2 a0 + e i b0) = b1 (e i a0 - sqrt2 b0)` gives
/// `u1 = c [[e i, -sqrt2], [sqrt2, e i]] u0`, and `x1 c^n / x0` must be a
/// power of `i`. The witness is `[[x, y], [y, -x]]` with
/// `x = (a0 + e alpha b0) / s`, `y = (b0 - e alpha a0) / s` and
/// `s = sqrt((1 + i)(a0^2 + b0^2))`.
fn a3_witness(d: &WeightedDecomposition, prec: u32) -> Result<Option<ClassWitness>, SymmetricError> {
    let n = d.arity as u32;
    let s2 = Scalar::sqrt2();
    let alpha = Scalar::alpha();
    for eps in [1i8, -1] {
        let ei = &Scalar::from(eps as i64) * &Scalar::i();
        for (p, q) in [(0, 1), (1, 0)] {
            let [a0, b0] = &d.u[p];
            let [a1, b1] = &d.u[q];
            let l = &(&s2 * a0) + &(&ei * b0);
            let m = &(&ei * a0) - &(&s2 * b0);
            if !(a1 * &l).equals(&(b1 * &m))? {
                continue;
            }
            let c = if !m.is_zero()? { a1.try_div(&m)? } else { b1.try_div(&l)? };
            let rho = (&d.x[q] * &c.pow(n)).try_div(&d.x[p])?;
            let Some(r) = rho.is_power_of_i()? else {
                continue;
            };
            let ea = &Scalar::from(eps as i64) * &alpha;
            let x = a0 + &(&ea * b0);
            let y = b0 - &(&ea * a0);
            let base = Transform::new(x.clone(), y.clone(), y, -x);
            let s = &(&Scalar::one() + &Scalar::i()) * &(&(a0 * a0) + &(b0 * b0));
            let (h, orthogonal) = normalize(base, &s, prec)?;
            let g = apply_transform_symmetric(&h.inverse()?, &d.reconstruct());
            let Some([lambda, mu]) = solve_weights(&g, &ClassLabel::A3.canonical_vectors())? else {
                continue;
            };
            return Ok(Some(ClassWitness {
                label: ClassLabel::A3,
                transform: h,
                beta: mu.try_div(&lambda)?,
                t: None,
                r: Some(r),
                epsilon: Some(eps),
                orthogonal,
            }));
        }
    }
    Ok(None)
}

/// The `8n` rotations `H` for the `A2` branch: with `f` proportional to
/// `(1,i)^n + nu (1,-i)^n`, `H^-1 = [[a, b], [-b, a]]` where
/// `(a + bi)^(2n) = nu i^-r` for `r` in `0..4`.
pub fn a2_candidates(f: &SymmetricSignature) -> Result<Vec<Transform>, SymmetricError> {
    a2_candidates_with(f, DEFAULT_MAX_PRECISION)
}

fn a2_candidates_with(f: &SymmetricSignature, prec: u32) -> Result<Vec<Transform>, SymmetricError> {
    let Some(d) = decompose_with(f, prec)? else {
        return Ok(Vec::new());
    };
    let Some((p, q)) = a2_indices(&d)? else {
        return Ok(Vec::new());
    };
    let nu = a2_ratio(&d, p, q)?;
    let k = 2 * d.arity as u32;
    let mut out = Vec::new();
    for r in 0..4 {
        let v = &nu * &Scalar::i_pow(-r);
        let c = v.as_cyclotomic().ok_or(SymmetricError::NestedRadical)?.clone();
        for mu in kth_roots_with_precision(&c, k, prec) {
            out.push(rotation_from_mu(&mu, k, &c).transpose());
        }
    }
    Ok(out)
}

/// `(lambda, mu)` with `g = lambda p^n + mu q^n`, both nonzero.
fn fit_pair(g: &SymmetricSignature, pair: &[Vector; 2]) -> Result<Option<[Scalar; 2]>, ScalarError> {
    match solve_weights(g, pair)? {
        Some([l, m]) if !l.is_zero()? && !m.is_zero()? => Ok(Some([l, m])),
        _ => Ok(None),
    }
}

/// Membership of a symmetric signature in `A`: zero, a tensor power of an
/// affine unary, or a nonzero multiple of `p^n + i^r q^n` for one of the
/// pairs `(1,0),(0,1)`, `(1,1),(1,-1)`, `(1,i),(1,-i)`.
pub fn is_symmetric_affine(g: &SymmetricSignature) -> Result<bool, ScalarError> {
    let v = g.values();
    let Some(k) = first_nonzero(v)? else {
        return Ok(true);
    };
    if is_degenerate_symmetric(g)? {
        if k > 0 {
            return Ok(true);
        }
        let ratio = v[1].try_div(&v[0])?;
        return Ok(ratio.is_zero()? || ratio.is_power_of_i()?.is_some());
    }
    let one = Scalar::one;
    let pairs = [
        [[one(), Scalar::zero()], [Scalar::zero(), one()]],
        [[one(), one()], [one(), Scalar::from(-1)]],
        [[one(), Scalar::i()], [one(), -Scalar::i()]],
    ];
    for pair in &pairs {
        if let Some([l, m]) = fit_pair(g, pair)? {
            if m.try_div(&l)?.is_power_of_i()?.is_some() {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Membership of a symmetric signature in `P`: degenerate (including
/// zero), the binary disequality up to scale, or `[a, 0, ..., 0, b]`.
pub fn is_symmetric_product(g: &SymmetricSignature) -> Result<bool, ScalarError> {
    if is_degenerate_symmetric(g)? {
        return Ok(true);
    }
    let v = g.values();
    let n = g.arity();
    let inner_zero = |skip: &[usize]| -> Result<bool, Undecided> {
        for (w, x) in v.iter().enumerate() {
            if !skip.contains(&w) && !x.is_zero()? {
                return Ok(false);
            }
        }
        Ok(true)
    };
    if inner_zero(&[0, n])? {
        return Ok(true);
    }
    Ok(n == 2 && inner_zero(&[1])?)
}

fn pulled_back(f: &SymmetricSignature, t: &Transform) -> Result<SymmetricSignature, SymmetricError> {
    ensure_one_ring(t.m.iter().flatten().chain(f.values()))?;
    Ok(apply_transform_symmetric(&t.inverse()?, f))
}

/// Whether `f` lies in `T A`, tested on `T^-1 f` in succinct form.
pub fn sym_in_affine(f: &SymmetricSignature, t: &Transform) -> Result<bool, SymmetricError> {
    Ok(is_symmetric_affine(&pulled_back(f, t)?)?)
}

/// Whether `f` lies in `T P`, tested on `T^-1 f` in succinct form.
pub fn sym_in_product(f: &SymmetricSignature, t: &Transform) -> Result<bool, SymmetricError> {
    Ok(is_symmetric_product(&pulled_back(f, t)?)?)
}

/// Whether `f` is a nonzero multiple of `(1,i)^n + beta (1,-i)^n` with
/// `beta != 0`, or of the binary equality.
pub fn in_p2_or_equality(f: &SymmetricSignature) -> Result<bool, ScalarError> {
    if f.arity() == 2 {
        let v = f.values();
        if v[1].is_zero()? && !v[0].is_zero()? && v[0].equals(&v[2])? {
            return Ok(true);
        }
    }
    if f.arity() < 2 {
        return Ok(false);
    }
    Ok(fit_pair(f, &ClassLabel::P2.canonical_vectors())?.is_some())
}

fn symmetric_members(set: &SignatureSet) -> Result<Vec<(String, SymmetricSignature)>, SymmetricError> {
    let mut out = Vec::new();
    for m in &set.members {
        let s = match &m.sig {
            Signature::Symmetric(s) => s.clone(),
            Signature::Dense(d) => crate::signatures::compress(d)?
                .ok_or_else(|| SymmetricError::NotSymmetric(m.name.clone()))?,
        };
        out.push((m.name.clone(), s));
    }
    Ok(out)
}

/// The first non-degenerate member of arity at least 3.
fn pivot(members: &[(String, SymmetricSignature)]) -> Result<Option<usize>, Undecided> {
    for (i, (_, f)) in members.iter().enumerate() {
        if f.arity() >= 3 && !is_degenerate_symmetric(f)? {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

fn hypothesis_not_met() -> Decision {
    Decision::new(Outcome::HypothesisNotMet)
        .with_parameter("reason", "no non-degenerate member of arity at least 3; trivially tractable")
}

fn blocked(outcome: Outcome, signature: &str, reason: impl Into<String>) -> Decision {
    let mut d = Decision::new(outcome);
    d.blockers.push(Blocker {
        signature: signature.to_string(),
        reason: reason.into(),
    });
    d
}

/// Classifies the pivot, mapping scalar failures to an undecided outcome.
fn classify_pivot(
    name: &str,
    f: &SymmetricSignature,
    classify: impl Fn(&SymmetricSignature) -> Result<Option<ClassWitness>, SymmetricError>,
    family: &str,
) -> Result<Result<ClassWitness, Decision>, SymmetricError> {
    match classify(f) {
        Ok(Some(c)) => Ok(Ok(c)),
        Ok(None) => Ok(Err(blocked(Outcome::No, name, format!("pivot is in none of {family}")))),
        Err(SymmetricError::Scalar(_)) | Err(SymmetricError::NestedRadical) => Ok(Err(blocked(
            Outcome::Undecided,
            name,
            "pivot classification needs arithmetic beyond one radical",
        ))),
        Err(e) => Err(e),
    }
}

/// Tests each `(branch, T)` in order against every member and returns the
/// first that holds.
fn first_passing(
    members: &[(String, SymmetricSignature)],
    candidates: Vec<(String, Transform)>,
    member_test: impl Fn(&SymmetricSignature, &Transform) -> Result<bool, SymmetricError> + Sync,
) -> Decision {
    let checks: Vec<(Check, Option<String>)> = candidates
        .par_iter()
        .map(|(_, t)| {
            for (name, f) in members {
                match member_test(f, t) {
                    Ok(true) => {}
                    Ok(false) => return (Check::Fail, Some(name.clone())),
                    Err(_) => return (Check::Undecided, Some(name.clone())),
                }
            }
            (Check::Pass, None)
        })
        .collect();
    let tested = candidates.len();
    let mut undecided = false;
    let mut blockers = Vec::new();
    for ((branch, t), (check, who)) in candidates.into_iter().zip(checks) {
        match check {
            Check::Pass => {
                let mut d = Decision::yes(&branch, t);
                d.candidates_tested = tested;
                return d;
            }
            Check::Fail => blockers.push(Blocker {
                signature: who.unwrap_or_default(),
                reason: format!("outside the {branch} candidate"),
            }),
            Check::Undecided => {
                undecided = true;
                blockers.push(Blocker {
                    signature: who.unwrap_or_default(),
                    reason: format!("membership undecided for the {branch} candidate"),
                });
            }
        }
    }
    let mut d = Decision::new(if undecided { Outcome::Undecided } else { Outcome::No });
    d.candidates_tested = tested;
    d.blockers = blockers;
    d
}

fn with_pivot(d: Decision, name: &str, c: Option<&ClassWitness>) -> Decision {
    let d = d.with_parameter("pivot", name);
    match c {
        Some(c) => d.with_parameter("pivot_class", c.label.as_str()),
        None => d,
    }
}

/// Whether a set of symmetric signatures is `A`-transformable, decided from
/// the class of its first non-degenerate member of arity at least 3.
pub fn decide_a_transformable_sym(set: &SignatureSet, opts: &DecideOptions) -> Result<Decision, SymmetricError> {
    let prec = opts.max_precision;
    let members = symmetric_members(set)?;
    let Some(pi) = pivot(&members)? else {
        return Ok(hypothesis_not_met());
    };
    let (name, f) = &members[pi];
    let class = match classify_pivot(name, f, |g| classify_affine_with(g, prec), "A1, A2, A3")? {
        Ok(c) => c,
        Err(d) => return Ok(with_pivot(d, name, None)),
    };
    let h = &class.transform;
    let candidates = match class.label {
        ClassLabel::A1 => vec![
            ("trans:A1".to_string(), h.clone()),
            (
                "trans:A1:alpha".to_string(),
                h.mul(&Transform::from_ints(1, 1, 1, -1)).mul(&Transform::d_alpha()),
            ),
        ],
        ClassLabel::A2 => match a2_candidates_with(f, prec) {
            Ok(list) => list.into_iter().map(|t| ("trans:A2".to_string(), t)).collect(),
            Err(SymmetricError::NestedRadical) | Err(SymmetricError::Scalar(_)) => {
                let d = blocked(Outcome::Undecided, name, "A2 candidates need a second radical");
                return Ok(with_pivot(d, name, Some(&class)));
            }
            Err(e) => return Err(e),
        },
        ClassLabel::A3 => vec![("trans:A3".to_string(), h.mul(&Transform::d_alpha()))],
        ClassLabel::P1 | ClassLabel::P2 => unreachable!("affine classifier labels"),
    };
    let d = first_passing(&members, candidates, sym_in_affine);
    Ok(with_pivot(d, name, Some(&class)))
}

/// Whether a set of symmetric signatures is `P`-transformable, decided from
/// the class of its first non-degenerate member of arity at least 3.
pub fn decide_p_transformable_sym(set: &SignatureSet, opts: &DecideOptions) -> Result<Decision, SymmetricError> {
    let prec = opts.max_precision;
    let members = symmetric_members(set)?;
    let Some(pi) = pivot(&members)? else {
        return Ok(hypothesis_not_met());
    };
    let (name, f) = &members[pi];
    let class = match classify_pivot(name, f, |g| classify_product_with(g, prec), "P1, P2")? {
        Ok(c) => c,
        Err(d) => return Ok(with_pivot(d, name, None)),
    };
    let d = match class.label {
        ClassLabel::P1 => {
            let t = class.transform.mul(&Transform::from_ints(1, 1, 1, -1));
            first_passing(&members, vec![("trans:P1".to_string(), t)], sym_in_product)
        }
        ClassLabel::P2 => {
            let test = |g: &SymmetricSignature, _: &Transform| -> Result<bool, SymmetricError> {
                Ok(is_degenerate_symmetric(g)? || in_p2_or_equality(g)?)
            };
            first_passing(&members, vec![("trans:P2".to_string(), Transform::z())], test)
        }
        _ => unreachable!("product classifier labels"),
    };
    Ok(with_pivot(d, name, Some(&class)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(v: &[i64]) -> SymmetricSignature {
        SymmetricSignature::from_ints(v)
    }

    fn vals(v: &[Scalar]) -> SymmetricSignature {
        SymmetricSignature::new(v.to_vec()).unwrap()
    }

    fn eq(a: &Scalar, b: Scalar) -> bool {
        a.equals(&b).unwrap()
    }

    #[test]
    fn recurrence_examples() {
        let r = fit_recurrence(&sym(&[3, 1, 3, 1])).unwrap().unwrap();
        assert!(eq(&r.a, 1.into()) && eq(&r.b, 0.into()) && eq(&r.c, (-1).into()));
        let r = fit_recurrence(&sym(&[1, 0, -1, 0])).unwrap().unwrap();
        assert!(eq(&r.a, 1.into()) && eq(&r.b, 0.into()) && eq(&r.c, 1.into()));
        assert_eq!(fit_recurrence(&sym(&[1, 1, 1, 1])).unwrap_err(), SymmetricError::NonUnique);
        assert!(fit_recurrence(&sym(&[1, 2, 0, 0, 5])).unwrap().is_none());
    }

    #[test]
    fn decomposition_examples() {
        let d = decompose(&sym(&[3, 1, 3, 1])).unwrap().unwrap();
        assert!(eq(&d.x[0], 2.into()) && eq(&d.x[1], 1.into()));
        assert!(eq(&d.u[0][1], 1.into()) && eq(&d.u[1][1], (-1).into()));
        let d = decompose(&sym(&[1, 0, -1, 0])).unwrap().unwrap();
        assert!(eq(&d.x[0], Scalar::rational(1, 2)) && eq(&d.x[1], Scalar::rational(1, 2)));
        assert!(eq(&d.u[0][1], Scalar::i()) && eq(&d.u[1][1], -Scalar::i()));
        assert!(decompose(&sym(&[1, 1, 0, 0])).unwrap().is_none());
        assert_eq!(decompose(&sym(&[1, 2, 4, 8])).unwrap_err(), SymmetricError::Degenerate);
        assert!(matches!(
            decompose(&sym(&[1, 0, 1])).unwrap_err(),
            SymmetricError::ArityTooSmall { .. }
        ));
    }

    #[test]
    fn theta_examples() {
        let th = |v: &[i64]| theta(&decompose(&sym(v)).unwrap().unwrap()).unwrap();
        assert!(th(&[3, 1, 3, 1]).is_zero().unwrap());
        assert!(eq(&th(&[1, 0, -1, 0]), (-1).into()));
        let a = Scalar::alpha();
        let d = WeightedDecomposition {
            arity: 3,
            x: [Scalar::one(), Scalar::one()],
            u: [[Scalar::one(), a.clone()], [Scalar::one(), -a]],
        };
        assert!(eq(&theta(&d).unwrap(), Scalar::rational(-1, 2)));
    }

    #[test]
    fn affine_classification_examples() {
        let c = classify_affine(&sym(&[1, 0, 0, 1])).unwrap().unwrap();
        assert_eq!((c.label, c.t, c.r), (ClassLabel::A1, Some(0), Some(0)));
        assert!(c.transform.equals(&Transform::h2()).unwrap());
        assert!(c.verify(&sym(&[1, 0, 0, 1])).unwrap());

        let c = classify_affine(&sym(&[1, 0, -1, 0])).unwrap().unwrap();
        assert_eq!(c.label, ClassLabel::A2);
        assert!(c.verify(&sym(&[1, 0, -1, 0])).unwrap());

        let f = vals(&[2.into(), 0.into(), &Scalar::from(2) * &Scalar::i(), 0.into()]);
        let c = classify_affine(&f).unwrap().unwrap();
        assert_eq!((c.label, c.epsilon, c.r), (ClassLabel::A3, Some(1), Some(2)));
        assert!(c.orthogonal && c.transform.is_orthogonal().unwrap());
        assert!(c.verify(&f).unwrap());

        assert!(classify_affine(&sym(&[1, 1, 1, 2])).unwrap().is_none());
        assert!(classify_affine(&sym(&[3, 1, 3, 1])).unwrap().is_none());
    }

    #[test]
    fn product_classification_examples() {
        let c = classify_product(&sym(&[3, 1, 3, 1])).unwrap().unwrap();
        assert_eq!(c.label, ClassLabel::P1);
        assert!(eq(&c.beta, Scalar::rational(1, 2)));
        assert!(c.orthogonal && c.verify(&sym(&[3, 1, 3, 1])).unwrap());
        let c = classify_product(&sym(&[1, 0, -1, 0])).unwrap().unwrap();
        assert_eq!(c.label, ClassLabel::P2);
        let c = classify_product(&sym(&[1, 0, 0, 1])).unwrap().unwrap();
        assert_eq!(c.label, ClassLabel::P1);
        assert!(c.verify(&sym(&[1, 0, 0, 1])).unwrap());
    }

    #[test]
    fn theta_zero_construction() {
        let d = decompose(&sym(&[1, 0, 0, 1])).unwrap().unwrap();
        let form = construct_h_theta0(&d).unwrap();
        assert!(form.orthogonal && form.transform.is_orthogonal().unwrap());
        assert!(eq(&form.beta, (-1).into()));
        let d = decompose(&sym(&[3, 1, 3, 1])).unwrap().unwrap();
        let form = construct_h_theta0(&d).unwrap();
        assert!(form.transform.is_orthogonal().unwrap());
        assert!(eq(&form.beta, Scalar::rational(1, 2)));
        let d = decompose(&sym(&[1, 0, -1, 0])).unwrap().unwrap();
        assert_eq!(construct_h_theta0(&d).unwrap_err(), SymmetricError::ThetaNonZero);
    }

    #[test]
    fn membership_examples() {
        let id = Transform::identity();
        assert!(sym_in_affine(&sym(&[1, 0, 1]), &id).unwrap());
        assert!(sym_in_affine(&sym(&[1, 0, -1, 0]), &id).unwrap());
        assert!(!sym_in_affine(&sym(&[3, 1, 3, 1]), &id).unwrap());
        assert!(sym_in_product(&sym(&[1, 0, 0, 5]), &id).unwrap());
        assert!(sym_in_product(&sym(&[0, 1, 0]), &id).unwrap());
        let c = classify_product(&sym(&[3, 1, 3, 1])).unwrap().unwrap();
        let t = c.transform.mul(&Transform::from_ints(1, 1, 1, -1));
        assert!(sym_in_product(&sym(&[3, 1, 3, 1]), &t).unwrap());
    }

    fn set(v: &[SymmetricSignature]) -> SignatureSet {
        SignatureSet::from_symmetric(v.to_vec())
    }

    #[test]
    fn set_decisions() {
        let o = DecideOptions::default();
        let d = decide_a_transformable_sym(&set(&[sym(&[1, 0, 0, 1]), sym(&[1, 0, 1])]), &o).unwrap();
        assert_eq!(d.branch.as_deref(), Some("trans:A1"));
        let f = vals(&[2.into(), 0.into(), &Scalar::from(2) * &Scalar::i(), 0.into()]);
        let d = decide_a_transformable_sym(&set(&[f]), &o).unwrap();
        assert_eq!(d.branch.as_deref(), Some("trans:A3"));
        let d = decide_a_transformable_sym(&set(&[sym(&[3, 1, 3, 1])]), &o).unwrap();
        assert_eq!(d.outcome, Outcome::No);

        let d = decide_p_transformable_sym(&set(&[sym(&[3, 1, 3, 1])]), &o).unwrap();
        assert_eq!(d.branch.as_deref(), Some("trans:P1"));
        let d = decide_p_transformable_sym(&set(&[sym(&[1, 0, -1, 0]), sym(&[1, 0, 1])]), &o).unwrap();
        assert_eq!(d.branch.as_deref(), Some("trans:P2"));
        let d = decide_p_transformable_sym(&set(&[sym(&[1, 0, -1, 0]), sym(&[1, 0, 0, 1])]), &o).unwrap();
        assert_eq!(d.outcome, Outcome::No);

        let d = decide_a_transformable_sym(&set(&[sym(&[1, 0, 1]), sym(&[1, 2, 4, 8])]), &o).unwrap();
        assert_eq!(d.outcome, Outcome::HypothesisNotMet);
    }

    #[test]
    fn a2_candidate_count() {
        let f = sym(&[1, 0, -1, 0]);
        assert_eq!(a2_candidates(&f).unwrap().len(), 24);
    }
}
