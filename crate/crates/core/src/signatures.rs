//! Signatures, 2x2 transformations and the tensor-power action.
//!
//! Dense entries are indexed by `x1 x2 ... xn` read as a binary number with
//! `x1` the most significant bit.

use crate::scalars::{Scalar, ScalarError, Undecided};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SignatureError {
    #[error("signatures must have arity at least 1")]
    ZeroArity,
    #[error("arity {arity} needs {expected} entries, got {got}")]
    Length {
        arity: usize,
        expected: usize,
        got: usize,
    },
    #[error("arity {arity} exceeds the configured maximum {max}")]
    TooLarge { arity: usize, max: usize },
}

/// Full truth table of a signature `{0,1}^n -> C`.
#[derive(Clone, Debug)]
pub struct DenseSignature {
    arity: usize,
    entries: Vec<Scalar>,
}

/// Symmetric signature `[f_0, ..., f_n]`, `f_w` the value on weight `w`.
#[derive(Clone, Debug)]
pub struct SymmetricSignature {
    values: Vec<Scalar>,
}

/// Either representation.
#[derive(Clone, Debug)]
pub enum Signature {
    Dense(DenseSignature),
    Symmetric(SymmetricSignature),
}

/// A signature with a display name.
#[derive(Clone, Debug)]
pub struct NamedSignature {
    pub name: String,
    pub sig: Signature,
}

/// Ordered, named collection of signatures.
#[derive(Clone, Debug, Default)]
pub struct SignatureSet {
    pub members: Vec<NamedSignature>,
}

/// A 2x2 matrix acting on signatures through its tensor powers.
#[derive(Clone, Debug)]
pub struct Transform {
    pub m: [[Scalar; 2]; 2],
}

impl DenseSignature {
    pub fn new(arity: usize, entries: Vec<Scalar>) -> Result<Self, SignatureError> {
        if arity == 0 {
            return Err(SignatureError::ZeroArity);
        }
        if arity >= usize::BITS as usize - 1 || entries.len() != 1 << arity {
            return Err(SignatureError::Length {
                arity,
                expected: 1usize.checked_shl(arity as u32).unwrap_or(0),
                got: entries.len(),
            });
        }
        Ok(DenseSignature { arity, entries })
    }

    /// Infers the arity from the entry count.
    pub fn from_entries(entries: Vec<Scalar>) -> Result<Self, SignatureError> {
        let n = entries.len().trailing_zeros() as usize;
        Self::new(n, entries)
    }

    /// Convenience constructor from small integers.
    pub fn from_ints(values: &[i64]) -> Self {
        Self::from_entries(values.iter().map(|&v| Scalar::from(v)).collect())
            .expect("power-of-two length")
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn entry(&self, x: usize) -> &Scalar {
        &self.entries[x]
    }

    pub fn into_entries(self) -> Vec<Scalar> {
        self.entries
    }

    /// Bit `x_j` (1-based `j`) of index `x`.
    pub fn bit(&self, x: usize, j: usize) -> usize {
        (x >> (self.arity - j)) & 1
    }

    pub fn is_zero(&self) -> Result<bool, Undecided> {
        for e in &self.entries {
            if !e.is_zero()? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Indices of the nonzero entries.
    pub fn support(&self) -> Result<Vec<usize>, Undecided> {
        let mut out = Vec::new();
        for (x, e) in self.entries.iter().enumerate() {
            if !e.is_zero()? {
                out.push(x);
            }
        }
        Ok(out)
    }

    /// First nonzero index in lexicographic order.
    pub fn first_nonzero(&self) -> Result<Option<usize>, Undecided> {
        for (x, e) in self.entries.iter().enumerate() {
            if !e.is_zero()? {
                return Ok(Some(x));
            }
        }
        Ok(None)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        DenseSignature {
            arity: self.arity,
            entries: self.entries.iter().map(|e| c * e).collect(),
        }
    }

    pub fn equals(&self, other: &Self) -> Result<bool, Undecided> {
        if self.arity != other.arity {
            return Ok(false);
        }
        for (a, b) in self.entries.iter().zip(&other.entries) {
            if !a.equals(b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `lambda` with `other = lambda * self`, when one exists and `self` is
    /// nonzero.
    pub fn proportional(&self, other: &Self) -> Result<Option<Scalar>, ScalarError> {
        if self.arity != other.arity {
            return Ok(None);
        }
        let Some(x) = self.first_nonzero()? else {
            return Ok(None);
        };
        let lambda = other.entries[x].try_div(&self.entries[x])?;
        for (a, b) in self.entries.iter().zip(&other.entries) {
            if !(&lambda * a).equals(b)? {
                return Ok(None);
            }
        }
        Ok(Some(lambda))
    }

    /// Tensor product; the variables of `self` come first.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len() * other.entries.len());
        for a in &self.entries {
            for b in &other.entries {
                entries.push(a * b);
            }
        }
        DenseSignature {
            arity: self.arity + other.arity,
            entries,
        }
    }

    /// Reorders variables: variable `j` of the result is variable `perm[j]`
    /// of `self` (both 0-based).
    pub fn permute(&self, perm: &[usize]) -> Self {
        let n = self.arity;
        assert_eq!(perm.len(), n);
        let mut entries = vec![Scalar::zero(); self.entries.len()];
        for (y, slot) in entries.iter_mut().enumerate() {
            let mut x = 0;
            for (j, &src) in perm.iter().enumerate() {
                let b = (y >> (n - 1 - j)) & 1;
                x |= b << (n - 1 - src);
            }
            *slot = self.entries[x].clone();
        }
        DenseSignature { arity: n, entries }
    }
}

impl SymmetricSignature {
    pub fn new(values: Vec<Scalar>) -> Result<Self, SignatureError> {
        if values.len() < 2 {
            return Err(SignatureError::ZeroArity);
        }
        Ok(SymmetricSignature { values })
    }

    pub fn from_ints(values: &[i64]) -> Self {
        Self::new(values.iter().map(|&v| Scalar::from(v)).collect()).expect("arity >= 1")
    }

    pub fn arity(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[Scalar] {
        &self.values
    }

    pub fn value(&self, w: usize) -> &Scalar {
        &self.values[w]
    }

    pub fn is_zero(&self) -> Result<bool, Undecided> {
        for v in &self.values {
            if !v.is_zero()? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl Signature {
    pub fn arity(&self) -> usize {
        match self {
            Signature::Dense(d) => d.arity(),
            Signature::Symmetric(s) => s.arity(),
        }
    }

    pub fn to_dense(&self) -> DenseSignature {
        match self {
            Signature::Dense(d) => d.clone(),
            Signature::Symmetric(s) => expand(s),
        }
    }
}

impl SignatureSet {
    pub fn new(members: Vec<NamedSignature>) -> Self {
        SignatureSet { members }
    }

    /// Members named `f1, f2, ...` in order.
    pub fn from_signatures(sigs: Vec<Signature>) -> Self {
        SignatureSet {
            members: sigs
                .into_iter()
                .enumerate()
                .map(|(i, sig)| NamedSignature {
                    name: format!("f{}", i + 1),
                    sig,
                })
                .collect(),
        }
    }

    pub fn from_dense(sigs: Vec<DenseSignature>) -> Self {
        Self::from_signatures(sigs.into_iter().map(Signature::Dense).collect())
    }

    pub fn from_symmetric(sigs: Vec<SymmetricSignature>) -> Self {
        Self::from_signatures(sigs.into_iter().map(Signature::Symmetric).collect())
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn dense(&self) -> Vec<DenseSignature> {
        self.members.iter().map(|m| m.sig.to_dense()).collect()
    }

    pub fn named_dense(&self) -> Vec<(String, DenseSignature)> {
        self.members
            .iter()
            .map(|m| (m.name.clone(), m.sig.to_dense()))
            .collect()
    }

    /// The members as symmetric signatures, when every one is symmetric
    /// (dense members are compressed if possible).
    pub fn symmetric(&self) -> Result<Option<Vec<SymmetricSignature>>, Undecided> {
        let mut out = Vec::new();
        for m in &self.members {
            match &m.sig {
                Signature::Symmetric(s) => out.push(s.clone()),
                Signature::Dense(d) => match compress(d)? {
                    Some(s) => out.push(s),
                    None => return Ok(None),
                },
            }
        }
        Ok(Some(out))
    }
}

impl Transform {
    pub fn new(a: Scalar, b: Scalar, c: Scalar, d: Scalar) -> Self {
        Transform {
            m: [[a, b], [c, d]],
        }
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Self {
        Self::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn identity() -> Self {
        Self::from_ints(1, 0, 0, 1)
    }

    /// `D = diag(1, i)`.
    pub fn d() -> Self {
        Self::new(1.into(), 0.into(), 0.into(), Scalar::i())
    }

    /// `H_2 = [[1,1],[1,-1]] / sqrt 2`.
    pub fn h2() -> Self {
        let s = Scalar::sqrt2().try_inv().expect("sqrt 2 is invertible");
        Self::from_ints(1, 1, 1, -1).scale(&s)
    }

    /// `X = [[0,1],[1,0]]`.
    pub fn x() -> Self {
        Self::from_ints(0, 1, 1, 0)
    }

    /// `Z = [[1,1],[i,-i]] / sqrt 2`.
    pub fn z() -> Self {
        let s = Scalar::sqrt2().try_inv().expect("sqrt 2 is invertible");
        Self::new(1.into(), 1.into(), Scalar::i(), -Scalar::i()).scale(&s)
    }

    /// `Z' = [[1,i],[1,-i]]`.
    pub fn z_prime() -> Self {
        Self::new(1.into(), Scalar::i(), 1.into(), -Scalar::i())
    }

    /// `D_alpha = diag(1, alpha)`.
    pub fn d_alpha() -> Self {
        Self::new(1.into(), 0.into(), 0.into(), Scalar::alpha())
    }

    /// `diag(a, b)`.
    pub fn diag(a: Scalar, b: Scalar) -> Self {
        Self::new(a, 0.into(), 0.into(), b)
    }

    /// Rotation-type matrix `[[a, b], [-b, a]]`.
    pub fn rotation(a: Scalar, b: Scalar) -> Self {
        let nb = -&b;
        Self::new(a.clone(), b, nb, a)
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        Transform {
            m: [
                [s * &self.m[0][0], s * &self.m[0][1]],
                [s * &self.m[1][0], s * &self.m[1][1]],
            ],
        }
    }

    pub fn mul(&self, o: &Transform) -> Transform {
        let e = |r: usize, c: usize| &(&self.m[r][0] * &o.m[0][c]) + &(&self.m[r][1] * &o.m[1][c]);
        Transform {
            m: [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]],
        }
    }

    pub fn det(&self) -> Scalar {
        &(&self.m[0][0] * &self.m[1][1]) - &(&self.m[0][1] * &self.m[1][0])
    }

    pub fn transpose(&self) -> Transform {
        Transform {
            m: [
                [self.m[0][0].clone(), self.m[1][0].clone()],
                [self.m[0][1].clone(), self.m[1][1].clone()],
            ],
        }
    }

    pub fn inverse(&self) -> Result<Transform, ScalarError> {
        let d = self.det().try_inv()?;
        Ok(Transform {
            m: [
                [&self.m[1][1] * &d, -(&self.m[0][1] * &d)],
                [-(&self.m[1][0] * &d), &self.m[0][0] * &d],
            ],
        })
    }

    pub fn equals(&self, o: &Transform) -> Result<bool, Undecided> {
        for r in 0..2 {
            for c in 0..2 {
                if !self.m[r][c].equals(&o.m[r][c])? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// `T T^t = I`.
    pub fn is_orthogonal(&self) -> Result<bool, Undecided> {
        self.mul(&self.transpose()).equals(&Transform::identity())
    }
}

impl fmt::Display for Transform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            self.m[0][0], self.m[0][1], self.m[1][0], self.m[1][1]
        )
    }
}

/// Rotation `[[a, b], [-b, a]]` with `a = (1 - t^2)/(1 + t^2)` and
/// `b = 2t/(1 + t^2)`: an exact special orthogonal matrix without radicals.
pub fn rational_rotation(t: &crate::scalars::Rational) -> Transform {
    let one = crate::scalars::Rational::from_integer(1.into());
    let den = &one + t * t;
    let a = (&one - t * t) / &den;
    let b = (t + t) / &den;
    Transform::rotation(Scalar::from(a), Scalar::from(b))
}

/// Dense form of a symmetric signature.
pub fn expand(f: &SymmetricSignature) -> DenseSignature {
    let n = f.arity();
    let entries = (0..1usize << n)
        .map(|x| f.values[x.count_ones() as usize].clone())
        .collect();
    DenseSignature { arity: n, entries }
}

/// Symmetric form, when every entry depends only on the Hamming weight.
pub fn compress(f: &DenseSignature) -> Result<Option<SymmetricSignature>, Undecided> {
    let n = f.arity;
    let mut values: Vec<Option<&Scalar>> = vec![None; n + 1];
    for (x, e) in f.entries.iter().enumerate() {
        let w = x.count_ones() as usize;
        match values[w] {
            None => values[w] = Some(e),
            Some(v) => {
                if !v.equals(e)? {
                    return Ok(None);
                }
            }
        }
    }
    Ok(Some(SymmetricSignature {
        values: values.into_iter().map(|v| v.expect("weight present").clone()).collect(),
    }))
}

/// `T^{(x) n} f`: `g_u = sum_x prod_j T[u_j][x_j] f_x`.
pub fn apply_transform(t: &Transform, f: &DenseSignature) -> DenseSignature {
    let n = f.arity;
    let mut cur = f.entries.clone();
    let zero = [
        [t.m[0][0].is_zero_exact(), t.m[0][1].is_zero_exact()],
        [t.m[1][0].is_zero_exact(), t.m[1][1].is_zero_exact()],
    ];
    for j in 0..n {
        let bit = 1usize << (n - 1 - j);
        let mut next = vec![Scalar::zero(); cur.len()];
        for x in 0..cur.len() {
            if x & bit != 0 {
                continue;
            }
            let (f0, f1) = (&cur[x], &cur[x | bit]);
            for u in 0..2 {
                let mut acc = Scalar::zero();
                if !zero[u][0] && !f0.is_zero_exact() {
                    acc = &acc + &(&t.m[u][0] * f0);
                }
                if !zero[u][1] && !f1.is_zero_exact() {
                    acc = &acc + &(&t.m[u][1] * f1);
                }
                next[if u == 0 { x } else { x | bit }] = acc;
            }
        }
        cur = next;
    }
    DenseSignature {
        arity: n,
        entries: cur,
    }
}

/// `T^{(x) n} f` on the succinct form: `g_w` is the sum over `k` of `f_k`
/// times the coefficient of `z^k` in `(t00 + t01 z)^(n-w) (t10 + t11 z)^w`.
pub fn apply_transform_symmetric(t: &Transform, f: &SymmetricSignature) -> SymmetricSignature {
    let n = f.arity();
    let poly_mul = |p: &[Scalar], a: &Scalar, b: &Scalar| -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); p.len() + 1];
        for (k, c) in p.iter().enumerate() {
            out[k] = &out[k] + &(c * a);
            out[k + 1] = &out[k + 1] + &(c * b);
        }
        out
    };
    let values = (0..=n)
        .map(|w| {
            let mut p = vec![Scalar::one()];
            for _ in 0..n - w {
                p = poly_mul(&p, &t.m[0][0], &t.m[0][1]);
            }
            for _ in 0..w {
                p = poly_mul(&p, &t.m[1][0], &t.m[1][1]);
            }
            p.iter()
                .zip(&f.values)
                .fold(Scalar::zero(), |acc, (c, v)| &acc + &(c * v))
        })
        .collect();
    SymmetricSignature { values }
}

/// Row-vector action `f T^{(x) n}`, i.e. `(T^t)^{(x) n} f`.
pub fn apply_transform_row(f: &DenseSignature, t: &Transform) -> DenseSignature {
    apply_transform(&t.transpose(), f)
}

/// `f-hat = Z'^{(x) n} f`.
pub fn hat_transform(f: &DenseSignature) -> DenseSignature {
    apply_transform(&Transform::z_prime(), f)
}

/// Signature matrix of an arity-4 signature: row `(x1 x2)`, column
/// `(x4 x3)`.
pub fn signature_matrix(f: &DenseSignature) -> [[Scalar; 4]; 4] {
    assert_eq!(f.arity, 4, "signature matrices need arity 4");
    std::array::from_fn(|r| {
        std::array::from_fn(|c| {
            let (x1, x2) = (r >> 1, r & 1);
            let (x4, x3) = (c >> 1, c & 1);
            f.entries[(x1 << 3) | (x2 << 2) | (x3 << 1) | x4].clone()
        })
    })
}

/// Inverse of [`signature_matrix`].
pub fn from_signature_matrix(m: &[[Scalar; 4]; 4]) -> DenseSignature {
    let entries = (0..16)
        .map(|x: usize| {
            let (x1, x2, x3, x4) = (x >> 3 & 1, x >> 2 & 1, x >> 1 & 1, x & 1);
            m[2 * x1 + x2][2 * x4 + x3].clone()
        })
        .collect();
    DenseSignature { arity: 4, entries }
}

/// Unary factors `u_1, ..., u_n` with `f = u_1 (x) ... (x) u_n`, if `f` is
/// degenerate. The zero signature factors as zero unaries.
pub fn is_degenerate(f: &DenseSignature) -> Result<Option<Vec<[Scalar; 2]>>, ScalarError> {
    let n = f.arity;
    let Some(x0) = f.first_nonzero()? else {
        return Ok(Some(vec![[Scalar::zero(), Scalar::zero()]; n]));
    };
    let pivot = &f.entries[x0];
    let inv = pivot.try_inv()?;
    let mut units = Vec::with_capacity(n);
    for j in 0..n {
        let bit = 1usize << (n - 1 - j);
        let lo = &f.entries[x0 & !bit];
        let hi = &f.entries[x0 | bit];
        units.push(if j == 0 {
            [lo.clone(), hi.clone()]
        } else {
            [lo * &inv, hi * &inv]
        });
    }
    for (x, e) in f.entries.iter().enumerate() {
        let mut prod = Scalar::one();
        for (j, u) in units.iter().enumerate() {
            prod = &prod * &u[(x >> (n - 1 - j)) & 1];
        }
        if !prod.equals(e)? {
            return Ok(None);
        }
    }
    Ok(Some(units))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense(v: &[i64]) -> DenseSignature {
        DenseSignature::from_ints(v)
    }

    fn assert_dense_eq(a: &DenseSignature, b: &DenseSignature) {
        assert!(a.equals(b).unwrap(), "{:?} != {:?}", a.entries, b.entries);
    }

    #[test]
    fn expand_examples() {
        assert_dense_eq(&expand(&SymmetricSignature::from_ints(&[1, 0, 1])), &dense(&[1, 0, 0, 1]));
        assert_dense_eq(
            &expand(&SymmetricSignature::from_ints(&[0, 1, 0, 0])),
            &dense(&[0, 1, 1, 0, 1, 0, 0, 0]),
        );
        assert_dense_eq(
            &expand(&SymmetricSignature::from_ints(&[3, 1, 3, 1])),
            &dense(&[3, 1, 1, 3, 1, 3, 3, 1]),
        );
    }

    #[test]
    fn compress_examples() {
        let s = compress(&dense(&[1, 0, 0, 1])).unwrap().unwrap();
        assert_eq!(s.values().len(), 3);
        assert!(compress(&dense(&[3, 1, -1, -3, -1, -3, 3, 1])).unwrap().is_none());
        let z = compress(&dense(&[0, 0, 0, 0])).unwrap().unwrap();
        assert!(z.is_zero().unwrap() && z.arity() == 2);
    }

    #[test]
    fn transform_examples() {
        let f = dense(&[1, 0, 0, 1]);
        assert_dense_eq(&apply_transform(&Transform::identity(), &f), &f);
        assert_dense_eq(&apply_transform(&Transform::z_prime(), &f), &dense(&[0, 2, 2, 0]));
        let e1 = expand(&SymmetricSignature::from_ints(&[0, 1, 0, 0]));
        let flipped = apply_transform(&Transform::from_ints(1, 0, 0, -1), &e1);
        assert_dense_eq(&flipped, &expand(&SymmetricSignature::from_ints(&[0, -1, 0, 0])));
    }

    #[test]
    fn hat_examples() {
        assert_dense_eq(&hat_transform(&dense(&[1, 0, 0, 1])), &dense(&[0, 2, 2, 0]));
        let e = dense(&[1, 0, 0, 0, 0, 0, 0, 0]);
        assert_dense_eq(&hat_transform(&e), &dense(&[1; 8]));
    }

    #[test]
    fn hat_by_definition() {
        // f-hat_u = <v_u, f> with v_0 = (1, i), v_1 = (1, -i)
        let f = expand(&SymmetricSignature::from_ints(&[1, 0, -1, 0]));
        let hat = hat_transform(&f);
        let v = |u: usize, x: usize| {
            if x == 0 {
                Scalar::one()
            } else if u == 0 {
                Scalar::i()
            } else {
                -Scalar::i()
            }
        };
        for u in 0..8usize {
            let mut acc = Scalar::zero();
            for x in 0..8usize {
                let mut w = f.entry(x).clone();
                for j in 0..3 {
                    w = &w * &v((u >> j) & 1, (x >> j) & 1);
                }
                acc = &acc + &w;
            }
            assert!(acc.equals(hat.entry(u)).unwrap());
        }
        // (1,i)^{(x)3} contributes only at u = 000
        assert!(hat.entry(0).equals(&Scalar::from(4)).unwrap());
        assert!(hat.entry(7).equals(&Scalar::from(4)).unwrap());
    }

    #[test]
    fn signature_matrix_examples() {
        let f = expand(&SymmetricSignature::from_ints(&[0, 0, 1, 0, 0]));
        let m = signature_matrix(&f);
        let expected = [[0, 0, 0, 1], [0, 1, 1, 0], [0, 1, 1, 0], [1, 0, 0, 0]];
        for r in 0..4 {
            for c in 0..4 {
                assert!(m[r][c].equals(&Scalar::from(expected[r][c])).unwrap());
            }
        }
        let mut e = vec![0; 16];
        e[1] = 1;
        let m = signature_matrix(&dense(&e));
        for r in 0..4 {
            for c in 0..4 {
                let want = if (r, c) == (0, 2) { 1 } else { 0 };
                assert!(m[r][c].equals(&Scalar::from(want)).unwrap());
            }
        }
        assert_dense_eq(&from_signature_matrix(&m), &dense(&e));
    }

    #[test]
    fn degeneracy_examples() {
        let u = is_degenerate(&dense(&[1, 0, 0, 0])).unwrap().unwrap();
        assert_eq!(u.len(), 2);
        for v in &u {
            assert!(v[0].equals(&Scalar::one()).unwrap() && v[1].is_zero().unwrap());
        }
        assert!(is_degenerate(&dense(&[1, 0, 0, 1])).unwrap().is_none());
        assert!(is_degenerate(&dense(&[3, 1, 1, 3, 1, 3, 3, 1])).unwrap().is_none());
        assert!(is_degenerate(&dense(&[2, 6, 1, 3])).unwrap().is_some());
    }

    #[test]
    fn constants() {
        assert!(Transform::h2().is_orthogonal().unwrap());
        assert!(Transform::z_prime().det().equals(&(-Scalar::i() * Scalar::from(2))).unwrap());
        let zi = Transform::z().inverse().unwrap();
        assert!(Transform::z().mul(&zi).equals(&Transform::identity()).unwrap());
        let r = Transform::rotation(Scalar::rational(3, 5), Scalar::rational(4, 5));
        assert!(r.is_orthogonal().unwrap());
        assert!(r.m[1][0].equals(&Scalar::rational(-4, 5)).unwrap());
    }

    #[test]
    fn permute_moves_variables() {
        // f(x1,x2) = [x1 = 1 and x2 = 0]
        let f = dense(&[0, 0, 1, 0]);
        let g = f.permute(&[1, 0]);
        assert_dense_eq(&g, &dense(&[0, 1, 0, 0]));
    }
}
