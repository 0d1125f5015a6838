//! The product-type class `P`, generated by tensor products of generalized
//! equalities, and its rotated images.

use crate::candidates::{
    hat_pivots_with_gap, rotation_from_mu, verify_candidates, Candidate, CandidateSet, Check, Provenance,
};
use crate::decision::{Blocker, DecideOptions, Decision, Outcome};
use crate::scalars::{kth_roots_with_precision, Scalar, ScalarError, Undecided};
use crate::signatures::{apply_transform, hat_transform, DenseSignature, SignatureSet, Transform};
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ProductError {
    #[error("signature is identically zero")]
    IdenticallyZero,
    #[error("signature is reducible")]
    NotIrreducible,
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

impl From<Undecided> for ProductError {
    fn from(_: Undecided) -> Self {
        ProductError::Scalar(ScalarError::Undecided)
    }
}

/// The three exceptional unary generalized equalities.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnaryTag {
    Zero,
    First,
    Second,
}

#[derive(Clone, Debug)]
pub enum GeneralizedEqualityWitness {
    Unary(UnaryTag),
    /// Support is exactly `{x, complement of x}`.
    Pair {
        x: usize,
        value_at_x: Scalar,
        value_at_complement: Scalar,
    },
}

/// Membership in `E`.
pub fn is_generalized_equality(f: &DenseSignature) -> Result<Option<GeneralizedEqualityWitness>, Undecided> {
    let support = f.support()?;
    let full = (1usize << f.arity()) - 1;
    if f.arity() == 1 && support.len() < 2 {
        let tag = match support.first() {
            None => UnaryTag::Zero,
            Some(0) => UnaryTag::First,
            Some(_) => UnaryTag::Second,
        };
        return Ok(Some(GeneralizedEqualityWitness::Unary(tag)));
    }
    Ok(match support[..] {
        [x, y] if x ^ y == full => Some(GeneralizedEqualityWitness::Pair {
            x,
            value_at_x: f.entry(x).clone(),
            value_at_complement: f.entry(y).clone(),
        }),
        _ => None,
    })
}

/// One irreducible factor on a block of variables.
#[derive(Clone, Debug)]
pub struct Factor {
    /// 1-based variable indices, increasing.
    pub variables: Vec<usize>,
    pub signature: DenseSignature,
}

#[derive(Clone, Debug)]
pub struct Factorization {
    pub arity: usize,
    /// Blocks ordered by their first variable.
    pub factors: Vec<Factor>,
}

impl Factorization {
    /// The tensor product of the factors, in the original variable order.
    pub fn reconstruct(&self) -> DenseSignature {
        let mut order = Vec::new();
        let mut acc: Option<DenseSignature> = None;
        for factor in &self.factors {
            order.extend(factor.variables.iter().map(|v| v - 1));
            acc = Some(match acc {
                None => factor.signature.clone(),
                Some(a) => a.tensor(&factor.signature),
            });
        }
        let acc = acc.expect("at least one factor");
        let mut perm = vec![0; self.arity];
        for (pos, &var) in order.iter().enumerate() {
            perm[var] = pos;
        }
        acc.permute(&perm)
    }

    pub fn is_irreducible(&self) -> bool {
        self.factors.len() == 1
    }
}

/// Splits `f` along the first bipartition whose reshaped matrix has rank at
/// most one: the `2 x 2` minors through the first nonzero entry must vanish.
/// Bipartitions are the blocks containing the first variable, taken in
/// increasing order of the mask over the remaining variables. Blocks are
/// 0-based positions.
pub fn split(f: &DenseSignature) -> Result<Option<(Vec<usize>, DenseSignature, Vec<usize>, DenseSignature)>, ProductError> {
    let n = f.arity();
    let first = f.first_nonzero()?.ok_or(ProductError::IdenticallyZero)?;
    let pivot = f.entry(first);
    for mask in 0..(1usize << (n - 1)) - 1 {
        let block: Vec<usize> = std::iter::once(0)
            .chain((1..n).filter(|&j| mask >> (n - 1 - j) & 1 == 1))
            .collect();
        let others: Vec<usize> = (0..n).filter(|j| !block.contains(j)).collect();
        let sub = |x: usize, vars: &[usize]| vars.iter().fold(0, |a, &p| a << 1 | (x >> (n - 1 - p) & 1));
        let mut index = vec![vec![0; 1 << others.len()]; 1 << block.len()];
        for x in 0..1usize << n {
            index[sub(x, &block)][sub(x, &others)] = x;
        }
        let (p, q) = (sub(first, &block), sub(first, &others));
        let mut rank_one = true;
        'minors: for row in &index {
            for (b, &x) in row.iter().enumerate() {
                if !(f.entry(x) * pivot).equals(&(f.entry(row[q]) * f.entry(index[p][b])))? {
                    rank_one = false;
                    break 'minors;
                }
            }
        }
        if rank_one {
            let inv = pivot.try_inv()?;
            let left = index.iter().map(|row| f.entry(row[q]).clone()).collect();
            let right = index[p].iter().map(|&x| f.entry(x) * &inv).collect();
            return Ok(Some((
                block,
                DenseSignature::from_entries(left).expect("nonempty block"),
                others,
                DenseSignature::from_entries(right).expect("nonempty block"),
            )));
        }
    }
    Ok(None)
}

/// The unique factorization into irreducible factors.
pub fn factor(f: &DenseSignature) -> Result<Factorization, ProductError> {
    let mut factors = Vec::new();
    factor_into(f, &(1..=f.arity()).collect::<Vec<_>>(), &mut factors)?;
    factors.sort_by_key(|fa| fa.variables[0]);
    Ok(Factorization {
        arity: f.arity(),
        factors,
    })
}

fn factor_into(f: &DenseSignature, vars: &[usize], out: &mut Vec<Factor>) -> Result<(), ProductError> {
    if f.arity() >= 2 {
        if let Some((b1, f1, b2, f2)) = split(f)? {
            let v1: Vec<usize> = b1.iter().map(|&p| vars[p]).collect();
            let v2: Vec<usize> = b2.iter().map(|&p| vars[p]).collect();
            factor_into(&f1, &v1, out)?;
            return factor_into(&f2, &v2, out);
        }
    } else if f.is_zero()? {
        return Err(ProductError::IdenticallyZero);
    }
    out.push(Factor {
        variables: vars.to_vec(),
        signature: f.clone(),
    });
    Ok(())
}

/// Membership in `P`.
pub fn is_product_type(f: &DenseSignature) -> Result<bool, ProductError> {
    if f.is_zero()? {
        return Ok(true);
    }
    for fa in factor(f)?.factors {
        if is_generalized_equality(&fa.signature)?.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Membership in `T P`: every irreducible factor pulled back by `T^-1`
/// must be a generalized equality.
pub fn in_transformed_product(f: &DenseSignature, t: &Transform) -> Result<bool, ProductError> {
    if f.is_zero()? {
        return Ok(true);
    }
    let inv = t.inverse()?;
    for fa in factor(f)?.factors {
        if is_generalized_equality(&apply_transform(&inv, &fa.signature))?.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether `f` is a nonzero multiple of `(1,0,0,1)` or `(0,1,-1,0)`.
pub fn is_exceptional_binary(f: &DenseSignature) -> Result<bool, Undecided> {
    if f.arity() != 2 {
        return Ok(false);
    }
    let e = f.entries();
    if e[1].is_zero()? && e[2].is_zero()? && !e[0].is_zero()? {
        return e[0].equals(&e[3]);
    }
    if e[0].is_zero()? && e[3].is_zero()? && !e[1].is_zero()? {
        return e[1].equals(&-&e[2]);
    }
    Ok(false)
}

/// Rotations `H` with `H f` in `E`, for irreducible `f` of arity at least 2.
pub fn so2_candidates_product(f: &DenseSignature, max_precision: u32) -> Result<CandidateSet, ProductError> {
    if f.arity() < 2 || !factor(f)?.is_irreducible() {
        return Err(ProductError::NotIrreducible);
    }
    let raw = raw_product_candidates(f, max_precision)?;
    let Some(raw) = raw else {
        return Ok(if is_exceptional_binary(f)? {
            CandidateSet::Invariant
        } else {
            CandidateSet::List {
                raw: 0,
                candidates: Vec::new(),
                undecided: 0,
            }
        });
    };
    Ok(verify_candidates(raw, |h| {
        match is_generalized_equality(&apply_transform(h, f)) {
            Ok(Some(_)) => Check::Pass,
            Ok(None) => Check::Fail,
            Err(_) => Check::Undecided,
        }
    }))
}

/// The at most eight solutions of `mu^4 = +-f-hat(u1) / f-hat(u2)`, or
/// `None` in the binary case with vanishing even-weight entries. An empty
/// list means the parity law already rules out every rotation.
fn raw_product_candidates(
    f: &DenseSignature,
    max_precision: u32,
) -> Result<Option<Vec<Candidate>>, ProductError> {
    let hat = hat_transform(f);
    for parity in 0..2u32 {
        let mut zero = 0;
        let mut nonzero = 0;
        for (u, e) in hat.entries().iter().enumerate() {
            if u.count_ones() % 2 == parity {
                if e.is_zero()? {
                    zero += 1;
                } else {
                    nonzero += 1;
                }
            }
        }
        if zero > 0 && nonzero > 0 {
            return Ok(Some(Vec::new()));
        }
    }
    let Some((u1, u2)) = hat_pivots_with_gap(&hat, 2)? else {
        return Ok(None);
    };
    let ratio = hat.entry(u1).try_div(hat.entry(u2))?;
    let ratio = ratio.as_cyclotomic().cloned().ok_or(ScalarError::Undecided)?;
    let mut raw = Vec::new();
    for (r, sign) in [1i64, -1].into_iter().enumerate() {
        let v = ratio.scale(&num_rational::BigRational::from_integer(sign.into()));
        for (root, mu) in kth_roots_with_precision(&v, 4, max_precision).iter().enumerate() {
            raw.push(Candidate {
                transform: rotation_from_mu(mu, 4, &v),
                provenance: Provenance { r, root },
            });
        }
    }
    Ok(Some(raw))
}

/// `[[1, 1], [i, -i]]`.
pub fn z_transform() -> Transform {
    Transform::new(Scalar::one(), Scalar::one(), Scalar::i(), -Scalar::i())
}

/// Decides whether `F` lies in `H P` for a rotation `H` or in `Z P`. The
/// witness `W` satisfies `F` within `W P`.
pub fn decide_p_transformable(set: &SignatureSet, opts: &DecideOptions) -> Result<Decision, ProductError> {
    let named = set.named_dense();
    let rotated = decide_rotation_branch(&named, opts)?;
    if rotated.is_yes() {
        return Ok(rotated);
    }
    let z = z_transform();
    let mut blockers = rotated.blockers;
    for (name, f) in &named {
        if !in_transformed_product(f, &z)? {
            blockers.push(Blocker {
                signature: name.clone(),
                reason: "not in Z P".to_string(),
            });
            let mut d = Decision::new(rotated.outcome);
            d.candidates_tested = rotated.candidates_tested;
            d.blockers = blockers;
            return Ok(d);
        }
    }
    let mut d = Decision::yes("ZP", z);
    d.candidates_tested = rotated.candidates_tested;
    Ok(d)
}

fn decide_rotation_branch(
    named: &[(String, DenseSignature)],
    opts: &DecideOptions,
) -> Result<Decision, ProductError> {
    let mut members = Vec::new();
    for (name, f) in named {
        if !f.is_zero()? {
            members.push((name.clone(), f.clone(), factor(f)?));
        }
    }
    let mut all_in_p = true;
    for (_, f, _) in &members {
        if !is_product_type(f)? {
            all_in_p = false;
            break;
        }
    }
    if all_in_p {
        return Ok(Decision::yes("P", Transform::identity()));
    }
    let mut pivot = None;
    'search: for (name, _, fac) in &members {
        for fa in &fac.factors {
            if fa.signature.arity() >= 2 && !is_exceptional_binary(&fa.signature)? {
                pivot = Some((name.clone(), fa.signature.clone()));
                break 'search;
            }
        }
    }
    let Some((pivot_name, pivot_sig)) = pivot else {
        return Ok(Decision::yes("P", Transform::identity()));
    };
    let found = match so2_candidates_product(&pivot_sig, opts.max_precision) {
        Err(ProductError::Scalar(ScalarError::Undecided)) => {
            let mut d = Decision::new(Outcome::Undecided);
            d.blockers.push(Blocker {
                signature: pivot_name,
                reason: "rotation search leaves the cyclotomic field".to_string(),
            });
            return Ok(d);
        }
        other => other?,
    };
    let CandidateSet::List {
        candidates,
        undecided,
        ..
    } = found
    else {
        unreachable!("pivot factor is not exceptional");
    };
    let mut undecided = undecided > 0;
    let results: Vec<Result<bool, ProductError>> = candidates
        .par_iter()
        .map(|c| {
            for (_, f, _) in &members {
                if !is_product_type(&apply_transform(&c.transform, f))? {
                    return Ok(false);
                }
            }
            Ok(true)
        })
        .collect();
    for (idx, (c, r)) in candidates.iter().zip(results).enumerate() {
        match r {
            Ok(true) => {
                let mut d = Decision::yes("P", c.transform.transpose());
                d.candidates_tested = idx + 1;
                return Ok(d);
            }
            Ok(false) => {}
            Err(ProductError::Scalar(_)) => undecided = true,
            Err(e) => return Err(e),
        }
    }
    let mut d = Decision::new(if undecided { Outcome::Undecided } else { Outcome::No });
    d.candidates_tested = candidates.len();
    d.blockers.push(Blocker {
        signature: pivot_name,
        reason: if candidates.is_empty() {
            "no rotation maps its irreducible factor into E".to_string()
        } else {
            format!("none of its {} rotations maps the whole set into P", candidates.len())
        },
    });
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signatures::{expand, from_signature_matrix, SymmetricSignature};

    fn dense(v: &[i64]) -> DenseSignature {
        DenseSignature::from_ints(v)
    }

    fn matrix(m: [[i64; 4]; 4]) -> DenseSignature {
        from_signature_matrix(&m.map(|row| row.map(Scalar::from)))
    }

    fn cycle_cover_g() -> DenseSignature {
        matrix([[0, 0, 0, 1], [0, 1, 0, 0], [0, 0, 1, 0], [1, 0, 0, 0]])
    }

    fn eq3() -> DenseSignature {
        dense(&[1, 0, 0, 0, 0, 0, 0, 1])
    }

    fn z_normalized() -> Transform {
        z_transform().scale(&Scalar::sqrt2().try_inv().unwrap())
    }

    #[test]
    fn generalized_equalities() {
        match is_generalized_equality(&dense(&[1, 0, 0, 5])).unwrap() {
            Some(GeneralizedEqualityWitness::Pair { x, value_at_x, value_at_complement }) => {
                assert_eq!(x, 0);
                assert!(value_at_x.equals(&Scalar::one()).unwrap());
                assert!(value_at_complement.equals(&Scalar::from(5)).unwrap());
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(is_generalized_equality(&dense(&[0, 1, 0, 0])).unwrap().is_none());
        assert!(matches!(
            is_generalized_equality(&dense(&[1, 0])).unwrap(),
            Some(GeneralizedEqualityWitness::Unary(UnaryTag::First))
        ));
        assert!(matches!(
            is_generalized_equality(&dense(&[1, 1])).unwrap(),
            Some(GeneralizedEqualityWitness::Pair { x: 0, .. })
        ));
    }

    #[test]
    fn factor_examples() {
        let fac = factor(&dense(&[1, 0, 0, 0])).unwrap();
        assert_eq!(fac.factors.len(), 2);
        assert_eq!(fac.factors[0].variables, vec![1]);
        assert!(fac.factors[0].signature.equals(&dense(&[1, 0])).unwrap());
        assert!(fac.factors[1].signature.equals(&dense(&[1, 0])).unwrap());

        assert!(factor(&eq3()).unwrap().is_irreducible());

        let fac = factor(&cycle_cover_g()).unwrap();
        let blocks: Vec<_> = fac.factors.iter().map(|f| f.variables.clone()).collect();
        assert_eq!(blocks, vec![vec![1, 3], vec![2, 4]]);
        for f in &fac.factors {
            assert!(is_exceptional_binary(&f.signature).unwrap() || f.signature.equals(&dense(&[0, 1, 1, 0])).unwrap());
            assert!(is_generalized_equality(&f.signature).unwrap().is_some());
        }
        assert!(fac.reconstruct().equals(&cycle_cover_g()).unwrap());
        assert!(matches!(factor(&dense(&[0, 0])), Err(ProductError::IdenticallyZero)));
    }

    #[test]
    fn product_membership() {
        assert!(is_product_type(&cycle_cover_g()).unwrap());
        assert!(is_product_type(&eq3()).unwrap());
        let cover = expand(&SymmetricSignature::from_ints(&[0, 0, 1, 0, 0]));
        assert!(!is_product_type(&cover).unwrap());
    }

    #[test]
    fn transformed_membership() {
        let z = Transform::z();
        let f = apply_transform(&z, &dense(&[0, 1, 1, 0]));
        assert!(in_transformed_product(&f, &z).unwrap());
        let h = dense(&[3, 1, -1, -3, -1, -3, 3, 1]);
        assert!(in_transformed_product(&h, &z_normalized().inverse().unwrap()).unwrap());
        assert!(!in_transformed_product(&h, &z_normalized()).unwrap());
        assert!(!in_transformed_product(&eq3(), &Transform::from_ints(1, 1, 0, 1)).unwrap());
    }

    #[test]
    fn rotation_candidates() {
        assert!(matches!(
            so2_candidates_product(&dense(&[1, 0, 0, 1]), 4096).unwrap(),
            CandidateSet::Invariant
        ));
        match so2_candidates_product(&eq3(), 4096).unwrap() {
            CandidateSet::List { raw, candidates, .. } => {
                assert_eq!(raw, 8);
                assert_eq!(candidates.len(), 4);
            }
            other => panic!("unexpected {other:?}"),
        }
        match so2_candidates_product(&dense(&[0, 1, 1, 0]), 4096).unwrap() {
            CandidateSet::List { raw, candidates, .. } => {
                assert_eq!(raw, 8);
                assert_eq!(candidates.len(), 8);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            so2_candidates_product(&dense(&[1, 0, 0, 0]), 4096),
            Err(ProductError::NotIrreducible)
        ));
    }

    #[test]
    fn set_decisions() {
        let opts = DecideOptions::default();
        let d = decide_p_transformable(&SignatureSet::from_dense(vec![cycle_cover_g()]), &opts).unwrap();
        assert_eq!(d.outcome, Outcome::Yes);
        assert!(d.witness.unwrap().equals(&Transform::identity()).unwrap());

        let h = dense(&[3, 1, -1, -3, -1, -3, 3, 1]);
        let d = decide_p_transformable(&SignatureSet::from_dense(vec![h.clone()]), &opts).unwrap();
        assert_eq!(d.outcome, Outcome::Yes);
        let back = d.witness.unwrap().inverse().unwrap();
        assert!(is_product_type(&apply_transform(&back, &h)).unwrap());

        let z = z_transform();
        let twisted = vec![
            apply_transform(&z, &dense(&[1, 0, 0, 0, 0, 0, 0, 2])),
            apply_transform(&z, &dense(&[0, 3, 1, 0])),
        ];
        let d = decide_p_transformable(&SignatureSet::from_dense(twisted), &opts).unwrap();
        assert_eq!(d.outcome, Outcome::Yes);
        assert_eq!(d.branch.as_deref(), Some("ZP"));

        let cover = expand(&SymmetricSignature::from_ints(&[0, 0, 1, 0, 0]));
        let d = decide_p_transformable(&SignatureSet::from_dense(vec![cover]), &opts).unwrap();
        assert_eq!(d.outcome, Outcome::No);
    }
}
