//! Candidate rotations shared by the affine and product searches.

use crate::scalars::{Cyclotomic, Scalar, ScalarError, Undecided};
use crate::signatures::{DenseSignature, Transform};
use rayon::prelude::*;

/// Which root of which equation produced a candidate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Provenance {
    /// Power of `i` (plain search) or ratio index (alpha search).
    pub r: usize,
    pub root: usize,
}

/// A rotation `H` with `H f` in the target class.
#[derive(Clone, Debug)]
pub struct Candidate {
    pub transform: Transform,
    pub provenance: Provenance,
}

#[derive(Clone, Debug)]
pub enum CandidateSet {
    /// `f` is fixed up to scale by every rotation.
    Invariant,
    /// Verified candidates out of `raw` solutions; `undecided` counts
    /// candidates whose check could not be settled.
    List {
        raw: usize,
        candidates: Vec<Candidate>,
        undecided: usize,
    },
    /// The alpha enumeration would exceed the cap.
    CapExceeded { required: u64, cap: u64 },
}

impl CandidateSet {
    pub fn candidates(&self) -> &[Candidate] {
        match self {
            CandidateSet::List { candidates, .. } => candidates,
            _ => &[],
        }
    }
}

/// `[[a, b], [-b, a]]` with `a + bi = mu`, given `mu^k = v`.
pub fn rotation_from_mu(mu: &Scalar, k: u32, v: &Cyclotomic) -> Transform {
    let v_inv = v.inv().expect("nonzero radicand");
    let mu_inv = &mu.pow(k - 1) * &Scalar::from(v_inv);
    let half = Scalar::rational(1, 2);
    let a = &(mu + &mu_inv) * &half;
    let b = &(&(mu - &mu_inv) * &half) * &Scalar::i_pow(3);
    Transform::rotation(a, b)
}

/// Pivots of the rotation search: the lexicographically first support point
/// of minimal weight and the first of the next weight present.
pub fn hat_pivots(hat: &DenseSignature) -> Result<Option<(usize, usize)>, Undecided> {
    let support = hat.support()?;
    let Some(w1) = support.iter().map(|u| u.count_ones()).min() else {
        return Ok(None);
    };
    let Some(w2) = support.iter().map(|u| u.count_ones()).filter(|&w| w > w1).min() else {
        return Ok(None);
    };
    Ok(first_of_weight(&support, w1).zip(first_of_weight(&support, w2)))
}

/// Like `hat_pivots`, but the second pivot must have weight exactly `gap`
/// above the first.
pub fn hat_pivots_with_gap(hat: &DenseSignature, gap: u32) -> Result<Option<(usize, usize)>, Undecided> {
    let support = hat.support()?;
    let Some(w1) = support.iter().map(|u| u.count_ones()).min() else {
        return Ok(None);
    };
    Ok(first_of_weight(&support, w1).zip(first_of_weight(&support, w1 + gap)))
}

fn first_of_weight(support: &[usize], w: u32) -> Option<usize> {
    support.iter().copied().find(|u| u.count_ones() == w)
}

pub enum Check {
    Pass,
    Fail,
    Undecided,
}

impl Check {
    pub fn of<T>(r: Result<Option<T>, ScalarError>) -> Check {
        match r {
            Ok(Some(_)) => Check::Pass,
            Ok(None) => Check::Fail,
            Err(_) => Check::Undecided,
        }
    }
}

/// Verifies raw candidates in parallel and keeps the ones that pass, in
/// input order.
pub fn verify_candidates(
    raw: Vec<Candidate>,
    check: impl Fn(&Transform) -> Check + Sync,
) -> CandidateSet {
    let total = raw.len();
    let checks: Vec<Check> = raw.par_iter().map(|c| check(&c.transform)).collect();
    let mut candidates = Vec::new();
    let mut undecided = 0;
    for (c, r) in raw.into_iter().zip(checks) {
        match r {
            Check::Pass => candidates.push(c),
            Check::Fail => {}
            Check::Undecided => undecided += 1,
        }
    }
    CandidateSet::List {
        raw: total,
        candidates,
        undecided,
    }
}
