//! SO_2 candidate searches and the set-level `A`-transformability decider.

use super::{is_affine, is_affine_alpha, is_so2_invariant, so2_candidates_affine_alpha};
use crate::candidates::{hat_pivots, rotation_from_mu, verify_candidates, Candidate, CandidateSet, Check, Provenance};
use crate::decision::{Blocker, DecideOptions, Decision, Outcome};
use crate::scalars::{kth_roots_with_precision, Cyclotomic, ScalarError};
use crate::signatures::{apply_transform, hat_transform, DenseSignature, SignatureSet, Transform};
use rayon::prelude::*;

/// Rotations `H` with `H f` affine: at most `8n` raw solutions of
/// `mu^(2 Delta) = i^r f-hat(u1) / f-hat(u2)`, each verified.
pub fn so2_candidates_affine(f: &DenseSignature, max_precision: u32) -> Result<CandidateSet, ScalarError> {
    if is_so2_invariant(f)? {
        return Ok(CandidateSet::Invariant);
    }
    let raw = raw_affine_candidates(f, max_precision)?;
    Ok(verify_candidates(raw, |h| Check::of(is_affine(&apply_transform(h, f)))))
}

pub(crate) fn raw_affine_candidates(
    f: &DenseSignature,
    max_precision: u32,
) -> Result<Vec<Candidate>, ScalarError> {
    let hat = hat_transform(f);
    let (u1, u2) = hat_pivots(&hat)?.expect("non-invariant signature");
    let delta = u2.count_ones() - u1.count_ones();
    let ratio = hat.entry(u1).try_div(hat.entry(u2))?;
    let ratio = ratio.as_cyclotomic().cloned().ok_or(ScalarError::Undecided)?;
    let k = 2 * delta;
    let mut raw = Vec::new();
    for r in 0..4 {
        let v = &ratio * &Cyclotomic::zeta_power(4, r as i64);
        for (root, mu) in kth_roots_with_precision(&v, k, max_precision).iter().enumerate() {
            raw.push(Candidate {
                transform: rotation_from_mu(mu, k, &v),
                provenance: Provenance { r, root },
            });
        }
    }
    Ok(raw)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Branch {
    Plain,
    Alpha,
}

impl Branch {
    fn name(self) -> &'static str {
        match self {
            Branch::Plain => "A",
            Branch::Alpha => "alphaA",
        }
    }

    fn member(self, f: &DenseSignature) -> Check {
        match self {
            Branch::Plain => Check::of(is_affine(f)),
            Branch::Alpha => Check::of(is_affine_alpha(f)),
        }
    }
}

enum BranchResult {
    Found(Transform, usize),
    NotFound {
        tested: usize,
        undecided: bool,
        blockers: Vec<Blocker>,
    },
    Cap(u64, u64),
}

/// Decides whether `F` lies in `H A` or `H D_alpha A` for a rotation `H`.
/// The witness `W` satisfies `W^T f` in the class for every `f`.
pub fn decide_a_transformable(set: &SignatureSet, opts: &DecideOptions) -> Result<Decision, ScalarError> {
    let named = set.named_dense();
    let mut members = Vec::new();
    for (name, f) in &named {
        if !f.is_zero()? {
            members.push((name.clone(), f.clone()));
        }
    }
    if members.is_empty() {
        return Ok(Decision::yes("A", Transform::identity()));
    }
    let mut tested = 0;
    let mut blockers = Vec::new();
    let mut undecided = false;
    let mut cap = None;
    for branch in [Branch::Plain, Branch::Alpha] {
        match decide_branch(&members, branch, opts)? {
            BranchResult::Found(h, n) => {
                let mut d = Decision::yes(branch.name(), h.transpose());
                d.candidates_tested = tested + n;
                return Ok(d);
            }
            BranchResult::NotFound {
                tested: n,
                undecided: u,
                blockers: b,
            } => {
                tested += n;
                undecided |= u;
                blockers.extend(b);
            }
            BranchResult::Cap(required, c) => {
                cap = Some((required, c));
                blockers.push(Blocker {
                    signature: members[0].0.clone(),
                    reason: format!("alpha search needs {required} profiles, cap is {c}"),
                });
            }
        }
    }
    let outcome = if undecided {
        Outcome::Undecided
    } else if cap.is_some() {
        Outcome::CapExceeded
    } else {
        Outcome::No
    };
    let mut d = Decision::new(outcome);
    d.candidates_tested = tested;
    d.blockers = blockers;
    Ok(d)
}

fn decide_branch(
    members: &[(String, DenseSignature)],
    branch: Branch,
    opts: &DecideOptions,
) -> Result<BranchResult, ScalarError> {
    let mut pivot = None;
    for (idx, (_, f)) in members.iter().enumerate() {
        if !is_so2_invariant(f)? {
            pivot = Some(idx);
            break;
        }
    }
    let Some(p) = pivot else {
        let mut blockers = Vec::new();
        let mut undecided = false;
        for (name, f) in members {
            match branch.member(f) {
                Check::Pass => {}
                Check::Fail => blockers.push(Blocker {
                    signature: name.clone(),
                    reason: format!("invariant and not in {}", branch.name()),
                }),
                Check::Undecided => undecided = true,
            }
        }
        if blockers.is_empty() && !undecided {
            return Ok(BranchResult::Found(Transform::identity(), 0));
        }
        return Ok(BranchResult::NotFound {
            tested: 0,
            undecided,
            blockers,
        });
    };
    let (pivot_name, pivot_sig) = &members[p];
    let found = match branch {
        Branch::Plain => so2_candidates_affine(pivot_sig, opts.max_precision),
        Branch::Alpha => so2_candidates_affine_alpha(pivot_sig, opts.cap, opts.max_precision),
    };
    let set = match found {
        Err(ScalarError::Undecided) => {
            return Ok(BranchResult::NotFound {
                tested: 0,
                undecided: true,
                blockers: vec![Blocker {
                    signature: pivot_name.clone(),
                    reason: "rotation search leaves the cyclotomic field".into(),
                }],
            })
        }
        other => other?,
    };
    let (candidates, mut undecided) = match set {
        CandidateSet::CapExceeded { required, cap } => return Ok(BranchResult::Cap(required, cap)),
        CandidateSet::Invariant => unreachable!("pivot is not invariant"),
        CandidateSet::List {
            candidates,
            undecided,
            ..
        } => (candidates, undecided > 0),
    };
    let results: Vec<(bool, bool)> = candidates
        .par_iter()
        .map(|c| {
            let mut und = false;
            for (idx, (_, f)) in members.iter().enumerate() {
                if idx == p {
                    continue;
                }
                match branch.member(&apply_transform(&c.transform, f)) {
                    Check::Pass => {}
                    Check::Fail => return (false, false),
                    Check::Undecided => und = true,
                }
            }
            (!und, und)
        })
        .collect();
    for (i, (ok, und)) in results.iter().enumerate() {
        if *ok {
            return Ok(BranchResult::Found(candidates[i].transform.clone(), i + 1));
        }
        undecided |= und;
    }
    let reason = if candidates.is_empty() {
        format!("no rotation maps it into {}", branch.name())
    } else {
        format!(
            "none of its {} rotations maps the whole set into {}",
            candidates.len(),
            branch.name()
        )
    };
    Ok(BranchResult::NotFound {
        tested: candidates.len(),
        undecided,
        blockers: vec![Blocker {
            signature: pivot_name.clone(),
            reason,
        }],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signatures::Signature;

    fn dense(v: &[i64]) -> DenseSignature {
        DenseSignature::from_ints(v)
    }

    fn set(sigs: Vec<DenseSignature>) -> SignatureSet {
        SignatureSet::from_dense(sigs)
    }

    #[test]
    fn unary_cube_has_eight_rotations() {
        let f = dense(&[1, 0, 0, 0, 0, 0, 0, 0]);
        match so2_candidates_affine(&f, 4096).unwrap() {
            CandidateSet::List { raw, candidates, undecided } => {
                assert_eq!(raw, 8);
                assert_eq!(candidates.len(), 8);
                assert_eq!(undecided, 0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn equality_is_invariant() {
        assert!(matches!(
            so2_candidates_affine(&dense(&[1, 0, 0, 1]), 4096).unwrap(),
            CandidateSet::Invariant
        ));
    }

    #[test]
    fn equality_and_unary_cube() {
        let d = decide_a_transformable(
            &set(vec![dense(&[1, 0, 0, 1]), dense(&[1, 0, 0, 0, 0, 0, 0, 0])]),
            &DecideOptions::default(),
        )
        .unwrap();
        assert_eq!(d.outcome, Outcome::Yes);
        assert_eq!(d.branch.as_deref(), Some("A"));
        assert!(d.witness.unwrap().equals(&Transform::identity()).unwrap());
    }

    #[test]
    fn entry_two_is_refuted() {
        let d = decide_a_transformable(&set(vec![dense(&[1, 1, 1, 2])]), &DecideOptions::default()).unwrap();
        assert_eq!(d.outcome, Outcome::No);
        assert!(!d.blockers.is_empty());
    }

    #[test]
    fn rotated_affine_set() {
        let h0 = crate::signatures::rational_rotation(&num_rational::BigRational::new(1.into(), 2.into()));
        let sigs = vec![
            apply_transform(&h0, &dense(&[1, 1, 1, -1])),
            apply_transform(&h0, &dense(&[1, 0, 0, 0, 0, 0, 0, 1])),
        ];
        let d = decide_a_transformable(&set(sigs.clone()), &DecideOptions::default()).unwrap();
        assert_eq!(d.outcome, Outcome::Yes);
        let w = d.witness.unwrap().transpose();
        for f in &sigs {
            assert!(is_affine(&apply_transform(&w, f)).unwrap().is_some());
        }
    }

    #[test]
    fn zero_members_are_skipped() {
        let s = SignatureSet::from_signatures(vec![Signature::Dense(dense(&[0, 0]))]);
        let d = decide_a_transformable(&s, &DecideOptions::default()).unwrap();
        assert_eq!(d.outcome, Outcome::Yes);
    }
}
