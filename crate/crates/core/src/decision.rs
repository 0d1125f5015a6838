//! Decision reports shared by the set-level deciders.

use crate::scalars::{Radical, DEFAULT_MAX_PRECISION};
use crate::signatures::Transform;
use std::sync::Arc;

/// Final verdict of a decider.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Yes,
    No,
    Undecided,
    HypothesisNotMet,
    CapExceeded,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Yes => "yes",
            Outcome::No => "no",
            Outcome::Undecided => "undecided",
            Outcome::HypothesisNotMet => "hypothesis_not_met",
            Outcome::CapExceeded => "cap_exceeded",
        }
    }
}

/// Why a signature blocked a branch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Blocker {
    pub signature: String,
    pub reason: String,
}

/// Outcome plus witness and diagnostics.
///
/// For a `Yes`, `witness` is a matrix `H` with every signature in
/// `H * target`, where the target class is named by `branch`; membership is
/// re-checked by applying `H^-1`.
#[derive(Clone, Debug)]
pub struct Decision {
    pub outcome: Outcome,
    pub branch: Option<String>,
    pub witness: Option<Transform>,
    pub candidates_tested: usize,
    pub blockers: Vec<Blocker>,
    pub parameters: Vec<(String, String)>,
}

impl Decision {
    pub fn new(outcome: Outcome) -> Self {
        Decision {
            outcome,
            branch: None,
            witness: None,
            candidates_tested: 0,
            blockers: Vec::new(),
            parameters: Vec::new(),
        }
    }

    pub fn yes(branch: &str, witness: Transform) -> Self {
        Decision {
            branch: Some(branch.to_string()),
            witness: Some(witness),
            ..Decision::new(Outcome::Yes)
        }
    }

    pub fn is_yes(&self) -> bool {
        self.outcome == Outcome::Yes
    }

    /// The radical the witness entries live in, if any.
    pub fn witness_radical(&self) -> Option<Arc<Radical>> {
        let w = self.witness.as_ref()?;
        w.m.iter()
            .flatten()
            .find_map(|s| s.radical().cloned())
    }

    pub fn with_parameter(mut self, key: &str, value: impl Into<String>) -> Self {
        self.parameters.push((key.to_string(), value.into()));
        self
    }
}

/// Knobs shared by the deciders.
#[derive(Clone, Copy, Debug)]
pub struct DecideOptions {
    /// Bound on the profile enumeration of the alpha-twisted search.
    pub cap: u64,
    /// Precision ceiling for certified zero tests, in bits.
    pub max_precision: u32,
}

pub const DEFAULT_CAP: u64 = 2_000_000;

impl Default for DecideOptions {
    fn default() -> Self {
        DecideOptions {
            cap: DEFAULT_CAP,
            max_precision: DEFAULT_MAX_PRECISION,
        }
    }
}

/// Re-checks a `Yes` by pulling every member back through the witness and
/// testing membership in the class its branch names: `D_alpha A` for
/// `alphaA`, `P` for branches mentioning `P`, `A` otherwise. `None` for
/// other outcomes.
pub fn verify_witness(set: &crate::signatures::SignatureSet, d: &Decision) -> Result<Option<bool>, crate::scalars::ScalarError> {
    let (Some(w), Some(branch)) = (&d.witness, &d.branch) else {
        return Ok(None);
    };
    let inv = w.inverse()?;
    for f in set.dense() {
        let g = crate::signatures::apply_transform(&inv, &f);
        let ok = if branch == "alphaA" {
            crate::affine::is_affine_alpha(&g)?.is_some()
        } else if branch.contains('P') {
            match crate::product::is_product_type(&g) {
                Ok(b) => b,
                Err(crate::product::ProductError::Scalar(e)) => return Err(e),
                Err(_) => false,
            }
        } else {
            crate::affine::is_affine(&g)?.is_some()
        };
        if !ok {
            return Ok(Some(false));
        }
    }
    Ok(Some(true))
}
