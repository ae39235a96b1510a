//! Desk-scale verification of the size bounds for intersecting and
//! cross-intersecting families. Each verifier computes the bound exactly,
//! searches for the extremum, and re-validates its witness on its own.

mod cross;
mod intersecting;

use std::fmt;
use std::time::{Duration, Instant};

use serde::{Serialize, Serializer};

use crate::binom::{exact_to_string, Exact};
use crate::family::SetFamily;

pub use cross::{thm4_bound, thm5_cor1_bound, thm5_cor1_window, verify_thm4, verify_thm5_cor1};
pub use intersecting::{
    ekr_bound, hm_bound, hm_family, thm6_bound, thm6_threshold, thm6_witness, verify_ekr, verify_hm, verify_lemma2,
    verify_thm6, Lemma2Options, Thm6Options,
};

/// Why a verifier did not reach a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SkipKind {
    /// The wall-clock budget ran out.
    Budget,
    /// The size window of the statement is empty.
    Vacuous,
    /// The requested case does not apply to these parameters.
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Verified,
    Counterexample,
    Skipped { kind: SkipKind, reason: String },
}

impl Verdict {
    fn skipped(kind: SkipKind, reason: impl Into<String>) -> Verdict {
        Verdict::Skipped {
            kind,
            reason: reason.into(),
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Verified => f.write_str("verified"),
            Verdict::Counterexample => f.write_str("counterexample"),
            Verdict::Skipped { kind, reason } => {
                let tag = match kind {
                    SkipKind::Budget => "budget",
                    SkipKind::Vacuous => "vacuous",
                    SkipKind::NotApplicable => "not applicable",
                };
                write!(f, "skipped({tag}: {reason})")
            }
        }
    }
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A witness family, or a witness cross-intersecting pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Witness {
    Family(SetFamily),
    Pair { f: SetFamily, g: SetFamily },
}

/// The parameters a report was produced for; absent fields are omitted.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct BoundParams {
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "ser_opt_exact")]
    pub u: Option<Exact>,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "ser_opt_exact")]
    pub alpha: Option<Exact>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

fn ser_opt_exact<S: Serializer>(v: &Option<Exact>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.serialize_str(&exact_to_string(v)),
        None => s.serialize_none(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifierReport {
    pub theorem: String,
    pub params: BoundParams,
    pub bound: String,
    /// Best value found by the search, or `"none"` if nothing met the
    /// hypotheses.
    pub extremum: String,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub wall_ms: u128,
    pub notes: Vec<String>,
}

impl VerifierReport {
    pub fn is_verified(&self) -> bool {
        self.verdict == Verdict::Verified
    }

    /// JSON with `wall_ms` zeroed, for comparing repeated runs.
    pub fn canonical_json(&self) -> String {
        let mut copy = self.clone();
        copy.wall_ms = 0;
        serde_json::to_string(&copy).expect("report serializes")
    }
}

/// Start time and deadline of one verifier run.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Clock {
    start: Instant,
    deadline: Instant,
}

impl Clock {
    pub(crate) fn new(budget: Duration) -> Clock {
        let start = Instant::now();
        Clock {
            start,
            deadline: start + budget,
        }
    }

    pub(crate) fn deadline(&self) -> Instant {
        self.deadline
    }

    pub(crate) fn expired(&self) -> bool {
        Instant::now() >= self.deadline
    }

    pub(crate) fn elapsed_ms(&self) -> u128 {
        self.start.elapsed().as_millis()
    }
}

pub(crate) fn exact_str(v: &Exact) -> String {
    exact_to_string(v)
}
