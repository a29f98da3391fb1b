//! Shadowing analysis: bounded searches for shadowing points, checkers for single
//! instances of the path conditions, structural classifiers, and the decision cascade
//! with re-checkable certificates.

mod candidates;
mod classify;
mod conditions;
mod decide;
mod search;
mod symbolic;

pub use candidates::Slot;
pub use classify::{
    classify_ecifs, classify_wandering, find_attractor, AttractorResult, EcifsEvidence, EcifsVerdict, EcifsWitness,
    WanderingCounterexample, WanderingVerdict, WitnessShape,
};
pub use conditions::{
    check_fpc_instance, check_ipc1_instance, check_ipc2_instance, fpc_slots, FailureReport, FpcResult, IpcResult,
    PeriodicFamily,
};
pub use decide::{
    decide_shadowing, expected_verdicts, verify_certificate, verify_wandering, Answer, Certificate, Evidence,
    ExpectedVerdict, Rule, Verdict,
};
pub use search::{search_shadow_point, ShadowSearch};
pub use symbolic::{AbstractEdge, AbstractGraph, Node, RankingEvidence, Trend};

use crate::enumeration::Threshold;
use serde::{Deserialize, Serialize};

/// Limits for every bounded search in this module.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBounds {
    /// Extra positions explored past the chain or constraint sequence.
    pub max_path_len: usize,
    /// Representatives sampled from a family slice whose members are not interchangeable.
    pub max_family_reps: usize,
    /// Largest threshold exponent tried by threshold scans.
    #[serde(with = "crate::enumeration::decimal")]
    pub max_threshold_exp: Threshold,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds {
            max_path_len: 12,
            max_family_reps: 3,
            max_threshold_exp: Threshold::from(64u32),
        }
    }
}

impl SearchBounds {
    pub fn validate(&self) -> crate::Result<()> {
        if self.max_path_len == 0 || self.max_family_reps == 0 || self.max_threshold_exp == Threshold::from(0u32) {
            return Err(crate::Error::precondition("search bounds must all be at least 1"));
        }
        Ok(())
    }
}

/// Nodes expanded by one depth-first search before it reports a non-exhaustive result.
pub(crate) const NODE_BUDGET: usize = 400_000;

#[cfg(test)]
mod tests;
