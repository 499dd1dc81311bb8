//! Exhaustive and structural analysis of firefly dynamics.

mod branch;
mod counterexample;
mod irreducible;
mod local;
mod quotient;
mod return_map;
mod sweep;
mod theorems;

pub use branch::{one_branch_pruning, verify_branch_width, BranchWidthReport, ClaimOutcome, OneBranchReport};
pub use counterexample::{
    high_degree_tree, k3_three_states, n7_star_search, Counterexample, CounterexampleKind,
};
pub use irreducible::{irreducibility_of_orbit, is_irreducible, IrreducibilityReport};
pub use local::{
    find_irreducible_all_blinking, matches_branch_cycle, recurrent_star_patterns, StarPattern, FOUR_BRANCH_CYCLE,
};
pub use quotient::{compare_quotient_dynamics, two_state_quotient, Quotient, QuotientCheck};
pub use return_map::{return_map, return_map_of_orbit, LocalClass, LocalSnapshot, ReturnMapReport, SnapshotFlags};
pub use sweep::{
    fig8_configuration, fig8_family, is_n_synchronizing, max_sync_time_path, Fig8Report, PathBoundReport, SyncReport,
};
pub use theorems::{
    check_width_lemma, verify_blinking_theorem, verify_degree_lemma, verify_tree_theorem, verify_width_lemma,
    BlinkingReport, DegreeLemmaMode, DegreeLemmaReport, TreeRow, TreeTheoremReport, WidthLemmaReport,
    WidthViolation,
};

use thiserror::Error;

use crate::dynamics::DynamicsError;
use crate::graph::GraphError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnalysisError {
    #[error("enumeration needs {needed} items but the budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error("graph must be connected")]
    Disconnected,
    #[error("graph must be a tree")]
    NotATree,
    #[error("vertex {vertex} has degree {degree}, not below the period {n}")]
    DegreePrecondition { vertex: usize, degree: usize, n: u32 },
    #[error("branch width {width} is not below n/2 - 1 for n = {n}")]
    WidthPrecondition { width: u32, n: u32 },
    #[error("invalid branch: {0}")]
    InvalidBranch(String),
    #[error("expected exactly two distinct states, found {0}")]
    NotTwoStates(usize),
    #[error("edge ({u}, {v}) joins non-adjacent quotient classes {class_u} and {class_v}")]
    ClassAdjacency { u: usize, v: usize, class_u: usize, class_v: usize },
    #[error("no vertex of degree at least {0}")]
    NoHighDegreeVertex(u32),
    #[error("claimed counterexample does not behave as stated: {0}")]
    Falsified(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// `n^len` if it is within `budget`.
pub(crate) fn gate(n: u32, len: usize, budget: u64) -> Result<u64, AnalysisError> {
    let needed = (n as u128).pow(len as u32);
    if needed > budget as u128 {
        Err(AnalysisError::BudgetExceeded { needed, budget })
    } else {
        Ok(needed as u64)
    }
}

pub(crate) fn ratio_str<S: serde::Serializer>(
    r: &num_rational::Rational64,
    s: S,
) -> Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}
