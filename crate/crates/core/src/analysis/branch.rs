use num_rational::Rational64;
use serde::Serialize;

use crate::dynamics::{
    compute_orbit, restriction_failures, restriction_on_orbit, width_of, Configuration, Orbit, RestrictionMode,
    SubgraphWindow,
};
use crate::graph::{Graph, Star};

use super::sweep::one_branch_budget;
use super::{ratio_str, AnalysisError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ClaimOutcome {
    pub pass: bool,
    /// Earliest time at which the claim is seen to fail.
    pub failed_at: Option<usize>,
}

impl ClaimOutcome {
    fn from_failure(failed_at: Option<usize>) -> Self {
        ClaimOutcome { pass: failed_at.is_none(), failed_at }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BranchWidthReport {
    pub branch: Star,
    pub n: u32,
    pub initial_width: u32,
    /// First time the center trails every leaf by less than half a turn.
    pub r: Option<usize>,
    pub r_bound: usize,
    pub claim_i: ClaimOutcome,
    pub claim_ii: ClaimOutcome,
    pub claim_iii: ClaimOutcome,
    pub pass: bool,
}

fn check_branch(g: &Graph, branch: &Star) -> Result<(), AnalysisError> {
    branch.validate(g).map_err(AnalysisError::InvalidBranch)?;
    if !branch.is_branch() {
        return Err(AnalysisError::InvalidBranch("star has no root".into()));
    }
    Ok(())
}

fn branch_width(n: u32, x: &[u32], branch: &Star) -> u32 {
    width_of(n, branch.vertices().into_iter().map(|u| x[u]))
}

/// Every leaf sits less than half a turn ahead of (or level with) the center.
fn center_at_tail(n: u32, x: &[u32], branch: &Star) -> bool {
    let c = x[branch.center];
    branch.leaves.iter().all(|&l| 2 * ((x[l] + n - c) % n) < n)
}

/// Checks the three branch-width claims along the orbit of `x0`.
pub fn verify_branch_width(g: &Graph, branch: &Star, x0: &Configuration) -> Result<BranchWidthReport, AnalysisError> {
    check_branch(g, branch)?;
    let n = x0.n();
    let w0 = branch_width(n, x0.states(), branch);
    if 2 * w0 + 2 >= n {
        return Err(AnalysisError::WidthPrecondition { width: w0, n });
    }
    let orbit = compute_orbit(g, x0, None)?;
    orbit.ensure_closed()?;
    Ok(branch_claims(g, branch, &orbit, w0))
}

fn branch_claims(g: &Graph, branch: &Star, orbit: &Orbit, w0: u32) -> BranchWidthReport {
    let n = orbit.n();
    let horizon = orbit.trajectory().len();
    let r_bound = n as usize * (w0 as usize + 1);
    let r = (0..horizon).find(|&t| center_at_tail(n, orbit.states_at(t), branch));

    let claim_i = match r {
        None => ClaimOutcome::from_failure(Some(horizon)),
        Some(r) if r > r_bound || branch_width(n, orbit.states_at(r), branch) > w0 => {
            ClaimOutcome::from_failure(Some(r))
        }
        Some(_) => ClaimOutcome::from_failure(None),
    };

    // Beyond ρ+π every state repeats, so one extra period covers all t ≥ r.
    let claim_ii = match r {
        None => ClaimOutcome::from_failure(Some(horizon)),
        Some(r) => {
            let end = r.max(orbit.transient()) + orbit.period();
            let lost_tail = (r..end).find(|&t| !center_at_tail(n, orbit.states_at(t), branch));
            let too_wide = (0..horizon).find(|&t| branch_width(n, orbit.states_at(t), branch) > w0 + 1);
            ClaimOutcome::from_failure(match (lost_tail, too_wide) {
                (Some(a), Some(b)) => Some(a.min(b)),
                (a, b) => a.or(b),
            })
        }
    };

    let claim_iii = match r {
        None => ClaimOutcome::from_failure(Some(horizon)),
        Some(r) => {
            let window = SubgraphWindow::complement(g, &branch.leaves).expect("center survives");
            let failures = restriction_failures(orbit, &window).expect("closed orbit");
            // failures on the cycle recur at every later period
            let late = failures.iter().copied().find(|&t| t >= r || t >= orbit.transient());
            ClaimOutcome::from_failure(late)
        }
    };

    BranchWidthReport {
        branch: branch.clone(),
        n,
        initial_width: w0,
        r,
        r_bound,
        pass: claim_i.pass && claim_ii.pass && claim_iii.pass,
        claim_i,
        claim_ii,
        claim_iii,
    }
}

/// Eventual restriction to `G - leaf` for a 1-branch, measured against
/// `n²/2 + 2n - 2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OneBranchReport {
    pub branch: Star,
    pub n: u32,
    pub restricts_eventually: bool,
    pub r: Option<usize>,
    #[serde(serialize_with = "ratio_str")]
    pub bound: Rational64,
    pub within_bound: bool,
}

pub fn one_branch_pruning(g: &Graph, branch: &Star, x0: &Configuration) -> Result<OneBranchReport, AnalysisError> {
    check_branch(g, branch)?;
    if branch.leaves.len() != 1 {
        return Err(AnalysisError::InvalidBranch(format!("{} leaves, expected 1", branch.leaves.len())));
    }
    let n = x0.n();
    let orbit = compute_orbit(g, x0, None)?;
    let window = SubgraphWindow::complement(g, &branch.leaves)?;
    let res = restriction_on_orbit(&orbit, &window, RestrictionMode::Eventually)?;
    let bound = one_branch_budget(n);
    Ok(OneBranchReport {
        branch: branch.clone(),
        n,
        restricts_eventually: res.holds,
        r: res.r,
        within_bound: res.r.is_some_and(|r| Rational64::from_integer(r as i64) <= bound),
        bound,
    })
}
