use serde::Serialize;

use crate::dynamics::{ConfigSpace, Configuration, Orbit};
use crate::graph::{Graph, Star};

use super::irreducible::irreducibility_of_orbit;
use super::sweep::sweep_orbits;
use super::AnalysisError;

/// Standard states on a star when its center blinks.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct StarPattern {
    pub center: u32,
    /// Sorted.
    pub leaves: Vec<u32>,
}

impl StarPattern {
    pub fn of(x: &[u32], star: &Star) -> Self {
        let mut leaves: Vec<u32> = star.leaves.iter().map(|&l| x[l]).collect();
        leaves.sort_unstable();
        StarPattern { center: x[star.center], leaves }
    }
}

/// The eight-step limit-cycle dynamic of a 2-branch and its root at period
/// 4, as `(center, sorted leaves, root)`; `None` leaves the root free.
pub const FOUR_BRANCH_CYCLE: [(u32, [u32; 2], Option<u32>); 8] = [
    (1, [0, 1], Some(3)),
    (2, [1, 2], Some(3)),
    (2, [2, 3], Some(0)),
    (3, [0, 3], Some(1)),
    (3, [0, 1], Some(2)),
    (3, [1, 2], None),
    (3, [2, 3], None),
    (0, [0, 3], None),
];

/// Distinct star patterns seen at in-cycle blinks of each star's center.
pub fn recurrent_star_patterns(g: &Graph, orbit: &Orbit) -> Result<Vec<(Star, Vec<StarPattern>)>, AnalysisError> {
    orbit.ensure_closed()?;
    let window = orbit.cycle_window();
    Ok(g.find_stars_and_branches()
        .into_iter()
        .map(|star| {
            let mut pats: Vec<StarPattern> = orbit.blink_times()[star.center]
                .iter()
                .filter(|t| window.contains(t))
                .map(|&t| StarPattern::of(orbit.states_at(t), &star))
                .collect();
            pats.sort_unstable();
            pats.dedup();
            (star, pats)
        })
        .collect())
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Whether the limit cycle on a 2-branch and its root at period 4 runs
/// through [`FOUR_BRANCH_CYCLE`] up to a cyclic shift.
pub fn matches_branch_cycle(orbit: &Orbit, branch: &Star) -> Result<bool, AnalysisError> {
    orbit.ensure_closed()?;
    let Some(root) = branch.root else {
        return Err(AnalysisError::InvalidBranch("star has no root".into()));
    };
    if orbit.n() != 4 || branch.leaves.len() != 2 {
        return Ok(false);
    }
    let start = orbit.transient();
    let span = orbit.period() / gcd(orbit.period(), 8) * 8;
    let matches_at = |shift: usize| {
        (0..span).all(|i| {
            let x = orbit.states_at(start + i);
            let (c, leaves, r) = FOUR_BRANCH_CYCLE[(i + shift) % 8];
            let p = StarPattern::of(x, branch);
            p.center == c && p.leaves == leaves && r.is_none_or(|r| x[root] == r)
        })
    };
    Ok((0..8).any(matches_at))
}

/// Least configurations (at most `limit`) whose orbit never synchronizes,
/// lets every vertex blink in the limit cycle, and is irreducible.
pub fn find_irreducible_all_blinking(
    g: &Graph,
    n: u32,
    budget: u64,
    limit: usize,
) -> Result<Vec<Configuration>, AnalysisError> {
    if g.vertex_count() < 2 || (g.vertex_count() < 63 && 1u64 << g.vertex_count() > budget) {
        return Err(AnalysisError::BudgetExceeded { needed: 1u128 << g.vertex_count().min(127), budget });
    }
    let found: Vec<u64> = sweep_orbits(
        g,
        n,
        budget,
        |i, orbit| {
            let hit = !orbit.synchronizes()
                && orbit.all_blink_infinitely().expect("closed orbit")
                && irreducibility_of_orbit(g, orbit, budget).expect("gated").irreducible;
            if hit {
                vec![i]
            } else {
                Vec::new()
            }
        },
        |mut a, b| {
            a.extend(b);
            a.sort_unstable();
            a.truncate(limit);
            a
        },
    )?;
    let space = ConfigSpace::new(n, g.vertex_count())?;
    Ok(found.into_iter().map(|i| space.nth(i)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{blinking_state, compute_orbit};

    #[test]
    fn sequence_is_consistent_with_the_rule() {
        // Adjacent entries must agree with one step on the branch, given the
        // root state where it is pinned.
        for i in 0..8 {
            let (c, l, r) = FOUR_BRANCH_CYCLE[i];
            let (c2, l2, _) = FOUR_BRANCH_CYCLE[(i + 1) % 8];
            let b = blinking_state(4);
            let leaf_next: Vec<u32> = {
                let mut v: Vec<u32> = l.iter().map(|&s| if s > b && c == b { s } else { (s + 1) % 4 }).collect();
                v.sort_unstable();
                v
            };
            assert_eq!(leaf_next, l2.to_vec(), "leaves at {i}");
            let pulled_by_leaf = c > b && l.contains(&b);
            let pulled_by_root = c > b && r == Some(b);
            if pulled_by_leaf || pulled_by_root {
                assert_eq!(c2, c, "center held at {i}");
            } else if r.is_some() {
                assert_eq!(c2, (c + 1) % 4, "center advances at {i}");
            }
        }
    }

    #[test]
    fn patterns_of_synchronized_orbit() {
        let g = Graph::star(2).unwrap();
        let orbit = compute_orbit(&g, &Configuration::new(4, vec![1, 3, 0]).unwrap(), None).unwrap();
        let pats = recurrent_star_patterns(&g, &orbit).unwrap();
        assert_eq!(pats.len(), 1);
        assert_eq!(pats[0].1, vec![StarPattern { center: 1, leaves: vec![1, 1] }]);
    }

    #[test]
    fn irreducible_search_on_k3() {
        let found = find_irreducible_all_blinking(&Graph::complete(3).unwrap(), 5, 1 << 20, 200).unwrap();
        assert!(found.iter().any(|x| x.states() == [0, 2, 4]));
        assert!(found.len() <= 200);
        assert!(found.windows(2).all(|w| w[0].states() < w[1].states()));
    }
}
