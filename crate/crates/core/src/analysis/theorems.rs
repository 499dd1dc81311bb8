use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dynamics::{compute_orbit, ConfigSpace, Configuration, Orbit};
use crate::graph::{canonical_tree_code, non_isomorphic_trees, Graph, GraphJson};

use super::sweep::{is_n_synchronizing, sweep_orbits};
use super::AnalysisError;

/// One tree of a degree-criterion sweep.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TreeRow {
    pub id: usize,
    pub code: String,
    pub graph: GraphJson,
    pub max_degree: usize,
    pub is_n_synchronizing: bool,
    pub max_sync_time: Option<usize>,
    pub witness: Option<Configuration>,
    /// `is_n_synchronizing == (max_degree < n)`.
    pub agrees: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TreeTheoremReport {
    pub n: u32,
    pub max_vertices: usize,
    pub rows: Vec<TreeRow>,
    pub exceptions: usize,
    pub inhibitory_violations: u64,
    pub pass: bool,
}

impl TreeTheoremReport {
    /// `tree id, vertices, n, maxdeg, verdict, max_sync_time` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("tree_id,vertices,code,n,max_degree,n_synchronizing,agrees,max_sync_time\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                r.id,
                r.graph.vertices,
                r.code,
                self.n,
                r.max_degree,
                r.is_n_synchronizing,
                r.agrees,
                r.max_sync_time.map(|t| t.to_string()).unwrap_or_default()
            ));
        }
        out
    }
}

/// Checks `n`-synchronization against `maxdeg < n` on every tree with at
/// most `max_vertices` vertices, up to isomorphism.
pub fn verify_tree_theorem(n: u32, max_vertices: usize, budget: u64) -> Result<TreeTheoremReport, AnalysisError> {
    let trees = non_isomorphic_trees(max_vertices);
    let mut rows = Vec::with_capacity(trees.len());
    let mut violations = 0;
    for (id, t) in trees.iter().enumerate() {
        let report = is_n_synchronizing(t, n, budget)?;
        violations += report.inhibitory_violations;
        let max_degree = t.max_degree();
        rows.push(TreeRow {
            id,
            code: canonical_tree_code(t),
            graph: GraphJson::from(t),
            max_degree,
            is_n_synchronizing: report.is_n_synchronizing,
            max_sync_time: report.max_sync_time,
            witness: report.witness,
            agrees: report.is_n_synchronizing == (max_degree < n as usize),
        });
    }
    let exceptions = rows.iter().filter(|r| !r.agrees).count();
    Ok(TreeTheoremReport {
        n,
        max_vertices,
        rows,
        exceptions,
        inhibitory_violations: violations,
        pass: exceptions == 0,
    })
}

/// Sweep of "synchronizes iff every vertex blinks in the limit cycle".
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlinkingReport {
    pub graph: GraphJson,
    pub n: u32,
    pub configs_checked: u64,
    pub synchronizing: u64,
    /// Orbits where every vertex blinks in-cycle.
    pub all_blinking: u64,
    /// Orbits violating the equivalence.
    pub exceptions: u64,
    /// Least configuration with every vertex blinking and no synchrony.
    pub all_blinking_witness: Option<Configuration>,
    /// Least configuration with some vertex that stops blinking.
    pub silent_vertex_witness: Option<Configuration>,
    pub inhibitory_violations: u64,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, Default)]
struct BlinkTally {
    checked: u64,
    sync: u64,
    all_blink: u64,
    exceptions: u64,
    all_blink_witness: Option<u64>,
    silent_witness: Option<u64>,
    violations: u64,
}

fn min_opt(a: Option<u64>, b: Option<u64>) -> Option<u64> {
    match (a, b) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    }
}

impl BlinkTally {
    fn observe(i: u64, orbit: &Orbit) -> Self {
        let sync = orbit.synchronizes();
        let all = orbit.all_blink_infinitely().expect("closed orbit");
        BlinkTally {
            checked: 1,
            sync: sync as u64,
            all_blink: all as u64,
            exceptions: (sync != all) as u64,
            all_blink_witness: (all && !sync).then_some(i),
            silent_witness: (!all).then_some(i),
            violations: orbit.inhibitory_violations().len() as u64,
        }
    }

    fn merge(self, o: Self) -> Self {
        BlinkTally {
            checked: self.checked + o.checked,
            sync: self.sync + o.sync,
            all_blink: self.all_blink + o.all_blink,
            exceptions: self.exceptions + o.exceptions,
            all_blink_witness: min_opt(self.all_blink_witness, o.all_blink_witness),
            silent_witness: min_opt(self.silent_witness, o.silent_witness),
            violations: self.violations + o.violations,
        }
    }
}

pub fn verify_blinking_theorem(n: u32, tree: &Graph, budget: u64) -> Result<BlinkingReport, AnalysisError> {
    if !tree.is_tree() {
        return Err(AnalysisError::NotATree);
    }
    let tally = sweep_orbits(tree, n, budget, BlinkTally::observe, BlinkTally::merge)?;
    let space = ConfigSpace::new(n, tree.vertex_count())?;
    Ok(BlinkingReport {
        graph: GraphJson::from(tree),
        n,
        configs_checked: tally.checked,
        synchronizing: tally.sync,
        all_blinking: tally.all_blink,
        exceptions: tally.exceptions,
        all_blinking_witness: tally.all_blink_witness.map(|i| space.nth(i)),
        silent_vertex_witness: tally.silent_witness.map(|i| space.nth(i)),
        inhibitory_violations: tally.violations,
        pass: tally.exceptions == 0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DegreeLemmaMode {
    Exhaustive { budget: u64 },
    Sampled { samples: u64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeLemmaReport {
    pub graph: GraphJson,
    pub n: u32,
    pub vertex: usize,
    pub degree: usize,
    pub mode: DegreeLemmaMode,
    pub configs_checked: u64,
    pub failures: u64,
    /// Least (exhaustive) or first sampled configuration where the vertex
    /// stops blinking.
    pub witness: Option<Configuration>,
    pub inhibitory_violations: u64,
    pub pass: bool,
}

/// Checks that a vertex of degree below `n` blinks in every limit cycle.
pub fn verify_degree_lemma(
    g: &Graph,
    n: u32,
    u: usize,
    mode: DegreeLemmaMode,
) -> Result<DegreeLemmaReport, AnalysisError> {
    g.check_vertex(u)?;
    let degree = g.degree(u);
    if degree >= n as usize {
        return Err(AnalysisError::DegreePrecondition { vertex: u, degree, n });
    }
    let space = ConfigSpace::new(n, g.vertex_count())?;
    let blinks = |orbit: &Orbit| orbit.blinks_infinitely(u).expect("closed orbit");
    let pulls = |orbit: &Orbit| orbit.inhibitory_violations().len() as u64;
    let (checked, failures, witness, inhibitory) = match mode {
        DegreeLemmaMode::Exhaustive { budget } => {
            let (checked, failures, witness, inhibitory) = sweep_orbits(
                g,
                n,
                budget,
                |i, orbit| (1u64, !blinks(orbit) as u64, (!blinks(orbit)).then_some(i), pulls(orbit)),
                |a, b| (a.0 + b.0, a.1 + b.1, min_opt(a.2, b.2), a.3 + b.3),
            )?;
            (checked, failures, witness.map(|i| space.nth(i)), inhibitory)
        }
        DegreeLemmaMode::Sampled { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut failures = 0;
            let mut witness = None;
            let mut inhibitory = 0;
            for _ in 0..samples {
                let states = (0..g.vertex_count()).map(|_| rng.random_range(0..n)).collect();
                let x0 = Configuration::new(n, states)?;
                let orbit = compute_orbit(g, &x0, None)?;
                orbit.ensure_closed()?;
                inhibitory += pulls(&orbit);
                if !blinks(&orbit) {
                    failures += 1;
                    witness.get_or_insert(x0);
                }
            }
            (samples, failures, witness, inhibitory)
        }
    };
    Ok(DegreeLemmaReport {
        graph: GraphJson::from(g),
        n,
        vertex: u,
        degree,
        mode,
        configs_checked: checked,
        failures,
        witness,
        inhibitory_violations: inhibitory,
        pass: failures == 0,
    })
}

/// A configuration with initial width below `n/2` that either fails to
/// synchronize or whose width grows at some step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WidthViolation {
    pub configuration: Configuration,
    pub synchronizes: bool,
    /// First `t` with `w(X_{t+1}) > w(X_t)`.
    pub growth_at: Option<usize>,
}

/// Width lemma check on a single orbit; `None` if the lemma does not apply
/// or holds.
pub fn check_width_lemma(orbit: &Orbit) -> Result<Option<WidthViolation>, AnalysisError> {
    orbit.ensure_closed()?;
    let n = orbit.n();
    let w0 = orbit.initial().width(None)?;
    if 2 * w0 >= n {
        return Ok(None);
    }
    let widths: Vec<u32> = (0..=orbit.trajectory().len())
        .map(|t| orbit.configuration(t).width(None).expect("nonempty"))
        .collect();
    let growth_at = widths.windows(2).position(|w| w[1] > w[0]);
    let synchronizes = orbit.synchronizes();
    Ok((!synchronizes || growth_at.is_some()).then(|| WidthViolation {
        configuration: orbit.initial(),
        synchronizes,
        growth_at,
    }))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WidthLemmaReport {
    pub graph: GraphJson,
    pub n: u32,
    pub configs_checked: u64,
    /// Configurations with `w(X_0) < n/2`.
    pub applicable: u64,
    pub violations: u64,
    /// Least violating configuration.
    pub first_violation: Option<WidthViolation>,
    pub inhibitory_violations: u64,
    pub pass: bool,
}

/// Exhaustive width-lemma sweep over every configuration on a connected
/// graph.
pub fn verify_width_lemma(g: &Graph, n: u32, budget: u64) -> Result<WidthLemmaReport, AnalysisError> {
    if !g.is_connected() {
        return Err(AnalysisError::Disconnected);
    }
    type Tally = (u64, u64, u64, Option<(u64, WidthViolation)>, u64);
    let (checked, applicable, violations, first, inhibitory): Tally = sweep_orbits(
        g,
        n,
        budget,
        |i, orbit| {
            let applies = 2 * orbit.initial().width(None).expect("nonempty") < n;
            let v = check_width_lemma(orbit).expect("closed orbit");
            let pulls = orbit.inhibitory_violations().len() as u64;
            (1, applies as u64, v.is_some() as u64, v.map(|v| (i, v)), pulls)
        },
        |a, b| {
            let first = match (a.3, b.3) {
                (Some(x), Some(y)) => Some(if x.0 <= y.0 { x } else { y }),
                (x, y) => x.or(y),
            };
            (a.0 + b.0, a.1 + b.1, a.2 + b.2, first, a.4 + b.4)
        },
    )?;
    Ok(WidthLemmaReport {
        graph: GraphJson::from(g),
        n,
        configs_checked: checked,
        applicable,
        violations,
        first_violation: first.map(|f| f.1),
        inhibitory_violations: inhibitory,
        pass: violations == 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::high_degree_tree;

    const BUDGET: u64 = 10_000_000;

    #[test]
    fn degree_criterion_small() {
        let r = verify_tree_theorem(3, 5, BUDGET).unwrap();
        assert!(r.pass);
        assert_eq!(r.rows.len(), 1 + 1 + 1 + 2 + 3);
        for row in &r.rows {
            assert_eq!(row.is_n_synchronizing, row.max_degree < 3);
        }
        assert!(r.to_csv().lines().count() == r.rows.len() + 1);
    }

    #[test]
    fn stars_at_their_degree_fail() {
        for n in 3..=5u32 {
            let s = is_n_synchronizing(&Graph::star(n as usize).unwrap(), n, BUDGET).unwrap();
            assert!(!s.is_n_synchronizing, "star({n})");
        }
    }

    #[test]
    fn blinking_equivalence_on_path() {
        let r = verify_blinking_theorem(5, &Graph::path(4).unwrap(), BUDGET).unwrap();
        assert!(r.pass);
        assert_eq!(r.configs_checked, 625);
        assert_eq!(r.synchronizing, 625);
        assert!(matches!(verify_blinking_theorem(5, &Graph::complete(3).unwrap(), BUDGET), Err(AnalysisError::NotATree)));
    }

    #[test]
    fn high_degree_star_has_silent_center() {
        let r = verify_blinking_theorem(6, &Graph::star(6).unwrap(), BUDGET).unwrap();
        assert!(r.silent_vertex_witness.is_some());
        assert!(r.synchronizing < r.configs_checked);
        let ce = high_degree_tree(&Graph::star(6).unwrap(), 6).unwrap();
        let orbit = compute_orbit(&ce.graph, &ce.configuration, None).unwrap();
        assert!(!orbit.blinks_infinitely(0).unwrap());
    }

    #[test]
    fn degree_lemma_cases() {
        let exhaustive = DegreeLemmaMode::Exhaustive { budget: BUDGET };
        let r = verify_degree_lemma(&Graph::star(2).unwrap(), 3, 0, exhaustive).unwrap();
        assert!(r.pass);
        assert_eq!(r.configs_checked, 27);
        assert!(verify_degree_lemma(&Graph::path(5).unwrap(), 4, 2, exhaustive).unwrap().pass);
        assert_eq!(
            verify_degree_lemma(&Graph::star(6).unwrap(), 6, 0, exhaustive),
            Err(AnalysisError::DegreePrecondition { vertex: 0, degree: 6, n: 6 })
        );
        let sampled = DegreeLemmaMode::Sampled { samples: 200, seed: 3 };
        let a = verify_degree_lemma(&Graph::path(9).unwrap(), 6, 4, sampled).unwrap();
        assert!(a.pass);
        assert_eq!(a, verify_degree_lemma(&Graph::path(9).unwrap(), 6, 4, sampled).unwrap());
    }

    #[test]
    fn width_lemma_small_graphs() {
        for g in [Graph::path(3).unwrap(), Graph::complete(3).unwrap(), Graph::star(3).unwrap()] {
            for n in 3..=6 {
                let r = verify_width_lemma(&g, n, BUDGET).unwrap();
                assert!(r.pass, "{:?}", r.first_violation);
                assert!(r.applicable > 0);
            }
        }
    }

    #[test]
    fn width_lemma_flags_wide_nonsync() {
        // K3 at period 5 from [0,2,4] has width 4, so the lemma does not apply
        let g = Graph::complete(3).unwrap();
        let orbit = compute_orbit(&g, &Configuration::new(5, vec![0, 2, 4]).unwrap(), None).unwrap();
        assert_eq!(check_width_lemma(&orbit).unwrap(), None);
    }
}
