use serde::Serialize;

use crate::dynamics::{compute_orbit, restriction_on_orbit, Configuration, Orbit, RestrictionMode, SubgraphWindow};
use crate::graph::Graph;

use super::AnalysisError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IrreducibilityReport {
    pub irreducible: bool,
    /// The first reducing vertex set in subset-bitmask order.
    pub reducing_subgraph: Option<Vec<usize>>,
    pub r: Option<usize>,
    pub subgraphs_checked: u64,
}

/// Connected induced proper subgraphs with at least two vertices, as
/// sorted vertex lists in increasing bitmask order.
pub(crate) fn candidate_subgraphs(g: &Graph) -> impl Iterator<Item = Vec<usize>> + '_ {
    let v = g.vertex_count();
    let full = (1u64 << v) - 1;
    (1..full).filter(|m: &u64| m.count_ones() >= 2).filter_map(move |mask| {
        let vs: Vec<usize> = (0..v).filter(|i| mask >> i & 1 == 1).collect();
        let (h, _) = g.induced(&vs).expect("in range");
        h.is_connected().then_some(vs)
    })
}

/// Irreducibility of a computed orbit. Refused when `2^|V|` exceeds `budget`.
pub fn irreducibility_of_orbit(g: &Graph, orbit: &Orbit, budget: u64) -> Result<IrreducibilityReport, AnalysisError> {
    orbit.ensure_closed()?;
    let v = g.vertex_count();
    if v < 2 {
        return Err(AnalysisError::InvalidParameter("irreducibility needs at least two vertices".into()));
    }
    if v >= 63 || 1u64 << v > budget {
        return Err(AnalysisError::BudgetExceeded { needed: 1u128 << v.min(127), budget });
    }
    let mut checked = 0;
    for vs in candidate_subgraphs(g) {
        checked += 1;
        let window = SubgraphWindow::new(g, &vs)?;
        let res = restriction_on_orbit(orbit, &window, RestrictionMode::Eventually)?;
        if res.holds {
            return Ok(IrreducibilityReport {
                irreducible: false,
                reducing_subgraph: Some(vs),
                r: res.r,
                subgraphs_checked: checked,
            });
        }
    }
    Ok(IrreducibilityReport { irreducible: true, reducing_subgraph: None, r: None, subgraphs_checked: checked })
}

pub fn is_irreducible(g: &Graph, x0: &Configuration, budget: u64) -> Result<IrreducibilityReport, AnalysisError> {
    let orbit = compute_orbit(g, x0, None)?;
    irreducibility_of_orbit(g, &orbit, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::ConfigSpace;

    #[test]
    fn candidates_of_path() {
        let g = Graph::path(4).unwrap();
        let c: Vec<_> = candidate_subgraphs(&g).collect();
        assert_eq!(c, vec![vec![0, 1], vec![1, 2], vec![0, 1, 2], vec![2, 3], vec![1, 2, 3]]);
        assert_eq!(candidate_subgraphs(&Graph::complete(4).unwrap()).count(), 6 + 4);
    }

    #[test]
    fn constant_is_reducible_at_zero() {
        let g = Graph::cycle(4).unwrap();
        let r = is_irreducible(&g, &Configuration::constant(5, 4, 1).unwrap(), 1 << 10).unwrap();
        assert!(!r.irreducible);
        assert_eq!(r.r, Some(0));
        assert_eq!(r.reducing_subgraph, Some(vec![0, 1]));
    }

    #[test]
    fn synchronizing_orbits_are_reducible() {
        let g = Graph::star(3).unwrap();
        for x in ConfigSpace::new(3, 4).unwrap().iter() {
            let orbit = compute_orbit(&g, &x, None).unwrap();
            if orbit.synchronizes() {
                let r = irreducibility_of_orbit(&g, &orbit, 1 << 10).unwrap();
                assert!(!r.irreducible);
                assert!(r.r.unwrap() <= orbit.sync_time().unwrap());
            }
        }
    }

    #[test]
    fn k3_period5_is_irreducible() {
        let g = Graph::complete(3).unwrap();
        let r = is_irreducible(&g, &Configuration::new(5, vec![0, 2, 4]).unwrap(), 1 << 10).unwrap();
        assert!(r.irreducible);
        assert_eq!(r.subgraphs_checked, 3);
    }

    #[test]
    fn budget_and_size_gates() {
        let g = Graph::path(12).unwrap();
        let x = Configuration::constant(3, 12, 0).unwrap();
        assert!(matches!(is_irreducible(&g, &x, 1000), Err(AnalysisError::BudgetExceeded { .. })));
        let one = Graph::empty(1);
        assert!(is_irreducible(&one, &Configuration::constant(3, 1, 0).unwrap(), 1000).is_err());
    }
}
