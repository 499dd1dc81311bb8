use crate::graph::Graph;

use super::config::{blinking_state, clockwise};
use super::{Configuration, DynamicsError, RelativeConfiguration};

/// A blinking vertex `puller` holding back its neighbor `pulled`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub struct Pull {
    pub puller: usize,
    pub pulled: usize,
}

pub(crate) fn check_dimensions(g: &Graph, len: usize) -> Result<(), DynamicsError> {
    if g.vertex_count() != len {
        Err(DynamicsError::LengthMismatch { expected: g.vertex_count(), got: len })
    } else {
        Ok(())
    }
}

/// One synchronous application of the firefly rule on raw state slices.
///
/// A vertex strictly above the blinking state with at least one blinking
/// neighbor holds; every other vertex advances by one. Pulls are appended
/// for every (blinking neighbor, held vertex) pair.
pub(crate) fn step_states(g: &Graph, n: u32, x: &[u32], out: &mut [u32], mut pulls: Option<&mut Vec<Pull>>) {
    let b = blinking_state(n);
    for v in 0..x.len() {
        let s = x[v];
        let mut held = false;
        if s > b {
            for &u in g.neighbors(v) {
                if x[u] == b {
                    held = true;
                    match pulls.as_deref_mut() {
                        Some(p) => p.push(Pull { puller: u, pulled: v }),
                        None => break,
                    }
                }
            }
        }
        out[v] = if held { s } else { (s + 1) % n };
    }
}

/// Applies the firefly transition map once.
pub fn step(g: &Graph, x: &Configuration) -> Result<Configuration, DynamicsError> {
    step_with_pulls(g, x).map(|(next, _)| next)
}

/// Applies the firefly transition map once and reports every pull.
pub fn step_with_pulls(g: &Graph, x: &Configuration) -> Result<(Configuration, Vec<Pull>), DynamicsError> {
    check_dimensions(g, x.len())?;
    let mut out = vec![0; x.len()];
    let mut pulls = Vec::new();
    step_states(g, x.n(), x.states(), &mut out, Some(&mut pulls));
    Ok((Configuration::from_raw(x.n(), out), pulls))
}

/// Pull window for the relative map: `v` is pulled by a blinking `u` iff
/// `1 <= (y[v] - y[u]) mod n <= floor(n/2)`.
#[inline]
fn in_pull_window(yv: u32, yu: u32, n: u32) -> bool {
    let d = clockwise(yu, yv, n);
    d >= 1 && d <= n / 2
}

/// Applies the relative firefly transition map once: the activator moves one
/// step back, and so does every vertex inside a blinking neighbor's pull
/// window.
pub fn step_relative(g: &Graph, y: &RelativeConfiguration) -> Result<RelativeConfiguration, DynamicsError> {
    check_dimensions(g, y.states().len())?;
    let n = y.n();
    let ys = y.states();
    let states = (0..ys.len())
        .map(|v| {
            let pulled = g
                .neighbors(v)
                .iter()
                .any(|&u| y.is_blinking(u) && in_pull_window(ys[v], ys[u], n));
            if pulled {
                (ys[v] + n - 1) % n
            } else {
                ys[v]
            }
        })
        .collect();
    Ok(RelativeConfiguration::from_raw(n, (y.activator() + n - 1) % n, states))
}

/// Vertices where the literal window `(y[v] - y[u]) mod n <= n/2` (which
/// admits displacement 0) disagrees with the pull window used by
/// [`step_relative`]. Non-empty exactly when two adjacent vertices blink
/// together, in which case the literal reading would move a blinking vertex
/// that the standard map advances.
pub fn relative_window_discrepancies(g: &Graph, y: &RelativeConfiguration) -> Result<Vec<usize>, DynamicsError> {
    check_dimensions(g, y.states().len())?;
    let n = y.n();
    let ys = y.states();
    Ok((0..ys.len())
        .filter(|&v| {
            let blinking: Vec<usize> = g.neighbors(v).iter().copied().filter(|&u| y.is_blinking(u)).collect();
            let derived = blinking.iter().any(|&u| in_pull_window(ys[v], ys[u], n));
            let literal = blinking.iter().any(|&u| 2 * clockwise(ys[u], ys[v], n) <= n);
            derived != literal
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{from_relative, to_relative};
    use proptest::prelude::*;

    fn cfg(n: u32, s: &[u32]) -> Configuration {
        Configuration::new(n, s.to_vec()).unwrap()
    }

    #[test]
    fn step_examples() {
        let p2 = Graph::path(2).unwrap();
        let (next, pulls) = step_with_pulls(&p2, &cfg(6, &[2, 5])).unwrap();
        assert_eq!(next.states(), &[3, 5]);
        assert_eq!(pulls, vec![Pull { puller: 0, pulled: 1 }]);

        let k4 = Graph::complete(4).unwrap();
        for n in 3..9 {
            for s in 0..n {
                let next = step(&k4, &Configuration::constant(n, 4, s).unwrap()).unwrap();
                assert!(next.is_constant());
                assert_eq!(next.get(0), (s + 1) % n);
            }
        }

        let single = Graph::empty(1);
        assert_eq!(step(&single, &cfg(4, &[3])).unwrap().states(), &[0]);
        assert!(matches!(
            step(&p2, &cfg(6, &[1, 2, 3])),
            Err(DynamicsError::LengthMismatch { expected: 2, got: 3 })
        ));
    }

    #[test]
    fn every_blinking_neighbor_is_logged() {
        let s3 = Graph::star(3).unwrap();
        let (_, pulls) = step_with_pulls(&s3, &cfg(6, &[4, 2, 2, 0])).unwrap();
        assert_eq!(pulls, vec![Pull { puller: 1, pulled: 0 }, Pull { puller: 2, pulled: 0 }]);
    }

    #[test]
    fn relative_examples() {
        let p2 = Graph::path(2).unwrap();
        let y = RelativeConfiguration::new(6, 2, vec![2, 5]).unwrap();
        let next = step_relative(&p2, &y).unwrap();
        assert_eq!(next.activator(), 1);
        assert_eq!(next.states(), &[2, 4]);
        // agrees with the standard route
        let via_standard = to_relative(&step(&p2, &from_relative(&y, 0)).unwrap(), 1);
        assert_eq!(next, via_standard);

        let k3 = Graph::complete(3).unwrap();
        let sync = RelativeConfiguration::new(5, 3, vec![3, 3, 3]).unwrap();
        let next = step_relative(&k3, &sync).unwrap();
        assert_eq!((next.activator(), next.states()), (2, &[3, 3, 3][..]));

        let single = Graph::empty(1);
        let next = step_relative(&single, &RelativeConfiguration::new(4, 0, vec![0]).unwrap()).unwrap();
        assert_eq!((next.activator(), next.states()), (3, &[0][..]));
    }

    #[test]
    fn literal_window_diverges_on_simultaneous_blinks() {
        let p2 = Graph::path(2).unwrap();
        let both = RelativeConfiguration::new(6, 2, vec![2, 2]).unwrap();
        assert_eq!(relative_window_discrepancies(&p2, &both).unwrap(), vec![0, 1]);
        let one = RelativeConfiguration::new(6, 2, vec![2, 5]).unwrap();
        assert!(relative_window_discrepancies(&p2, &one).unwrap().is_empty());
    }

    proptest! {
        #[test]
        fn pulse_coupling_and_local_dependence(
            n in 3u32..9,
            seed in any::<u64>(),
        ) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let vertices = rng.random_range(2..9);
            let g = crate::graph::random_connected_graph(&mut rng, vertices, 0.3);
            let x = Configuration::new(n, (0..vertices).map(|_| rng.random_range(0..n)).collect()).unwrap();
            let next = step(&g, &x).unwrap();
            let b = blinking_state(n);
            for v in 0..vertices {
                if g.neighbors(v).iter().all(|&u| x.get(u) != b) {
                    prop_assert_eq!(next.get(v), (x.get(v) + 1) % n);
                }
            }
            // removing an edge not incident to v leaves v's update unchanged
            let e = rng.random_range(0..g.edge_count());
            let (a, c) = g.edges()[e];
            let others = g.edges().iter().copied().filter(|&f| f != (a, c));
            let h = Graph::new(vertices, others).unwrap();
            let next_h = step(&h, &x).unwrap();
            for v in (0..vertices).filter(|&v| v != a && v != c) {
                prop_assert_eq!(next.get(v), next_h.get(v));
            }
        }
    }
}
