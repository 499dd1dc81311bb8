use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::dynamics::Configuration;
use crate::graph::Graph;

use super::{step_masked, NoiseModel, StochasticError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AbsorptionResult {
    pub absorbed: bool,
    pub steps_to_sync: Option<u64>,
    pub seed: u64,
    pub cap: u64,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of run `index` in an ensemble: two rounds of SplitMix64 over the
/// base seed and the index.
pub fn run_seed(base_seed: u64, index: u64) -> u64 {
    splitmix64(base_seed ^ splitmix64(index))
}

/// Iterates the noisy map from `x0` with masks drawn from ChaCha8 seeded by
/// `seed`, stopping at the first constant configuration or after `cap`
/// steps.
pub fn mc_run(
    g: &Graph,
    x0: &Configuration,
    noise: &NoiseModel,
    seed: u64,
    cap: u64,
) -> Result<AbsorptionResult, StochasticError> {
    if cap == 0 {
        return Err(StochasticError::NonPositive("cap"));
    }
    if !g.is_connected() {
        return Err(StochasticError::Disconnected);
    }
    if g.vertex_count() != x0.len() {
        return Err(crate::dynamics::DynamicsError::LengthMismatch { expected: g.vertex_count(), got: x0.len() }.into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = x0.n();
    let mut x = x0.states().to_vec();
    let mut next = vec![0; x.len()];
    let constant = |x: &[u32]| x.windows(2).all(|w| w[0] == w[1]);
    let mut steps = 0;
    while !constant(&x) {
        if steps == cap {
            return Ok(AbsorptionResult { absorbed: false, steps_to_sync: None, seed, cap });
        }
        let mask = noise.sample(&mut rng);
        step_masked(g, n, noise.mode(), mask.present(), &x, &mut next);
        std::mem::swap(&mut x, &mut next);
        steps += 1;
    }
    Ok(AbsorptionResult { absorbed: true, steps_to_sync: Some(steps), seed, cap })
}

/// Aggregate of independent runs. Serializes to the six summary fields only.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnsembleReport {
    pub runs: u64,
    pub absorbed: u64,
    /// Mean steps over absorbed runs (0 if none).
    pub mean_steps: f64,
    pub max_steps: u64,
    pub base_seed: u64,
    pub cap: u64,
    #[serde(skip)]
    pub results: Vec<AbsorptionResult>,
}

impl EnsembleReport {
    pub fn fraction_absorbed(&self) -> f64 {
        self.absorbed as f64 / self.runs as f64
    }

    pub fn seeds(&self) -> impl Iterator<Item = u64> + '_ {
        self.results.iter().map(|r| r.seed)
    }

    /// Standard error of `mean_steps`.
    pub fn std_error(&self) -> f64 {
        let k = self.absorbed as f64;
        if k < 2.0 {
            return f64::NAN;
        }
        let ss: f64 = self
            .results
            .iter()
            .filter_map(|r| r.steps_to_sync)
            .map(|s| (s as f64 - self.mean_steps).powi(2))
            .sum();
        (ss / (k - 1.0)).sqrt() / k.sqrt()
    }
}

/// `runs` independent [`mc_run`]s with seeds [`run_seed`]`(base_seed, i)`.
/// Runs execute in parallel; aggregation happens in run order, so the
/// report is identical for any thread count.
pub fn mc_ensemble(
    g: &Graph,
    x0: &Configuration,
    noise: &NoiseModel,
    runs: u64,
    base_seed: u64,
    cap: u64,
) -> Result<EnsembleReport, StochasticError> {
    if runs == 0 {
        return Err(StochasticError::NonPositive("runs"));
    }
    let results: Vec<AbsorptionResult> = (0..runs)
        .into_par_iter()
        .map(|i| mc_run(g, x0, noise, run_seed(base_seed, i), cap))
        .collect::<Result<_, _>>()?;
    Ok(summarize(results, base_seed, cap))
}

pub(crate) fn summarize(results: Vec<AbsorptionResult>, base_seed: u64, cap: u64) -> EnsembleReport {
    let steps: Vec<u64> = results.iter().filter_map(|r| r.steps_to_sync).collect();
    let total: u128 = steps.iter().map(|&s| s as u128).sum();
    EnsembleReport {
        runs: results.len() as u64,
        absorbed: steps.len() as u64,
        mean_steps: if steps.is_empty() { 0.0 } else { total as f64 / steps.len() as f64 },
        max_steps: steps.iter().copied().max().unwrap_or(0),
        base_seed,
        cap,
        results,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stochastic::NoiseMode;

    #[test]
    fn constant_start_absorbs_immediately() {
        let g = Graph::cycle(4).unwrap();
        let noise = NoiseModel::uniform(&g, NoiseMode::EdgeReception, 0.5).unwrap();
        let r = mc_run(&g, &Configuration::constant(5, 4, 3).unwrap(), &noise, 9, 1).unwrap();
        assert_eq!(r, AbsorptionResult { absorbed: true, steps_to_sync: Some(0), seed: 9, cap: 1 });
    }

    #[test]
    fn reproducible_and_single_run_consistent() {
        let g = Graph::complete(3).unwrap();
        let noise = NoiseModel::uniform(&g, NoiseMode::EdgeReception, 0.5).unwrap();
        let x = Configuration::new(5, vec![0, 2, 4]).unwrap();
        let a = mc_ensemble(&g, &x, &noise, 64, 42, 100_000).unwrap();
        let b = mc_ensemble(&g, &x, &noise, 64, 42, 100_000).unwrap();
        assert_eq!(a, b);
        let one = mc_ensemble(&g, &x, &noise, 1, 42, 100_000).unwrap();
        assert_eq!(one.results[0], mc_run(&g, &x, &noise, run_seed(42, 0), 100_000).unwrap());
        let serial: Vec<_> = (0..64).map(|i| mc_run(&g, &x, &noise, run_seed(42, i), 100_000).unwrap()).collect();
        assert_eq!(summarize(serial, 42, 100_000), a);
        assert_eq!(a.absorbed, 64);
    }

    #[test]
    fn pool_size_does_not_matter() {
        let g = Graph::star(4).unwrap();
        let noise = NoiseModel::uniform(&g, NoiseMode::VertexEmission, 0.7).unwrap();
        let x = Configuration::new(7, vec![3, 0, 1, 5, 6]).unwrap();
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| mc_ensemble(&g, &x, &noise, 200, 7, 10_000).unwrap())
        };
        assert_eq!(run(1), run(4));
    }

    #[test]
    fn json_fields() {
        let g = Graph::path(2).unwrap();
        let noise = NoiseModel::uniform(&g, NoiseMode::EdgeReception, 0.5).unwrap();
        let r = mc_ensemble(&g, &Configuration::new(3, vec![0, 1]).unwrap(), &noise, 3, 1, 100).unwrap();
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        let mut keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
        keys.sort();
        assert_eq!(keys, ["absorbed", "base_seed", "cap", "max_steps", "mean_steps", "runs"]);
    }

    #[test]
    fn cap_reached() {
        let g = Graph::path(2).unwrap();
        let noise = NoiseModel::uniform(&g, NoiseMode::EdgeReception, 0.5).unwrap();
        let x = Configuration::new(6, vec![0, 3]).unwrap();
        let r = mc_run(&g, &x, &noise, 0, 1).unwrap();
        assert!(!r.absorbed && r.steps_to_sync.is_none());
        assert!(mc_run(&g, &x, &noise, 0, 0).is_err());
    }
}
