use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::graph::{Graph, GraphJson};

use super::config::blinking_state;
use super::orbit::Orbit;

/// Serializable orbit trace. Field order is the on-disk key order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trace {
    pub graph: GraphJson,
    pub n: u32,
    pub b: u32,
    pub steps: Vec<Vec<u32>>,
    pub transient: usize,
    pub period: usize,
    pub sync_time: Option<usize>,
    pub pulls: Vec<[usize; 3]>,
    pub blinks: BTreeMap<usize, Vec<usize>>,
    pub truncated: bool,
}

impl Trace {
    pub fn new(g: &Graph, orbit: &Orbit) -> Self {
        Trace {
            graph: GraphJson::from(g),
            n: orbit.n(),
            b: blinking_state(orbit.n()),
            steps: orbit.trajectory().to_vec(),
            transient: orbit.transient(),
            period: orbit.period(),
            sync_time: orbit.sync_time(),
            pulls: orbit.pulls().iter().map(|p| [p.t, p.puller, p.pulled]).collect(),
            blinks: orbit.blink_times().iter().cloned().enumerate().collect(),
            truncated: orbit.is_truncated(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{compute_orbit, Configuration};

    #[test]
    fn schema_and_null_sync_time() {
        let g = Graph::complete(3).unwrap();
        let orbit = compute_orbit(&g, &Configuration::new(5, vec![0, 2, 4]).unwrap(), None).unwrap();
        let json = serde_json::to_value(Trace::new(&g, &orbit)).unwrap();
        assert!(json["sync_time"].is_null());
        assert_eq!(json["period"], 6);
        assert_eq!(json["b"], 2);
        assert_eq!(json["steps"][1], serde_json::json!([1, 3, 4]));
        assert_eq!(json["blinks"]["1"], serde_json::json!([0]));
        let keys: Vec<&str> = json.as_object().unwrap().keys().map(String::as_str).collect();
        for k in ["graph", "n", "b", "steps", "transient", "period", "sync_time", "pulls", "blinks"] {
            assert!(keys.contains(&k));
        }
    }
}
