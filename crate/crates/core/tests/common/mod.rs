#![allow(dead_code)]

use d2d_core::allocation::EstimatedNetworkGraph;
use d2d_core::experiment::ScenarioConfig;
use d2d_core::network::Scenario;
use rand::Rng;

pub fn scenario(seed: u64, l: usize, k: usize, levels: &[f64], price: f64) -> Scenario {
    let levels = levels.iter().map(f64::to_string).collect::<Vec<_>>().join(", ");
    let text = format!(
        r#"{{"seed": {seed}, "L": {l}, "K": {k}, "Q": {l}, "p_c": 7, "power_levels": [{levels}],
           "price": {{"mode": "scalar", "value": {price}}},
           "positions": {{"auto": {{"cell_radius": 2.5, "d2d_max_separation": 0.5}}}}}}"#
    );
    ScenarioConfig::from_json(&text).unwrap().build().unwrap()
}

pub fn random_graph<R: Rng>(rng: &mut R, l: usize, k: usize) -> EstimatedNetworkGraph {
    let w: Vec<Vec<f64>> = (0..k).map(|_| (0..l).map(|_| rng.gen_range(0.001..1.0)).collect()).collect();
    EstimatedNetworkGraph::from_weights(l, &w, 4.0).unwrap()
}

/// Calls `f` on every vector in `{0..base}^len`, lexicographically.
pub fn for_each_tuple(len: usize, base: usize, mut f: impl FnMut(&[usize])) {
    let mut t = vec![0usize; len];
    loop {
        f(&t);
        let mut i = len;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            t[i] += 1;
            if t[i] < base {
                break;
            }
            t[i] = 0;
        }
    }
}
