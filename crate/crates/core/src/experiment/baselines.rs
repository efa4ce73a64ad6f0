use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::network::{aggregate_utility, ChannelAllocation, Scenario, UtilityBreakdown};
use crate::{Error, Result};

/// Exhaustive baselines refuse instances with more than this many
/// `Q^(L+K) M^K` candidate vectors.
pub const EXHAUSTIVE_LIMIT: u128 = 10_000_000;

/// Joint channel and power choice with its utilities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Plan {
    pub allocation: ChannelAllocation,
    pub powers: Vec<f64>,
    pub utility: UtilityBreakdown,
}

fn search_size(scenario: &Scenario) -> u128 {
    let q = scenario.num_channels as u128;
    let m = scenario.power.level_count() as u128;
    let (l, k) = (scenario.cellular_count() as u32, scenario.d2d_count() as u32);
    q.checked_pow(l + k).and_then(|a| m.checked_pow(k).and_then(|b| a.checked_mul(b))).unwrap_or(u128::MAX)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    fn rec(i: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for j in i..cur.len() {
            cur.swap(i, j);
            rec(i + 1, cur, out);
            cur.swap(i, j);
        }
    }
    rec(0, &mut cur, &mut out);
    out.sort();
    out
}

fn odometer(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

/// Visits every one-cellular-per-channel allocation and every power vector
/// in lexicographic order, keeping the first candidate that `better` prefers.
fn exhaustive(scenario: &Scenario, better: impl Fn(&UtilityBreakdown, &UtilityBreakdown) -> bool) -> Result<Plan> {
    let size = search_size(scenario);
    if size > EXHAUSTIVE_LIMIT {
        return Err(Error::OracleScaleExceeded(size, EXHAUSTIVE_LIMIT));
    }
    let (k_n, q_n) = (scenario.d2d_count(), scenario.num_channels);
    let levels = &scenario.power.levels;
    let mut best: Option<Plan> = None;
    for perm in permutations(scenario.cellular_count()) {
        let mut chans = vec![0usize; k_n];
        loop {
            let alloc = ChannelAllocation::new(perm.clone(), chans.clone());
            let mut lv = vec![0usize; k_n];
            loop {
                let powers: Vec<f64> = lv.iter().map(|&i| levels[i]).collect();
                let u = aggregate_utility(scenario, &alloc, &powers)?;
                if best.as_ref().map_or(true, |b| better(&u, &b.utility)) {
                    best = Some(Plan { allocation: alloc.clone(), powers, utility: u });
                }
                if !odometer(&mut lv, levels.len()) {
                    break;
                }
            }
            if !odometer(&mut chans, q_n) {
                break;
            }
        }
    }
    Ok(best.expect("at least one candidate"))
}

fn strictly_above(a: f64, b: f64) -> bool {
    a > b + 1e-12 * (1.0 + a.abs().max(b.abs()))
}

/// Maximises the cellular sum, then the D2D sum among ties.
pub fn exhaustive_priority_search(scenario: &Scenario) -> Result<Plan> {
    exhaustive(scenario, |u, best| {
        let (c, bc) = (u.cellular_sum(), best.cellular_sum());
        strictly_above(c, bc) || (!strictly_above(bc, c) && strictly_above(u.d2d_sum(), best.d2d_sum()))
    })
}

/// Maximises the total utility.
pub fn exhaustive_sum_search(scenario: &Scenario) -> Result<Plan> {
    exhaustive(scenario, |u, best| strictly_above(u.total(), best.total()))
}

/// Cellular users on a uniformly random permutation of the channels, every
/// D2D user on a uniform channel at a uniform power level.
pub fn random_allocation(scenario: &Scenario, seed: u64) -> Result<Plan> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<usize> = (0..scenario.num_channels).collect();
    perm.shuffle(&mut rng);
    let levels = &scenario.power.levels;
    let mut chans = Vec::with_capacity(scenario.d2d_count());
    let mut powers = Vec::with_capacity(scenario.d2d_count());
    for _ in 0..scenario.d2d_count() {
        chans.push(rng.gen_range(0..scenario.num_channels));
        powers.push(levels[rng.gen_range(0..levels.len())]);
    }
    let allocation = ChannelAllocation::new(perm, chans);
    let utility = aggregate_utility(scenario, &allocation, &powers)?;
    Ok(Plan { allocation, powers, utility })
}
