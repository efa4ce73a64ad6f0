use serde::{Deserialize, Serialize};

use super::space::ProfileSpace;
use super::strategic::StrategicGame;
use crate::{Error, Result};

/// Interpolation weights scanned by the first LMP branch.
const LMP_T_GRID: std::ops::RangeInclusive<u32> = 1..=99;
const LMP_TOL: f64 = 1e-12;

/// Candidate potential over a game's profile space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PotentialFunction {
    space: ProfileSpace,
    values: Vec<f64>,
    components: Option<Vec<Vec<f64>>>,
}

impl PotentialFunction {
    pub fn from_fn(space: &ProfileSpace, f: impl Fn(&[usize]) -> f64) -> Self {
        let values = (0..space.len()).map(|i| f(&space.decode(i))).collect();
        Self { space: space.clone(), values, components: None }
    }

    /// `v(x) = sum_i v_i(x_i)`.
    pub fn separable(components: Vec<Vec<f64>>) -> Result<Self> {
        let space = ProfileSpace::new(components.iter().map(Vec::len).collect())?;
        let values = (0..space.len())
            .map(|i| space.decode(i).iter().enumerate().map(|(k, &a)| components[k][a]).sum())
            .collect();
        Ok(Self { space, values, components: Some(components) })
    }

    /// `v(p) = sum_k ln p_k - c_k p_k` over the given power levels.
    pub fn power_potential(levels: &[Vec<f64>], prices: &[f64]) -> Result<Self> {
        if levels.len() != prices.len() {
            return Err(Error::InvalidGame("one price per player required".into()));
        }
        let components =
            levels.iter().zip(prices).map(|(ls, &c)| ls.iter().map(|&p| p.ln() - c * p).collect()).collect();
        Self::separable(components)
    }

    pub fn space(&self) -> &ProfileSpace {
        &self.space
    }

    pub fn value(&self, profile: usize) -> f64 {
        self.values[profile]
    }

    pub fn components(&self) -> Option<&[Vec<f64>]> {
        self.components.as_deref()
    }
}

/// `sum_k ln p_k - c_k p_k` for one power profile.
pub fn potential_value(powers: &[f64], prices: &[f64]) -> f64 {
    powers.iter().zip(prices).map(|(&p, &c)| p.ln() - c * p).sum()
}

/// Largest `|(R_k(a) - R_k(b)) - (v(a) - v(b))|` over unilateral deviations
/// between admissible profiles.
pub fn max_potential_violation(game: &StrategicGame, v: &PotentialFunction) -> f64 {
    assert_eq!(game.space(), v.space(), "potential defined on a different profile space");
    let space = game.space();
    let mut worst = 0.0f64;
    for a in game.admissible_profiles() {
        for k in 0..space.players() {
            let own = space.action_of(a, k);
            for alt in (own + 1)..space.actions(k) {
                let b = space.deviate(a, k, alt);
                if !game.is_admissible(b) {
                    continue;
                }
                let dr = game.payoff(a, k) - game.payoff(b, k);
                let dv = v.value(a) - v.value(b);
                worst = worst.max((dr - dv).abs());
            }
        }
    }
    worst
}

/// Whether `v` is an exact potential of `game` up to `tol`.
pub fn is_exact_potential(game: &StrategicGame, v: &PotentialFunction, tol: f64) -> bool {
    max_potential_violation(game, v) <= tol
}

/// Midpoint concavity `v_i(x) >= (v_i(x-1) + v_i(x+1)) / 2` at every interior
/// point of every component, each given on consecutive integers.
pub fn is_separable_concave(components: &[Vec<f64>]) -> bool {
    components.iter().all(|c| {
        c.windows(3).all(|w| {
            let scale = 1.0 + w.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            w[1] >= (w[0] + w[2]) / 2.0 - LMP_TOL * scale
        })
    })
}

/// Box `prod_i [lower_i, upper_i]` of integer points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lattice {
    pub lower: Vec<i64>,
    pub upper: Vec<i64>,
}

impl Lattice {
    pub fn new(lower: Vec<i64>, upper: Vec<i64>) -> Result<Self> {
        if lower.len() != upper.len() || lower.iter().zip(&upper).any(|(l, u)| l > u) {
            return Err(Error::InvalidGame("lattice bounds must pair up with lower <= upper".into()));
        }
        Ok(Self { lower, upper })
    }

    fn space(&self) -> Result<ProfileSpace> {
        ProfileSpace::new(self.lower.iter().zip(&self.upper).map(|(l, u)| (u - l + 1) as usize).collect())
    }

    fn point(&self, space: &ProfileSpace, idx: usize) -> Vec<i64> {
        space.decode(idx).iter().zip(&self.lower).map(|(&o, &l)| l + o as i64).collect()
    }

    fn index(&self, space: &ProfileSpace, x: &[i64]) -> Option<usize> {
        let mut offs = Vec::with_capacity(x.len());
        for ((&xi, &l), &u) in x.iter().zip(&self.lower).zip(&self.upper) {
            if xi < l || xi > u {
                return None;
            }
            offs.push((xi - l) as usize);
        }
        Some(space.encode(&offs))
    }
}

/// Larger midpoint property: for every `x, y` at l1 distance 2, the best
/// common neighbour `z` either dominates some strict convex combination
/// `t f(x) + (1-t) f(y)` (scanned over `t = 0.01..0.99`), or exceeds
/// `min(f(x), f(y))` (strictly when the endpoints differ).
pub fn satisfies_lmp(f: impl Fn(&[i64]) -> f64, lattice: &Lattice) -> Result<bool> {
    let space = lattice.space()?;
    let values: Vec<f64> = (0..space.len()).map(|i| f(&lattice.point(&space, i))).collect();
    let dims = space.players();
    for a in 0..space.len() {
        let x = lattice.point(&space, a);
        for y in distance_two(&x, dims) {
            let Some(b) = lattice.index(&space, &y) else { continue };
            if b <= a {
                continue;
            }
            let best_mid = midpoints(&x, &y)
                .into_iter()
                .filter_map(|z| lattice.index(&space, &z))
                .map(|i| values[i])
                .fold(f64::NEG_INFINITY, f64::max);
            let (fx, fy) = (values[a], values[b]);
            let tol = LMP_TOL * (1.0 + fx.abs().max(fy.abs()));
            let branch_one = LMP_T_GRID.clone().any(|t| {
                let t = f64::from(t) / 100.0;
                best_mid >= t * fx + (1.0 - t) * fy - tol
            });
            let branch_two = if (fx - fy).abs() > tol {
                best_mid > fx.min(fy)
            } else {
                best_mid >= fx - tol
            };
            if !(branch_one || branch_two) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn distance_two(x: &[i64], dims: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for i in 0..dims {
        for d in [-2, 2] {
            let mut y = x.to_vec();
            y[i] += d;
            out.push(y);
        }
        for j in (i + 1)..dims {
            for di in [-1, 1] {
                for dj in [-1, 1] {
                    let mut y = x.to_vec();
                    y[i] += di;
                    y[j] += dj;
                    out.push(y);
                }
            }
        }
    }
    out
}

/// Points at l1 distance one from both `x` and `y`.
fn midpoints(x: &[i64], y: &[i64]) -> Vec<Vec<i64>> {
    let diff: Vec<usize> = (0..x.len()).filter(|&i| x[i] != y[i]).collect();
    match diff.as_slice() {
        [i] => {
            let mut z = x.to_vec();
            z[*i] = (x[*i] + y[*i]) / 2;
            vec![z]
        }
        [i, j] => {
            let mut z1 = x.to_vec();
            z1[*i] = y[*i];
            let mut z2 = x.to_vec();
            z2[*j] = y[*j];
            vec![z1, z2]
        }
        _ => Vec::new(),
    }
}
