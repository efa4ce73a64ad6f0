use std::f64::consts::PI;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::network::{FadingModel, PathLossModel, Position, PowerConfig, Price, Scenario, Topology};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathLossSpec {
    pub alpha: f64,
    pub d0: f64,
}

impl Default for PathLossSpec {
    fn default() -> Self {
        Self { alpha: 3.0, d0: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FadingSpec {
    pub fmin: f64,
}

impl Default for FadingSpec {
    fn default() -> Self {
        Self { fmin: 0.05 }
    }
}

/// Random placement: BS at the origin, cellular users and D2D transmitters
/// uniform over the disc, each D2D receiver uniform over the disc of radius
/// `d2d_max_separation` around its transmitter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AutoPositions {
    pub cell_radius: f64,
    pub d2d_max_separation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitPositions {
    #[serde(default = "origin")]
    pub bs: [f64; 2],
    pub cellular: Vec<[f64; 2]>,
    /// `[[tx_x, tx_y], [rx_x, rx_y]]` per pair.
    pub d2d: Vec<[[f64; 2]; 2]>,
}

fn origin() -> [f64; 2] {
    [0.0, 0.0]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum PositionSpec {
    Auto(AutoPositions),
    Explicit(ExplicitPositions),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct GainOverrides {
    /// `bs_cellular[l][q]` replaces `h_bl,q`.
    #[serde(default)]
    pub bs_cellular: Option<Vec<Vec<f64>>>,
}

/// Minimum cellular utility, shared or per user.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RateTarget {
    Uniform(f64),
    PerUser(Vec<f64>),
}

impl Default for RateTarget {
    fn default() -> Self {
        RateTarget::Uniform(0.0)
    }
}

impl RateTarget {
    pub fn expand(&self, users: usize) -> Result<Vec<f64>> {
        match self {
            RateTarget::Uniform(r) => Ok(vec![*r; users]),
            RateTarget::PerUser(v) if v.len() == users => Ok(v.clone()),
            RateTarget::PerUser(v) => {
                Err(Error::Config(format!("r_min lists {} values for {users} cellular users", v.len())))
            }
        }
    }
}

/// On-disk scenario description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub seed: u64,
    #[serde(rename = "L")]
    pub cellular: usize,
    #[serde(rename = "K")]
    pub d2d: usize,
    #[serde(rename = "Q")]
    pub channels: usize,
    #[serde(default)]
    pub pathloss: PathLossSpec,
    #[serde(default)]
    pub fading: FadingSpec,
    pub p_c: f64,
    pub power_levels: Vec<f64>,
    pub price: Price,
    pub positions: PositionSpec,
    #[serde(default)]
    pub gain_overrides: GainOverrides,
    #[serde(default)]
    pub r_min: RateTarget,
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.check()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    fn check(&self) -> Result<()> {
        if self.channels != self.cellular {
            return Err(Error::Config(format!("Q = {} must equal L = {}", self.channels, self.cellular)));
        }
        if let PositionSpec::Explicit(p) = &self.positions {
            if p.cellular.len() != self.cellular || p.d2d.len() != self.d2d {
                return Err(Error::Config("explicit positions disagree with L or K".into()));
            }
        }
        if let PositionSpec::Auto(a) = &self.positions {
            if !(a.cell_radius > 0.0) || !(a.d2d_max_separation > 0.0) {
                return Err(Error::Config("cell_radius and d2d_max_separation must be positive".into()));
            }
        }
        self.r_min.expand(self.cellular)?;
        Ok(())
    }

    /// Same layout rules with a different seed.
    pub fn with_seed(&self, seed: u64) -> Self {
        Self { seed, ..self.clone() }
    }

    pub fn topology(&self) -> Result<Topology> {
        match &self.positions {
            PositionSpec::Explicit(p) => Ok(Topology {
                bs: Position::new(p.bs[0], p.bs[1])?,
                cellular: p.cellular.iter().map(|c| Position::new(c[0], c[1])).collect::<Result<_>>()?,
                d2d: p
                    .d2d
                    .iter()
                    .map(|[t, r]| Ok((Position::new(t[0], t[1])?, Position::new(r[0], r[1])?)))
                    .collect::<Result<_>>()?,
            }),
            PositionSpec::Auto(a) => {
                // layout stream is separate from the fading stream
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                rng.set_stream(1);
                let cellular = (0..self.cellular).map(|_| disc_point(&mut rng, Position::ORIGIN, a.cell_radius)).collect();
                let d2d = (0..self.d2d)
                    .map(|_| {
                        let tx = disc_point(&mut rng, Position::ORIGIN, a.cell_radius);
                        (tx, disc_point(&mut rng, tx, a.d2d_max_separation))
                    })
                    .collect();
                Ok(Topology { bs: Position::ORIGIN, cellular, d2d })
            }
        }
    }

    pub fn build(&self) -> Result<Scenario> {
        let power = PowerConfig::new(self.p_c, self.power_levels.clone(), self.price)?;
        let pathloss = PathLossModel::new(self.pathloss.alpha, self.pathloss.d0)?;
        let fading = FadingModel::new(self.fading.fmin)?;
        let mut scenario = Scenario::generate(self.topology()?, power, &pathloss, &fading, self.seed)?;
        if let Some(table) = &self.gain_overrides.bs_cellular {
            scenario.override_bs_cellular(table)?;
        }
        Ok(scenario)
    }

    pub fn r_min(&self) -> Vec<f64> {
        self.r_min.expand(self.cellular).expect("checked on load")
    }
}

/// Uniform over the disc, never exactly at its centre.
fn disc_point<R: Rng>(rng: &mut R, centre: Position, radius: f64) -> Position {
    let r = radius * (1.0 - rng.gen::<f64>()).sqrt();
    let theta = 2.0 * PI * rng.gen::<f64>();
    Position { x: centre.x + r * theta.cos(), y: centre.y + r * theta.sin() }
}
