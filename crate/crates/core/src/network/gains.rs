use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::scenario::{Position, Topology};
use crate::{Error, Result};

/// Index of a radio node inside a [`ChannelGainTensor`].
///
/// Layout is fixed: the base station is node 0, then the `L` cellular
/// receivers, then the `K` D2D transmitters, then the `K` D2D receivers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NodeId(pub usize);

/// Distance-based power law `g = min(1, (d / d0)^-alpha)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathLossModel {
    pub exponent: f64,
    pub reference_distance: f64,
}

impl Default for PathLossModel {
    fn default() -> Self {
        Self { exponent: 3.0, reference_distance: 1.0 }
    }
}

impl PathLossModel {
    pub fn new(exponent: f64, reference_distance: f64) -> Result<Self> {
        if !(exponent > 0.0 && exponent.is_finite()) {
            return Err(Error::InvalidScenario(format!("path-loss exponent {exponent} must be > 0")));
        }
        if !(reference_distance > 0.0 && reference_distance.is_finite()) {
            return Err(Error::InvalidScenario(format!(
                "reference distance {reference_distance} must be > 0"
            )));
        }
        Ok(Self { exponent, reference_distance })
    }

    /// Path-loss gain between two positions, in `(0, 1]`.
    pub fn gain(&self, u: Position, v: Position) -> Result<f64> {
        let d = u.distance(v);
        if d == 0.0 {
            return Err(Error::DegenerateColocation(u.to_string(), v.to_string()));
        }
        let g = (d / self.reference_distance).powf(-self.exponent).min(1.0);
        // Underflow at absurd distances would break the g > 0 invariant.
        Ok(g.max(f64::MIN_POSITIVE))
    }
}

/// Fast-fading law: `f ~ Uniform(f_min, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FadingModel {
    pub f_min: f64,
}

impl Default for FadingModel {
    fn default() -> Self {
        Self { f_min: 0.05 }
    }
}

impl FadingModel {
    pub fn new(f_min: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&f_min) {
            return Err(Error::InvalidScenario(format!("fading f_min {f_min} must lie in [0, 1)")));
        }
        Ok(Self { f_min })
    }

    pub fn mean(&self) -> f64 {
        (1.0 + self.f_min) / 2.0
    }

    pub fn variance(&self) -> f64 {
        (1.0 - self.f_min).powi(2) / 12.0
    }

    /// One draw in `(f_min, 1]`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.gen();
        1.0 - u * (1.0 - self.f_min)
    }
}

/// Average channel gains `h_uv,q = f_uv,q * g_uv` for every node pair and channel.
///
/// Storage is symmetric, so reciprocity holds by construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelGainTensor {
    nodes: usize,
    channels: usize,
    pathloss: Vec<f64>,
    fading: Vec<f64>,
}

impl ChannelGainTensor {
    /// Tensor with every gain equal to one.
    pub fn unit(nodes: usize, channels: usize) -> Self {
        let pairs = nodes * (nodes + 1) / 2;
        Self { nodes, channels, pathloss: vec![1.0; pairs], fading: vec![1.0; pairs * channels] }
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    fn pair(&self, u: NodeId, v: NodeId) -> usize {
        let (a, b) = if u.0 <= v.0 { (u.0, v.0) } else { (v.0, u.0) };
        assert!(b < self.nodes, "node {b} out of range ({} nodes)", self.nodes);
        // Row-major upper triangle including the diagonal.
        a * self.nodes - a * (a + 1) / 2 + b
    }

    pub fn pathloss(&self, u: NodeId, v: NodeId) -> f64 {
        self.pathloss[self.pair(u, v)]
    }

    pub fn fading(&self, u: NodeId, v: NodeId, q: usize) -> f64 {
        assert!(q < self.channels, "channel {q} out of range");
        self.fading[self.pair(u, v) * self.channels + q]
    }

    /// `h_uv,q`.
    pub fn gain(&self, u: NodeId, v: NodeId, q: usize) -> f64 {
        self.fading(u, v, q) * self.pathloss(u, v)
    }

    pub fn set_pathloss(&mut self, u: NodeId, v: NodeId, g: f64) -> Result<()> {
        check_unit_interval("path-loss gain", g)?;
        let i = self.pair(u, v);
        self.pathloss[i] = g;
        Ok(())
    }

    pub fn set_fading(&mut self, u: NodeId, v: NodeId, q: usize, f: f64) -> Result<()> {
        check_unit_interval("fading gain", f)?;
        assert!(q < self.channels, "channel {q} out of range");
        let i = self.pair(u, v) * self.channels + q;
        self.fading[i] = f;
        Ok(())
    }

    /// Pins `h_uv,q` to an externally measured value by setting `g_uv = 1` and
    /// `f_uv,q = h` on every channel. `h` must be given for all channels.
    pub fn override_link(&mut self, u: NodeId, v: NodeId, per_channel: &[f64]) -> Result<()> {
        if per_channel.len() != self.channels {
            return Err(Error::InvalidScenario(format!(
                "gain override has {} channels, expected {}",
                per_channel.len(),
                self.channels
            )));
        }
        self.set_pathloss(u, v, 1.0)?;
        for (q, &h) in per_channel.iter().enumerate() {
            self.set_fading(u, v, q, h)?;
        }
        Ok(())
    }

    /// Checks `0 < f <= 1` and `0 < g <= 1` on every stored entry.
    pub fn check_ranges(&self) -> bool {
        self.pathloss.iter().chain(&self.fading).all(|&x| x > 0.0 && x <= 1.0)
    }
}

fn check_unit_interval(what: &str, x: f64) -> Result<()> {
    if x > 0.0 && x <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidScenario(format!("{what} {x} outside (0, 1]")))
    }
}

/// Draws a gain tensor for `topology`: path loss from the geometry, fading
/// i.i.d. per unordered node pair and channel. Deterministic in `seed`.
pub fn sample_gains(
    topology: &Topology,
    channels: usize,
    pathloss: &PathLossModel,
    fading: &FadingModel,
    seed: u64,
) -> Result<ChannelGainTensor> {
    let positions = topology.node_positions();
    let n = positions.len();
    let mut tensor = ChannelGainTensor::unit(n, channels);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for u in 0..n {
        for v in (u + 1)..n {
            let g = pathloss.gain(positions[u], positions[v]).map_err(|_| {
                Error::DegenerateColocation(topology.node_label(u), topology.node_label(v))
            })?;
            tensor.set_pathloss(NodeId(u), NodeId(v), g)?;
            for q in 0..channels {
                tensor.set_fading(NodeId(u), NodeId(v), q, fading.sample(&mut rng))?;
            }
        }
    }
    Ok(tensor)
}
