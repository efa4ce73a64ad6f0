use std::fmt;

use serde::{Deserialize, Serialize};

use super::gains::{sample_gains, ChannelGainTensor, FadingModel, NodeId, PathLossModel};
use super::power::PowerConfig;
use crate::{Error, Result};

/// Planar position in meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Position {
    pub x: f64,
    pub y: f64,
}

impl Position {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if x.is_finite() && y.is_finite() {
            Ok(Self { x, y })
        } else {
            Err(Error::InvalidScenario(format!("non-finite position ({x}, {y})")))
        }
    }

    pub const ORIGIN: Position = Position { x: 0.0, y: 0.0 };

    pub fn distance(self, other: Position) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellularUser {
    pub id: String,
    pub position: Position,
}

/// One D2D user: a fixed transmitter/receiver pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct D2dUser {
    pub id: String,
    pub tx: Position,
    pub rx: Position,
}

/// Node geometry of one cell. The BS sits at `bs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Topology {
    pub bs: Position,
    pub cellular: Vec<Position>,
    pub d2d: Vec<(Position, Position)>,
}

impl Topology {
    /// Positions in [`NodeId`] order.
    pub fn node_positions(&self) -> Vec<Position> {
        let mut out = Vec::with_capacity(1 + self.cellular.len() + 2 * self.d2d.len());
        out.push(self.bs);
        out.extend(self.cellular.iter().copied());
        out.extend(self.d2d.iter().map(|p| p.0));
        out.extend(self.d2d.iter().map(|p| p.1));
        out
    }

    pub fn node_label(&self, node: usize) -> String {
        let l = self.cellular.len();
        let k = self.d2d.len();
        match node {
            0 => "BS".to_string(),
            n if n <= l => format!("C{n}"),
            n if n <= l + k => format!("D{}tx", n - l),
            n => format!("D{}rx", n - l - k),
        }
    }
}

/// A complete problem instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub cellular: Vec<CellularUser>,
    pub d2d: Vec<D2dUser>,
    pub num_channels: usize,
    pub power: PowerConfig,
    pub seed: u64,
    bs: Position,
    gains: ChannelGainTensor,
}

impl Scenario {
    /// Builds a scenario and samples its gain tensor from `seed`.
    pub fn generate(
        topology: Topology,
        power: PowerConfig,
        pathloss: &PathLossModel,
        fading: &FadingModel,
        seed: u64,
    ) -> Result<Self> {
        let q = topology.cellular.len();
        let gains = sample_gains(&topology, q, pathloss, fading, seed)?;
        Self::with_gains(topology, gains, power, seed)
    }

    /// Builds a scenario around an explicit gain tensor.
    pub fn with_gains(
        topology: Topology,
        gains: ChannelGainTensor,
        power: PowerConfig,
        seed: u64,
    ) -> Result<Self> {
        power.validate()?;
        let l = topology.cellular.len();
        let k = topology.d2d.len();
        if l == 0 {
            return Err(Error::InvalidScenario("at least one cellular user is required".into()));
        }
        if gains.nodes() != 1 + l + 2 * k {
            return Err(Error::InvalidScenario(format!(
                "gain tensor covers {} nodes, topology has {}",
                gains.nodes(),
                1 + l + 2 * k
            )));
        }
        if gains.channels() != l {
            return Err(Error::InvalidScenario(format!(
                "need Q = L orthogonal channels, got Q = {} with L = {l}",
                gains.channels()
            )));
        }
        let cellular = topology
            .cellular
            .iter()
            .enumerate()
            .map(|(i, &position)| CellularUser { id: format!("C{}", i + 1), position })
            .collect();
        let d2d = topology
            .d2d
            .iter()
            .enumerate()
            .map(|(i, &(tx, rx))| D2dUser { id: format!("D{}", i + 1), tx, rx })
            .collect();
        Ok(Self { cellular, d2d, num_channels: l, power, seed, bs: topology.bs, gains })
    }

    pub fn topology(&self) -> Topology {
        Topology {
            bs: self.bs,
            cellular: self.cellular.iter().map(|c| c.position).collect(),
            d2d: self.d2d.iter().map(|d| (d.tx, d.rx)).collect(),
        }
    }

    pub fn cellular_count(&self) -> usize {
        self.cellular.len()
    }

    pub fn d2d_count(&self) -> usize {
        self.d2d.len()
    }

    pub fn gains(&self) -> &ChannelGainTensor {
        &self.gains
    }

    pub fn gains_mut(&mut self) -> &mut ChannelGainTensor {
        &mut self.gains
    }

    pub fn bs_node(&self) -> NodeId {
        NodeId(0)
    }

    pub fn cellular_node(&self, l: usize) -> NodeId {
        assert!(l < self.cellular.len());
        NodeId(1 + l)
    }

    pub fn tx_node(&self, k: usize) -> NodeId {
        assert!(k < self.d2d.len());
        NodeId(1 + self.cellular.len() + k)
    }

    pub fn rx_node(&self, k: usize) -> NodeId {
        assert!(k < self.d2d.len());
        NodeId(1 + self.cellular.len() + self.d2d.len() + k)
    }

    /// `h_bl,q`.
    pub fn bs_to_cellular(&self, l: usize, q: usize) -> f64 {
        self.gains.gain(self.bs_node(), self.cellular_node(l), q)
    }

    /// `g_kl`: path loss between D2D transmitter `k` and cellular receiver `l`.
    pub fn d2d_to_cellular_pathloss(&self, k: usize, l: usize) -> f64 {
        self.gains.pathloss(self.tx_node(k), self.cellular_node(l))
    }

    /// `h_kl,q`.
    pub fn d2d_to_cellular(&self, k: usize, l: usize, q: usize) -> f64 {
        self.gains.gain(self.tx_node(k), self.cellular_node(l), q)
    }

    /// `h_jk',q`: transmitter of `j` to receiver of `k` (`j == k` is the direct link).
    pub fn d2d_to_d2d(&self, j: usize, k: usize, q: usize) -> f64 {
        self.gains.gain(self.tx_node(j), self.rx_node(k), q)
    }

    /// `h_bk',q`.
    pub fn bs_to_d2d_rx(&self, k: usize, q: usize) -> f64 {
        self.gains.gain(self.bs_node(), self.rx_node(k), q)
    }

    /// Replaces every `h_bl,q` by the given `L x Q` table.
    pub fn override_bs_cellular(&mut self, table: &[Vec<f64>]) -> Result<()> {
        if table.len() != self.cellular.len() {
            return Err(Error::InvalidScenario(format!(
                "BS-cellular gain table has {} rows, expected {}",
                table.len(),
                self.cellular.len()
            )));
        }
        for (l, row) in table.iter().enumerate() {
            let node = self.cellular_node(l);
            self.gains.override_link(NodeId(0), node, row)?;
        }
        Ok(())
    }
}
