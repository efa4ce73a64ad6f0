//! Single-cell downlink network: geometry, channel gains, power levels and the
//! per-user utility expressions.
//!
//! Every power is linear and every logarithm is natural.

mod gains;
mod power;
mod scenario;
mod utility;

pub use gains::{sample_gains, ChannelGainTensor, FadingModel, NodeId, PathLossModel};
pub use power::{PowerConfig, Price};
pub use scenario::{CellularUser, D2dUser, Position, Scenario, Topology};
pub use utility::{
    aggregate_utility, cellular_lower_bound, served_utility, ChannelAllocation, UtilityBreakdown,
};
