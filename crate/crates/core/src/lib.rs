//! Hybrid resource allocation for D2D communication underlaying a single-cell
//! downlink.
//!
//! Stage one runs at the base station: cellular users are matched to channels
//! with the Hungarian algorithm and D2D users are clustered onto those channels
//! by a minimum-weight matching on a replicated bipartite graph. Stage two runs
//! inside each cluster: D2D users pick discrete transmit powers in an exact
//! potential game and converge through Q-learning better-reply dynamics.
//!
//! Module map:
//!
//! - [`network`]: positions, channel gains, the utility expressions and the
//!   cellular lower bound.
//! - [`allocation`]: bipartite matching, clustering, QoS and fairness variants.
//! - [`game`]: finite strategic games, potentials, Nash sets, price of stability.
//! - [`learning`]: the better-reply learner and convergence diagnostics.
//! - [`experiment`]: scenario files, the end-to-end pipeline and baselines.

pub mod allocation;
pub mod error;
pub mod experiment;
pub mod game;
pub mod learning;
pub mod network;

pub use error::{Error, Result};
