//! Finite strategic-form games with discrete power actions.
//!
//! The cluster power game gives every D2D user on one channel the payoff
//! `ln(SIR_k) - c_k p_k`. Unilateral deviations only change the player's own
//! `ln p_k - c_k p_k` term, so `v(p) = sum_k (ln p_k - c_k p_k)` is an exact
//! potential and the pure Nash equilibria coincide with its maximizers.

mod cluster;
mod equilibrium;
mod potential;
mod space;
mod strategic;

pub use cluster::{cluster_game, qos_power_game, ClusterModel, PosBound, QosPowerGame};
pub use equilibrium::{
    enumerate_nash, potential_maximizers, price_of_stability, EquilibriumKind, EquilibriumSet,
    NASH_TOLERANCE,
};
pub use potential::{
    is_exact_potential, is_separable_concave, max_potential_violation, potential_value,
    satisfies_lmp, Lattice, PotentialFunction,
};
pub use space::{ProfileSpace, PROFILE_LIMIT};
pub use strategic::StrategicGame;
