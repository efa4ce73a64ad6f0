use crate::game::StrategicGame;
use crate::Result;

/// Three-player joint reward table with power levels {2, 4}.
pub const TABLE4_PAYOFFS_CSV: &str = include_str!("../../data/table4_payoffs.csv");

/// Five-user reference network with measured BS-to-cellular gains.
pub const TABLE1_SCENARIO_JSON: &str = include_str!("../../data/table1_scenario.json");

/// Expected channel (0-based) of each cellular user C1..C5 in the reference network.
pub const TABLE1_CELLULAR_CHANNELS: [usize; 5] = [2, 4, 1, 3, 0];

pub fn table4_game() -> Result<StrategicGame> {
    StrategicGame::read_csv(TABLE4_PAYOFFS_CSV.as_bytes())
}
