//! Scenario files, parameter sweeps and CSV/JSON emission.
//!
//! All randomness comes from the scenario seed through named ChaCha streams
//! (see [`streams`]), so identical inputs produce byte-identical outputs.

mod error;
mod output;
mod scenario;
mod sweep;

pub use error::HarnessError;
pub use output::{write_cells, CellSummary, Summary};
pub use scenario::{
    load_scenario, paper_like, parse_scenario, Scenario, ScenarioFile, GROUP_SIZE, SCHEMA_VERSION,
};
pub use sweep::{
    dest_shift, run_cell, run_single, run_sweep, CellResult, ShiftDistribution, SweepSpec,
    SweepVariable,
};

/// Named sub-streams of the scenario seed.
pub mod streams {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    pub const POLICY: u64 = 1;
    pub const DEST_SHIFT: u64 = 2;
    pub const RANGE_NOISE: u64 = 3;

    pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        rng
    }
}
