//! Exact and simulated winning probabilities for penalty-shootout order rules.
//!
//! * [`model`]: teams, parameters, the seven order rules, three pressure models.
//! * [`sudden_death`]: closed forms for the open-ended sudden-death phase.
//! * [`engine`]: exact regular-phase evaluation joined with sudden death.
//! * [`monte_carlo`]: kick-by-kick simulation used as an independent check.
//! * [`analysis`]: executable checks of fairness and manipulability claims.

pub mod analysis;
pub mod engine;
pub mod error;
pub mod model;
pub mod monte_carlo;
pub mod prob;
pub mod sudden_death;

pub use engine::{
    join_sudden_death, regular_phase_distribution, sweep_grid, table2, total_win_probability,
    EvalMethod, PhaseDistribution, SdEntry, SweepPoint, WinReport, WinTable,
};
pub use error::{Result, ShootoutError};
pub use model::{
    first_kicker_of_round, scoring_probability, KickContext, KickSlot, MechanismId, OrderRule,
    Params, PressureModelId, PrevRound, RoundRecord, ShootoutState, Team,
};
pub use num::BigRational;
pub use prob::Prob;
pub use sudden_death::{sd_stats, sd_win, ModelClass, SdPattern, SuddenDeathStats};
