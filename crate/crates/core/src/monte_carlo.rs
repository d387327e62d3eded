//! Kick-by-kick simulation of complete shootouts.
//!
//! Each trial draws from its own ChaCha stream (`seed`, trial index), so the
//! result of a run depends only on its [`SimConfig`], never on how trials
//! are spread across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Result, ShootoutError};
use crate::model::{
    first_kicker_of_round, scoring_probability, KickContext, MechanismId, Params, PressureModelId,
    RoundRecord, ShootoutState, Team,
};

pub const DEFAULT_MAX_SD_ROUNDS: u32 = 1000;

const CHUNK: u64 = 8192;

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub mech: MechanismId,
    pub model: PressureModelId,
    pub params: Params<f64>,
    pub n: u32,
    pub trials: u64,
    pub seed: u64,
    pub max_sd_rounds: u32,
}

impl SimConfig {
    pub fn new(
        mech: MechanismId,
        model: PressureModelId,
        params: Params<f64>,
        n: u32,
        trials: u64,
        seed: u64,
    ) -> Self {
        SimConfig {
            mech,
            model,
            params,
            n,
            trials,
            seed,
            max_sd_rounds: DEFAULT_MAX_SD_ROUNDS,
        }
    }

    fn validate(&self) -> Result<()> {
        crate::engine::check_rounds(self.n)?;
        if self.trials == 0 {
            return Err(ShootoutError::InvalidSimConfig("trials must be at least 1"));
        }
        if self.max_sd_rounds == 0 {
            return Err(ShootoutError::InvalidSimConfig(
                "max_sd_rounds must be at least 1",
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ShootoutOutcome {
    Winner(Team),
    /// Still level after the sudden-death round cap.
    Unresolved,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    pub a_wins: u64,
    pub b_wins: u64,
    pub unresolved: u64,
    /// `a_wins / (a_wins + b_wins)`.
    pub estimate: f64,
    pub std_error: f64,
}

impl SimResult {
    pub fn trials(&self) -> u64 {
        self.a_wins + self.b_wins + self.unresolved
    }

    /// Distance from `value` in standard errors.
    pub fn z_score(&self, value: f64) -> f64 {
        if self.std_error == 0.0 {
            if self.estimate == value {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            (self.estimate - value) / self.std_error
        }
    }
}

/// The RNG stream used for trial `index` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Plays one shootout: `n` regular rounds, then sudden-death rounds until a
/// round ends with one team ahead or `max_sd_rounds` have been played.
pub fn simulate_shootout<G: Rng + ?Sized>(
    mech: MechanismId,
    model: PressureModelId,
    params: &Params<f64>,
    n: u32,
    max_sd_rounds: u32,
    rng: &mut G,
) -> ShootoutOutcome {
    let mut state = ShootoutState::new(n);
    let last_round = n + max_sd_rounds;
    while state.round_index() <= last_round {
        let first = first_kicker_of_round(&mech, &state);
        let second = first.other();
        let diff = state.score_diff();

        let p1 = scoring_probability(model, params, &KickContext::first(first, diff));
        let first_scored = rng.gen::<f64>() < p1;
        let diff_mid = diff + goal(first, first_scored);
        let p2 = scoring_probability(
            model,
            params,
            &KickContext::second(second, first_scored, diff_mid),
        );
        let second_scored = rng.gen::<f64>() < p2;
        state = state.apply_round(RoundRecord::new(first, first_scored, second_scored));

        if state.in_sudden_death() {
            match state.score_diff() {
                d if d > 0 => return ShootoutOutcome::Winner(Team::A),
                d if d < 0 => return ShootoutOutcome::Winner(Team::B),
                _ => {}
            }
        }
    }
    ShootoutOutcome::Unresolved
}

fn goal(team: Team, scored: bool) -> i32 {
    match (team, scored) {
        (_, false) => 0,
        (Team::A, true) => 1,
        (Team::B, true) => -1,
    }
}

pub fn estimate_win_probability(cfg: &SimConfig) -> Result<SimResult> {
    cfg.validate()?;
    let chunks = cfg.trials.div_ceil(CHUNK);
    let counts = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = c * CHUNK;
            let end = (start + CHUNK).min(cfg.trials);
            let mut counts = [0u64; 3];
            for index in start..end {
                let mut rng = trial_rng(cfg.seed, index);
                let outcome = simulate_shootout(
                    cfg.mech,
                    cfg.model,
                    &cfg.params,
                    cfg.n,
                    cfg.max_sd_rounds,
                    &mut rng,
                );
                let slot = match outcome {
                    ShootoutOutcome::Winner(Team::A) => 0,
                    ShootoutOutcome::Winner(Team::B) => 1,
                    ShootoutOutcome::Unresolved => 2,
                };
                counts[slot] += 1;
            }
            counts
        })
        .reduce(|| [0; 3], |a, b| [a[0] + b[0], a[1] + b[1], a[2] + b[2]]);

    let [a_wins, b_wins, unresolved] = counts;
    let resolved = a_wins + b_wins;
    if resolved == 0 {
        return Err(ShootoutError::AllUnresolved { trials: cfg.trials });
    }
    let estimate = a_wins as f64 / resolved as f64;
    let std_error = (estimate * (1.0 - estimate) / resolved as f64).sqrt();
    Ok(SimResult {
        a_wins,
        b_wins,
        unresolved,
        estimate,
        std_error,
    })
}
