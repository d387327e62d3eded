use super::propositions::*;
use super::{Evaluator, Grid, PropositionReport};
use crate::error::Result;
use crate::model::{MechanismId, Params, PressureModelId};
use crate::monte_carlo::{estimate_win_probability, SimConfig, SimResult};

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub grid: Grid,
    pub evaluator: Evaluator,
    pub mc_trials: u64,
    pub mc_seed: u64,
    /// Allowed distance between simulation and exact value, in standard errors.
    pub mc_z_limit: f64,
}

impl SuiteConfig {
    pub fn default_grid() -> Self {
        SuiteConfig {
            grid: Grid::default_grid(),
            evaluator: Evaluator::exact(),
            mc_trials: 1_000_000,
            mc_seed: 20_200_601,
            mc_z_limit: 4.0,
        }
    }

    pub fn fast() -> Self {
        SuiteConfig {
            grid: Grid::fast(),
            mc_trials: 100_000,
            ..SuiteConfig::default_grid()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloCell {
    pub mech: MechanismId,
    pub model: PressureModelId,
    pub exact: f64,
    pub sim: SimResult,
}

impl MonteCarloCell {
    pub fn z_score(&self) -> f64 {
        self.sim.z_score(self.exact)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloReport {
    pub cells: Vec<MonteCarloCell>,
    pub z_limit: f64,
}

impl MonteCarloReport {
    pub fn holds(&self) -> bool {
        self.cells.iter().all(|c| c.z_score().abs() <= self.z_limit)
    }
}

/// Simulates every rule under every model at `params` and `n` rounds and
/// compares with the exact values.
pub fn monte_carlo_cross_check(
    eval: &Evaluator,
    params: &Params<f64>,
    n: u32,
    trials: u64,
    seed: u64,
    z_limit: f64,
) -> Result<MonteCarloReport> {
    let mut cells = Vec::new();
    for model in PressureModelId::ALL {
        for (i, mech) in MechanismId::ALL.into_iter().enumerate() {
            let exact = eval.win_report(mech, model, params, n)?.p_a_wins_total;
            let cfg = SimConfig::new(
                mech,
                model,
                params.clone(),
                n,
                trials,
                seed.wrapping_add(i as u64),
            );
            let sim = estimate_win_probability(&cfg)?;
            cells.push(MonteCarloCell {
                mech,
                model,
                exact,
                sim,
            });
        }
    }
    Ok(MonteCarloReport { cells, z_limit })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub propositions: Vec<PropositionReport>,
    pub monte_carlo: MonteCarloReport,
}

impl SuiteReport {
    pub fn all_hold(&self) -> bool {
        self.propositions.iter().all(|r| r.holds()) && self.monte_carlo.holds()
    }
}

pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let eval = &cfg.evaluator;
    let grid = &cfg.grid;
    let mut propositions = vec![
        check_catchup_equals_behindfirst_m3(eval, grid)?,
        check_adjusted_catchup_equals_behindfirst_m3(eval, grid)?,
        check_reach_invariance_m3(eval, grid)?,
        check_echenique_ordering(eval, grid)?,
    ];

    let mut abab: Option<PropositionReport> = None;
    for (p, q) in grid.parameter_pairs() {
        let r = check_abab_m3_round_invariance(eval, &Params::new(p, q)?, 1..=8)?;
        abab = Some(match abab {
            None => r,
            Some(mut acc) => {
                acc.parameter_grid.extend(r.parameter_grid);
                acc.max_discrepancy = acc.max_discrepancy.max(r.max_discrepancy);
                if acc.holds() {
                    acc.verdict = r.verdict;
                }
                acc
            }
        });
    }
    propositions.extend(abab);
    propositions.push(check_strategy_proofness_catch_up(grid)?);
    propositions.push(check_strategy_proofness_behind_first(grid)?);

    let params = Params::new(0.75, 2.0 / 3.0)?;
    let monte_carlo =
        monte_carlo_cross_check(eval, &params, 5, cfg.mc_trials, cfg.mc_seed, cfg.mc_z_limit)?;
    Ok(SuiteReport {
        propositions,
        monte_carlo,
    })
}
