//! Executable checks of fairness, reach and manipulability claims.

pub mod markov;
mod propositions;
pub mod strategy;
mod suite;

use std::fmt;

use crate::engine::{
    regular_phase_distribution_with, total_win_probability_with, EvalMethod, PhaseDistribution,
    WinReport,
};
use crate::error::Result;
use crate::model::{MechanismId, OrderRule, Params, PressureModelId, PrevRound, Team};
use crate::sudden_death::SdPattern;

pub use propositions::{
    adjusted_rule_exposure, check_abab_m3_round_invariance,
    check_adjusted_catchup_equals_behindfirst_m3, check_catchup_equals_behindfirst_m3,
    check_echenique_ordering, check_reach_invariance_m3, check_strategy_proofness_behind_first,
    check_strategy_proofness_catch_up,
};
pub use strategy::{deviation_values, honest_root_value, strategy_proofness_scan, DeviationValue};
pub use suite::{
    monte_carlo_cross_check, run_suite, MonteCarloCell, MonteCarloReport, SuiteConfig, SuiteReport,
};

/// Float agreement required of every exact identity.
pub const TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PropositionId {
    /// Catch-up and Behind-first agree under M3.
    P31,
    /// Their adjusted versions agree under M3.
    C31,
    /// Under M3 the chance of sudden death does not depend on the rule.
    P32,
    /// Catch-up cannot be manipulated (M1 with p - q <= 0.5, M2, M3).
    P34,
    /// Behind-first cannot be manipulated.
    P35,
    /// Alternating is fairer than Standard whenever the opener is favoured.
    Echenique,
    /// Standard under M3 does not depend on the number of rounds.
    AbabM3RoundInvariance,
}

impl fmt::Display for PropositionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PropositionId::P31 => "catch-up = behind-first (M3)",
            PropositionId::C31 => "adjusted catch-up = adjusted behind-first (M3)",
            PropositionId::P32 => "sudden-death reach is rule-independent (M3)",
            PropositionId::P34 => "catch-up strategy-proofness",
            PropositionId::P35 => "behind-first strategy-proofness",
            PropositionId::Echenique => "alternating fairer than standard (M1, M2)",
            PropositionId::AbabM3RoundInvariance => "standard/M3 independent of rounds",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub p: f64,
    pub q: f64,
    pub n: u32,
}

impl GridPoint {
    pub fn params(&self) -> Params<f64> {
        Params::new(self.p, self.q).expect("grid points satisfy q <= p")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub points: Vec<GridPoint>,
}

impl Grid {
    /// Builds the grid from probabilities in hundredths so that `0.30` is
    /// the closest double to 3/10.
    fn from_hundredths(ps: &[u32], q_from: u32, q_step: u32, rounds: &[u32]) -> Grid {
        let mut points = Vec::new();
        for &p in ps {
            for q in (q_from..=p).step_by(q_step as usize) {
                for &n in rounds {
                    points.push(GridPoint {
                        p: p as f64 / 100.0,
                        q: q as f64 / 100.0,
                        n,
                    });
                }
            }
        }
        Grid { points }
    }

    /// p in {0.60, 0.65, 0.70, 0.75, 0.80, 0.90}, q from 0.30 to p by 0.05,
    /// n in {1, 3, 5, 8}.
    pub fn default_grid() -> Grid {
        Grid::from_hundredths(&[60, 65, 70, 75, 80, 90], 30, 5, &[1, 3, 5, 8])
    }

    pub fn fast() -> Grid {
        Grid::from_hundredths(&[65, 75, 90], 30, 10, &[1, 4, 5])
    }

    pub fn new(points: Vec<GridPoint>) -> Grid {
        Grid { points }
    }

    /// Distinct `(p, q)` pairs in first-seen order.
    pub fn parameter_pairs(&self) -> Vec<(f64, f64)> {
        let mut pairs: Vec<(f64, f64)> = Vec::new();
        for pt in &self.points {
            if !pairs.contains(&(pt.p, pt.q)) {
                pairs.push((pt.p, pt.q));
            }
        }
        pairs
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub point: GridPoint,
    pub model: PressureModelId,
    pub mechanisms: Vec<MechanismId>,
    pub values: Vec<f64>,
    pub note: String,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mechs: Vec<&str> = self.mechanisms.iter().map(|m| m.label()).collect();
        write!(
            f,
            "p = {}, q = {}, n = {}, {} [{}] values {:?}: {}",
            self.point.p,
            self.point.q,
            self.point.n,
            self.model,
            mechs.join(" vs "),
            self.values,
            self.note
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    Holds,
    Fails(Box<Witness>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropositionReport {
    pub proposition_id: PropositionId,
    pub parameter_grid: Vec<GridPoint>,
    pub max_discrepancy: f64,
    pub verdict: Verdict,
}

impl PropositionReport {
    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }
}

/// Deliberate rule faults for checking that the suite catches them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InjectedFault {
    /// Catch-up keeps the order after goal-then-miss instead of miss-then-goal.
    CatchUpTieBreak,
}

impl std::str::FromStr for InjectedFault {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "catch-up-tie-break" => Ok(InjectedFault::CatchUpTieBreak),
            _ => Err(format!("unknown fault {s:?}")),
        }
    }
}

struct FaultyCatchUp;

impl OrderRule for FaultyCatchUp {
    fn first_kicker(
        &self,
        round_index: u32,
        _regular_rounds: u32,
        prev: Option<&PrevRound>,
    ) -> Team {
        match prev {
            Some(prev) if round_index > 1 => {
                let r = prev.record;
                if r.first_scored && !r.second_scored {
                    r.first_kicker
                } else {
                    r.first_kicker.other()
                }
            }
            _ => Team::A,
        }
    }

    fn sudden_death_pattern(&self, _regular_rounds: u32) -> SdPattern {
        SdPattern::AlternatingOrder
    }
}

/// Source of exact results for the checks, optionally with a fault injected.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Evaluator {
    pub method: EvalMethod,
    pub fault: Option<InjectedFault>,
}

impl Evaluator {
    pub fn exact() -> Self {
        Evaluator::default()
    }

    pub fn with_fault(fault: InjectedFault) -> Self {
        Evaluator {
            fault: Some(fault),
            ..Evaluator::default()
        }
    }

    fn rule(&self, mech: MechanismId) -> Box<dyn OrderRule + Send + Sync> {
        match (self.fault, mech) {
            (Some(InjectedFault::CatchUpTieBreak), MechanismId::CatchUp) => Box::new(FaultyCatchUp),
            _ => Box::new(mech),
        }
    }

    pub fn win_report(
        &self,
        mech: MechanismId,
        model: PressureModelId,
        params: &Params<f64>,
        n: u32,
    ) -> Result<WinReport<f64>> {
        total_win_probability_with(self.rule(mech).as_ref(), model, params, n, self.method)
    }

    pub fn phase(
        &self,
        mech: MechanismId,
        model: PressureModelId,
        params: &Params<f64>,
        n: u32,
    ) -> Result<PhaseDistribution<f64>> {
        regular_phase_distribution_with(self.rule(mech).as_ref(), model, params, n, self.method)
    }
}
