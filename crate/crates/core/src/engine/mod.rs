//! Exact winning probabilities.
//!
//! The regular phase is evaluated exactly, either by walking every outcome
//! sequence or by a dynamic program over compact states. Level outcomes are
//! then joined with the sudden-death closed forms.

mod dp;
mod enumerate;

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Result, ShootoutError};
use crate::model::{MechanismId, OrderRule, Params, PressureModelId, Team};
use crate::prob::{half, Prob};
use crate::sudden_death::{sd_win, SdPattern};

pub use dp::score_difference_dp;
pub use enumerate::enumerate_sequences;

pub const MAX_ROUNDS: u32 = 16;

/// Largest regular phase evaluated by full enumeration under [`EvalMethod::Auto`].
pub const ENUMERATION_LIMIT: u32 = 10;

/// How sudden death starts after a level regular phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SdEntry {
    pub first_kicker: Team,
    pub pattern: SdPattern,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseDistribution<T> {
    pub p_a_leads: T,
    pub p_b_leads: T,
    pub tie_entries: BTreeMap<SdEntry, T>,
}

impl<T: Prob> PhaseDistribution<T> {
    pub(crate) fn empty() -> Self {
        PhaseDistribution {
            p_a_leads: T::zero(),
            p_b_leads: T::zero(),
            tie_entries: BTreeMap::new(),
        }
    }

    pub(crate) fn add(&mut self, score_diff: i32, entry: impl FnOnce() -> SdEntry, mass: T) {
        match score_diff {
            d if d > 0 => self.p_a_leads = self.p_a_leads.clone() + mass,
            d if d < 0 => self.p_b_leads = self.p_b_leads.clone() + mass,
            _ => {
                let slot = self.tie_entries.entry(entry()).or_insert_with(T::zero);
                *slot = slot.clone() + mass;
            }
        }
    }

    pub(crate) fn add_scaled(&mut self, other: &Self, weight: &T) {
        self.p_a_leads = self.p_a_leads.clone() + other.p_a_leads.clone() * weight.clone();
        self.p_b_leads = self.p_b_leads.clone() + other.p_b_leads.clone() * weight.clone();
        for (entry, mass) in &other.tie_entries {
            let slot = self.tie_entries.entry(*entry).or_insert_with(T::zero);
            *slot = slot.clone() + mass.clone() * weight.clone();
        }
    }

    /// Probability that the regular phase ends level.
    pub fn reach_sd(&self) -> T {
        self.tie_entries
            .values()
            .fold(T::zero(), |acc, m| acc + m.clone())
    }

    pub fn total_mass(&self) -> T {
        self.p_a_leads.clone() + self.p_b_leads.clone() + self.reach_sd()
    }

    pub fn to_float(&self) -> PhaseDistribution<f64> {
        PhaseDistribution {
            p_a_leads: self.p_a_leads.to_f64(),
            p_b_leads: self.p_b_leads.to_f64(),
            tie_entries: self
                .tie_entries
                .iter()
                .map(|(k, v)| (*k, v.to_f64()))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WinReport<T> {
    pub p_a_wins_total: T,
    pub p_reach_sd: T,
    /// `p_a_wins_total - 1/2`.
    pub bias: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EvalMethod {
    /// Every outcome sequence of the regular phase.
    Enumerate,
    /// Dynamic program over score difference and the last round.
    ScoreDifferenceDp,
    /// Enumeration up to [`ENUMERATION_LIMIT`] rounds, the DP beyond.
    #[default]
    Auto,
}

pub(crate) fn check_rounds(n: u32) -> Result<()> {
    if (1..=MAX_ROUNDS).contains(&n) {
        Ok(())
    } else {
        Err(ShootoutError::InvalidRounds(n))
    }
}

pub fn regular_phase_distribution<T: Prob>(
    mech: MechanismId,
    model: PressureModelId,
    params: &Params<T>,
    n: u32,
) -> Result<PhaseDistribution<T>> {
    regular_phase_distribution_with(&mech, model, params, n, EvalMethod::Auto)
}

pub fn regular_phase_distribution_with<T: Prob, R: OrderRule + ?Sized>(
    rule: &R,
    model: PressureModelId,
    params: &Params<T>,
    n: u32,
    method: EvalMethod,
) -> Result<PhaseDistribution<T>> {
    check_rounds(n)?;
    let use_enumeration = match method {
        EvalMethod::Enumerate => true,
        EvalMethod::ScoreDifferenceDp => false,
        EvalMethod::Auto => n <= ENUMERATION_LIMIT,
    };
    Ok(if use_enumeration {
        enumerate_sequences(rule, model, params, n)
    } else {
        score_difference_dp(rule, model, params, n)
    })
}

/// Adds the sudden-death outcome of every level entry to A's regular-phase wins.
pub fn join_sudden_death<T: Prob>(
    dist: &PhaseDistribution<T>,
    model: PressureModelId,
    params: &Params<T>,
) -> Result<WinReport<T>> {
    let cls = model.class();
    let mut total = dist.p_a_leads.clone();
    for (entry, mass) in &dist.tie_entries {
        if mass.is_zero() {
            continue;
        }
        let opener_wins = sd_win(entry.pattern, cls, params)?;
        let a_wins = match entry.first_kicker {
            Team::A => opener_wins,
            Team::B => T::one() - opener_wins,
        };
        total = total + mass.clone() * a_wins;
    }
    Ok(WinReport {
        bias: total.clone() - half(),
        p_a_wins_total: total,
        p_reach_sd: dist.reach_sd(),
    })
}

pub fn total_win_probability<T: Prob>(
    mech: MechanismId,
    model: PressureModelId,
    params: &Params<T>,
    n: u32,
) -> Result<WinReport<T>> {
    total_win_probability_with(&mech, model, params, n, EvalMethod::Auto)
}

pub fn total_win_probability_with<T: Prob, R: OrderRule + ?Sized>(
    rule: &R,
    model: PressureModelId,
    params: &Params<T>,
    n: u32,
    method: EvalMethod,
) -> Result<WinReport<T>> {
    let dist = regular_phase_distribution_with(rule, model, params, n, method)?;
    join_sudden_death(&dist, model, params)
}

/// Winning probabilities of all seven rules for each regular-phase length.
#[derive(Debug, Clone, PartialEq)]
pub struct WinTable<T> {
    pub rounds: Vec<u32>,
    pub rows: Vec<(MechanismId, Vec<T>)>,
}

pub fn table2<T: Prob>(
    model: PressureModelId,
    params: &Params<T>,
    n_range: impl IntoIterator<Item = u32>,
) -> Result<WinTable<T>> {
    let rounds: Vec<u32> = n_range.into_iter().collect();
    let cells: Vec<(MechanismId, u32)> = MechanismId::ALL
        .iter()
        .flat_map(|m| rounds.iter().map(move |n| (*m, *n)))
        .collect();
    let values = cells
        .par_iter()
        .map(|&(mech, n)| total_win_probability(mech, model, params, n).map(|r| r.p_a_wins_total))
        .collect::<Result<Vec<T>>>()?;
    let width = rounds.len().max(1);
    let rows = MechanismId::ALL
        .iter()
        .zip(values.chunks(width))
        .map(|(m, chunk)| (*m, chunk.to_vec()))
        .collect();
    Ok(WinTable { rounds, rows })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub p: f64,
    pub q: f64,
    pub win_probability: f64,
}

/// Evaluates every `(p, q)` pair, ascending in `q` for each `p`.
///
/// Fails if any `q` exceeds its `p`. Cells are computed in parallel; the output
/// order does not depend on scheduling.
pub fn sweep_grid(
    mech: MechanismId,
    model: PressureModelId,
    p_values: &[f64],
    q_values: &[f64],
    n: u32,
) -> Result<Vec<SweepPoint>> {
    check_rounds(n)?;
    let mut qs = q_values.to_vec();
    qs.sort_by(|a, b| a.total_cmp(b));
    let mut pairs = Vec::with_capacity(p_values.len() * qs.len());
    for &p in p_values {
        for &q in &qs {
            Params::new(p, q)?;
            pairs.push((p, q));
        }
    }
    pairs
        .par_iter()
        .map(|&(p, q)| {
            let params = Params::new(p, q)?;
            let report = total_win_probability(mech, model, &params, n)?;
            Ok(SweepPoint {
                p,
                q,
                win_probability: report.p_a_wins_total,
            })
        })
        .collect()
}
