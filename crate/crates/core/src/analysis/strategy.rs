//! One-shot deliberate-miss deviations, evaluated by backward induction.
//!
//! At every reachable second kick of the regular phase the kicking team may
//! miss on purpose. Continuation play is honest; sudden death uses the
//! closed forms, where a miss can only forfeit.

use std::collections::{HashMap, HashSet};

use crate::error::Result;
use crate::model::{
    first_kicker_of_round, round_outcomes, scoring_probability, KickContext, OrderRule, Params,
    PressureModelId, PrevRound, RoundRecord, ShootoutState, Team,
};
use crate::sudden_death::sd_win;

/// Gains at or below this are treated as zero.
pub const GAIN_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct DeviationValue {
    /// State at the start of the round.
    pub state: ShootoutState,
    pub first_kick_scored: bool,
    /// Team taking the second kick.
    pub kicker: Team,
    pub honest_value: f64,
    pub deliberate_miss_value: f64,
    /// `deliberate_miss_value - honest_value`, from the kicker's side.
    pub gain: f64,
}

type Key = (u32, i32, Option<PrevRound>);

fn key(state: &ShootoutState) -> Key {
    (state.round_index(), state.score_diff(), state.last_round())
}

struct GameValues<'a, R: ?Sized> {
    rule: &'a R,
    model: PressureModelId,
    params: &'a Params<f64>,
    memo: HashMap<Key, f64>,
}

impl<'a, R: OrderRule + ?Sized> GameValues<'a, R> {
    /// A's winning probability from the start of the next round, honest play.
    fn value(&mut self, state: &ShootoutState) -> Result<f64> {
        if state.in_sudden_death() {
            return match state.score_diff() {
                d if d > 0 => Ok(1.0),
                d if d < 0 => Ok(0.0),
                _ => {
                    let opener = first_kicker_of_round(self.rule, state);
                    let pattern = self.rule.sudden_death_pattern(state.regular_rounds());
                    let w = sd_win(pattern, self.model.class(), self.params)?;
                    Ok(if opener == Team::A { w } else { 1.0 - w })
                }
            };
        }
        let k = key(state);
        if let Some(v) = self.memo.get(&k) {
            return Ok(*v);
        }
        let first = first_kicker_of_round(self.rule, state);
        let mut total = 0.0;
        for (record, mass) in round_outcomes(self.model, self.params, first, state.score_diff()) {
            if mass > 0.0 {
                total += mass * self.value(&state.with_round(record))?;
            }
        }
        self.memo.insert(k, total);
        Ok(total)
    }
}

/// A's winning probability under honest play, by backward induction.
pub fn honest_root_value<R: OrderRule + ?Sized>(
    rule: &R,
    model: PressureModelId,
    params: &Params<f64>,
    n: u32,
) -> Result<f64> {
    crate::engine::check_rounds(n)?;
    let mut values = GameValues {
        rule,
        model,
        params,
        memo: HashMap::new(),
    };
    values.value(&ShootoutState::new(n))
}

/// Every reachable second-kick decision point where missing on purpose
/// raises the kicking team's winning probability.
pub fn strategy_proofness_scan<R: OrderRule + ?Sized>(
    rule: &R,
    model: PressureModelId,
    params: &Params<f64>,
    n: u32,
) -> Result<Vec<DeviationValue>> {
    let mut found: Vec<_> = deviation_values(rule, model, params, n)?
        .into_iter()
        .filter(|d| d.gain > GAIN_TOLERANCE)
        .collect();
    found.sort_by(|a, b| b.gain.total_cmp(&a.gain));
    Ok(found)
}

/// Honest and deliberate-miss values at every reachable second kick of the
/// regular phase, profitable or not.
pub fn deviation_values<R: OrderRule + ?Sized>(
    rule: &R,
    model: PressureModelId,
    params: &Params<f64>,
    n: u32,
) -> Result<Vec<DeviationValue>> {
    crate::engine::check_rounds(n)?;
    let mut values = GameValues {
        rule,
        model,
        params,
        memo: HashMap::new(),
    };
    let mut found = Vec::new();
    let mut seen = HashSet::new();
    let mut stack = vec![ShootoutState::new(n)];
    while let Some(state) = stack.pop() {
        if state.in_sudden_death() || !seen.insert(key(&state)) {
            continue;
        }
        let first = first_kicker_of_round(rule, &state);
        let second = first.other();
        let diff = state.score_diff();
        let s1 = scoring_probability(model, params, &KickContext::first(first, diff));
        for first_scored in [true, false] {
            let reach = if first_scored { s1 } else { 1.0 - s1 };
            if reach <= 0.0 {
                continue;
            }
            let mid = diff
                + if !first_scored {
                    0
                } else if first == Team::A {
                    1
                } else {
                    -1
                };
            let s2 = scoring_probability(
                model,
                params,
                &KickContext::second(second, first_scored, mid),
            );
            let side = |v: f64| if second == Team::A { v } else { 1.0 - v };
            let hit = side(values.value(&state.with_round(RoundRecord::new(
                first,
                first_scored,
                true,
            )))?);
            let miss = side(values.value(&state.with_round(RoundRecord::new(
                first,
                first_scored,
                false,
            )))?);
            let honest = s2 * hit + (1.0 - s2) * miss;
            found.push(DeviationValue {
                state: state.clone(),
                first_kick_scored: first_scored,
                kicker: second,
                honest_value: honest,
                deliberate_miss_value: miss,
                gain: miss - honest,
            });
        }
        for (record, mass) in round_outcomes(model, params, first, diff) {
            if mass > 0.0 {
                stack.push(state.with_round(record));
            }
        }
    }
    Ok(found)
}
