use crate::model::{
    first_kicker_of_round, round_outcomes, OrderRule, Params, PressureModelId, ShootoutState,
};
use crate::prob::Prob;

use super::{PhaseDistribution, SdEntry};

/// Walks all `2^(2n)` kick sequences of an `n`-round regular phase.
///
/// Every kick is taken even after the result is settled; the later kicks
/// cannot change who leads, and their probabilities sum to one.
///
/// Each subtree returns its distribution conditional on being reached, and
/// parents weight their children's. Sums are formed level by level rather
/// than leaf by leaf into one accumulator, which keeps float rounding from
/// growing with the number of sequences.
pub fn enumerate_sequences<T: Prob, R: OrderRule + ?Sized>(
    rule: &R,
    model: PressureModelId,
    params: &Params<T>,
    n: u32,
) -> PhaseDistribution<T> {
    let mut state = ShootoutState::new(n);
    walk(rule, model, params, &mut state)
}

fn walk<T: Prob, R: OrderRule + ?Sized>(
    rule: &R,
    model: PressureModelId,
    params: &Params<T>,
    state: &mut ShootoutState,
) -> PhaseDistribution<T> {
    let first = first_kicker_of_round(rule, state);
    let mut dist = PhaseDistribution::empty();
    if state.in_sudden_death() {
        let n = state.regular_rounds();
        dist.add(
            state.score_diff(),
            || SdEntry {
                first_kicker: first,
                pattern: rule.sudden_death_pattern(n),
            },
            T::one(),
        );
        return dist;
    }
    for (record, m) in round_outcomes(model, params, first, state.score_diff()) {
        state.push_round(record);
        let child = walk(rule, model, params, state);
        state.pop_round();
        dist.add_scaled(&child, &m);
    }
    dist
}
