use std::collections::BTreeMap;

use crate::model::{round_outcomes, OrderRule, Params, PressureModelId, PrevRound};
use crate::prob::Prob;

use super::{PhaseDistribution, SdEntry};

/// Regular-phase distribution by forward dynamic programming.
///
/// The state after each round is the goal difference together with the last
/// round's order and outcome, which is all any order rule and pressure model
/// reads. Work is polynomial in `n`.
pub fn score_difference_dp<T: Prob, R: OrderRule + ?Sized>(
    rule: &R,
    model: PressureModelId,
    params: &Params<T>,
    n: u32,
) -> PhaseDistribution<T> {
    let mut layer: BTreeMap<(i32, Option<PrevRound>), T> = BTreeMap::new();
    layer.insert((0, None), T::one());
    for round in 1..=n {
        let mut next: BTreeMap<(i32, Option<PrevRound>), T> = BTreeMap::new();
        for ((diff, prev), mass) in layer {
            let first = rule.first_kicker(round, n, prev.as_ref());
            for (record, m) in round_outcomes(model, params, first, diff) {
                let score_diff = diff + record.diff_delta();
                let key = (score_diff, Some(PrevRound { record, score_diff }));
                let slot = next.entry(key).or_insert_with(T::zero);
                *slot = slot.clone() + mass.clone() * m;
            }
        }
        layer = next;
    }

    let mut acc = PhaseDistribution::empty();
    for ((diff, prev), mass) in layer {
        acc.add(
            diff,
            || SdEntry {
                first_kicker: rule.first_kicker(n + 1, n, prev.as_ref()),
                pattern: rule.sudden_death_pattern(n),
            },
            mass,
        );
    }
    acc
}
