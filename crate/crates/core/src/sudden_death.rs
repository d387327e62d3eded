//! Closed-form sudden-death winning probabilities.
//!
//! Each sudden-death round starts level, so only the order pattern and the
//! model class matter. M2 and M3 coincide here: the second kicker is behind
//! exactly when the first kicker has just scored.

use crate::error::{Result, ShootoutError};
use crate::model::{round_outcomes, Params, PressureModelId, Team};
use crate::prob::Prob;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ModelClass {
    /// M1.
    Class1,
    /// M2 and M3.
    Class23,
}

impl ModelClass {
    pub const ALL: [ModelClass; 2] = [ModelClass::Class1, ModelClass::Class23];

    /// A model that belongs to this class.
    pub fn representative(self) -> PressureModelId {
        match self {
            ModelClass::Class1 => PressureModelId::M1,
            ModelClass::Class23 => PressureModelId::M2,
        }
    }
}

/// Who opens each sudden-death round, relative to the team opening the first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SdPattern {
    /// X Y X Y ... with X first in every round.
    StandardOrder,
    /// XY, YX, XY, ...
    AlternatingOrder,
    /// X opens rounds 1-2, Y rounds 3-4, repeating.
    DoubleAltTwoFirst,
    /// X opens round 1, Y rounds 2-3, X rounds 4-5, ...
    DoubleAltOneFirst,
}

impl SdPattern {
    pub const ALL: [SdPattern; 4] = [
        SdPattern::StandardOrder,
        SdPattern::AlternatingOrder,
        SdPattern::DoubleAltTwoFirst,
        SdPattern::DoubleAltOneFirst,
    ];

    /// Whether the team that opened sudden death also opens round `sd_round`
    /// (0-based).
    pub fn entry_team_opens(self, sd_round: u64) -> bool {
        match self {
            SdPattern::StandardOrder => true,
            SdPattern::AlternatingOrder => sd_round.is_multiple_of(2),
            SdPattern::DoubleAltTwoFirst => sd_round % 4 < 2,
            SdPattern::DoubleAltOneFirst => matches!(sd_round % 4, 0 | 3),
        }
    }
}

/// Probability that a single sudden-death round produces a winner.
pub fn resolution_probability<T: Prob>(cls: ModelClass, params: &Params<T>) -> T {
    let (p, q) = (params.p().clone(), params.q().clone());
    let two = T::from_ratio(2, 1);
    match cls {
        // p + q - 2pq
        ModelClass::Class1 => p.clone() + q.clone() - two * p * q,
        // 2p - pq - p^2
        ModelClass::Class23 => two * p.clone() - p.clone() * q - p.clone() * p,
    }
}

/// Probability that a sudden-death round ends level.
pub fn tie_probability<T: Prob>(cls: ModelClass, params: &Params<T>) -> T {
    T::one() - resolution_probability(cls, params)
}

/// Winning probability of the team opening sudden death.
pub fn sd_win<T: Prob>(pattern: SdPattern, cls: ModelClass, params: &Params<T>) -> Result<T> {
    let degenerate = || ShootoutError::DegenerateParameters {
        p: params.p().to_f64(),
        q: params.q().to_f64(),
    };
    if resolution_probability(cls, params).is_zero() {
        return Err(degenerate());
    }
    let one = T::one;
    let two = || T::from_ratio(2, 1);
    let (p, q) = (params.p().clone(), params.q().clone());
    // Opener wins a round it opens.
    let opener_round = p.clone() * (one() - q.clone());
    // Opener wins a round the other team opens.
    let closer_round = match cls {
        ModelClass::Class1 => (one() - p.clone()) * q.clone(),
        ModelClass::Class23 => (one() - p.clone()) * p.clone(),
    };
    let tie = tie_probability(cls, params);

    let (numer, denom) = match (pattern, cls) {
        (SdPattern::StandardOrder, _) => (opener_round, one() - tie),
        (SdPattern::AlternatingOrder, ModelClass::Class1) => (
            one() - q.clone() + p.clone() * q.clone(),
            two() - p.clone() - q.clone() + two() * p * q,
        ),
        (SdPattern::AlternatingOrder, ModelClass::Class23) => (
            one() - p.clone() + p.clone() * p.clone(),
            two() - two() * p.clone() + p.clone() * q + p.clone() * p,
        ),
        (SdPattern::DoubleAltTwoFirst, _) => (
            opener_round.clone() + tie.clone() * opener_round + tie.clone() * tie.clone(),
            one() + tie.clone() * tie,
        ),
        (SdPattern::DoubleAltOneFirst, _) => (
            opener_round + tie.clone() * closer_round + tie.clone() * tie.clone(),
            one() + tie.clone() * tie,
        ),
    };
    if denom.is_zero() {
        return Err(degenerate());
    }
    Ok(numer / denom)
}

/// Lower and upper bounds on a sudden-death winning probability.
#[derive(Debug, Clone, PartialEq)]
pub struct SdBracket<T> {
    pub lower: T,
    pub upper: T,
}

impl<T: Prob> SdBracket<T> {
    pub fn width(&self) -> T {
        self.upper.clone() - self.lower.clone()
    }

    pub fn midpoint(&self) -> T {
        (self.lower.clone() + self.upper.clone()) / T::from_ratio(2, 1)
    }

    pub fn contains(&self, x: &T) -> bool {
        self.lower <= *x && *x <= self.upper
    }
}

/// Plays `horizon` sudden-death rounds kick by kick and brackets the opener's
/// winning probability by the unresolved remainder.
///
/// Uses the class's representative model; see
/// [`sd_win_truncated_for_model`] to run a specific model.
pub fn sd_win_truncated_oracle<T: Prob>(
    pattern: SdPattern,
    cls: ModelClass,
    params: &Params<T>,
    horizon: u32,
) -> SdBracket<T> {
    sd_win_truncated_for_model(pattern, cls.representative(), params, horizon)
}

pub fn sd_win_truncated_for_model<T: Prob>(
    pattern: SdPattern,
    model: PressureModelId,
    params: &Params<T>,
    horizon: u32,
) -> SdBracket<T> {
    // Team A opens sudden death here; every round starts level.
    let mut alive = T::one();
    let mut won = T::zero();
    for round in 0..u64::from(horizon.max(1)) {
        let opener = if pattern.entry_team_opens(round) {
            Team::A
        } else {
            Team::B
        };
        let mut level = T::zero();
        for (record, mass) in round_outcomes(model, params, opener, 0) {
            match record.diff_delta() {
                d if d > 0 => won = won + alive.clone() * mass,
                0 => level = level + mass,
                _ => {}
            }
        }
        alive = alive * level;
    }
    SdBracket {
        upper: won.clone() + alive,
        lower: won,
    }
}

/// Expected number of sudden-death rounds, infinite when no round can decide.
#[derive(Debug, Clone, PartialEq)]
pub enum ExpectedLength<T> {
    Rounds(T),
    Infinite,
}

impl<T: Prob> ExpectedLength<T> {
    pub fn to_f64(&self) -> f64 {
        match self {
            ExpectedLength::Rounds(x) => x.to_f64(),
            ExpectedLength::Infinite => f64::INFINITY,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuddenDeathStats<T> {
    /// Opener's winning probability; `None` when not requested or degenerate.
    pub first_kicker_win: Option<T>,
    pub resolution_prob: T,
    pub expected_length: ExpectedLength<T>,
}

pub fn sd_stats<T: Prob>(cls: ModelClass, params: &Params<T>) -> SuddenDeathStats<T> {
    let r = resolution_probability(cls, params);
    let expected_length = if r.is_zero() {
        ExpectedLength::Infinite
    } else {
        ExpectedLength::Rounds(T::one() / r.clone())
    };
    SuddenDeathStats {
        first_kicker_win: None,
        resolution_prob: r,
        expected_length,
    }
}

/// [`sd_stats`] with the opener's winning probability for `pattern` filled in.
pub fn sd_summary<T: Prob>(
    pattern: SdPattern,
    cls: ModelClass,
    params: &Params<T>,
) -> SuddenDeathStats<T> {
    SuddenDeathStats {
        first_kicker_win: sd_win(pattern, cls, params).ok(),
        ..sd_stats(cls, params)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::BigRational;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::from_ratio(n, d)
    }

    fn exact_params() -> Params<BigRational> {
        Params::new(rat(3, 4), rat(2, 3)).unwrap()
    }

    #[test]
    fn closed_forms_at_three_quarters_two_thirds() {
        let params = exact_params();
        // (1/4) / (5/12)
        assert_eq!(
            sd_win(SdPattern::StandardOrder, ModelClass::Class1, &params).unwrap(),
            rat(3, 5)
        );
        assert_eq!(
            sd_win(SdPattern::AlternatingOrder, ModelClass::Class1, &params).unwrap(),
            rat(10, 19)
        );
        assert_eq!(
            sd_win(SdPattern::StandardOrder, ModelClass::Class23, &params).unwrap(),
            rat(4, 7)
        );
    }

    #[test]
    fn resolution_and_expected_length() {
        let params = exact_params();
        let s1 = sd_stats(ModelClass::Class1, &params);
        assert_eq!(s1.resolution_prob, rat(5, 12));
        assert_eq!(s1.expected_length, ExpectedLength::Rounds(rat(12, 5)));
        let s23 = sd_stats(ModelClass::Class23, &params);
        assert_eq!(s23.resolution_prob, rat(7, 16));
        assert_eq!(s23.expected_length, ExpectedLength::Rounds(rat(16, 7)));

        let sure = Params::new(1.0, 1.0).unwrap();
        for cls in ModelClass::ALL {
            let s = sd_stats(cls, &sure);
            assert_eq!(s.resolution_prob, 0.0);
            assert_eq!(s.expected_length, ExpectedLength::Infinite);
            assert!(s.expected_length.to_f64().is_infinite());
        }
    }

    #[test]
    fn degenerate_parameters_are_reported() {
        for (p, q) in [(1.0, 1.0), (0.0, 0.0)] {
            let params = Params::new(p, q).unwrap();
            for pattern in SdPattern::ALL {
                for cls in ModelClass::ALL {
                    assert!(matches!(
                        sd_win(pattern, cls, &params),
                        Err(ShootoutError::DegenerateParameters { .. })
                    ));
                    assert_eq!(sd_summary(pattern, cls, &params).first_kicker_win, None);
                }
            }
        }
    }

    #[test]
    fn one_round_unroll() {
        let params = Params::new(0.75, 2.0 / 3.0).unwrap();
        let b = sd_win_truncated_oracle(SdPattern::StandardOrder, ModelClass::Class1, &params, 1);
        let (p, q) = (0.75, 2.0 / 3.0);
        assert!((b.lower - p * (1.0 - q)).abs() < 1e-15);
        assert!((b.upper - (p * (1.0 - q) + p * q + (1.0 - p) * (1.0 - q))).abs() < 1e-15);
    }

    #[test]
    fn oracle_never_narrows_when_every_kick_scores() {
        let params = Params::new(1.0, 1.0).unwrap();
        for pattern in SdPattern::ALL {
            let b = sd_win_truncated_oracle(pattern, ModelClass::Class1, &params, 500);
            assert_eq!((b.lower, b.upper), (0.0, 1.0));
        }
    }

    #[test]
    fn oracle_brackets_closed_form_at_horizon_sixty() {
        let params = Params::new(0.75, 2.0 / 3.0).unwrap();
        let b = sd_win_truncated_oracle(SdPattern::StandardOrder, ModelClass::Class1, &params, 60);
        assert!(b.width() < 1e-12);
        assert!((b.midpoint() - 0.6).abs() < 1e-12);
    }

    #[test]
    fn exact_oracle_brackets_every_closed_form() {
        let params = exact_params();
        for pattern in SdPattern::ALL {
            for cls in ModelClass::ALL {
                let closed = sd_win(pattern, cls, &params).unwrap();
                let b = sd_win_truncated_oracle(pattern, cls, &params, 12);
                assert!(b.contains(&closed), "{pattern:?} {cls:?}");
                let t = tie_probability(cls, &params);
                assert!(b.width() <= num::pow(t, 12));
            }
        }
    }

    #[test]
    fn m2_and_m3_agree_in_sudden_death() {
        let params = exact_params();
        for pattern in SdPattern::ALL {
            let m2 = sd_win_truncated_for_model(pattern, PressureModelId::M2, &params, 8);
            let m3 = sd_win_truncated_for_model(pattern, PressureModelId::M3, &params, 8);
            assert_eq!(m2, m3);
        }
    }

    #[test]
    fn exact_symmetry_at_equal_skill() {
        let params = Params::new(rat(7, 10), rat(7, 10)).unwrap();
        for cls in ModelClass::ALL {
            for pattern in [SdPattern::StandardOrder, SdPattern::AlternatingOrder] {
                assert_eq!(sd_win(pattern, cls, &params).unwrap(), rat(1, 2));
            }
        }
    }

    proptest! {
        #[test]
        fn closed_forms_stay_inside_the_oracle_bracket(p in 0.05f64..0.95, frac in 0.0f64..=1.0) {
            let params = Params::new(p, p * frac).unwrap();
            for pattern in SdPattern::ALL {
                for cls in ModelClass::ALL {
                    let closed = sd_win(pattern, cls, &params).unwrap();
                    prop_assert!((0.0..=1.0).contains(&closed));
                    let b = sd_win_truncated_oracle(pattern, cls, &params, 400);
                    prop_assert!((closed - b.midpoint()).abs() <= b.width() + 1e-12);
                }
            }
        }

        #[test]
        fn first_mover_advantage_under_m1(p in 0.01f64..0.99, frac in 0.0f64..0.999) {
            let params = Params::new(p, p * frac).unwrap();
            let w = sd_win(SdPattern::StandardOrder, ModelClass::Class1, &params).unwrap();
            prop_assert!(w > 0.5);
        }

        #[test]
        fn expected_length_times_resolution_is_one(p in 0.01f64..=1.0, frac in 0.0f64..0.999) {
            let params = Params::new(p, p * frac).unwrap();
            for cls in ModelClass::ALL {
                let s = sd_stats(cls, &params);
                prop_assert!((s.expected_length.to_f64() * s.resolution_prob - 1.0).abs() < 1e-12);
            }
        }

        #[test]
        fn patterns_are_fair_at_equal_skill(p in 0.01f64..0.99) {
            let params = Params::new(p, p).unwrap();
            for cls in ModelClass::ALL {
                for pattern in [SdPattern::StandardOrder, SdPattern::AlternatingOrder] {
                    prop_assert!((sd_win(pattern, cls, &params).unwrap() - 0.5).abs() < 1e-12);
                }
                // Opening one round then conceding two mirrors opening two.
                let two = sd_win(SdPattern::DoubleAltTwoFirst, cls, &params).unwrap();
                let one = sd_win(SdPattern::DoubleAltOneFirst, cls, &params).unwrap();
                prop_assert!((two - 0.5).abs() < 1e-12 && (one - 0.5).abs() < 1e-12);
            }
        }
    }
}
