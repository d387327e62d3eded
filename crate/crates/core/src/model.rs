//! Teams, parameters, shooting-order rules and pressure models.
//!
//! A shootout is played in rounds. Once a rule has picked the first kicker of
//! a round the other team kicks second, so a round is fully described by a
//! [`RoundRecord`]. Scoring probabilities come from one of three pressure
//! models evaluated on a [`KickContext`].

use std::fmt;
use std::str::FromStr;

use crate::error::{Result, ShootoutError};
use crate::prob::Prob;
use crate::sudden_death::{ModelClass, SdPattern};

/// `A` takes the very first kick of the shootout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Team {
    A,
    B,
}

impl Team {
    pub const BOTH: [Team; 2] = [Team::A, Team::B];

    pub fn other(self) -> Team {
        match self {
            Team::A => Team::B,
            Team::B => Team::A,
        }
    }

    fn index(self) -> usize {
        match self {
            Team::A => 0,
            Team::B => 1,
        }
    }
}

impl fmt::Display for Team {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Team::A => "A",
            Team::B => "B",
        })
    }
}

/// Advantaged (`p`) and disadvantaged (`q`) scoring probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct Params<T = f64> {
    p: T,
    q: T,
}

impl<T: Prob> Params<T> {
    pub fn new(p: T, q: T) -> Result<Self> {
        let valid = T::zero() <= q && q <= p && p <= T::one();
        if !valid {
            return Err(ShootoutError::InvalidParams {
                p: p.to_f64(),
                q: q.to_f64(),
            });
        }
        Ok(Params { p, q })
    }

    pub fn p(&self) -> &T {
        &self.p
    }

    pub fn q(&self) -> &T {
        &self.q
    }

    /// True for `p = q = 0` and `p = q = 1`, where no sudden-death round can
    /// ever separate the teams.
    pub fn never_resolves(&self) -> bool {
        self.p == self.q && (self.p.is_zero() || self.p.is_one())
    }

    pub fn to_float(&self) -> Params<f64> {
        Params {
            p: self.p.to_f64(),
            q: self.q.to_f64(),
        }
    }
}

/// The seven shooting-order rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MechanismId {
    /// ABAB: A first in every round.
    Standard,
    /// ABBA: the first kicker alternates, sudden death included.
    Alternating,
    /// ABBA|BAAB, repeated.
    DoubleAlternating,
    /// Alternate, except keep the order after a round where the first kicker
    /// missed and the second scored.
    CatchUp,
    /// Catch-up in the regular phase, B first in the first sudden-death round.
    AdjCatchUp,
    /// The team behind kicks first; on a tie the previous order is mirrored.
    BehindFirst,
    /// Behind-first in the regular phase, B first in the first sudden-death round.
    AdjBehindFirst,
}

impl MechanismId {
    pub const ALL: [MechanismId; 7] = [
        MechanismId::Standard,
        MechanismId::Alternating,
        MechanismId::DoubleAlternating,
        MechanismId::CatchUp,
        MechanismId::AdjCatchUp,
        MechanismId::BehindFirst,
        MechanismId::AdjBehindFirst,
    ];

    pub fn label(self) -> &'static str {
        match self {
            MechanismId::Standard => "ABAB",
            MechanismId::Alternating => "ABBA",
            MechanismId::DoubleAlternating => "ABBA|BAAB",
            MechanismId::CatchUp => "Catch-up",
            MechanismId::AdjCatchUp => "Adjusted Catch-up",
            MechanismId::BehindFirst => "Behind-first",
            MechanismId::AdjBehindFirst => "Adjusted Behind-first",
        }
    }

    pub fn slug(self) -> &'static str {
        match self {
            MechanismId::Standard => "standard",
            MechanismId::Alternating => "alternating",
            MechanismId::DoubleAlternating => "double-alternating",
            MechanismId::CatchUp => "catch-up",
            MechanismId::AdjCatchUp => "adj-catch-up",
            MechanismId::BehindFirst => "behind-first",
            MechanismId::AdjBehindFirst => "adj-behind-first",
        }
    }

    /// History-dependent rules, the only ones a team could try to manipulate.
    pub fn is_stochastic(self) -> bool {
        !matches!(
            self,
            MechanismId::Standard | MechanismId::Alternating | MechanismId::DoubleAlternating
        )
    }

    /// The rule this one follows during the regular phase.
    pub fn regular_phase_base(self) -> MechanismId {
        match self {
            MechanismId::AdjCatchUp => MechanismId::CatchUp,
            MechanismId::AdjBehindFirst => MechanismId::BehindFirst,
            other => other,
        }
    }
}

impl fmt::Display for MechanismId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for MechanismId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let key = s.trim().to_ascii_lowercase().replace(['_', ' '], "-");
        let mech = match key.as_str() {
            "standard" | "abab" => MechanismId::Standard,
            "alternating" | "abba" => MechanismId::Alternating,
            "double-alternating" | "abba|baab" | "abbabaab" => MechanismId::DoubleAlternating,
            "catch-up" | "catchup" => MechanismId::CatchUp,
            "adj-catch-up" | "adjusted-catch-up" | "adjcatchup" => MechanismId::AdjCatchUp,
            "behind-first" | "behindfirst" => MechanismId::BehindFirst,
            "adj-behind-first" | "adjusted-behind-first" | "adjbehindfirst" => {
                MechanismId::AdjBehindFirst
            }
            _ => return Err(format!("unknown mechanism {s:?}")),
        };
        Ok(mech)
    }
}

/// Which kicks carry the lower scoring probability `q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PressureModelId {
    /// The second kicker of every round.
    M1,
    /// The second kicker, but only after the first kicker scored.
    M2,
    /// Whoever kicks while their team is behind.
    M3,
}

impl PressureModelId {
    pub const ALL: [PressureModelId; 3] = [
        PressureModelId::M1,
        PressureModelId::M2,
        PressureModelId::M3,
    ];

    pub fn class(self) -> ModelClass {
        match self {
            PressureModelId::M1 => ModelClass::Class1,
            PressureModelId::M2 | PressureModelId::M3 => ModelClass::Class23,
        }
    }
}

impl fmt::Display for PressureModelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PressureModelId::M1 => "M1",
            PressureModelId::M2 => "M2",
            PressureModelId::M3 => "M3",
        })
    }
}

impl FromStr for PressureModelId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "m1" | "1" => Ok(PressureModelId::M1),
            "m2" | "2" => Ok(PressureModelId::M2),
            "m3" | "3" => Ok(PressureModelId::M3),
            _ => Err(format!("unknown pressure model {s:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RoundRecord {
    pub first_kicker: Team,
    pub first_scored: bool,
    pub second_scored: bool,
}

impl RoundRecord {
    pub fn new(first_kicker: Team, first_scored: bool, second_scored: bool) -> Self {
        RoundRecord {
            first_kicker,
            first_scored,
            second_scored,
        }
    }

    pub fn second_kicker(&self) -> Team {
        self.first_kicker.other()
    }

    pub fn goals_for(&self, team: Team) -> u32 {
        let scored = if team == self.first_kicker {
            self.first_scored
        } else {
            self.second_scored
        };
        scored as u32
    }

    /// Change in the A-minus-B goal difference produced by this round.
    pub fn diff_delta(&self) -> i32 {
        self.goals_for(Team::A) as i32 - self.goals_for(Team::B) as i32
    }
}

/// The last completed round plus the A-minus-B goal difference after it.
///
/// Every order rule decides the next first kicker from this alone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PrevRound {
    pub record: RoundRecord,
    pub score_diff: i32,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ShootoutState {
    round_index: u32,
    score: [u32; 2],
    history: Vec<RoundRecord>,
    regular_rounds: u32,
}

impl ShootoutState {
    pub fn new(regular_rounds: u32) -> Self {
        ShootoutState {
            round_index: 1,
            score: [0, 0],
            history: Vec::new(),
            regular_rounds,
        }
    }

    /// Rebuilds a state by folding `history`.
    pub fn from_history(regular_rounds: u32, history: &[RoundRecord]) -> Self {
        history
            .iter()
            .fold(ShootoutState::new(regular_rounds), |s, r| s.apply_round(*r))
    }

    /// 1-based index of the round about to be played.
    pub fn round_index(&self) -> u32 {
        self.round_index
    }

    pub fn regular_rounds(&self) -> u32 {
        self.regular_rounds
    }

    pub fn score(&self, team: Team) -> u32 {
        self.score[team.index()]
    }

    /// Goals of A minus goals of B.
    pub fn score_diff(&self) -> i32 {
        self.score[0] as i32 - self.score[1] as i32
    }

    pub fn history(&self) -> &[RoundRecord] {
        &self.history
    }

    pub fn in_sudden_death(&self) -> bool {
        self.round_index > self.regular_rounds
    }

    pub fn last_round(&self) -> Option<PrevRound> {
        self.history.last().map(|record| PrevRound {
            record: *record,
            score_diff: self.score_diff(),
        })
    }

    pub fn apply_round(mut self, record: RoundRecord) -> Self {
        for team in Team::BOTH {
            self.score[team.index()] += record.goals_for(team);
        }
        self.history.push(record);
        self.round_index += 1;
        self
    }

    pub fn with_round(&self, record: RoundRecord) -> Self {
        self.clone().apply_round(record)
    }

    pub(crate) fn push_round(&mut self, record: RoundRecord) {
        for team in Team::BOTH {
            self.score[team.index()] += record.goals_for(team);
        }
        self.history.push(record);
        self.round_index += 1;
    }

    pub(crate) fn pop_round(&mut self) {
        if let Some(record) = self.history.pop() {
            for team in Team::BOTH {
                self.score[team.index()] -= record.goals_for(team);
            }
            self.round_index -= 1;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KickSlot {
    FirstOfRound,
    SecondOfRound,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct KickContext {
    pub kicker: Team,
    pub slot: KickSlot,
    /// Present exactly for the second kick of a round.
    pub first_kick_scored_this_round: Option<bool>,
    /// Strictly behind at the moment of the kick, counting a goal already
    /// scored earlier in the same round.
    pub kicker_trailing_now: bool,
}

impl KickContext {
    /// Opening kick of a round, `score_diff` being A minus B before it.
    pub fn first(kicker: Team, score_diff: i32) -> Self {
        KickContext {
            kicker,
            slot: KickSlot::FirstOfRound,
            first_kick_scored_this_round: None,
            kicker_trailing_now: trails(kicker, score_diff),
        }
    }

    /// Closing kick of a round, `score_diff` already including the first kick.
    pub fn second(kicker: Team, first_scored: bool, score_diff: i32) -> Self {
        KickContext {
            kicker,
            slot: KickSlot::SecondOfRound,
            first_kick_scored_this_round: Some(first_scored),
            kicker_trailing_now: trails(kicker, score_diff),
        }
    }
}

fn trails(team: Team, score_diff: i32) -> bool {
    match team {
        Team::A => score_diff < 0,
        Team::B => score_diff > 0,
    }
}

pub fn scoring_probability<T: Prob>(
    model: PressureModelId,
    params: &Params<T>,
    ctx: &KickContext,
) -> T {
    let penalised = match model {
        PressureModelId::M1 => ctx.slot == KickSlot::SecondOfRound,
        PressureModelId::M2 => {
            ctx.slot == KickSlot::SecondOfRound && ctx.first_kick_scored_this_round == Some(true)
        }
        PressureModelId::M3 => ctx.kicker_trailing_now,
    };
    if penalised {
        params.q.clone()
    } else {
        params.p.clone()
    }
}

/// Decides who opens each round.
///
/// Implemented by [`MechanismId`]; the exact engine is generic over it so
/// alternative rules can be plugged in.
pub trait OrderRule {
    fn first_kicker(&self, round_index: u32, regular_rounds: u32, prev: Option<&PrevRound>)
        -> Team;

    /// Order pattern of the sudden death entered after `regular_rounds`.
    fn sudden_death_pattern(&self, regular_rounds: u32) -> SdPattern;
}

impl<R: OrderRule + ?Sized> OrderRule for &R {
    fn first_kicker(
        &self,
        round_index: u32,
        regular_rounds: u32,
        prev: Option<&PrevRound>,
    ) -> Team {
        (**self).first_kicker(round_index, regular_rounds, prev)
    }

    fn sudden_death_pattern(&self, regular_rounds: u32) -> SdPattern {
        (**self).sudden_death_pattern(regular_rounds)
    }
}

impl OrderRule for MechanismId {
    fn first_kicker(
        &self,
        round_index: u32,
        regular_rounds: u32,
        prev: Option<&PrevRound>,
    ) -> Team {
        let prev = match prev {
            Some(prev) if round_index > 1 => prev,
            _ => return Team::A,
        };
        let odd = |r: u32| if r % 2 == 1 { Team::A } else { Team::B };
        match self {
            MechanismId::Standard => Team::A,
            MechanismId::Alternating => odd(round_index),
            MechanismId::DoubleAlternating => match round_index % 4 {
                0 | 1 => Team::A,
                _ => Team::B,
            },
            MechanismId::CatchUp => catch_up(prev),
            MechanismId::BehindFirst => behind_first(prev),
            MechanismId::AdjCatchUp | MechanismId::AdjBehindFirst
                if round_index > regular_rounds =>
            {
                // B opens round n+1, then the order alternates.
                if (round_index - regular_rounds) % 2 == 1 {
                    Team::B
                } else {
                    Team::A
                }
            }
            MechanismId::AdjCatchUp => catch_up(prev),
            MechanismId::AdjBehindFirst => behind_first(prev),
        }
    }

    fn sudden_death_pattern(&self, regular_rounds: u32) -> SdPattern {
        match self {
            MechanismId::Standard => SdPattern::StandardOrder,
            MechanismId::DoubleAlternating => {
                if regular_rounds % 2 == 1 {
                    SdPattern::DoubleAltTwoFirst
                } else {
                    SdPattern::DoubleAltOneFirst
                }
            }
            _ => SdPattern::AlternatingOrder,
        }
    }
}

fn catch_up(prev: &PrevRound) -> Team {
    let r = prev.record;
    if !r.first_scored && r.second_scored {
        r.first_kicker
    } else {
        r.first_kicker.other()
    }
}

fn behind_first(prev: &PrevRound) -> Team {
    match prev.score_diff {
        d if d < 0 => Team::A,
        d if d > 0 => Team::B,
        _ => prev.record.first_kicker.other(),
    }
}

pub fn first_kicker_of_round<R: OrderRule + ?Sized>(rule: &R, state: &ShootoutState) -> Team {
    rule.first_kicker(
        state.round_index(),
        state.regular_rounds(),
        state.last_round().as_ref(),
    )
}

/// Probability of each of the four outcomes of a round, together with the
/// record describing it. Zero-probability outcomes are kept.
pub(crate) fn round_outcomes<T: Prob>(
    model: PressureModelId,
    params: &Params<T>,
    first_kicker: Team,
    score_diff: i32,
) -> [(RoundRecord, T); 4] {
    let second = first_kicker.other();
    let s1 = scoring_probability(model, params, &KickContext::first(first_kicker, score_diff));
    let step = |t: Team| if t == Team::A { 1 } else { -1 };
    let after_goal = score_diff + step(first_kicker);
    let s2_hit = scoring_probability(
        model,
        params,
        &KickContext::second(second, true, after_goal),
    );
    let s2_miss = scoring_probability(
        model,
        params,
        &KickContext::second(second, false, score_diff),
    );
    let one = T::one();
    [
        (
            RoundRecord::new(first_kicker, true, true),
            s1.clone() * s2_hit.clone(),
        ),
        (
            RoundRecord::new(first_kicker, true, false),
            s1.clone() * (one.clone() - s2_hit),
        ),
        (
            RoundRecord::new(first_kicker, false, true),
            (one.clone() - s1.clone()) * s2_miss.clone(),
        ),
        (
            RoundRecord::new(first_kicker, false, false),
            (one.clone() - s1) * (one - s2_miss),
        ),
    ]
}
