//! Goal-difference chain for M3.
//!
//! Under M3 the per-round transition of the absolute goal difference does
//! not depend on who opens the round, so the chance of a level regular phase
//! is the same for every order rule.

use crate::model::Params;
use crate::prob::Prob;

/// Transition probabilities out of absolute goal difference `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Transition<T> {
    pub stay: T,
    pub up: T,
    pub down: T,
}

pub fn m3_transition<T: Prob>(params: &Params<T>, k: u32) -> Transition<T> {
    let (p, q) = (params.p().clone(), params.q().clone());
    let one = T::one;
    if k == 0 {
        // Opener scores at p; the second kicker is behind only after a goal.
        Transition {
            stay: p.clone() * q.clone() + (one() - p.clone()) * (one() - p.clone()),
            up: p.clone() * (one() - q) + (one() - p.clone()) * p,
            down: T::zero(),
        }
    } else {
        // Leader kicks at p and trailer at q, in either order.
        Transition {
            stay: p.clone() * q.clone() + (one() - p.clone()) * (one() - q.clone()),
            up: p.clone() * (one() - q.clone()),
            down: (one() - p) * q,
        }
    }
}

/// Distribution of the absolute goal difference after `rounds` rounds.
pub fn m3_difference_distribution<T: Prob>(params: &Params<T>, rounds: u32) -> Vec<T> {
    let size = rounds as usize + 2;
    let mut dist = vec![T::zero(); size];
    dist[0] = T::one();
    for _ in 0..rounds {
        let mut next = vec![T::zero(); size];
        for (k, mass) in dist.iter().enumerate() {
            if mass.is_zero() {
                continue;
            }
            let t = m3_transition(params, k as u32);
            next[k] = next[k].clone() + mass.clone() * t.stay;
            if k + 1 < size {
                next[k + 1] = next[k + 1].clone() + mass.clone() * t.up;
            }
            if k > 0 {
                next[k - 1] = next[k - 1].clone() + mass.clone() * t.down;
            }
        }
        dist = next;
    }
    dist
}

/// Probability that an `n`-round regular phase under M3 ends level.
pub fn m3_tie_probability<T: Prob>(params: &Params<T>, n: u32) -> T {
    m3_difference_distribution(params, n).swap_remove(0)
}
