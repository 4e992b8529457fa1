//! Brute-force grid oracles for subsets of `[0, ∞)`.
//!
//! These only evaluate membership, so they are independent of the interval
//! arithmetic behind the exact deciders. Every gap between components with
//! endpoints in `¼ℤ ∩ [0, 20]` contains a point of the `⅛`-grid, which makes
//! the grid verdicts exact for the generated corpus.

use num_traits::Zero;

use crate::scalar::ExactField;
use crate::Rational;

use super::IntervalUnion;

const GRID_DENOM: i64 = 8;
const GRID_MAX: i64 = 24;

fn grid() -> impl Iterator<Item = Rational> {
    (0..=GRID_MAX * GRID_DENOM).map(|p| Rational::from_ratio(p, GRID_DENOM))
}

/// Balanced on `[0, ∞)`: every grid `y ≤ x` with grid `x ∈ A` lies in `A`
/// (take `α = y/x`), and `0 ∈ A`.
pub fn grid_balanced(a: &IntervalUnion<Rational>) -> bool {
    let pts: Vec<Rational> = grid().collect();
    let members: Vec<bool> = pts.iter().map(|p| a.contains(p)).collect();
    let Some(top) = members.iter().rposition(|&m| m) else {
        return true;
    };
    members[..=top].iter().all(|&m| m)
}

/// Absorbing on `[0, ∞)`: for `x ∈ {1/2, 1, 16}` some `α = 1/k`, `k ≤ 256`,
/// keeps every `t·x/k` (`t` on a `1/16` grid of `[0, 1]`) inside `A`. The
/// shortest generated 0-component is `[0, 1/4)`, reached from `x = 16` by
/// `k > 64`.
pub fn grid_absorbing(a: &IntervalUnion<Rational>) -> bool {
    [Rational::from_ratio(1, 2), Rational::from_int(1), Rational::from_int(16)].iter().all(|x| {
        (1..=256).any(|k| {
            (0..=16).all(|t| {
                let mu = Rational::from_ratio(t, 16) / Rational::from_int(k);
                a.contains(&(mu * x))
            })
        })
    })
}

/// Bounded per the definition: for each basic neighbourhood `[0, 1/j)`,
/// `j ≤ 8`, some `μ = 1/n`, `n ≤ 1000`, maps every probed member of `A`
/// inside it. Probes are the grid plus the integers up to 1000.
pub fn grid_bounded(a: &IntervalUnion<Rational>) -> bool {
    // All probes land inside iff the largest one does.
    let Some(top) = grid().chain((GRID_MAX + 1..=1000).map(Rational::from_int)).filter(|p| a.contains(p)).max() else {
        return true;
    };
    (1..=8).all(|j| {
        let nbhd = Rational::from_ratio(1, j);
        (1..=1000).any(|n| &top * Rational::from_ratio(1, n) < nbhd)
    })
}

pub fn grid_contains_zero(a: &IntervalUnion<Rational>) -> bool {
    a.contains(&Rational::zero())
}
