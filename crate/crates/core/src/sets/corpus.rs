//! Corpus checks on `[0, ∞)`: exact deciders against the grid oracles and
//! the interval form of balanced absorbing sets.

use std::collections::BTreeSet;

use num_traits::Zero;

use crate::outcome::{CheckOutcome, Verdict, Witness};
use crate::rng::substream;
use crate::Rational;

use super::{oracle, random_interval_union, Interval, IntervalUnion};

type Set = IntervalUnion<Rational>;

/// `n` random interval unions from a named substream of `seed`.
pub fn halfline_corpus(n: u64, seed: u64) -> Vec<Set> {
    let mut rng = substream(seed, "halfline-corpus");
    (0..n).map(|_| random_interval_union(&mut rng)).collect()
}

fn proven(o: Result<CheckOutcome, super::SetError>) -> bool {
    o.is_ok_and(|o| o.verdict == Verdict::Proven)
}

/// Decider vs grid oracle for balanced and absorbing, in that order.
pub fn check_oracle_agreement(corpus: &[Set], seed: u64) -> [CheckOutcome; 2] {
    let mut out = [CheckOutcome::proven(0, seed), CheckOutcome::proven(0, seed)];
    for a in corpus.iter().filter(|a| !a.is_empty()) {
        let pairs = [(proven(a.is_balanced()), oracle::grid_balanced(a)), (proven(a.is_absorbing()), oracle::grid_absorbing(a))];
        for (o, (exact, grid)) in out.iter_mut().zip(pairs) {
            o.samples_tried += 1;
            if exact != grid && !o.is_refuted() {
                let w = Witness::new().with("A", a).with("decider", exact).with("grid", grid);
                *o = CheckOutcome::refuted(w, o.samples_tried, seed);
            }
        }
    }
    for o in &mut out {
        if !o.is_refuted() {
            o.verdict = Verdict::Unfalsified;
        }
    }
    out
}

/// A single interval `[0, b)`, `[0, b]` or `[0, ∞)` of positive length.
pub fn is_anchored_interval(a: &Set) -> bool {
    matches!(a.components(), [c] if c.lo().is_zero() && c.lo_closed() && !c.is_degenerate())
}

/// Interval containing 0, the unamended form.
fn is_interval_with_zero(a: &Set) -> bool {
    matches!(a.components(), [c] if c.contains(&Rational::zero()))
}

/// `(balanced ∧ absorbing) ⟺ anchored nondegenerate interval` over the
/// corpus, and separately the sets violating the unamended form "interval
/// containing 0". `{0}` is always probed, so it is reported once.
pub fn check_interval_form(corpus: &[Set], seed: u64) -> (CheckOutcome, CheckOutcome) {
    let zero = IntervalUnion::single(Interval::point(Rational::zero()));
    let mut amended = CheckOutcome::unfalsified(0, seed);
    let mut violators = BTreeSet::new();
    let mut tried = 0;
    for a in corpus.iter().chain(std::iter::once(&zero)).filter(|a| !a.is_empty()) {
        tried += 1;
        let lhs = proven(a.is_balanced()) && proven(a.is_absorbing());
        if lhs != is_anchored_interval(a) && !amended.is_refuted() {
            amended = CheckOutcome::refuted(Witness::new().with("A", a).with("balanced_and_absorbing", lhs), tried, seed);
        }
        if lhs != is_interval_with_zero(a) {
            violators.insert(a.to_string());
        }
    }
    amended.samples_tried = tried;
    let unamended = if violators.is_empty() {
        CheckOutcome::unfalsified(tried, seed)
    } else {
        let list: Vec<String> = violators.into_iter().collect();
        let w = Witness::new()
            .with("count", list.len())
            .with("sets", list.join(" ; "))
            .with("reason", "interval containing 0 that is not absorbing");
        CheckOutcome::refuted(w, tried, seed)
    };
    (amended, unamended)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_checks_agree() {
        let corpus = halfline_corpus(300, 42);
        for o in check_oracle_agreement(&corpus, 42) {
            assert_eq!(o.verdict, Verdict::Unfalsified, "{:?}", o.witness);
        }
        let (amended, unamended) = check_interval_form(&corpus, 42);
        assert_eq!(amended.verdict, Verdict::Unfalsified, "{:?}", amended.witness);
        let w = unamended.witness.unwrap();
        assert_eq!((w.get("count"), w.get("sets")), (Some("1"), Some("[0,0]")));
    }
}
