use num_traits::Zero;

use crate::evs::{Evs, SetKind};
use crate::rng::CheckRng;
use crate::scalar::{ExactField, FieldMode, ScalarMode};
use crate::{Rational, Scalar};

use super::{modulus_of, small_nonneg};

/// `[0, ∞)` with ordinary addition and the action `λ·r = |λ|r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HalfLine {
    field: FieldMode,
}

impl HalfLine {
    pub fn new() -> Self {
        HalfLine { field: FieldMode::Complex }
    }

    pub fn with_field(field: FieldMode) -> Self {
        HalfLine { field }
    }
}

impl Default for HalfLine {
    fn default() -> Self {
        Self::new()
    }
}

impl Evs for HalfLine {
    type Elem = Rational;

    fn name(&self) -> String {
        "halfline".into()
    }

    fn field_mode(&self) -> FieldMode {
        self.field
    }

    fn scalar_mode(&self) -> ScalarMode {
        ScalarMode::PythagoreanOnly
    }

    fn zero(&self) -> Rational {
        Rational::from_int(0)
    }

    fn add(&self, x: &Rational, y: &Rational) -> Rational {
        x + y
    }

    fn scale(&self, s: &Scalar, x: &Rational) -> Rational {
        modulus_of(s) * x
    }

    fn leq(&self, x: &Rational, y: &Rational) -> bool {
        x <= y
    }

    fn is_primitive(&self, x: &Rational) -> bool {
        x.is_zero()
    }

    fn primitive_witness(&self, _x: &Rational) -> Rational {
        self.zero()
    }

    fn exact_primitives(&self, _x: &Rational) -> Option<Vec<Rational>> {
        Some(vec![self.zero()])
    }

    fn sample(&self, rng: &mut CheckRng, count: usize) -> Vec<Rational> {
        let mut out: Vec<Rational> = [(0, 1), (1, 1), (1, 2), (2, 1), (3, 4)].iter().map(|&(n, d)| Rational::from_ratio(n, d)).collect();
        out.truncate(count);
        while out.len() < count {
            out.push(small_nonneg(rng));
        }
        out
    }

    fn exactly_verified(&self) -> bool {
        true
    }

    fn exact_sets(&self) -> Vec<SetKind> {
        vec![SetKind::IntervalUnion]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evs::{check_axioms, primitive_samples};

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn action_factors_through_modulus() {
        let h = HalfLine::new();
        assert_eq!(h.scale(&Scalar::from_ratio(-1, 1), &q(3, 1)), q(3, 1));
        let unit = Scalar::new(q(3, 5), q(4, 5));
        assert_eq!(h.scale(&unit, &q(2, 1)), q(2, 1));
        assert!(h.is_primitive(&q(0, 1)));
        assert!(!h.is_primitive(&q(1, 2)));
    }

    /// A1–A4 reduce to identities of ordered-field arithmetic once the action
    /// is `|λ|r`: `|λ|(r+s) = |λ|r+|λ|s`, `|λ||μ| = |λμ|`, `|λ+μ| ≤ |λ|+|μ|`,
    /// `|λ|r = 0 ⟺ λ = 0 ∨ r = 0`. The grid below exercises each identity
    /// exhaustively on a bounded-height lattice of values.
    #[test]
    fn laws_hold_on_exhaustive_grid() {
        let h = HalfLine::new();
        let vals: Vec<Rational> = (0..=6).flat_map(|n| (1..=3).map(move |d| q(n, d))).collect();
        let scalars: Vec<Scalar> = vec![
            Scalar::zero(),
            Scalar::one(),
            -Scalar::one(),
            Scalar::from_ratio(2, 3),
            Scalar::new(q(3, 5), q(4, 5)),
            Scalar::new(q(-5, 13), q(12, 13)),
            Scalar::i(),
        ];
        for r in &vals {
            for s in &vals {
                assert_eq!(h.add(r, s), h.add(s, r));
                for a in &scalars {
                    assert_eq!(h.scale(a, &h.add(r, s)), h.add(&h.scale(a, r), &h.scale(a, s)));
                    if r <= s {
                        assert!(h.scale(a, r) <= h.scale(a, s));
                    }
                    for b in &scalars {
                        assert_eq!(h.scale(a, &h.scale(b, r)), h.scale(&(a * b), r));
                        let sum = a + b;
                        if sum.rational_modulus().is_some() {
                            assert!(h.scale(&sum, r) <= h.scale(a, r) + h.scale(b, r));
                        }
                    }
                    assert_eq!(h.scale(a, r).is_zero(), a.is_zero() || r.is_zero());
                }
            }
        }
    }

    #[test]
    fn axiom_suite_is_proven() {
        let results = check_axioms(&HalfLine::new(), 500, 42);
        assert_eq!(results.len(), 13);
        assert!(results.iter().all(|r| r.outcome.is_proven()), "{results:?}");
    }

    #[test]
    fn primitives_are_zero() {
        assert_eq!(primitive_samples(&HalfLine::new(), &q(5, 2), 10, 1), vec![q(0, 1)]);
    }
}
