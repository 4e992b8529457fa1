use std::fmt;

use num_traits::{Signed, Zero};
use rand::Rng;

use crate::evs::{Evs, SetKind};
use crate::rng::CheckRng;
use crate::scalar::{ExactField, FieldMode, ScalarMode};
use crate::{Rational, Scalar};

use super::{modulus_of, small_nonneg};

/// A point of the dictionary-order plane.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DictElem {
    pub x: Rational,
    pub y: Rational,
}

impl DictElem {
    pub fn new(x: Rational, y: Rational) -> Self {
        assert!(!x.is_negative() && !y.is_negative(), "coordinates must be non-negative");
        DictElem { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Self::new(Rational::from_int(x), Rational::from_int(y))
    }
}

impl fmt::Display for DictElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// `[0, ∞)²` under the lexicographic order with `α(x, y) = (|α|x, |α|y)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DictPlane {
    field: FieldMode,
}

impl DictPlane {
    pub fn new() -> Self {
        DictPlane { field: FieldMode::Complex }
    }

    pub fn with_field(field: FieldMode) -> Self {
        DictPlane { field }
    }
}

impl Default for DictPlane {
    fn default() -> Self {
        Self::new()
    }
}

impl Evs for DictPlane {
    type Elem = DictElem;

    fn name(&self) -> String {
        "dict2".into()
    }

    fn field_mode(&self) -> FieldMode {
        self.field
    }

    fn scalar_mode(&self) -> ScalarMode {
        ScalarMode::PythagoreanOnly
    }

    fn zero(&self) -> DictElem {
        DictElem { x: Rational::zero(), y: Rational::zero() }
    }

    fn add(&self, p: &DictElem, q: &DictElem) -> DictElem {
        DictElem { x: &p.x + &q.x, y: &p.y + &q.y }
    }

    fn scale(&self, s: &Scalar, p: &DictElem) -> DictElem {
        let m = modulus_of(s);
        DictElem { x: &m * &p.x, y: m * &p.y }
    }

    fn leq(&self, p: &DictElem, q: &DictElem) -> bool {
        p.x < q.x || (p.x == q.x && p.y <= q.y)
    }

    fn is_primitive(&self, p: &DictElem) -> bool {
        p.x.is_zero() && p.y.is_zero()
    }

    fn primitive_witness(&self, _p: &DictElem) -> DictElem {
        self.zero()
    }

    fn exact_primitives(&self, _p: &DictElem) -> Option<Vec<DictElem>> {
        Some(vec![self.zero()])
    }

    fn sample(&self, rng: &mut CheckRng, count: usize) -> Vec<DictElem> {
        let mut out: Vec<DictElem> = [(0, 0), (1, 0), (0, 1), (1, 1), (1, 2)].iter().map(|&(x, y)| DictElem::from_ints(x, y)).collect();
        out.truncate(count);
        while out.len() < count {
            // A coarse x grid so that ties in the first coordinate are common.
            let x = if rng.random_bool(0.5) { Rational::from_int(rng.random_range(0..=3)) } else { small_nonneg(rng) };
            out.push(DictElem::new(x, small_nonneg(rng)));
        }
        out
    }

    fn exactly_verified(&self) -> bool {
        true
    }

    fn exact_sets(&self) -> Vec<SetKind> {
        vec![SetKind::AnchoredBoxUnion]
    }
}
