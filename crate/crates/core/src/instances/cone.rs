use std::fmt;

use num_traits::{Signed, Zero};
use rand::Rng;

use crate::evs::{Evs, SetKind};
use crate::rng::CheckRng;
use crate::scalar::{ExactField, FieldMode, ScalarMode};
use crate::{Rational, Scalar};

use super::{modulus_of, small_nonneg, small_scalar};

/// An element `(r, a)` with `r ≥ 0` and `a` a vector of scalars.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ConeElem {
    pub r: Rational,
    pub a: Vec<Scalar>,
}

impl ConeElem {
    pub fn new(r: Rational, a: Vec<Scalar>) -> Self {
        assert!(!r.is_negative(), "radial coordinate must be non-negative, got {r}");
        ConeElem { r, a }
    }

    pub fn zero(n: usize) -> Self {
        ConeElem { r: Rational::zero(), a: vec![Scalar::zero(); n] }
    }

    fn sum(&self, other: &Self) -> Self {
        ConeElem { r: &self.r + &other.r, a: self.a.iter().zip(&other.a).map(|(x, y)| x + y).collect() }
    }

    fn times_vector(&self, s: &Scalar) -> Vec<Scalar> {
        self.a.iter().map(|x| s * x).collect()
    }
}

impl fmt::Display for ConeElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},(", self.r)?;
        for (i, x) in self.a.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("))")
    }
}

fn sample_cone(rng: &mut CheckRng, n: usize, field: FieldMode, count: usize) -> Vec<ConeElem> {
    let unit = |k: usize| {
        let mut a = vec![Scalar::zero(); n];
        a[k] = Scalar::one();
        a
    };
    let mut out = vec![
        ConeElem::zero(n),
        ConeElem::new(Rational::from_int(1), vec![Scalar::zero(); n]),
        ConeElem::new(Rational::zero(), unit(0)),
        ConeElem::new(Rational::from_int(2), unit(n - 1)),
    ];
    out.truncate(count);
    while out.len() < count {
        let r = if rng.random_bool(0.25) { Rational::zero() } else { small_nonneg(rng) };
        let a = if rng.random_bool(0.25) { vec![Scalar::zero(); n] } else { (0..n).map(|_| small_scalar(rng, field)).collect() };
        out.push(ConeElem::new(r, a));
    }
    out
}

/// `[0, ∞) × Kⁿ` with `α(r, a) = (|α|r, αa)` and `(r, a) ≤ (s, b)` iff
/// `r ≤ s` and `a = b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConeProduct {
    n: usize,
    field: FieldMode,
}

impl ConeProduct {
    pub fn new(n: usize) -> Self {
        Self::with_field(n, FieldMode::Complex)
    }

    pub fn with_field(n: usize, field: FieldMode) -> Self {
        assert!(n >= 1, "cone dimension must be at least 1");
        ConeProduct { n, field }
    }

    pub fn dim(&self) -> usize {
        self.n
    }
}

impl Evs for ConeProduct {
    type Elem = ConeElem;

    fn name(&self) -> String {
        format!("cone:{}", self.n)
    }

    fn field_mode(&self) -> FieldMode {
        self.field
    }

    fn scalar_mode(&self) -> ScalarMode {
        ScalarMode::PythagoreanOnly
    }

    fn zero(&self) -> ConeElem {
        ConeElem::zero(self.n)
    }

    fn add(&self, x: &ConeElem, y: &ConeElem) -> ConeElem {
        x.sum(y)
    }

    fn scale(&self, s: &Scalar, x: &ConeElem) -> ConeElem {
        ConeElem { r: modulus_of(s) * &x.r, a: x.times_vector(s) }
    }

    fn leq(&self, x: &ConeElem, y: &ConeElem) -> bool {
        x.r <= y.r && x.a == y.a
    }

    fn is_primitive(&self, x: &ConeElem) -> bool {
        x.r.is_zero()
    }

    fn primitive_witness(&self, x: &ConeElem) -> ConeElem {
        ConeElem { r: Rational::zero(), a: x.a.clone() }
    }

    fn exact_primitives(&self, x: &ConeElem) -> Option<Vec<ConeElem>> {
        Some(vec![self.primitive_witness(x)])
    }

    fn sample(&self, rng: &mut CheckRng, count: usize) -> Vec<ConeElem> {
        sample_cone(rng, self.n, self.field, count)
    }

    fn exact_sets(&self) -> Vec<SetKind> {
        vec![SetKind::ProductSlice]
    }
}

/// `[0, ∞) × Kⁿ` with the twisted action `α(r, a) = (r, αa)` for `α ≠ 0`
/// and `0(r, a) = (0, θ)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TwistedProduct {
    n: usize,
    field: FieldMode,
}

impl TwistedProduct {
    pub fn new(n: usize) -> Self {
        Self::with_field(n, FieldMode::Complex)
    }

    pub fn with_field(n: usize, field: FieldMode) -> Self {
        assert!(n >= 1, "twisted dimension must be at least 1");
        TwistedProduct { n, field }
    }

    pub fn dim(&self) -> usize {
        self.n
    }
}

impl Evs for TwistedProduct {
    type Elem = ConeElem;

    fn name(&self) -> String {
        format!("twisted:{}", self.n)
    }

    fn field_mode(&self) -> FieldMode {
        self.field
    }

    fn scalar_mode(&self) -> ScalarMode {
        ScalarMode::AnyScalar
    }

    fn zero(&self) -> ConeElem {
        ConeElem::zero(self.n)
    }

    fn add(&self, x: &ConeElem, y: &ConeElem) -> ConeElem {
        x.sum(y)
    }

    fn scale(&self, s: &Scalar, x: &ConeElem) -> ConeElem {
        if s.is_zero() {
            self.zero()
        } else {
            ConeElem { r: x.r.clone(), a: x.times_vector(s) }
        }
    }

    fn leq(&self, x: &ConeElem, y: &ConeElem) -> bool {
        x.r <= y.r && x.a == y.a
    }

    fn is_primitive(&self, x: &ConeElem) -> bool {
        x.r.is_zero()
    }

    fn primitive_witness(&self, x: &ConeElem) -> ConeElem {
        ConeElem { r: Rational::zero(), a: x.a.clone() }
    }

    fn exact_primitives(&self, x: &ConeElem) -> Option<Vec<ConeElem>> {
        Some(vec![self.primitive_witness(x)])
    }

    fn sample(&self, rng: &mut CheckRng, count: usize) -> Vec<ConeElem> {
        sample_cone(rng, self.n, self.field, count)
    }
}
