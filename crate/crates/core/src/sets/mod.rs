//! Representable subsets and their deciders.

pub mod corpus;
mod family;
mod interval;
pub mod oracle;
mod predicate;
pub mod radial;
mod rect;
mod slice;
pub mod transport;

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use thiserror::Error;

pub use family::LatticeFamily;
pub use interval::{AbsorbingEscape, Interval, IntervalUnion};
pub use predicate::PredicateSet;
pub use rect::{Rect, RectUnion};
pub use slice::{ProductSlice, SlicePiece, VectorRegion};

use crate::instances::{ConeElem, DictElem, Subspace};
use crate::outcome::{CheckOutcome, Verdict, Witness};
use crate::rng::{substream, CheckRng};
use crate::scalar::{sample_scalar, ExactField, FieldMode, ScalarMode};
use crate::{Rational, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SetError {
    #[error("the empty set has no balanced or absorbing verdict")]
    Empty,
    #[error("outside the domain: {0}")]
    Domain(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
}

/// Operations shared by the exact set representations.
pub trait SetAlgebra: Clone + fmt::Display + Send + Sync {
    type Elem: Clone + fmt::Display;

    fn contains(&self, x: &Self::Elem) -> bool;
    fn is_empty(&self) -> bool;
    fn union(&self, other: &Self) -> Self;
    fn intersection(&self, other: &Self) -> Self;
    /// Image under `x ↦ λx`.
    fn scale(&self, s: &Scalar) -> Self;
    fn up(&self) -> Self;
    fn down(&self) -> Self;
    fn is_subset(&self, other: &Self) -> bool;
    fn is_balanced(&self) -> Result<CheckOutcome, SetError>;
    fn is_absorbing(&self) -> Result<CheckOutcome, SetError>;
    /// θ of the ambient evs.
    fn theta(&self) -> Self::Elem;

    fn set_eq(&self, other: &Self) -> bool {
        self.is_subset(other) && other.is_subset(self)
    }
}

impl SetAlgebra for IntervalUnion<Rational> {
    type Elem = Rational;

    fn contains(&self, x: &Rational) -> bool {
        IntervalUnion::contains(self, x)
    }
    fn is_empty(&self) -> bool {
        IntervalUnion::is_empty(self)
    }
    fn union(&self, other: &Self) -> Self {
        IntervalUnion::union(self, other)
    }
    fn intersection(&self, other: &Self) -> Self {
        IntervalUnion::intersection(self, other)
    }
    fn scale(&self, s: &Scalar) -> Self {
        IntervalUnion::scale(self, s)
    }
    fn up(&self) -> Self {
        IntervalUnion::up(self)
    }
    fn down(&self) -> Self {
        IntervalUnion::down(self)
    }
    fn is_subset(&self, other: &Self) -> bool {
        IntervalUnion::is_subset(self, other)
    }
    fn is_balanced(&self) -> Result<CheckOutcome, SetError> {
        IntervalUnion::is_balanced(self)
    }
    fn is_absorbing(&self) -> Result<CheckOutcome, SetError> {
        IntervalUnion::is_absorbing(self)
    }
    fn theta(&self) -> Rational {
        Rational::from_int(0)
    }
}

impl SetAlgebra for RectUnion<Rational> {
    type Elem = DictElem;

    fn contains(&self, p: &DictElem) -> bool {
        RectUnion::contains(self, &p.x, &p.y)
    }
    fn is_empty(&self) -> bool {
        RectUnion::is_empty(self)
    }
    fn union(&self, other: &Self) -> Self {
        RectUnion::union(self, other)
    }
    fn intersection(&self, other: &Self) -> Self {
        RectUnion::intersection(self, other)
    }
    fn scale(&self, s: &Scalar) -> Self {
        let m = s.rational_modulus().unwrap_or_else(|| panic!("scalar {s} has irrational modulus"));
        self.scale_modulus(&m)
    }
    fn up(&self) -> Self {
        RectUnion::up(self)
    }
    fn down(&self) -> Self {
        RectUnion::down(self)
    }
    fn is_subset(&self, other: &Self) -> bool {
        RectUnion::is_subset(self, other)
    }
    fn is_balanced(&self) -> Result<CheckOutcome, SetError> {
        RectUnion::is_balanced(self)
    }
    fn is_absorbing(&self) -> Result<CheckOutcome, SetError> {
        RectUnion::is_absorbing(self)
    }
    fn theta(&self) -> DictElem {
        DictElem::from_ints(0, 0)
    }
}

impl SetAlgebra for LatticeFamily {
    type Elem = Subspace;

    fn contains(&self, y: &Subspace) -> bool {
        LatticeFamily::contains(self, y)
    }
    fn is_empty(&self) -> bool {
        LatticeFamily::is_empty(self)
    }
    fn union(&self, other: &Self) -> Self {
        LatticeFamily::union(self, other)
    }
    fn intersection(&self, other: &Self) -> Self {
        LatticeFamily::intersection(self, other)
    }
    fn scale(&self, s: &Scalar) -> Self {
        LatticeFamily::scale(self, s)
    }
    fn up(&self) -> Self {
        LatticeFamily::up(self)
    }
    fn down(&self) -> Self {
        LatticeFamily::down(self)
    }
    fn is_subset(&self, other: &Self) -> bool {
        LatticeFamily::is_subset(self, other)
    }
    fn is_balanced(&self) -> Result<CheckOutcome, SetError> {
        LatticeFamily::is_balanced(self)
    }
    fn is_absorbing(&self) -> Result<CheckOutcome, SetError> {
        LatticeFamily::is_absorbing(self)
    }
    fn theta(&self) -> Subspace {
        Subspace::zero(2)
    }
}

/// Budget of the sampled balanced falsifier used through the trait.
const SLICE_BALANCED_BUDGET: u64 = 256;

impl SetAlgebra for ProductSlice {
    type Elem = ConeElem;

    fn contains(&self, x: &ConeElem) -> bool {
        ProductSlice::contains(self, x)
    }
    fn is_empty(&self) -> bool {
        ProductSlice::is_empty(self)
    }
    fn union(&self, other: &Self) -> Self {
        ProductSlice::union(self, other)
    }
    fn intersection(&self, other: &Self) -> Self {
        ProductSlice::intersection(self, other)
    }
    fn scale(&self, s: &Scalar) -> Self {
        ProductSlice::scale(self, s)
    }
    fn up(&self) -> Self {
        ProductSlice::up(self)
    }
    fn down(&self) -> Self {
        ProductSlice::down(self)
    }
    fn is_subset(&self, other: &Self) -> bool {
        ProductSlice::is_subset(self, other)
    }
    fn is_balanced(&self) -> Result<CheckOutcome, SetError> {
        ProductSlice::is_balanced(self, SLICE_BALANCED_BUDGET)
    }
    fn is_absorbing(&self) -> Result<CheckOutcome, SetError> {
        ProductSlice::is_absorbing(self)
    }
    fn theta(&self) -> ConeElem {
        ConeElem::new(Rational::from_int(0), vec![Scalar::zero(); self.dim()])
    }
}

fn small_endpoint(rng: &mut CheckRng) -> Rational {
    let d = [1, 2, 4][rng.random_range(0..3)];
    Rational::from_ratio(rng.random_range(0..=12), d)
}

fn small_length(rng: &mut CheckRng) -> Rational {
    let d = [1, 2, 4][rng.random_range(0..3)];
    Rational::from_ratio(rng.random_range(1..=8), d)
}

/// A random interval with endpoints in `¼ℤ ∩ [0, 20]`, starting at `lo`.
fn random_interval_from(rng: &mut CheckRng, lo: Rational, lo_closed: bool) -> Interval<Rational> {
    if rng.random_ratio(1, 8) {
        return Interval::point(lo);
    }
    let hi = (!rng.random_ratio(1, 10)).then(|| lo.clone() + small_length(rng));
    let hi_closed = hi.is_some() && rng.random_bool(0.5);
    Interval::new(lo, lo_closed, hi, hi_closed).expect("positive length")
}

pub fn random_interval(rng: &mut CheckRng) -> Interval<Rational> {
    let lo = small_endpoint(rng);
    let closed = rng.random_bool(0.5);
    random_interval_from(rng, lo, closed)
}

/// A random interval union; about half of them contain a component `[0, ·`.
pub fn random_interval_union(rng: &mut CheckRng) -> IntervalUnion<Rational> {
    let k = rng.random_range(1..=3);
    let mut parts: Vec<Interval<Rational>> = (0..k).map(|_| random_interval(rng)).collect();
    if rng.random_bool(0.5) {
        parts[0] = random_interval_from(rng, Rational::from_int(0), true);
    }
    IntervalUnion::new(parts)
}

pub fn random_rect_union(rng: &mut CheckRng) -> RectUnion<Rational> {
    let k = rng.random_range(1..=3);
    let mut rects: Vec<Rect<Rational>> = (0..k).map(|_| Rect::new(random_interval(rng), random_interval(rng))).collect();
    if rng.random_bool(0.5) {
        let zero = Rational::from_int(0);
        let x = random_interval_from(rng, zero.clone(), true);
        let y = random_interval_from(rng, zero, true);
        rects[0] = Rect::new(x, y);
    }
    RectUnion::new(rects)
}

fn random_subspace(rng: &mut CheckRng) -> Subspace {
    match rng.random_range(0..5) {
        0 => Subspace::zero(2),
        1 => Subspace::full(2),
        _ => crate::instances::random_line(rng),
    }
}

pub fn random_family(rng: &mut CheckRng) -> LatticeFamily {
    match rng.random_range(0..4) {
        0 => LatticeFamily::all(),
        1 => LatticeFamily::all_except((0..rng.random_range(1..=2)).map(|_| random_subspace(rng)).collect::<Vec<_>>()),
        _ => LatticeFamily::finite((0..rng.random_range(1..=3)).map(|_| random_subspace(rng)).collect::<Vec<_>>()),
    }
}

fn random_region(rng: &mut CheckRng, n: usize) -> VectorRegion {
    match rng.random_range(0..6) {
        0 => VectorRegion::All,
        1 | 2 => {
            let vecs = (0..rng.random_range(1..=2))
                .map(|_| (0..n).map(|_| crate::instances::small_scalar(rng, FieldMode::Complex)).collect())
                .collect();
            VectorRegion::Finite(vecs)
        }
        _ => VectorRegion::Ball { radius: small_length(rng), closed: rng.random_bool(0.5) },
    }
}

pub fn random_slice(rng: &mut CheckRng, n: usize) -> ProductSlice {
    let k = rng.random_range(1..=2);
    let mut pieces: Vec<SlicePiece> = (0..k).map(|_| SlicePiece { r: random_interval(rng), v: random_region(rng, n) }).collect();
    if rng.random_bool(0.5) {
        pieces[0].r = random_interval_from(rng, Rational::from_int(0), true);
    }
    ProductSlice::new(n, pieces)
}

/// Law ids for the absorbing closure properties.
pub const ABSORBING_LAWS: [&str; 5] = ["absorbing.i", "absorbing.ii", "absorbing.iii", "absorbing.iv", "absorbing.v"];
/// Law ids for the balanced closure properties.
pub const BALANCED_LAWS: [&str; 5] = ["balanced.i", "balanced.ii", "balanced.iii", "balanced.iv", "balanced.v"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Property {
    Absorbing,
    Balanced,
}

impl Property {
    fn decide<S: SetAlgebra>(self, a: &S) -> Result<CheckOutcome, SetError> {
        match self {
            Property::Absorbing => a.is_absorbing(),
            Property::Balanced => a.is_balanced(),
        }
    }

    fn laws(self) -> [&'static str; 5] {
        match self {
            Property::Absorbing => ABSORBING_LAWS,
            Property::Balanced => BALANCED_LAWS,
        }
    }

    fn label(self) -> &'static str {
        match self {
            Property::Absorbing => "absorbing",
            Property::Balanced => "balanced",
        }
    }
}

/// How a generated set fares under the decider.
fn holds<S: SetAlgebra>(p: Property, a: &S) -> bool {
    matches!(p.decide(a), Ok(o) if o.verdict == Verdict::Proven)
}

fn violated<S: SetAlgebra>(p: Property, a: &S) -> bool {
    !matches!(p.decide(a), Ok(o) if o.verdict != Verdict::Refuted)
}

/// Sources of random sets and scalars for the closure-law drivers.
pub struct SetSource<'a, S> {
    pub generate: &'a (dyn Fn(&mut CheckRng) -> S + Sync),
    pub scalar_mode: ScalarMode,
    pub field: FieldMode,
}

impl<S: SetAlgebra> SetSource<'_, S> {
    fn scalar(&self, rng: &mut CheckRng) -> Scalar {
        sample_scalar(rng, &Rational::from_int(4), self.scalar_mode, self.field)
    }

    /// A generated set with property `p`, or `None` after a bounded search.
    fn with_property(&self, p: Property, rng: &mut CheckRng) -> Option<S> {
        (0..64).map(|_| (self.generate)(rng)).find(|a| holds(p, a))
    }
}

/// Checks the five closure laws of `p` on generated sets:
/// (i) `θ ∈ A`, (ii) `A ∩ B`, (iii) `A ∪ C` (any `C` for absorbing, `C`
/// with the property for balanced), (iv) `↑A` and `↓A`, (v) `λA` (with
/// `λ ≠ 0` for absorbing). Laws over infinitely many sets are at best
/// Unfalsified.
pub fn check_closure_laws<S: SetAlgebra>(
    p: Property,
    source: &SetSource<'_, S>,
    budget: u64,
    seed: u64,
) -> BTreeMap<&'static str, CheckOutcome> {
    let mut rng = substream(seed, &format!("closure-{}", p.label()));
    let ids = p.laws();
    let mut results: BTreeMap<&'static str, CheckOutcome> = BTreeMap::new();
    let mut tried = [0u64; 5];
    let mut record = |idx: usize, fail: Option<Witness>, results: &mut BTreeMap<&'static str, CheckOutcome>| {
        tried[idx] += 1;
        let entry = results.entry(ids[idx]).or_insert_with(|| CheckOutcome::unfalsified(0, seed));
        if entry.verdict != Verdict::Refuted {
            entry.samples_tried = tried[idx];
            if let Some(w) = fail {
                *entry = CheckOutcome::refuted(w, tried[idx], seed);
            }
        }
    };
    for _ in 0..budget {
        let Some(a) = source.with_property(p, &mut rng) else { continue };
        let theta = a.theta();
        record(0, (!a.contains(&theta)).then(|| Witness::new().with("A", &a).with("theta", &theta)), &mut results);

        if let Some(b) = source.with_property(p, &mut rng) {
            let ab = a.intersection(&b);
            record(1, violated(p, &ab).then(|| Witness::new().with("A", &a).with("B", &b)), &mut results);
        }

        let c = match p {
            Property::Absorbing => Some((source.generate)(&mut rng)),
            Property::Balanced => source.with_property(p, &mut rng),
        };
        if let Some(c) = c {
            let ac = a.union(&c);
            record(2, violated(p, &ac).then(|| Witness::new().with("A", &a).with("C", &c)), &mut results);
        }

        let (up, down) = (a.up(), a.down());
        let fail = if violated(p, &up) {
            Some(Witness::new().with("A", &a).with("up", &up))
        } else if violated(p, &down) {
            Some(Witness::new().with("A", &a).with("down", &down))
        } else {
            None
        };
        record(3, fail, &mut results);

        let mut lambda = source.scalar(&mut rng);
        if p == Property::Absorbing && lambda.is_zero() {
            lambda = Scalar::one();
        }
        let la = a.scale(&lambda);
        record(4, violated(p, &la).then(|| Witness::new().with("A", &a).with("lambda", &lambda)), &mut results);
    }
    for id in ids {
        results.entry(id).or_insert_with(|| CheckOutcome::unfalsified(0, seed).with_note("no generated set had the property"));
    }
    results
}

/// Outcome of a set-level check for reporting.
pub fn describe(outcome: &Result<CheckOutcome, SetError>) -> String {
    match outcome {
        Ok(o) => match &o.witness {
            Some(w) => format!("{} ({w})", o.verdict),
            None => o.verdict.to_string(),
        },
        Err(e) => format!("error: {e}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn interval_closure_laws_hold() {
        let source = SetSource { generate: &random_interval_union, scalar_mode: ScalarMode::PythagoreanOnly, field: FieldMode::Complex };
        for p in [Property::Absorbing, Property::Balanced] {
            let laws = check_closure_laws(p, &source, 200, 42);
            assert_eq!(laws.len(), 5);
            for (id, o) in &laws {
                assert_eq!(o.verdict, Verdict::Unfalsified, "{id}: {:?}", o.witness);
                assert!(o.samples_tried > 0, "{id}");
            }
        }
    }

    #[test]
    fn rect_and_family_closure_laws_hold() {
        let rects = SetSource { generate: &random_rect_union, scalar_mode: ScalarMode::PythagoreanOnly, field: FieldMode::Complex };
        let fams = SetSource { generate: &random_family, scalar_mode: ScalarMode::AnyScalar, field: FieldMode::Complex };
        for p in [Property::Absorbing, Property::Balanced] {
            for (id, o) in check_closure_laws(p, &rects, 60, 7) {
                assert!(!o.is_refuted(), "{id}: {:?}", o.witness);
            }
            for (id, o) in check_closure_laws(p, &fams, 60, 7) {
                assert!(!o.is_refuted(), "{id}: {:?}", o.witness);
            }
        }
    }

    #[test]
    fn closure_examples() {
        let a = IntervalUnion::single(Interval::closed_open(q(0, 1), q(1, 1)));
        let b = IntervalUnion::single(Interval::closed(q(0, 1), q(1, 2)));
        assert_eq!(a.intersection(&b), b);
        assert!(IntervalUnion::is_absorbing(&b).unwrap().is_proven());
        let d = IntervalUnion::single(Interval::closed_open(q(1, 1), q(2, 1))).down();
        assert_eq!(d, IntervalUnion::single(Interval::closed_open(q(0, 1), q(2, 1))));
        assert!(IntervalUnion::is_absorbing(&d).unwrap().is_proven());
        let two = IntervalUnion::scale(&a, &Scalar::from_ratio(2, 1));
        assert_eq!(two.to_string(), "[0,2)");
        let up = IntervalUnion::up(&a);
        assert_eq!(up.to_string(), "[0,inf)");
        assert!(IntervalUnion::is_balanced(&up).unwrap().is_proven());
        let closed = IntervalUnion::single(Interval::closed(q(0, 1), q(1, 1)));
        let scaled = IntervalUnion::scale(&closed, &Scalar::from_ratio(-3, 1));
        assert_eq!(scaled.to_string(), "[0,3]");
        assert!(IntervalUnion::is_balanced(&scaled).unwrap().is_proven());
    }
}
