//! Finite unions of intervals in `[0, ∞)` with exact endpoint arithmetic.

use std::cmp::Ordering;
use std::fmt;

use crate::outcome::{CheckOutcome, Witness};
use crate::scalar::{ExactField, Gaussian};

use super::SetError;

/// A nonempty interval of `[0, ∞)`. `hi = None` means unbounded above.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interval<F> {
    lo: F,
    lo_closed: bool,
    hi: Option<F>,
    hi_closed: bool,
}

impl<F: ExactField> Interval<F> {
    /// Rejects negative left endpoints and empty intervals.
    pub fn new(lo: F, lo_closed: bool, hi: Option<F>, hi_closed: bool) -> Result<Self, SetError> {
        if lo.is_negative() {
            return Err(SetError::Domain(format!("left endpoint {lo} is negative")));
        }
        let hi_closed = hi_closed && hi.is_some();
        if let Some(h) = &hi {
            match lo.cmp(h) {
                Ordering::Greater => return Err(SetError::Empty),
                Ordering::Equal if !(lo_closed && hi_closed) => return Err(SetError::Empty),
                _ => {}
            }
        }
        Ok(Interval { lo, lo_closed, hi, hi_closed })
    }

    fn build(lo: F, lo_closed: bool, hi: Option<F>, hi_closed: bool) -> Self {
        Self::new(lo, lo_closed, hi, hi_closed).unwrap_or_else(|e| panic!("invalid interval: {e}"))
    }

    /// `[a, b]`
    pub fn closed(a: F, b: F) -> Self {
        Self::build(a, true, Some(b), true)
    }

    /// `[a, b)`
    pub fn closed_open(a: F, b: F) -> Self {
        Self::build(a, true, Some(b), false)
    }

    /// `(a, b)`
    pub fn open(a: F, b: F) -> Self {
        Self::build(a, false, Some(b), false)
    }

    /// `(a, b]`
    pub fn open_closed(a: F, b: F) -> Self {
        Self::build(a, false, Some(b), true)
    }

    /// `[a, ∞)`
    pub fn at_least(a: F) -> Self {
        Self::build(a, true, None, false)
    }

    /// `(a, ∞)`
    pub fn greater_than(a: F) -> Self {
        Self::build(a, false, None, false)
    }

    /// `{a}`
    pub fn point(a: F) -> Self {
        Self::build(a.clone(), true, Some(a), true)
    }

    pub fn lo(&self) -> &F {
        &self.lo
    }

    pub fn lo_closed(&self) -> bool {
        self.lo_closed
    }

    pub fn hi(&self) -> Option<&F> {
        self.hi.as_ref()
    }

    pub fn hi_closed(&self) -> bool {
        self.hi_closed
    }

    pub fn is_degenerate(&self) -> bool {
        self.hi.as_ref() == Some(&self.lo)
    }

    pub fn is_bounded(&self) -> bool {
        self.hi.is_some()
    }

    pub fn contains(&self, x: &F) -> bool {
        let above = *x > self.lo || (self.lo_closed && *x == self.lo);
        let below = match &self.hi {
            None => true,
            Some(h) => x < h || (self.hi_closed && x == h),
        };
        above && below
    }

    /// Some point of the interval: the left end when attained, else the
    /// midpoint (or `lo + 1` when unbounded).
    pub fn representative(&self) -> F {
        if self.lo_closed {
            self.lo.clone()
        } else {
            match &self.hi {
                Some(h) => self.lo.midpoint(h),
                None => self.lo.clone() + F::one(),
            }
        }
    }

    /// A random point of the interval with small height relative to its ends.
    pub fn sample_point<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> F {
        if self.is_degenerate() {
            return self.lo.clone();
        }
        if self.lo_closed && rng.random_bool(0.2) {
            return self.lo.clone();
        }
        match &self.hi {
            Some(h) => {
                if self.hi_closed && rng.random_bool(0.2) {
                    return h.clone();
                }
                let k = rng.random_range(2..=8);
                let j = rng.random_range(1..k);
                self.lo.clone() + (h.clone() - self.lo.clone()) * F::from_ratio(j, k)
            }
            None => {
                let k = rng.random_range(1..=4);
                self.lo.clone() + F::from_ratio(rng.random_range(1..=12), k)
            }
        }
    }

    pub fn intersect(&self, other: &Self) -> Option<Self> {
        let (lo, lo_closed) = match self.lo.cmp(&other.lo) {
            Ordering::Less => (other.lo.clone(), other.lo_closed),
            Ordering::Greater => (self.lo.clone(), self.lo_closed),
            Ordering::Equal => (self.lo.clone(), self.lo_closed && other.lo_closed),
        };
        let (hi, hi_closed) = match (&self.hi, &other.hi) {
            (None, None) => (None, false),
            (Some(h), None) => (Some(h.clone()), self.hi_closed),
            (None, Some(h)) => (Some(h.clone()), other.hi_closed),
            (Some(a), Some(b)) => match a.cmp(b) {
                Ordering::Less => (Some(a.clone()), self.hi_closed),
                Ordering::Greater => (Some(b.clone()), other.hi_closed),
                Ordering::Equal => (Some(a.clone()), self.hi_closed && other.hi_closed),
            },
        };
        Self::new(lo, lo_closed, hi, hi_closed).ok()
    }

    /// `self ⊆ other`
    pub fn is_subset(&self, other: &Self) -> bool {
        let lo_ok = other.lo < self.lo || (other.lo == self.lo && (other.lo_closed || !self.lo_closed));
        let hi_ok = match (&self.hi, &other.hi) {
            (_, None) => true,
            (None, Some(_)) => false,
            (Some(a), Some(b)) => a < b || (a == b && (other.hi_closed || !self.hi_closed)),
        };
        lo_ok && hi_ok
    }

    /// Minkowski sum: an end is closed only when both summands' ends are.
    pub fn sum(&self, other: &Self) -> Self {
        let hi = match (&self.hi, &other.hi) {
            (Some(a), Some(b)) => Some(a.clone() + b.clone()),
            _ => None,
        };
        Interval {
            lo: self.lo.clone() + other.lo.clone(),
            lo_closed: self.lo_closed && other.lo_closed,
            hi,
            hi_closed: self.hi_closed && other.hi_closed,
        }
    }

    /// Image under `r ↦ m·r` for `m > 0`.
    pub fn scale_positive(&self, m: &F) -> Self {
        assert!(m.is_positive(), "scale factor must be positive");
        Interval {
            lo: self.lo.clone() * m.clone(),
            lo_closed: self.lo_closed,
            hi: self.hi.as_ref().map(|h| h.clone() * m.clone()),
            hi_closed: self.hi_closed,
        }
    }

    /// Whether `self` followed by `next` (with `self.lo ≤ next.lo`) forms one interval.
    fn joins(&self, next: &Self) -> bool {
        match &self.hi {
            None => true,
            Some(h) => next.lo < *h || (next.lo == *h && (self.hi_closed || next.lo_closed)),
        }
    }

    fn hull(&self, next: &Self) -> Self {
        let lo_closed = self.lo_closed || (next.lo == self.lo && next.lo_closed);
        let (hi, hi_closed) = match (&self.hi, &next.hi) {
            (None, _) | (_, None) => (None, false),
            (Some(a), Some(b)) => match a.cmp(b) {
                Ordering::Less => (Some(b.clone()), next.hi_closed),
                Ordering::Greater => (Some(a.clone()), self.hi_closed),
                Ordering::Equal => (Some(a.clone()), self.hi_closed || next.hi_closed),
            },
        };
        Interval { lo: self.lo.clone(), lo_closed, hi, hi_closed }
    }
}

impl<F: ExactField> fmt::Display for Interval<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let open = if self.lo_closed { '[' } else { '(' };
        match &self.hi {
            None => write!(f, "{open}{},inf)", self.lo),
            Some(h) => write!(f, "{open}{},{h}{}", self.lo, if self.hi_closed { ']' } else { ')' }),
        }
    }
}

/// A finite union of intervals of `[0, ∞)` in canonical form: sorted,
/// pairwise disjoint, and with no two components mergeable into one interval.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntervalUnion<F> {
    parts: Vec<Interval<F>>,
}

/// How an interval union fails to be absorbing in `[0, ∞)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AbsorbingEscape<F> {
    /// `0 ∉ A`, so `μ = 0` already escapes.
    MissingZero,
    /// `(0, gap] ∩ A = ∅`: for `x = 1` every `α > 0` admits `μ = min(α, gap)` with `μx ∉ A`.
    Gap(F),
}

impl<F: ExactField> IntervalUnion<F> {
    pub fn new(mut parts: Vec<Interval<F>>) -> Self {
        parts.sort_by(|a, b| a.lo.cmp(&b.lo).then(b.lo_closed.cmp(&a.lo_closed)));
        let mut out: Vec<Interval<F>> = Vec::with_capacity(parts.len());
        for p in parts {
            match out.last_mut() {
                Some(last) if last.joins(&p) => *last = last.hull(&p),
                _ => out.push(p),
            }
        }
        IntervalUnion { parts: out }
    }

    pub fn empty() -> Self {
        IntervalUnion { parts: Vec::new() }
    }

    pub fn single(i: Interval<F>) -> Self {
        IntervalUnion { parts: vec![i] }
    }

    /// `[0, ∞)`
    pub fn everything() -> Self {
        Self::single(Interval::at_least(F::zero()))
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn components(&self) -> &[Interval<F>] {
        &self.parts
    }

    pub fn contains(&self, x: &F) -> bool {
        self.parts.iter().any(|p| p.contains(x))
    }

    pub fn union(&self, other: &Self) -> Self {
        Self::new(self.parts.iter().chain(&other.parts).cloned().collect())
    }

    pub fn intersection(&self, other: &Self) -> Self {
        Self::new(self.parts.iter().flat_map(|a| other.parts.iter().filter_map(move |b| a.intersect(b))).collect())
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.parts.iter().all(|a| other.parts.iter().any(|b| a.is_subset(b)))
    }

    /// Image under `r ↦ m·r`, `m ≥ 0`.
    pub fn scale_modulus(&self, m: &F) -> Self {
        assert!(!m.is_negative(), "modulus must be non-negative");
        if self.is_empty() {
            return Self::empty();
        }
        if m.is_zero() {
            return Self::single(Interval::point(F::zero()));
        }
        IntervalUnion { parts: self.parts.iter().map(|p| p.scale_positive(m)).collect() }
    }

    /// Image under `r ↦ λ·r = |λ|r`. Panics when `|λ|` is irrational.
    pub fn scale(&self, s: &Gaussian<F>) -> Self {
        let m = s.rational_modulus().unwrap_or_else(|| panic!("scalar {s} has irrational modulus"));
        self.scale_modulus(&m)
    }

    /// `{a + b : a ∈ self, b ∈ other}`
    pub fn minkowski(&self, other: &Self) -> Self {
        Self::new(self.parts.iter().flat_map(|a| other.parts.iter().map(move |b| a.sum(b))).collect())
    }

    /// `x + self`
    pub fn translate(&self, x: &F) -> Self {
        self.minkowski(&Self::single(Interval::point(x.clone())))
    }

    /// `↑A = [inf A, ∞)`, open at the left when the infimum is not attained.
    pub fn up(&self) -> Self {
        match self.parts.first() {
            None => Self::empty(),
            Some(first) => Self::single(Interval { lo: first.lo.clone(), lo_closed: first.lo_closed, hi: None, hi_closed: false }),
        }
    }

    /// `↓A = [0, sup A]`, open at the right when the supremum is not attained.
    pub fn down(&self) -> Self {
        match self.parts.last() {
            None => Self::empty(),
            Some(last) => Self::new(vec![Interval::build(
                F::zero(),
                true,
                last.hi.clone(),
                last.hi_closed || last.hi.as_ref().is_some_and(|h| h.is_zero()),
            )]),
        }
    }

    /// `None` when empty; `Some(None)` when unbounded above.
    pub fn sup(&self) -> Option<Option<&F>> {
        self.parts.last().map(|p| p.hi.as_ref())
    }

    pub fn inf(&self) -> Option<&F> {
        self.parts.first().map(|p| &p.lo)
    }

    pub fn is_bounded(&self) -> bool {
        self.parts.last().is_none_or(|p| p.hi.is_some())
    }

    /// Balanced in `[0, ∞)` means `|α|A ⊆ A` for `|α| ≤ 1`, which holds
    /// exactly for a single component closed at 0. Otherwise returns
    /// `(x, α)` with `x ∈ A`, `0 ≤ α < 1`, `αx ∉ A`.
    pub fn balanced_violation(&self) -> Result<Option<(F, F)>, SetError> {
        let first = self.parts.first().ok_or(SetError::Empty)?;
        if !first.contains(&F::zero()) {
            return Ok(Some((first.representative(), F::zero())));
        }
        let Some(next) = self.parts.get(1) else {
            return Ok(None);
        };
        let h = first.hi.clone().expect("a later component forces a bounded first one");
        let g = if h < next.lo { h.midpoint(&next.lo) } else { h };
        let x = next.representative();
        let alpha = g / x.clone();
        Ok(Some((x, alpha)))
    }

    /// Absorbing in `[0, ∞)` means the component containing 0 exists and
    /// is nondegenerate.
    pub fn absorbing_violation(&self) -> Result<Option<AbsorbingEscape<F>>, SetError> {
        let first = self.parts.first().ok_or(SetError::Empty)?;
        if !first.contains(&F::zero()) {
            return Ok(Some(AbsorbingEscape::MissingZero));
        }
        if !first.is_degenerate() {
            return Ok(None);
        }
        let gap = match self.parts.get(1) {
            None => F::one(),
            Some(next) if next.lo_closed => next.lo.clone() / F::from_int(2),
            Some(next) => next.lo.clone(),
        };
        Ok(Some(AbsorbingEscape::Gap(gap)))
    }

    pub fn is_balanced(&self) -> Result<CheckOutcome, SetError> {
        Ok(match self.balanced_violation()? {
            None => CheckOutcome::proven(0, 0),
            Some((x, a)) => CheckOutcome::refuted(Witness::new().with("x", x).with("alpha", a), 0, 0),
        })
    }

    pub fn is_absorbing(&self) -> Result<CheckOutcome, SetError> {
        Ok(match self.absorbing_violation()? {
            None => CheckOutcome::proven(0, 0),
            Some(AbsorbingEscape::MissingZero) => CheckOutcome::refuted(Witness::new().with("x", 1).with("mu", 0), 0, 0),
            Some(AbsorbingEscape::Gap(g)) => {
                CheckOutcome::refuted(Witness::new().with("x", 1).with("gap", &g).with("mu", "min(alpha, gap)"), 0, 0)
            }
        })
    }
}

impl<F: ExactField> fmt::Display for IntervalUnion<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return f.write_str("empty");
        }
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(" U ")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}
