//! Finite unions of axis-parallel rectangles in `[0, ∞)²`, with the
//! dictionary-order up/down sets and exact shrink-closure deciders.

use std::fmt;

use crate::outcome::{CheckOutcome, Witness};
use crate::scalar::ExactField;

use super::interval::{AbsorbingEscape, Interval, IntervalUnion};
use super::SetError;

/// A point `(x, y)` of the plane.
pub type Point<F> = (F, F);

/// A point outside an absorbing set's reach and how it escapes.
pub type PointEscape<F> = (Point<F>, AbsorbingEscape<F>);

/// `x × y`
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rect<F> {
    pub x: Interval<F>,
    pub y: Interval<F>,
}

impl<F: ExactField> Rect<F> {
    pub fn new(x: Interval<F>, y: Interval<F>) -> Self {
        Rect { x, y }
    }

    /// `[0, a) × [0, b)`
    pub fn anchored(a: F, b: F) -> Self {
        Rect { x: Interval::closed_open(F::zero(), a), y: Interval::closed_open(F::zero(), b) }
    }

    pub fn contains(&self, px: &F, py: &F) -> bool {
        self.x.contains(px) && self.y.contains(py)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.x.is_subset(&other.x) && self.y.is_subset(&other.y)
    }

    fn intersect(&self, other: &Self) -> Option<Self> {
        Some(Rect { x: self.x.intersect(&other.x)?, y: self.y.intersect(&other.y)? })
    }

    /// `{t ≥ 0 : t·v ∈ self}` for a direction `v` in the closed quadrant.
    fn ray_profile(&self, vx: &F, vy: &F) -> Option<Interval<F>> {
        let along = |iv: &Interval<F>, c: &F| -> Option<Interval<F>> {
            if c.is_zero() {
                iv.contains(&F::zero()).then(|| Interval::at_least(F::zero()))
            } else {
                Some(iv.scale_positive(&(F::one() / c.clone())))
            }
        };
        along(&self.x, vx)?.intersect(&along(&self.y, vy)?)
    }
}

impl<F: ExactField> fmt::Display for Rect<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.x, self.y)
    }
}

/// A finite union of rectangles, stored as an antichain: no member is
/// contained in another.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RectUnion<F> {
    rects: Vec<Rect<F>>,
}

impl<F: ExactField> RectUnion<F> {
    pub fn new(rects: Vec<Rect<F>>) -> Self {
        let mut sorted = rects;
        sorted.sort();
        sorted.dedup();
        let keep: Vec<Rect<F>> = sorted
            .iter()
            .enumerate()
            .filter(|(i, r)| !sorted.iter().enumerate().any(|(j, s)| j != *i && r.is_subset(s) && !(s.is_subset(r) && j > *i)))
            .map(|(_, r)| r.clone())
            .collect();
        RectUnion { rects: keep }
    }

    pub fn empty() -> Self {
        RectUnion { rects: Vec::new() }
    }

    /// The whole quadrant.
    pub fn everything() -> Self {
        RectUnion { rects: vec![Rect::new(Interval::at_least(F::zero()), Interval::at_least(F::zero()))] }
    }

    /// `{θ}`
    pub fn origin() -> Self {
        RectUnion { rects: vec![Rect::new(Interval::point(F::zero()), Interval::point(F::zero()))] }
    }

    pub fn rects(&self) -> &[Rect<F>] {
        &self.rects
    }

    pub fn is_empty(&self) -> bool {
        self.rects.is_empty()
    }

    pub fn contains(&self, px: &F, py: &F) -> bool {
        self.rects.iter().any(|r| r.contains(px, py))
    }

    pub fn union(&self, other: &Self) -> Self {
        Self::new(self.rects.iter().chain(&other.rects).cloned().collect())
    }

    pub fn intersection(&self, other: &Self) -> Self {
        Self::new(self.rects.iter().flat_map(|a| other.rects.iter().filter_map(move |b| a.intersect(b))).collect())
    }

    /// Image under `p ↦ m·p`, `m ≥ 0`.
    pub fn scale_modulus(&self, m: &F) -> Self {
        assert!(!m.is_negative(), "modulus must be non-negative");
        if self.is_empty() {
            return Self::empty();
        }
        if m.is_zero() {
            return Self::origin();
        }
        Self::new(self.rects.iter().map(|r| Rect::new(r.x.scale_positive(m), r.y.scale_positive(m))).collect())
    }

    pub fn minkowski(&self, other: &Self) -> Self {
        Self::new(self.rects.iter().flat_map(|a| other.rects.iter().map(move |b| Rect::new(a.x.sum(&b.x), a.y.sum(&b.y)))).collect())
    }

    /// Down-set in the dictionary order. For `R = X × Y` with `b = sup X`:
    /// the slab `[0, b) × [0, ∞)`, plus the fiber `{b} × ↓Y` when `b ∈ X`.
    pub fn down(&self) -> Self {
        let zero = F::zero();
        let mut out = Vec::new();
        for r in &self.rects {
            match r.x.hi() {
                None => return Self::everything(),
                Some(b) => {
                    if b.is_positive() {
                        out.push(Rect::new(Interval::closed_open(zero.clone(), b.clone()), Interval::at_least(zero.clone())));
                    }
                    if r.x.hi_closed() {
                        let fiber_y = IntervalUnion::single(r.y.clone()).down();
                        out.push(Rect::new(Interval::point(b.clone()), fiber_y.components()[0].clone()));
                    }
                }
            }
        }
        Self::new(out)
    }

    /// Up-set in the dictionary order. For `R = X × Y` with `a = inf X`:
    /// `(a, ∞) × [0, ∞)`, plus `{a} × ↑Y` when `a ∈ X`.
    pub fn up(&self) -> Self {
        let zero = F::zero();
        let mut out = Vec::new();
        for r in &self.rects {
            let a = r.x.lo().clone();
            out.push(Rect::new(Interval::greater_than(a.clone()), Interval::at_least(zero.clone())));
            if r.x.lo_closed() {
                let fiber_y = IntervalUnion::single(r.y.clone()).up();
                out.push(Rect::new(Interval::point(a), fiber_y.components()[0].clone()));
            }
        }
        Self::new(out)
    }

    fn breakpoints(sets: &[&Self], pick: fn(&Rect<F>) -> &Interval<F>) -> Vec<F> {
        let mut pts = vec![F::zero()];
        for s in sets {
            for r in &s.rects {
                let iv = pick(r);
                pts.push(iv.lo().clone());
                if let Some(h) = iv.hi() {
                    pts.push(h.clone());
                }
            }
        }
        pts.sort();
        pts.dedup();
        pts
    }

    /// One coordinate value per cell of the arrangement cut out by `breaks`.
    fn cell_values(breaks: &[F]) -> Vec<F> {
        let mut vals = Vec::with_capacity(2 * breaks.len() + 1);
        for (i, b) in breaks.iter().enumerate() {
            vals.push(b.clone());
            match breaks.get(i + 1) {
                Some(next) => vals.push(b.midpoint(next)),
                None => vals.push(b.clone() + F::one()),
            }
        }
        vals
    }

    /// `self ⊆ other`, decided on one point per cell of the common
    /// breakpoint arrangement (membership is constant on each cell).
    pub fn is_subset(&self, other: &Self) -> bool {
        let xs = Self::cell_values(&Self::breakpoints(&[self, other], |r| &r.x));
        let ys = Self::cell_values(&Self::breakpoints(&[self, other], |r| &r.y));
        xs.iter().all(|x| ys.iter().all(|y| !self.contains(x, y) || other.contains(x, y)))
    }

    pub fn set_eq(&self, other: &Self) -> bool {
        self.is_subset(other) && other.is_subset(self)
    }

    /// `{t ≥ 0 : t·v ∈ A}`
    pub fn ray_profile(&self, vx: &F, vy: &F) -> IntervalUnion<F> {
        IntervalUnion::new(self.rects.iter().filter_map(|r| r.ray_profile(vx, vy)).collect())
    }

    /// Directions at which the pattern of rays crossing rectangle edges can
    /// change, and one direction strictly inside each sector between them,
    /// ordered from the x-axis to the y-axis.
    fn test_directions(&self) -> Vec<(F, F)> {
        let xs = Self::breakpoints(&[self], |r| &r.x);
        let ys = Self::breakpoints(&[self], |r| &r.y);
        let mut dirs: Vec<(F, F)> = vec![(F::one(), F::zero()), (F::zero(), F::one())];
        for x in &xs {
            for y in &ys {
                if !(x.is_zero() && y.is_zero()) {
                    dirs.push((x.clone(), y.clone()));
                }
            }
        }
        // Sort by slope y/x, x-axis first; parallel directions collapse.
        let slope_cmp = |a: &(F, F), b: &(F, F)| (a.1.clone() * b.0.clone()).cmp(&(b.1.clone() * a.0.clone()));
        dirs.sort_by(slope_cmp);
        dirs.dedup_by(|a, b| slope_cmp(a, b).is_eq());
        let mut out = Vec::with_capacity(2 * dirs.len());
        for (i, d) in dirs.iter().enumerate() {
            out.push(d.clone());
            if let Some(next) = dirs.get(i + 1) {
                out.push((d.0.clone() + next.0.clone(), d.1.clone() + next.1.clone()));
            }
        }
        out
    }

    /// `(p, α)` with `p ∈ A`, `0 ≤ α < 1` and `αp ∉ A`, if A is not
    /// closed under shrinking toward θ.
    pub fn balanced_violation(&self) -> Result<Option<(Point<F>, F)>, SetError> {
        let first = self.rects.first().ok_or(SetError::Empty)?;
        if !self.contains(&F::zero(), &F::zero()) {
            let p = (first.x.representative(), first.y.representative());
            return Ok(Some((p, F::zero())));
        }
        for (vx, vy) in self.test_directions() {
            let profile = self.ray_profile(&vx, &vy);
            if let Some((t, alpha)) = profile.balanced_violation()? {
                return Ok(Some(((t.clone() * vx, t * vy), alpha)));
            }
        }
        Ok(None)
    }

    /// Absorbing iff the ray profiles along `(1,1)`, `(1,0)` and `(0,1)` are
    /// absorbing in `[0, ∞)`: near θ only rectangles anchored at the origin
    /// matter, and one anchored rectangle serves every interior direction.
    pub fn absorbing_violation(&self) -> Result<Option<PointEscape<F>>, SetError> {
        if self.is_empty() {
            return Err(SetError::Empty);
        }
        let dirs = [(F::one(), F::one()), (F::one(), F::zero()), (F::zero(), F::one())];
        for (vx, vy) in dirs {
            if let Some(escape) = self.ray_profile(&vx, &vy).absorbing_violation()? {
                return Ok(Some(((vx, vy), escape)));
            }
        }
        Ok(None)
    }

    pub fn is_balanced(&self) -> Result<CheckOutcome, SetError> {
        Ok(match self.balanced_violation()? {
            None => CheckOutcome::proven(0, 0),
            Some(((x, y), a)) => CheckOutcome::refuted(Witness::new().with("x", format!("({x},{y})")).with("alpha", a), 0, 0),
        })
    }

    pub fn is_absorbing(&self) -> Result<CheckOutcome, SetError> {
        Ok(match self.absorbing_violation()? {
            None => CheckOutcome::proven(0, 0),
            Some(((x, y), AbsorbingEscape::MissingZero)) => {
                CheckOutcome::refuted(Witness::new().with("x", format!("({x},{y})")).with("mu", 0), 0, 0)
            }
            Some(((x, y), AbsorbingEscape::Gap(g))) => {
                CheckOutcome::refuted(Witness::new().with("x", format!("({x},{y})")).with("gap", g).with("mu", "min(alpha, gap)"), 0, 0)
            }
        })
    }
}

impl<F: ExactField> fmt::Display for RectUnion<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rects.is_empty() {
            return f.write_str("empty");
        }
        for (i, r) in self.rects.iter().enumerate() {
            if i > 0 {
                f.write_str(" U ")?;
            }
            write!(f, "{r}")?;
        }
        Ok(())
    }
}
