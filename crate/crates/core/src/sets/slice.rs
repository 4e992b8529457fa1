//! Finite unions of `interval × vector region` pieces over the cone product.

use std::fmt;

use num_traits::{Signed, Zero};
use rand::Rng;

use crate::instances::{ConeElem, ConeProduct};
use crate::outcome::{CheckOutcome, Witness};
use crate::rng::{substream, CheckRng};
use crate::scalar::{sample_scalar, ExactField, ScalarMode};
use crate::{Rational, Scalar};

use super::interval::{AbsorbingEscape, Interval, IntervalUnion};
use super::SetError;

/// A set of vectors in `Kⁿ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum VectorRegion {
    Finite(Vec<Vec<Scalar>>),
    /// `{a : max_i |a_i| < radius}` (or `≤` when closed).
    Ball {
        radius: Rational,
        closed: bool,
    },
    All,
}

fn max_norm_within(a: &[Scalar], radius: &Rational, closed: bool) -> bool {
    a.iter().all(|c| if closed { c.modulus_leq(radius) } else { c.modulus_lt(radius) })
}

impl VectorRegion {
    pub fn ball(radius: Rational) -> Self {
        VectorRegion::Ball { radius, closed: false }
    }

    pub fn closed_ball(radius: Rational) -> Self {
        VectorRegion::Ball { radius, closed: true }
    }

    pub fn contains(&self, a: &[Scalar]) -> bool {
        match self {
            VectorRegion::Finite(vs) => vs.iter().any(|v| v == a),
            VectorRegion::Ball { radius, closed } => max_norm_within(a, radius, *closed),
            VectorRegion::All => true,
        }
    }

    /// Whether some `a` with `max_i |a_i| = ρ` outside every finite set lies in the region.
    fn contains_norm(&self, rho: &Rational) -> bool {
        match self {
            VectorRegion::Finite(_) => false,
            VectorRegion::Ball { radius, closed } => rho < radius || (*closed && rho == radius),
            VectorRegion::All => true,
        }
    }

    fn canonical(self, n: usize) -> Option<Self> {
        match self {
            VectorRegion::Finite(mut vs) => {
                vs.sort_by_key(|v| format!("{v:?}"));
                vs.dedup();
                (!vs.is_empty()).then_some(VectorRegion::Finite(vs))
            }
            VectorRegion::Ball { radius, closed } => {
                assert!(!radius.is_negative(), "ball radius must be non-negative");
                if radius.is_zero() {
                    closed.then(|| VectorRegion::Finite(vec![vec![Scalar::zero(); n]]))
                } else {
                    Some(VectorRegion::Ball { radius, closed })
                }
            }
            VectorRegion::All => Some(VectorRegion::All),
        }
    }

    fn intersect(&self, other: &Self) -> Self {
        use VectorRegion::*;
        match (self, other) {
            (Finite(vs), x) | (x, Finite(vs)) => Finite(vs.iter().filter(|v| x.contains(v)).cloned().collect()),
            (All, x) | (x, All) => x.clone(),
            (Ball { radius: r1, closed: c1 }, Ball { radius: r2, closed: c2 }) => {
                if r1 < r2 {
                    self.clone()
                } else if r2 < r1 {
                    other.clone()
                } else {
                    Ball { radius: r1.clone(), closed: *c1 && *c2 }
                }
            }
        }
    }

    fn scale(&self, s: &Scalar, m: &Rational) -> Self {
        match self {
            VectorRegion::Finite(vs) => VectorRegion::Finite(vs.iter().map(|v| v.iter().map(|c| s * c).collect()).collect()),
            VectorRegion::Ball { radius, closed } => VectorRegion::Ball { radius: radius * m, closed: *closed },
            VectorRegion::All => VectorRegion::All,
        }
    }

    /// The largest max-norm in the region; `None` when unbounded.
    pub fn norm_bound(&self) -> Option<Rational> {
        match self {
            VectorRegion::Finite(vs) => Some(
                vs.iter()
                    .flat_map(|v| v.iter())
                    .map(|c| c.re.abs().max(c.im.abs()) * Rational::from_int(2))
                    .max()
                    .unwrap_or_else(Rational::zero),
            ),
            VectorRegion::Ball { radius, .. } => Some(radius.clone()),
            VectorRegion::All => None,
        }
    }

    fn sample(&self, rng: &mut CheckRng, n: usize, cone: &ConeProduct) -> Vec<Scalar> {
        match self {
            VectorRegion::Finite(vs) => vs[rng.random_range(0..vs.len())].clone(),
            VectorRegion::Ball { radius, .. } => {
                let half = radius / Rational::from_int(2);
                (0..n).map(|_| sample_scalar(rng, &half, ScalarMode::AnyScalar, crate::evs::Evs::field_mode(cone))).collect()
            }
            VectorRegion::All => (0..n)
                .map(|_| sample_scalar(rng, &Rational::from_int(4), ScalarMode::AnyScalar, crate::evs::Evs::field_mode(cone)))
                .collect(),
        }
    }
}

impl fmt::Display for VectorRegion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VectorRegion::Finite(vs) => {
                let items: Vec<String> =
                    vs.iter().map(|v| format!("({})", v.iter().map(ToString::to_string).collect::<Vec<_>>().join(","))).collect();
                write!(f, "{{{}}}", items.join(","))
            }
            VectorRegion::Ball { radius, closed: false } => write!(f, "ball({radius})"),
            VectorRegion::Ball { radius, closed: true } => write!(f, "ball[{radius}]"),
            VectorRegion::All => f.write_str("all"),
        }
    }
}

/// `r-interval × vector region`
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SlicePiece {
    pub r: Interval<Rational>,
    pub v: VectorRegion,
}

impl fmt::Display for SlicePiece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.r, self.v)
    }
}

/// A finite union of pieces over `cone:n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProductSlice {
    n: usize,
    pieces: Vec<SlicePiece>,
}

impl ProductSlice {
    pub fn new(n: usize, pieces: Vec<SlicePiece>) -> Self {
        let mut out: Vec<SlicePiece> = pieces
            .into_iter()
            .filter_map(|p| {
                if let VectorRegion::Finite(vs) = &p.v {
                    assert!(vs.iter().all(|v| v.len() == n), "vector length must equal the cone dimension");
                }
                p.v.canonical(n).map(|v| SlicePiece { r: p.r, v })
            })
            .collect();
        out.sort_by_key(ToString::to_string);
        out.dedup();
        ProductSlice { n, pieces: out }
    }

    /// `[0, s) × ball(t)`, the basic balanced neighbourhoods of θ.
    pub fn basic(n: usize, s: Rational, t: Rational) -> Self {
        Self::new(n, vec![SlicePiece { r: Interval::closed_open(Rational::zero(), s), v: VectorRegion::ball(t) }])
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn pieces(&self) -> &[SlicePiece] {
        &self.pieces
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn contains(&self, x: &ConeElem) -> bool {
        self.pieces.iter().any(|p| p.r.contains(&x.r) && p.v.contains(&x.a))
    }

    pub fn union(&self, other: &Self) -> Self {
        Self::new(self.n, self.pieces.iter().chain(&other.pieces).cloned().collect())
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let pieces = self
            .pieces
            .iter()
            .flat_map(|a| other.pieces.iter().filter_map(move |b| Some(SlicePiece { r: a.r.intersect(&b.r)?, v: a.v.intersect(&b.v) })))
            .collect();
        Self::new(self.n, pieces)
    }

    /// Image under `(r, a) ↦ (|λ|r, λa)`.
    pub fn scale(&self, s: &Scalar) -> Self {
        let m = s.rational_modulus().unwrap_or_else(|| panic!("scalar {s} has irrational modulus"));
        if self.is_empty() {
            return self.clone();
        }
        if m.is_zero() {
            let theta = SlicePiece { r: Interval::point(Rational::zero()), v: VectorRegion::Finite(vec![vec![Scalar::zero(); self.n]]) };
            return Self::new(self.n, vec![theta]);
        }
        Self::new(self.n, self.pieces.iter().map(|p| SlicePiece { r: p.r.scale_positive(&m), v: p.v.scale(s, &m) }).collect())
    }

    /// Minkowski sum; defined when every vector part is finite.
    pub fn minkowski(&self, other: &Self) -> Result<Self, SetError> {
        let mut out = Vec::new();
        for a in &self.pieces {
            for b in &other.pieces {
                let (VectorRegion::Finite(va), VectorRegion::Finite(vb)) = (&a.v, &b.v) else {
                    return Err(SetError::Unsupported("Minkowski sum of slices needs finite vector parts".into()));
                };
                let sums = va.iter().flat_map(|x| vb.iter().map(move |y| x.iter().zip(y).map(|(p, q)| p + q).collect())).collect();
                out.push(SlicePiece { r: a.r.sum(&b.r), v: VectorRegion::Finite(sums) });
            }
        }
        Ok(Self::new(self.n, out))
    }

    /// `↑A` in the cone order: only the radial coordinate may grow.
    pub fn up(&self) -> Self {
        let pieces = self
            .pieces
            .iter()
            .map(|p| SlicePiece { r: IntervalUnion::single(p.r.clone()).up().components()[0].clone(), v: p.v.clone() })
            .collect();
        Self::new(self.n, pieces)
    }

    pub fn down(&self) -> Self {
        let pieces = self
            .pieces
            .iter()
            .map(|p| SlicePiece { r: IntervalUnion::single(p.r.clone()).down().components()[0].clone(), v: p.v.clone() })
            .collect();
        Self::new(self.n, pieces)
    }

    /// Radial coordinates `r` with `(r, a) ∈ A` for the vector `a`.
    pub fn fiber_at(&self, a: &[Scalar]) -> IntervalUnion<Rational> {
        IntervalUnion::new(self.pieces.iter().filter(|p| p.v.contains(a)).map(|p| p.r.clone()).collect())
    }

    /// Radial coordinates covered at a vector of max-norm `ρ` lying in no finite part.
    fn generic_fiber(&self, rho: &Rational) -> IntervalUnion<Rational> {
        IntervalUnion::new(self.pieces.iter().filter(|p| p.v.contains_norm(rho)).map(|p| p.r.clone()).collect())
    }

    /// `self ⊆ other`. Membership in a ball depends only on the max-norm, so
    /// a ball part is checked at θ, at one generic vector per norm cell of
    /// the radii involved, and at every finite vector of `other` inside it.
    pub fn is_subset(&self, other: &Self) -> bool {
        self.pieces.iter().all(|p| {
            let single = IntervalUnion::single(p.r.clone());
            match &p.v {
                VectorRegion::Finite(vs) => vs.iter().all(|v| single.is_subset(&other.fiber_at(v))),
                region => {
                    let mut radii: Vec<Rational> = vec![Rational::zero()];
                    for q in other.pieces.iter().chain([p]) {
                        if let VectorRegion::Ball { radius, .. } = &q.v {
                            radii.push(radius.clone());
                        }
                    }
                    radii.sort();
                    radii.dedup();
                    let mut norms = Vec::new();
                    for (i, r) in radii.iter().enumerate() {
                        norms.push(r.clone());
                        norms.push(match radii.get(i + 1) {
                            Some(next) => r.midpoint(next),
                            None => r.clone() + Rational::from_int(1),
                        });
                    }
                    let zero_vec = vec![Scalar::zero(); self.n];
                    let theta_ok = !region.contains(&zero_vec) || single.is_subset(&other.fiber_at(&zero_vec));
                    let generic_ok = norms
                        .iter()
                        .filter(|rho| rho.is_positive() && region.contains_norm(rho))
                        .all(|rho| single.is_subset(&other.generic_fiber(rho)));
                    let finite_ok = other.pieces.iter().all(|q| match &q.v {
                        VectorRegion::Finite(vs) => vs.iter().filter(|v| region.contains(v)).all(|v| single.is_subset(&other.fiber_at(v))),
                        _ => true,
                    });
                    theta_ok && generic_ok && finite_ok
                }
            }
        })
    }

    pub fn set_eq(&self, other: &Self) -> bool {
        self.is_subset(other) && other.is_subset(self)
    }

    /// Radial coordinates of pieces whose vector part is a neighbourhood of 0.
    fn ball_support(&self) -> IntervalUnion<Rational> {
        IntervalUnion::new(self.pieces.iter().filter(|p| !matches!(p.v, VectorRegion::Finite(_))).map(|p| p.r.clone()).collect())
    }

    /// Absorbing iff the radial parts of ball (or whole-space) pieces form an
    /// absorbing subset of `[0, ∞)`: for `a ≠ 0` the vectors `μa`, `μ` small,
    /// are infinitely many and only ball parts contain all of them.
    pub fn absorbing_violation(&self) -> Result<Option<(ConeElem, AbsorbingEscape<Rational>)>, SetError> {
        if self.is_empty() {
            return Err(SetError::Empty);
        }
        let mut e1 = vec![Scalar::zero(); self.n];
        e1[0] = Scalar::one();
        let support = self.ball_support();
        let violation = if support.is_empty() { Some(AbsorbingEscape::MissingZero) } else { support.absorbing_violation()? };
        Ok(violation.map(|escape| {
            let r = match escape {
                AbsorbingEscape::MissingZero => Rational::zero(),
                AbsorbingEscape::Gap(_) => Rational::from_int(1),
            };
            (ConeElem::new(r, e1), escape)
        }))
    }

    pub fn is_absorbing(&self) -> Result<CheckOutcome, SetError> {
        Ok(match self.absorbing_violation()? {
            None => CheckOutcome::proven(0, 0),
            Some((x, AbsorbingEscape::MissingZero)) => {
                CheckOutcome::refuted(Witness::new().with("x", x).with("mu", "small nonzero outside the finite vector parts"), 0, 0)
            }
            Some((x, AbsorbingEscape::Gap(g))) => CheckOutcome::refuted(
                Witness::new().with("x", x).with("gap", g).with("mu", "|mu| <= min(alpha, gap) outside the finite vector parts"),
                0,
                0,
            ),
        })
    }

    /// A random member of the set.
    pub fn sample_point(&self, rng: &mut CheckRng, cone: &ConeProduct) -> Option<ConeElem> {
        if self.pieces.is_empty() {
            return None;
        }
        let p = &self.pieces[rng.random_range(0..self.pieces.len())];
        Some(ConeElem::new(p.r.sample_point(rng), p.v.sample(rng, self.n, cone)))
    }

    /// Proven when every piece is balanced on its own (`[0, ·` times `θ`, a
    /// ball or everything), otherwise the sampling falsifier decides.
    pub fn is_balanced(&self, budget: u64) -> Result<CheckOutcome, SetError> {
        if self.is_empty() {
            return Err(SetError::Empty);
        }
        let piecewise = self.pieces.iter().all(|p| {
            let region = match &p.v {
                VectorRegion::Finite(vs) => vs.iter().all(|v| v.iter().all(Scalar::is_zero)),
                VectorRegion::Ball { .. } | VectorRegion::All => true,
            };
            p.r.lo().is_zero() && p.r.lo_closed() && region
        });
        if piecewise {
            return Ok(CheckOutcome::proven(0, 0).with_note("every piece is balanced"));
        }
        self.is_balanced_sampled(budget, 0)
    }

    /// Sampling falsifier for `αA ⊆ A`, `|α| ≤ 1`.
    pub fn is_balanced_sampled(&self, budget: u64, seed: u64) -> Result<CheckOutcome, SetError> {
        if self.is_empty() {
            return Err(SetError::Empty);
        }
        let cone = ConeProduct::new(self.n);
        let mut rng = substream(seed, "slice-balanced");
        let one = Rational::from_int(1);
        for tried in 1..=budget {
            let x = self.sample_point(&mut rng, &cone).expect("nonempty");
            let a = if tried == 1 {
                Scalar::zero()
            } else {
                sample_scalar(&mut rng, &one, ScalarMode::PythagoreanOnly, crate::evs::Evs::field_mode(&cone))
            };
            let ax = crate::evs::Evs::scale(&cone, &a, &x);
            if !self.contains(&ax) {
                return Ok(CheckOutcome::refuted(Witness::new().with("x", x).with("alpha", a), tried, seed));
            }
        }
        Ok(CheckOutcome::unfalsified(budget, seed))
    }
}

impl fmt::Display for ProductSlice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pieces.is_empty() {
            return f.write_str("empty");
        }
        let parts: Vec<String> = self.pieces.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(" U "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn el(r: Rational, a: i64) -> ConeElem {
        ConeElem::new(r, vec![Scalar::from_ratio(a, 1)])
    }

    #[test]
    fn basic_neighbourhood_is_absorbing_and_balanced() {
        let b = ProductSlice::basic(1, q(1, 1), q(1, 1));
        assert!(b.is_absorbing().unwrap().is_proven());
        assert!(!b.is_balanced_sampled(500, 1).unwrap().is_refuted());
        assert!(b.contains(&ConeElem::new(q(1, 2), vec![Scalar::new(q(3, 5), q(-4, 5)).scale_by(&q(1, 2))])));
        assert!(!b.contains(&el(q(1, 2), 1)));
    }

    #[test]
    fn axis_slice_is_not_absorbing() {
        let axis = ProductSlice::new(
            1,
            vec![SlicePiece { r: Interval::closed_open(q(0, 1), q(1, 1)), v: VectorRegion::Finite(vec![vec![Scalar::zero()]]) }],
        );
        let (x, escape) = axis.absorbing_violation().unwrap().unwrap();
        assert_eq!(escape, AbsorbingEscape::MissingZero);
        assert_eq!(x, el(q(0, 1), 1));
    }

    #[test]
    fn subset_across_pieces() {
        let big = ProductSlice::basic(1, q(2, 1), q(2, 1));
        let split = ProductSlice::new(
            1,
            vec![
                SlicePiece { r: Interval::closed_open(q(0, 1), q(2, 1)), v: VectorRegion::ball(q(1, 1)) },
                SlicePiece { r: Interval::closed_open(q(0, 1), q(2, 1)), v: VectorRegion::Ball { radius: q(2, 1), closed: false } },
            ],
        );
        assert!(big.set_eq(&split));
        let smaller = ProductSlice::basic(1, q(2, 1), q(1, 1));
        assert!(smaller.is_subset(&big));
        assert!(!big.is_subset(&smaller));
        let with_point = smaller.union(&ProductSlice::new(
            1,
            vec![SlicePiece { r: Interval::closed_open(q(0, 1), q(2, 1)), v: VectorRegion::Finite(vec![vec![Scalar::from_ratio(3, 2)]]) }],
        ));
        assert!(with_point.is_subset(&big));
        assert!(!big.is_subset(&with_point));
    }

    #[test]
    fn scaling_and_order_closures() {
        let b = ProductSlice::basic(1, q(1, 1), q(1, 1));
        assert!(b.scale(&Scalar::from_ratio(-2, 1)).set_eq(&ProductSlice::basic(1, q(2, 1), q(2, 1))));
        let down = ProductSlice::new(
            1,
            vec![SlicePiece { r: Interval::closed_open(q(1, 1), q(2, 1)), v: VectorRegion::Finite(vec![vec![Scalar::one()]]) }],
        )
        .down();
        assert!(down.contains(&el(q(0, 1), 1)));
        assert!(!down.contains(&el(q(0, 1), 2)));
    }
}
