//! Radial evs: distinct points are separated by absorbing sets.

use std::fmt;

use num_traits::{Signed, Zero};

use crate::evs::{check_subevs, scalar_pool, Evs, Tuple};
use crate::instances::{AnyElem, AnyEvs, ConeElem, ConeProduct, DictElem, Subspace};
use crate::outcome::{CheckOutcome, Verdict, Witness};
use crate::rng::substream;
use crate::scalar::ExactField;
use crate::{Rational, Scalar};

use super::{Interval, IntervalUnion, LatticeFamily, ProductSlice, Rect, RectUnion, SetError, SlicePiece, VectorRegion};

/// An exact absorbing set built to separate one pair of points.
#[derive(Clone, Debug, PartialEq)]
pub enum Separator {
    Interval(IntervalUnion<Rational>),
    Rect(RectUnion<Rational>),
    Slice(ProductSlice),
    /// `X₁ × … × A × … × Xₙ` with `A` at `index`.
    Cylinder {
        index: usize,
        arity: usize,
        inner: Box<Separator>,
    },
}

impl Separator {
    pub fn contains(&self, x: &AnyElem) -> bool {
        match (self, x) {
            (Separator::Interval(a), AnyElem::Real(r)) => a.contains(r),
            (Separator::Rect(a), AnyElem::Dict(p)) => a.contains(&p.x, &p.y),
            (Separator::Slice(a), AnyElem::Cone(c)) => a.contains(c),
            (Separator::Cylinder { index, inner, .. }, AnyElem::Tuple(t)) => inner.contains(&t.0[*index]),
            (s, x) => panic!("separator {s} cannot hold element {x}"),
        }
    }

    /// Exact absorbing decision. A cylinder is absorbing exactly when its
    /// factor is: the other coordinates impose no constraint.
    pub fn is_absorbing(&self) -> Result<CheckOutcome, SetError> {
        match self {
            Separator::Interval(a) => a.is_absorbing(),
            Separator::Rect(a) => a.is_absorbing(),
            Separator::Slice(a) => a.is_absorbing(),
            Separator::Cylinder { inner, .. } => inner.is_absorbing(),
        }
    }
}

impl fmt::Display for Separator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Separator::Interval(a) => write!(f, "{a}"),
            Separator::Rect(a) => write!(f, "{a}"),
            Separator::Slice(a) => write!(f, "{a}"),
            Separator::Cylinder { index, arity, inner } => {
                let parts: Vec<String> = (0..*arity).map(|i| if i == *index { format!("({inner})") } else { "X".to_string() }).collect();
                f.write_str(&parts.join(" * "))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum RadialError {
    #[error("a separating pair needs two distinct points")]
    SamePoint,
    #[error("{0} has pairs that no absorbing set separates")]
    NotRadial(String),
}

pub fn halfline_separator(x: &Rational, y: &Rational) -> Separator {
    let r = x.midpoint(y);
    Separator::Interval(IntervalUnion::single(Interval::closed_open(Rational::zero(), r)))
}

/// `[0, r) × [0, y₂ + 1)` around the point with the smaller first
/// coordinate; on a tie the roles of the coordinates swap.
fn dict_separator(p: &DictElem, q: &DictElem) -> Separator {
    let zero = Rational::zero;
    let one = Rational::from_int(1);
    let rect = if p.x != q.x {
        let (lo, hi) = if p.x < q.x { (p, q) } else { (q, p) };
        Rect::new(Interval::closed_open(zero(), lo.x.midpoint(&hi.x)), Interval::closed_open(zero(), &lo.y + &one))
    } else {
        let (lo, hi) = if p.y < q.y { (p, q) } else { (q, p) };
        Rect::new(Interval::closed_open(zero(), &lo.x + &one), Interval::closed_open(zero(), lo.y.midpoint(&hi.y)))
    };
    Separator::Rect(RectUnion::new(vec![rect]))
}

/// A rational `t` with `|c| ≥ t` for some coordinate `c` of `a`, `t > 0` when `a ≠ 0`.
fn norm_floor(a: &[Scalar]) -> Rational {
    a.iter().map(|c| c.re.abs().max(c.im.abs())).max().unwrap_or_else(Rational::zero)
}

/// A rational upper bound for the max-norm of `a`.
fn norm_ceiling(a: &[Scalar]) -> Rational {
    a.iter().map(|c| c.re.abs() + c.im.abs()).max().unwrap_or_else(Rational::zero)
}

/// Different radial parts: `[0, mid) × ball(t)` with `t` above both vectors.
/// Otherwise a basic neighbourhood of θ missing the nonzero point `y`,
/// together with `{x}`.
fn cone_separator(n: usize, x: &ConeElem, y: &ConeElem) -> Separator {
    let zero = Rational::zero;
    if x.r != y.r {
        let t = norm_ceiling(&x.a).max(norm_ceiling(&y.a)) + Rational::from_int(1);
        return Separator::Slice(ProductSlice::new(
            n,
            vec![SlicePiece { r: Interval::closed_open(zero(), x.r.midpoint(&y.r)), v: VectorRegion::ball(t) }],
        ));
    }
    let theta = ConeElem::zero(n);
    let (inside, outside) = if *y == theta { (y, x) } else { (x, y) };
    let (s, t) =
        if outside.r.is_positive() { (outside.r.clone(), Rational::from_int(1)) } else { (Rational::from_int(1), norm_floor(&outside.a)) };
    let pieces = vec![
        SlicePiece { r: Interval::closed_open(zero(), s), v: VectorRegion::ball(t) },
        SlicePiece { r: Interval::point(inside.r.clone()), v: VectorRegion::Finite(vec![inside.a.clone()]) },
    ];
    Separator::Slice(ProductSlice::new(n, pieces))
}

/// The separating absorbing set used for the pair, or `NotRadial` on
/// instances where some pairs admit none.
pub fn separate(e: &AnyEvs, x: &AnyElem, y: &AnyElem) -> Result<Separator, RadialError> {
    if x == y {
        return Err(RadialError::SamePoint);
    }
    match (e, x, y) {
        (AnyEvs::HalfLine(_), AnyElem::Real(a), AnyElem::Real(b)) => Ok(halfline_separator(a, b)),
        (AnyEvs::Dict(_), AnyElem::Dict(p), AnyElem::Dict(q)) => Ok(dict_separator(p, q)),
        (AnyEvs::Cone(c), AnyElem::Cone(p), AnyElem::Cone(q)) => Ok(cone_separator(c.dim(), p, q)),
        (AnyEvs::Product(prod), AnyElem::Tuple(s), AnyElem::Tuple(t)) => {
            let arity = prod.parts().len();
            let mut last = None;
            for (i, part) in prod.parts().iter().enumerate() {
                if s.0[i] == t.0[i] {
                    continue;
                }
                match separate(part, &s.0[i], &t.0[i]) {
                    Ok(inner) => return Ok(Separator::Cylinder { index: i, arity, inner: Box::new(inner) }),
                    Err(err) => last = Some(err),
                }
            }
            Err(last.unwrap_or(RadialError::SamePoint))
        }
        (e, _, _) => Err(RadialError::NotRadial(e.name())),
    }
}

/// Two distinct points fixed by every nonzero scalar. Every absorbing set
/// contains `μx = x` for small `μ ≠ 0`, so it holds both points.
pub fn fixed_pair(e: &AnyEvs) -> Option<(AnyElem, AnyElem)> {
    match e {
        AnyEvs::Lattice(_) => Some((
            AnyElem::Subspace(Subspace::line(Rational::from_int(1), Rational::zero())),
            AnyElem::Subspace(Subspace::line(Rational::zero(), Rational::from_int(1))),
        )),
        AnyEvs::Twisted(t) => {
            let n = t.dim();
            Some((
                AnyElem::Cone(ConeElem::new(Rational::from_int(1), vec![Scalar::zero(); n])),
                AnyElem::Cone(ConeElem::new(Rational::from_int(2), vec![Scalar::zero(); n])),
            ))
        }
        AnyEvs::Product(p) => p.parts().iter().enumerate().find_map(|(i, part)| {
            let (a, b) = fixed_pair(part)?;
            let pad = |v: AnyElem| {
                let mut coords: Vec<AnyElem> = p.parts().iter().map(Evs::zero).collect();
                coords[i] = v;
                AnyElem::Tuple(Tuple(coords))
            };
            Some((pad(a), pad(b)))
        }),
        _ => None,
    }
}

/// One verified pair.
#[derive(Clone, Debug)]
pub struct PairSeparation {
    pub x: AnyElem,
    pub y: AnyElem,
    pub separator: Option<Separator>,
    pub outcome: CheckOutcome,
}

#[derive(Clone, Debug)]
pub struct RadialReport {
    pub outcome: CheckOutcome,
    pub pairs: Vec<PairSeparation>,
}

/// Verifies a separator on the pair: exactly one point inside and the
/// absorbing decider returning Proven.
pub fn verify_separator(sep: &Separator, x: &AnyElem, y: &AnyElem) -> CheckOutcome {
    let (ix, iy) = (sep.contains(x), sep.contains(y));
    let absorbing = sep.is_absorbing();
    let mut w = Witness::new().with("x", x).with("y", y).with("separator", sep);
    if ix == iy {
        w.push("defect", "separator holds both or neither point");
        return CheckOutcome::refuted(w, 1, 0);
    }
    match absorbing {
        Ok(o) if o.is_proven() => CheckOutcome::proven(1, 0).with_witness(w),
        Ok(o) => {
            w.push("defect", format!("separator not absorbing: {}", o.witness.unwrap_or_default()));
            CheckOutcome::refuted(w, 1, 0)
        }
        Err(err) => {
            w.push("defect", err);
            CheckOutcome::refuted(w, 1, 0)
        }
    }
}

/// Refutes radiality with a scale-fixed pair. For the lattice the exact
/// family deciders confirm that only the full family is absorbing.
fn refute_with_fixed_pair(e: &AnyEvs, x: AnyElem, y: AnyElem, seed: u64) -> CheckOutcome {
    let mut rng = substream(seed, "radial-fixed");
    let scalars: Vec<Scalar> = scalar_pool(e, &mut rng, 32).into_iter().filter(|s| !s.is_zero()).collect();
    let moved = scalars.iter().find(|s| e.scale(s, &x) != x || e.scale(s, &y) != y);
    if let Some(s) = moved {
        return CheckOutcome::unfalsified(scalars.len() as u64, seed)
            .with_note(format!("candidate pair is not scale-fixed under {s}; radial status undecided"));
    }
    let mut w = Witness::new().with("x", &x).with("y", &y);
    if let (AnyElem::Subspace(a), AnyElem::Subspace(b)) = (&x, &y) {
        let drop_a = LatticeFamily::all_except([a.clone()]);
        let drop_b = LatticeFamily::all_except([b.clone()]);
        let exact = LatticeFamily::all().is_absorbing().is_ok_and(|o| o.is_proven())
            && drop_a.is_absorbing().is_ok_and(|o| o.is_refuted())
            && drop_b.is_absorbing().is_ok_and(|o| o.is_refuted());
        if !exact {
            return CheckOutcome::unfalsified(0, seed).with_note("lattice family deciders disagree with the fixed-pair argument");
        }
        w.push("absorbing_families", "ALL only");
    }
    w.push("reason", "mu*x = x and mu*y = y for every mu != 0, so every absorbing set holds both");
    CheckOutcome::refuted(w, scalars.len() as u64, seed)
}

/// Radial check: a scale-fixed pair refutes; otherwise every sampled
/// distinct pair gets an explicit separator, verified exactly.
pub fn check_radial(e: &AnyEvs, budget: u64, seed: u64) -> RadialReport {
    if let Some((x, y)) = fixed_pair(e) {
        let outcome = refute_with_fixed_pair(e, x.clone(), y.clone(), seed);
        if outcome.is_refuted() {
            let pair = PairSeparation { x, y, separator: None, outcome: outcome.clone() };
            return RadialReport { outcome, pairs: vec![pair] };
        }
    }
    let mut rng = substream(seed, "radial");
    let n = budget as usize;
    // Equal draws are redrawn so that `budget` distinct pairs are checked.
    let mut draws = Vec::new();
    for _ in 0..20 {
        let xs = e.sample(&mut rng, n);
        let ys = e.sample(&mut rng, n);
        draws.extend(xs.into_iter().zip(ys).filter(|(x, y)| x != y));
        if draws.len() >= n {
            break;
        }
    }
    draws.truncate(n);
    let mut pairs = Vec::new();
    let mut tried = 0;
    for (x, y) in draws {
        tried += 1;
        let (separator, outcome) = match separate(e, &x, &y) {
            Ok(sep) => {
                let o = verify_separator(&sep, &x, &y);
                (Some(sep), o)
            }
            Err(err) => (None, CheckOutcome::unfalsified(1, seed).with_note(err.to_string())),
        };
        pairs.push(PairSeparation { x, y, separator, outcome });
    }
    let overall = if let Some(bad) = pairs.iter().find(|p| p.outcome.is_refuted()) {
        CheckOutcome::refuted(bad.outcome.witness.clone().unwrap_or_default(), tried, seed)
            .with_note("constructed separator failed verification")
    } else if pairs.iter().all(|p| p.outcome.is_proven()) {
        let o = CheckOutcome::passed(e.exactly_verified(), tried, seed);
        o.with_note(format!("{tried} pairs separated by exactly verified absorbing sets"))
    } else {
        CheckOutcome::unfalsified(tried, seed).with_note("some pairs have no shipped separator construction")
    };
    RadialReport { outcome: overall, pairs }
}

/// Shipped subevs of `cone:n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConeSubevs {
    /// `{(r, θ)}`
    Axis,
    /// `{(0, a)}`
    Vectors,
}

impl ConeSubevs {
    pub fn name(self) -> &'static str {
        match self {
            ConeSubevs::Axis => "axis",
            ConeSubevs::Vectors => "vectors",
        }
    }

    pub fn contains(self, x: &ConeElem) -> bool {
        match self {
            ConeSubevs::Axis => x.a.iter().all(Scalar::is_zero),
            ConeSubevs::Vectors => x.r.is_zero(),
        }
    }

    /// `Y` as a slice of `cone:n`.
    pub fn as_slice(self, n: usize) -> ProductSlice {
        let piece = match self {
            ConeSubevs::Axis => {
                SlicePiece { r: Interval::at_least(Rational::zero()), v: VectorRegion::Finite(vec![vec![Scalar::zero(); n]]) }
            }
            ConeSubevs::Vectors => SlicePiece { r: Interval::point(Rational::zero()), v: VectorRegion::All },
        };
        ProductSlice::new(n, vec![piece])
    }

    fn project(self, x: ConeElem) -> ConeElem {
        match self {
            ConeSubevs::Axis => ConeElem::new(x.r, vec![Scalar::zero(); x.a.len()]),
            ConeSubevs::Vectors => ConeElem::new(Rational::zero(), x.a),
        }
    }
}

/// Hereditary construction on `Y ⊆ cone:n`: the separator `A` of the pair in
/// the cone gives `A ∩ Y`, which must hold exactly one point and be
/// absorbing in `Y`. Since `Y` is closed under scaling, `μz ∈ A` with
/// `z ∈ Y` puts `μz ∈ A ∩ Y`, so the exact decider on `A` settles that.
pub fn check_radial_subevs(n: usize, sub: ConeSubevs, budget: u64, seed: u64) -> RadialReport {
    let cone = ConeProduct::new(n);
    let subevs = check_subevs(&cone, &|x: &ConeElem| sub.contains(x), budget.min(200), seed);
    if subevs.is_refuted() {
        return RadialReport { outcome: subevs.with_note("declared subevs fails closure"), pairs: Vec::new() };
    }
    let e = AnyEvs::Cone(cone);
    let y_slice = sub.as_slice(n);
    let mut rng = substream(seed, &format!("radial-subevs-{}", sub.name()));
    let mut draws = Vec::new();
    for _ in 0..20 {
        let pts: Vec<ConeElem> = cone.sample(&mut rng, 2 * budget as usize).into_iter().map(|x| sub.project(x)).collect();
        draws.extend(pts.chunks(2).filter_map(|pq| match pq {
            [p, q] if p != q => Some((p.clone(), q.clone())),
            _ => None,
        }));
        if draws.len() >= budget as usize {
            break;
        }
    }
    draws.truncate(budget as usize);
    let mut pairs = Vec::new();
    let mut tried = 0;
    for (p, q) in &draws {
        tried += 1;
        let (x, y) = (AnyElem::Cone(p.clone()), AnyElem::Cone(q.clone()));
        let Ok(Separator::Slice(a)) = separate(&e, &x, &y) else { unreachable!("cone pairs always get slice separators") };
        let ay = a.intersection(&y_slice);
        let outer = verify_separator(&Separator::Slice(a), &x, &y);
        let inner_ok = ay.contains(p) != ay.contains(q);
        let outcome = if outer.is_proven() && inner_ok {
            CheckOutcome::proven(1, seed).with_witness(Witness::new().with("x", p).with("y", q).with("A&Y", &ay))
        } else {
            CheckOutcome::refuted(Witness::new().with("x", p).with("y", q).with("A&Y", &ay), 1, seed)
        };
        pairs.push(PairSeparation { x, y, separator: Some(Separator::Slice(ay)), outcome });
    }
    let overall = match pairs.iter().find(|p| p.outcome.is_refuted()) {
        Some(bad) => CheckOutcome::refuted(bad.outcome.witness.clone().unwrap_or_default(), tried, seed),
        None => CheckOutcome::unfalsified(tried, seed)
            .with_note(format!("{tried} pairs separated inside the {} subevs; subevs closure sampled", sub.name())),
    };
    RadialReport { outcome: overall, pairs }
}

/// Verdict class used to compare radial results across isomorphic instances.
pub fn verdict_class(report: &RadialReport) -> Verdict {
    match report.outcome.verdict {
        Verdict::Refuted => Verdict::Refuted,
        _ => Verdict::Proven,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn halfline_pair_separator() {
        let e: AnyEvs = "halfline".parse().unwrap();
        let sep = separate(&e, &AnyElem::Real(q(1, 1)), &AnyElem::Real(q(2, 1))).unwrap();
        assert_eq!(sep.to_string(), "[0,3/2)");
        assert!(verify_separator(&sep, &AnyElem::Real(q(1, 1)), &AnyElem::Real(q(2, 1))).is_proven());
        assert_eq!(separate(&e, &AnyElem::Real(q(1, 1)), &AnyElem::Real(q(1, 1))), Err(RadialError::SamePoint));
    }

    #[test]
    fn dict_pair_separator() {
        let e: AnyEvs = "dict2".parse().unwrap();
        let (a, b) = (AnyElem::Dict(DictElem::from_ints(3, 1)), AnyElem::Dict(DictElem::from_ints(2, 5)));
        let sep = separate(&e, &a, &b).unwrap();
        assert_eq!(sep.to_string(), "[0,5/2)x[0,6)");
        assert!(verify_separator(&sep, &a, &b).is_proven());
        let (c, d) = (AnyElem::Dict(DictElem::from_ints(1, 1)), AnyElem::Dict(DictElem::from_ints(1, 3)));
        assert!(verify_separator(&separate(&e, &c, &d).unwrap(), &c, &d).is_proven());
    }

    #[test]
    fn radial_verdicts_by_instance() {
        for name in ["halfline", "dict2", "product:(halfline,dict2)"] {
            let e: AnyEvs = name.parse().unwrap();
            let r = check_radial(&e, 100, 42);
            assert!(r.outcome.is_proven(), "{name}: {:?}", r.outcome);
        }
        let cone: AnyEvs = "cone:2".parse().unwrap();
        let r = check_radial(&cone, 100, 42);
        assert_eq!(r.outcome.verdict, Verdict::Unfalsified);
        assert!(r.pairs.iter().all(|p| p.outcome.is_proven()));
        for name in ["lattice2", "twisted:2", "product:(halfline,lattice2)"] {
            let e: AnyEvs = name.parse().unwrap();
            assert!(check_radial(&e, 50, 42).outcome.is_refuted(), "{name}");
        }
    }

    #[test]
    fn product_cylinder_separates() {
        let e: AnyEvs = "product:(halfline,dict2)".parse().unwrap();
        let x = AnyElem::Tuple(Tuple(vec![AnyElem::Real(q(1, 1)), AnyElem::Dict(DictElem::from_ints(0, 0))]));
        let y = AnyElem::Tuple(Tuple(vec![AnyElem::Real(q(2, 1)), AnyElem::Dict(DictElem::from_ints(0, 0))]));
        let sep = separate(&e, &x, &y).unwrap();
        assert_eq!(sep.to_string(), "([0,3/2)) * X");
        assert!(verify_separator(&sep, &x, &y).is_proven());
    }

    #[test]
    fn hereditary_axis_example() {
        let e: AnyEvs = "cone:1".parse().unwrap();
        let x = AnyElem::Cone(ConeElem::new(q(1, 1), vec![Scalar::zero()]));
        let y = AnyElem::Cone(ConeElem::new(q(2, 1), vec![Scalar::zero()]));
        let Separator::Slice(a) = separate(&e, &x, &y).unwrap() else { panic!() };
        assert_eq!(a.to_string(), "[0,3/2)xball(1)");
        let ay = a.intersection(&ConeSubevs::Axis.as_slice(1));
        assert_eq!(ay.to_string(), "[0,3/2)x{(0)}");
        for sub in [ConeSubevs::Axis, ConeSubevs::Vectors] {
            let r = check_radial_subevs(2, sub, 60, 42);
            assert!(!r.outcome.is_refuted(), "{sub:?}: {:?}", r.outcome);
            assert!(!r.pairs.is_empty());
        }
    }
}
