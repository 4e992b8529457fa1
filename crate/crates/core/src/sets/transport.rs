//! Transport of sets along the shipped order-isomorphisms out of `[0, ∞)`.

use std::fmt;
use std::str::FromStr;

use crate::evs::check_order_morphism;
use crate::instances::{AnyElem, ConeElem, ConeProduct, HalfLine};
use crate::outcome::{CheckOutcome, Verdict, Witness};
use crate::rng::substream;
use crate::scalar::ExactField;
use crate::{Evs, Rational, Scalar};

use super::radial::{check_radial, check_radial_subevs, halfline_separator, verdict_class, ConeSubevs, Separator};
use super::{random_interval_union, IntervalUnion, ProductSlice, SetError, SlicePiece, VectorRegion};

/// Maps out of the half-line. `Squaring` is a planted non-morphism.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShippedMap {
    Identity,
    Doubling,
    /// `r ↦ (r, θ)` onto the axis subevs of `cone:n`.
    ConeAxis(usize),
    Squaring,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TransportError {
    #[error("unknown map `{0}` (expected identity, doubling, cone-axis:n or squaring)")]
    Unknown(String),
    #[error("{0} has no exact inverse")]
    NoInverse(String),
    #[error("{0} is not an order-isomorphism: {1}")]
    NotIsomorphism(String, String),
}

impl fmt::Display for ShippedMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShippedMap::Identity => f.write_str("identity"),
            ShippedMap::Doubling => f.write_str("doubling"),
            ShippedMap::ConeAxis(n) => write!(f, "cone-axis:{n}"),
            ShippedMap::Squaring => f.write_str("squaring"),
        }
    }
}

impl FromStr for ShippedMap {
    type Err = TransportError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "identity" => Ok(ShippedMap::Identity),
            "doubling" => Ok(ShippedMap::Doubling),
            "squaring" => Ok(ShippedMap::Squaring),
            other => other
                .strip_prefix("cone-axis:")
                .and_then(|n| n.parse().ok())
                .filter(|&n| n >= 1)
                .map(ShippedMap::ConeAxis)
                .ok_or_else(|| TransportError::Unknown(other.to_string())),
        }
    }
}

/// Image of a set under a shipped map.
#[derive(Clone, Debug, PartialEq)]
pub enum Transported {
    Interval(IntervalUnion<Rational>),
    Slice(ProductSlice),
}

impl fmt::Display for Transported {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Transported::Interval(a) => write!(f, "{a}"),
            Transported::Slice(a) => write!(f, "{a}"),
        }
    }
}

impl ShippedMap {
    pub fn apply(&self, r: &Rational) -> AnyElem {
        match self {
            ShippedMap::Identity => AnyElem::Real(r.clone()),
            ShippedMap::Doubling => AnyElem::Real(r * Rational::from_int(2)),
            ShippedMap::ConeAxis(n) => AnyElem::Cone(ConeElem::new(r.clone(), vec![Scalar::zero(); *n])),
            ShippedMap::Squaring => AnyElem::Real(r * r),
        }
    }

    pub fn invert(&self, y: &AnyElem) -> Option<Rational> {
        match (self, y) {
            (ShippedMap::Identity, AnyElem::Real(r)) => Some(r.clone()),
            (ShippedMap::Doubling, AnyElem::Real(r)) => Some(r / Rational::from_int(2)),
            (ShippedMap::ConeAxis(_), AnyElem::Cone(c)) if c.a.iter().all(Scalar::is_zero) => Some(c.r.clone()),
            (ShippedMap::Squaring, AnyElem::Real(r)) => r.exact_sqrt(),
            _ => None,
        }
    }

    /// Falsifies the morphism conditions and `φ⁻¹∘φ = id`.
    pub fn check(&self, budget: u64, seed: u64) -> CheckOutcome {
        let x = HalfLine::new();
        let forward = match self {
            ShippedMap::ConeAxis(n) => {
                let f = |r: &Rational| ConeElem::new(r.clone(), vec![Scalar::zero(); *n]);
                check_order_morphism(&f, &x, &ConeProduct::new(*n), budget, seed)
            }
            _ => {
                let f = |r: &Rational| match self.apply(r) {
                    AnyElem::Real(v) => v,
                    _ => unreachable!("real-valued map"),
                };
                check_order_morphism(&f, &x, &x, budget, seed)
            }
        };
        if forward.is_refuted() {
            return forward;
        }
        let mut rng = substream(seed, "inverse");
        let xs = x.sample(&mut rng, budget.min(1000) as usize);
        for r in &xs {
            if self.invert(&self.apply(r)).as_ref() != Some(r) {
                return CheckOutcome::refuted(Witness::new().with("clause", "inverse").with("x", r), xs.len() as u64, seed);
            }
        }
        forward
    }

    /// `φ` restricted to the maps that passed [`ShippedMap::check`].
    pub fn verified(self, budget: u64, seed: u64) -> Result<Self, TransportError> {
        let o = self.check(budget, seed);
        if o.is_refuted() {
            return Err(TransportError::NotIsomorphism(self.to_string(), o.witness.map(|w| w.to_string()).unwrap_or_default()));
        }
        Ok(self)
    }

    /// Exact image of an interval union.
    pub fn transport(&self, a: &IntervalUnion<Rational>) -> Result<Transported, TransportError> {
        match self {
            ShippedMap::Identity => Ok(Transported::Interval(a.clone())),
            ShippedMap::Doubling => Ok(Transported::Interval(a.scale_modulus(&Rational::from_int(2)))),
            ShippedMap::ConeAxis(n) => {
                let theta = vec![Scalar::zero(); *n];
                let pieces =
                    a.components().iter().map(|i| SlicePiece { r: i.clone(), v: VectorRegion::Finite(vec![theta.clone()]) }).collect();
                Ok(Transported::Slice(ProductSlice::new(*n, pieces)))
            }
            ShippedMap::Squaring => Err(TransportError::NotIsomorphism(self.to_string(), "not additive".into())),
        }
    }

    pub fn transport_separator(&self, s: &Separator) -> Result<Separator, TransportError> {
        match s {
            Separator::Interval(a) => Ok(match self.transport(a)? {
                Transported::Interval(b) => Separator::Interval(b),
                Transported::Slice(b) => Separator::Slice(b),
            }),
            other => Err(TransportError::NotIsomorphism(self.to_string(), format!("cannot carry {other}"))),
        }
    }
}

impl Transported {
    pub fn contains(&self, y: &AnyElem) -> bool {
        match (self, y) {
            (Transported::Interval(a), AnyElem::Real(r)) => a.contains(r),
            (Transported::Slice(a), AnyElem::Cone(c)) => a.contains(c),
            _ => false,
        }
    }

    /// Absorbing in the image evs. A slice on the cone axis is absorbing in
    /// the axis subevs exactly when its fiber over θ is absorbing in `[0, ∞)`,
    /// since `μ(r, θ) = (|μ|r, θ)`.
    pub fn is_absorbing(&self) -> Result<CheckOutcome, SetError> {
        match self {
            Transported::Interval(a) => a.is_absorbing(),
            Transported::Slice(a) => {
                let fiber = a.fiber_at(&vec![Scalar::zero(); a.dim()]);
                if fiber.is_empty() {
                    return Err(SetError::Empty);
                }
                fiber.is_absorbing()
            }
        }
    }
}

fn same_verdict(a: &Result<CheckOutcome, SetError>, b: &Result<CheckOutcome, SetError>) -> bool {
    match (a, b) {
        (Ok(x), Ok(y)) => x.verdict == y.verdict,
        (Err(x), Err(y)) => x == y,
        _ => false,
    }
}

/// `A` absorbing ⟺ `φ(A)` absorbing, both decided exactly, on random sets.
pub fn check_absorbing_transport(map: ShippedMap, budget: u64, seed: u64) -> Result<CheckOutcome, TransportError> {
    let map = map.verified(budget.min(2000), seed)?;
    let mut rng = substream(seed, "absorbing-transport");
    for tried in 1..=budget {
        let a = random_interval_union(&mut rng);
        let image = map.transport(&a)?;
        let (before, after) = (a.is_absorbing(), image.is_absorbing());
        if !same_verdict(&before, &after) {
            let w = Witness::new().with("A", &a).with("image", &image).with("map", map);
            return Ok(CheckOutcome::refuted(w, tried, seed));
        }
    }
    Ok(CheckOutcome::unfalsified(budget, seed))
}

/// Radial verdict classes agree across `φ`, and each half-line separator
/// `A` of `x, y` maps to an absorbing `φ(A)` separating `φ(x), φ(y)`.
pub fn check_radial_transport(map: ShippedMap, budget: u64, seed: u64) -> Result<CheckOutcome, TransportError> {
    let map = map.verified(budget.min(2000), seed)?;
    let source = check_radial(&"halfline".parse().expect("shipped"), budget, seed);
    let target = match map {
        ShippedMap::ConeAxis(n) => check_radial_subevs(n, ConeSubevs::Axis, budget, seed),
        _ => source.clone(),
    };
    if verdict_class(&source) != verdict_class(&target) {
        let w = Witness::new().with("source", source.outcome.verdict).with("target", target.outcome.verdict);
        return Ok(CheckOutcome::refuted(w, 0, seed));
    }
    let mut tried = 0;
    for pair in &source.pairs {
        let (AnyElem::Real(x), AnyElem::Real(y)) = (&pair.x, &pair.y) else { continue };
        tried += 1;
        let sep = halfline_separator(x, y);
        let Separator::Interval(a) = &sep else { unreachable!() };
        let image = map.transport(a)?;
        let (fx, fy) = (map.apply(x), map.apply(y));
        let separates = image.contains(&fx) != image.contains(&fy);
        let absorbing = image.is_absorbing().is_ok_and(|o| o.verdict == Verdict::Proven);
        if !(separates && absorbing) {
            let w = Witness::new().with("x", x).with("y", y).with("separator", &sep).with("image", &image);
            return Ok(CheckOutcome::refuted(w, tried, seed));
        }
    }
    Ok(CheckOutcome::unfalsified(tried, seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sets::Interval;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn doubling_examples() {
        let a = IntervalUnion::single(Interval::closed_open(q(0, 1), q(1, 1)));
        let image = ShippedMap::Doubling.transport(&a).unwrap();
        assert_eq!(image.to_string(), "[0,2)");
        assert!(image.is_absorbing().unwrap().is_proven());
        let zero = IntervalUnion::single(Interval::point(q(0, 1)));
        let image = ShippedMap::Doubling.transport(&zero).unwrap();
        assert_eq!(image.to_string(), "[0,0]");
        assert!(image.is_absorbing().unwrap().is_refuted());
        assert!(zero.is_absorbing().unwrap().is_refuted());
    }

    #[test]
    fn cone_axis_image() {
        let a = IntervalUnion::single(Interval::closed_open(q(0, 1), q(1, 1)));
        let image = ShippedMap::ConeAxis(1).transport(&a).unwrap();
        assert_eq!(image.to_string(), "[0,1)x{(0)}");
        assert!(image.is_absorbing().unwrap().is_proven());
    }

    #[test]
    fn squaring_is_rejected() {
        let o = ShippedMap::Squaring.check(500, 42);
        assert!(o.is_refuted());
        assert_eq!(o.witness.unwrap().get("clause"), Some("additive"));
        assert!(check_absorbing_transport(ShippedMap::Squaring, 10, 1).is_err());
    }

    #[test]
    fn transports_preserve_verdicts() {
        for map in [ShippedMap::Identity, ShippedMap::Doubling, ShippedMap::ConeAxis(2)] {
            let o = check_absorbing_transport(map, 200, 42).unwrap();
            assert_eq!(o.verdict, Verdict::Unfalsified, "{map}: {:?}", o.witness);
            let r = check_radial_transport(map, 100, 42).unwrap();
            assert_eq!(r.verdict, Verdict::Unfalsified, "{map}: {:?}", r.witness);
        }
    }

    #[test]
    fn map_names_parse() {
        assert_eq!("cone-axis:3".parse::<ShippedMap>(), Ok(ShippedMap::ConeAxis(3)));
        assert!("cone-axis:0".parse::<ShippedMap>().is_err());
    }
}
