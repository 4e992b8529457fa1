use std::fmt;
use std::str::FromStr;

use crate::evs::{Evs, ProductError, ProductEvs, SetKind, Tuple};
use crate::rng::CheckRng;
use crate::scalar::{FieldMode, ScalarMode};
use crate::{Rational, Scalar};

use super::{ConeElem, ConeProduct, DictElem, DictPlane, HalfLine, Subspace, SubspaceLattice, TwistedProduct};

/// Any shipped instance, selected by name at run time.
#[derive(Clone, Debug)]
pub enum AnyEvs {
    HalfLine(HalfLine),
    Cone(ConeProduct),
    Twisted(TwistedProduct),
    Dict(DictPlane),
    Lattice(SubspaceLattice),
    Product(ProductEvs<AnyEvs>),
}

/// Elements of [`AnyEvs`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum AnyElem {
    Real(Rational),
    Cone(ConeElem),
    Dict(DictElem),
    Subspace(Subspace),
    Tuple(Tuple<AnyElem>),
}

impl fmt::Display for AnyElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnyElem::Real(x) => write!(f, "{x}"),
            AnyElem::Cone(x) => write!(f, "{x}"),
            AnyElem::Dict(x) => write!(f, "{x}"),
            AnyElem::Subspace(x) => write!(f, "{x}"),
            AnyElem::Tuple(x) => write!(f, "{x}"),
        }
    }
}

/// Conversion between an instance's own elements and [`AnyElem`].
trait Embedded: Evs {
    fn wrap(x: Self::Elem) -> AnyElem;
    fn unwrap(x: &AnyElem) -> &Self::Elem;
}

macro_rules! embedded {
    ($ty:ty, $variant:ident) => {
        impl Embedded for $ty {
            fn wrap(x: Self::Elem) -> AnyElem {
                AnyElem::$variant(x)
            }
            fn unwrap(x: &AnyElem) -> &Self::Elem {
                match x {
                    AnyElem::$variant(v) => v,
                    other => panic!("element {other} does not belong to {}", stringify!($ty)),
                }
            }
        }
    };
}

embedded!(HalfLine, Real);
embedded!(ConeProduct, Cone);
embedded!(TwistedProduct, Cone);
embedded!(DictPlane, Dict);
embedded!(SubspaceLattice, Subspace);
embedded!(ProductEvs<AnyEvs>, Tuple);

fn w<E: Embedded>(_: &E, x: E::Elem) -> AnyElem {
    E::wrap(x)
}

fn u<'a, E: Embedded>(_: &E, x: &'a AnyElem) -> &'a E::Elem {
    E::unwrap(x)
}

macro_rules! with_inner {
    ($s:expr, $e:ident => $body:expr) => {
        match $s {
            AnyEvs::HalfLine($e) => $body,
            AnyEvs::Cone($e) => $body,
            AnyEvs::Twisted($e) => $body,
            AnyEvs::Dict($e) => $body,
            AnyEvs::Lattice($e) => $body,
            AnyEvs::Product($e) => $body,
        }
    };
}

impl Evs for AnyEvs {
    type Elem = AnyElem;

    fn name(&self) -> String {
        with_inner!(self, e => e.name())
    }

    fn field_mode(&self) -> FieldMode {
        with_inner!(self, e => e.field_mode())
    }

    fn scalar_mode(&self) -> ScalarMode {
        with_inner!(self, e => e.scalar_mode())
    }

    fn zero(&self) -> AnyElem {
        with_inner!(self, e => w(e, e.zero()))
    }

    fn add(&self, x: &AnyElem, y: &AnyElem) -> AnyElem {
        with_inner!(self, e => w(e, e.add(u(e, x), u(e, y))))
    }

    fn scale(&self, s: &Scalar, x: &AnyElem) -> AnyElem {
        with_inner!(self, e => w(e, e.scale(s, u(e, x))))
    }

    fn leq(&self, x: &AnyElem, y: &AnyElem) -> bool {
        with_inner!(self, e => e.leq(u(e, x), u(e, y)))
    }

    fn is_primitive(&self, x: &AnyElem) -> bool {
        with_inner!(self, e => e.is_primitive(u(e, x)))
    }

    fn primitive_witness(&self, x: &AnyElem) -> AnyElem {
        with_inner!(self, e => w(e, e.primitive_witness(u(e, x))))
    }

    fn exact_primitives(&self, x: &AnyElem) -> Option<Vec<AnyElem>> {
        with_inner!(self, e => e.exact_primitives(u(e, x)).map(|ps| ps.into_iter().map(|p| w(e, p)).collect()))
    }

    fn sample(&self, rng: &mut CheckRng, count: usize) -> Vec<AnyElem> {
        with_inner!(self, e => e.sample(rng, count).into_iter().map(|x| w(e, x)).collect())
    }

    fn exactly_verified(&self) -> bool {
        with_inner!(self, e => e.exactly_verified())
    }

    fn exact_sets(&self) -> Vec<SetKind> {
        with_inner!(self, e => e.exact_sets())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InstanceError {
    #[error("unknown instance `{0}`")]
    Unknown(String),
    #[error("invalid dimension in `{0}`")]
    Dimension(String),
    #[error(transparent)]
    Product(#[from] ProductError),
}

/// Splits `a,b(c,d),e` at top-level commas.
fn split_top_level(s: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(s[start..].trim());
    parts
}

impl FromStr for AnyEvs {
    type Err = InstanceError;

    /// Accepts `halfline`, `cone:n`, `twisted:n`, `dict2`, `lattice2` and
    /// `product:(a,b,...)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let dim = |rest: &str| -> Result<usize, InstanceError> {
            match rest.parse::<usize>() {
                Ok(n) if n >= 1 => Ok(n),
                _ => Err(InstanceError::Dimension(s.to_string())),
            }
        };
        match s {
            "halfline" => return Ok(AnyEvs::HalfLine(HalfLine::new())),
            "dict2" => return Ok(AnyEvs::Dict(DictPlane::new())),
            "lattice2" => return Ok(AnyEvs::Lattice(SubspaceLattice::new())),
            _ => {}
        }
        if let Some(rest) = s.strip_prefix("cone:") {
            return Ok(AnyEvs::Cone(ConeProduct::new(dim(rest)?)));
        }
        if let Some(rest) = s.strip_prefix("twisted:") {
            return Ok(AnyEvs::Twisted(TwistedProduct::new(dim(rest)?)));
        }
        if let Some(inner) = s.strip_prefix("product:(").and_then(|r| r.strip_suffix(')')) {
            let parts = split_top_level(inner).into_iter().filter(|p| !p.is_empty()).map(str::parse).collect::<Result<Vec<AnyEvs>, _>>()?;
            return Ok(AnyEvs::Product(ProductEvs::new(parts)?));
        }
        Err(InstanceError::Unknown(s.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evs::check_axioms;
    use crate::scalar::ExactField;

    #[test]
    fn parses_instance_names() {
        for name in ["halfline", "cone:2", "twisted:3", "dict2", "lattice2", "product:(halfline,dict2)"] {
            let e: AnyEvs = name.parse().unwrap();
            assert_eq!(e.name(), name);
        }
        let nested: AnyEvs = "product:(halfline,product:(cone:1,lattice2))".parse().unwrap();
        assert_eq!(nested.name(), "product:(halfline,product:(cone:1,lattice2))");
        assert!("cone:0".parse::<AnyEvs>().is_err());
        assert!("torus".parse::<AnyEvs>().is_err());
        assert_eq!("product:()".parse::<AnyEvs>().unwrap_err(), InstanceError::Product(ProductError::Empty));
    }

    #[test]
    fn product_of_halflines() {
        let p: AnyEvs = "product:(halfline,halfline)".parse().unwrap();
        let t = |a: i64, b: i64| AnyElem::Tuple(Tuple(vec![AnyElem::Real(Rational::from_int(a)), AnyElem::Real(Rational::from_int(b))]));
        assert_eq!(p.add(&t(1, 2), &t(3, 4)), t(4, 6));
        assert!(p.is_primitive(&t(0, 0)));
        assert!(!p.is_primitive(&t(0, 1)));
        assert!(p.exactly_verified());
    }

    #[test]
    fn product_axioms_hold() {
        let p: AnyEvs = "product:(halfline,dict2)".parse().unwrap();
        assert!(check_axioms(&p, 1000, 42).iter().all(|r| r.outcome.is_proven()));
        let q: AnyEvs = "product:(cone:1,lattice2)".parse().unwrap();
        assert!(check_axioms(&q, 1000, 42).iter().all(|r| !r.outcome.is_refuted()));
    }
}
