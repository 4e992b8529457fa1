//! The concrete evs instances.

mod any;
mod cone;
mod dict;
pub mod faults;
mod halfline;
mod lattice;

pub use any::{AnyElem, AnyEvs, InstanceError};
pub use cone::{ConeElem, ConeProduct, TwistedProduct};
pub use dict::{DictElem, DictPlane};
pub use halfline::HalfLine;
pub(crate) use lattice::random_line;
pub use lattice::{Subspace, SubspaceLattice};

use rand::Rng;

use crate::rng::CheckRng;
use crate::scalar::{ExactField, FieldMode};
use crate::{Rational, Scalar};

/// A small non-negative rational: numerator ≤ 12, denominator ≤ 4.
pub(crate) fn small_nonneg(rng: &mut CheckRng) -> Rational {
    let d = rng.random_range(1..=4);
    Rational::from_ratio(rng.random_range(0..=12), d)
}

/// A small scalar coordinate; real unless `field` is complex.
pub(crate) fn small_scalar(rng: &mut CheckRng, field: FieldMode) -> Scalar {
    let d = rng.random_range(1..=3);
    let re = Rational::from_ratio(rng.random_range(-6..=6), d);
    let im = if field == FieldMode::Complex && rng.random_bool(0.5) {
        Rational::from_ratio(rng.random_range(-6..=6), d)
    } else {
        Rational::from_int(0)
    };
    Scalar::new(re, im)
}

/// `|s|` for a scalar accepted by a modulus-acting instance.
pub(crate) fn modulus_of(s: &Scalar) -> Rational {
    s.rational_modulus().unwrap_or_else(|| panic!("scalar {s} has irrational modulus; this instance accepts Pythagorean scalars only"))
}
