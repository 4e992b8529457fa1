//! Exact laboratory for exponential vector spaces.
//!
//! Scalars are exact (ℚ and ℚ(i) by default). The crate provides the evs
//! instances, representable subsets with deciders for absorbing, balanced,
//! bounded and radial, neighbourhood-witness constructors on `[0, ∞)`, and a
//! seeded falsification harness that reports `Proven`, `Refuted` or
//! `Unfalsified` verdicts with exact witnesses.

pub mod evs;
pub mod instances;
pub mod outcome;
pub mod parse;
pub mod report;
pub mod rng;
pub mod scalar;
pub mod sets;
pub mod topology;

pub use evs::{Evs, ProductEvs, Tuple};
pub use outcome::{CheckOutcome, Verdict, Witness};
pub use scalar::{ExactField, FieldMode, Gaussian, ScalarMode};

/// Arbitrary-precision rationals, the default base field.
pub type Rational = num_rational::BigRational;

/// Gaussian rationals `p + q·i`.
pub type Scalar = Gaussian<Rational>;
