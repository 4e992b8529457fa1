//! Exact scalar fields.
//!
//! The real and complex scalar fields are replaced by an exact ordered field
//! `F` (in practice the rationals) and its Gaussian extension `F(i)`. Moduli
//! are never materialised as numbers: every `|λ| ≤ c` test is decided by
//! comparing `|λ|²` against `c²`.

use std::fmt::{self, Debug, Display};
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_integer::{Integer, Roots};
use num_rational::Ratio;
use num_traits::{Num, Signed};
use rand::Rng;

use crate::rng::substream;

/// An exact, totally ordered field with decidable square roots.
pub trait ExactField: Clone + Ord + Hash + Debug + Display + Num + Signed + Send + Sync + 'static {
    /// Builds `numer / denom`. Panics when `denom == 0`.
    fn from_ratio(numer: i64, denom: i64) -> Self;

    /// The exact square root, if it exists in the field.
    fn exact_sqrt(&self) -> Option<Self>;

    fn from_int(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }

    /// Midpoint of two values.
    fn midpoint(&self, other: &Self) -> Self {
        (self.clone() + other.clone()) / Self::from_int(2)
    }
}

impl<T> ExactField for Ratio<T>
where
    T: Clone + Integer + Signed + Roots + Hash + Debug + Display + From<i64> + Send + Sync + 'static,
{
    fn from_ratio(numer: i64, denom: i64) -> Self {
        Ratio::new(T::from(numer), T::from(denom))
    }

    fn exact_sqrt(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let n = self.numer();
        let d = self.denom();
        let sn = n.sqrt();
        let sd = d.sqrt();
        if sn.clone() * sn.clone() == *n && sd.clone() * sd.clone() == *d {
            Some(Ratio::new(sn, sd))
        } else {
            None
        }
    }
}

/// Whether scalars range over the base field or its Gaussian extension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldMode {
    Real,
    Complex,
}

/// Which scalars an evs instance accepts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ScalarMode {
    /// Every element of the field.
    AnyScalar,
    /// Only scalars whose modulus lies in the base field.
    PythagoreanOnly,
}

impl ScalarMode {
    /// The stricter of two modes.
    pub fn strictest(self, other: ScalarMode) -> ScalarMode {
        if self == ScalarMode::PythagoreanOnly || other == ScalarMode::PythagoreanOnly {
            ScalarMode::PythagoreanOnly
        } else {
            ScalarMode::AnyScalar
        }
    }
}

/// An element `re + im·i` of `F(i)`. Real scalars have `im = 0`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Gaussian<F> {
    pub re: F,
    pub im: F,
}

impl<F: ExactField> Gaussian<F> {
    pub fn new(re: F, im: F) -> Self {
        Gaussian { re, im }
    }

    pub fn real(re: F) -> Self {
        Gaussian { re, im: F::zero() }
    }

    pub fn from_ratio(numer: i64, denom: i64) -> Self {
        Self::real(F::from_ratio(numer, denom))
    }

    pub fn zero() -> Self {
        Self::real(F::zero())
    }

    pub fn one() -> Self {
        Self::real(F::one())
    }

    pub fn i() -> Self {
        Gaussian { re: F::zero(), im: F::one() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Gaussian { re: self.re.clone(), im: -self.im.clone() }
    }

    /// `re² + im²`, exactly.
    pub fn modulus_squared(&self) -> F {
        self.re.clone() * self.re.clone() + self.im.clone() * self.im.clone()
    }

    /// `|λ| ≤ c`, decided as `|λ|² ≤ c²`.
    ///
    /// Panics if `c < 0`.
    pub fn modulus_leq(&self, c: &F) -> bool {
        assert!(!c.is_negative(), "modulus bound must be non-negative, got {c}");
        self.modulus_squared() <= c.clone() * c.clone()
    }

    /// `|λ| < c`, decided as `|λ|² < c²`.
    pub fn modulus_lt(&self, c: &F) -> bool {
        assert!(!c.is_negative(), "modulus bound must be non-negative, got {c}");
        self.modulus_squared() < c.clone() * c.clone()
    }

    /// `|λ|` when it lies in the base field.
    pub fn rational_modulus(&self) -> Option<F> {
        if self.im.is_zero() {
            return Some(self.re.abs());
        }
        if self.re.is_zero() {
            return Some(self.im.abs());
        }
        self.modulus_squared().exact_sqrt()
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let m = self.modulus_squared();
        Some(Gaussian { re: self.re.clone() / m.clone(), im: -self.im.clone() / m })
    }

    pub fn scale_by(&self, q: &F) -> Self {
        Gaussian { re: self.re.clone() * q.clone(), im: self.im.clone() * q.clone() }
    }
}

impl<F: ExactField> Add for &Gaussian<F> {
    type Output = Gaussian<F>;
    fn add(self, rhs: &Gaussian<F>) -> Gaussian<F> {
        Gaussian { re: self.re.clone() + rhs.re.clone(), im: self.im.clone() + rhs.im.clone() }
    }
}

impl<F: ExactField> Sub for &Gaussian<F> {
    type Output = Gaussian<F>;
    fn sub(self, rhs: &Gaussian<F>) -> Gaussian<F> {
        Gaussian { re: self.re.clone() - rhs.re.clone(), im: self.im.clone() - rhs.im.clone() }
    }
}

impl<F: ExactField> Mul for &Gaussian<F> {
    type Output = Gaussian<F>;
    fn mul(self, rhs: &Gaussian<F>) -> Gaussian<F> {
        Gaussian {
            re: self.re.clone() * rhs.re.clone() - self.im.clone() * rhs.im.clone(),
            im: self.re.clone() * rhs.im.clone() + self.im.clone() * rhs.re.clone(),
        }
    }
}

impl<F: ExactField> Neg for &Gaussian<F> {
    type Output = Gaussian<F>;
    fn neg(self) -> Gaussian<F> {
        Gaussian { re: -self.re.clone(), im: -self.im.clone() }
    }
}

impl<F: ExactField> Add for Gaussian<F> {
    type Output = Gaussian<F>;
    fn add(self, rhs: Gaussian<F>) -> Gaussian<F> {
        &self + &rhs
    }
}

impl<F: ExactField> Sub for Gaussian<F> {
    type Output = Gaussian<F>;
    fn sub(self, rhs: Gaussian<F>) -> Gaussian<F> {
        &self - &rhs
    }
}

impl<F: ExactField> Mul for Gaussian<F> {
    type Output = Gaussian<F>;
    fn mul(self, rhs: Gaussian<F>) -> Gaussian<F> {
        &self * &rhs
    }
}

impl<F: ExactField> Neg for Gaussian<F> {
    type Output = Gaussian<F>;
    fn neg(self) -> Gaussian<F> {
        -&self
    }
}

impl<F: ExactField> Display for Gaussian<F> {
    /// Renders in the literal syntax accepted by [`FromStr`]: `p/q`, `r/si`
    /// or `p/q+r/si`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}i", self.im)
        } else if self.im.is_negative() {
            write!(f, "{}-{}i", self.re, self.im.abs())
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

/// Error for malformed scalar literals.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid scalar literal `{text}` at byte {offset}")]
pub struct ScalarParseError {
    pub text: String,
    pub offset: usize,
}

/// Parses `p`, `p/q` or `-p/q` into the base field. Returns the value and
/// the number of bytes consumed.
pub(crate) fn parse_rational_prefix<F: ExactField>(s: &str) -> Option<(F, usize)> {
    let bytes = s.as_bytes();
    let mut pos = 0;
    let negative = if bytes.first() == Some(&b'-') {
        pos += 1;
        true
    } else {
        false
    };
    let digits = |from: usize| bytes[from..].iter().take_while(|b| b.is_ascii_digit()).count();
    let integer = |text: &[u8]| {
        let ten = F::from_int(10);
        text.iter().fold(F::zero(), |acc, b| acc * ten.clone() + F::from_int(i64::from(b - b'0')))
    };
    let n_len = digits(pos);
    if n_len == 0 {
        return None;
    }
    let numer = integer(&bytes[pos..pos + n_len]);
    pos += n_len;
    let mut value = numer;
    if bytes.get(pos) == Some(&b'/') {
        let d_len = digits(pos + 1);
        if d_len == 0 {
            return None;
        }
        let denom = integer(&bytes[pos + 1..pos + 1 + d_len]);
        if denom.is_zero() {
            return None;
        }
        value = value / denom;
        pos += 1 + d_len;
    }
    if negative {
        value = -value;
    }
    Some((value, pos))
}

impl<F: ExactField> FromStr for Gaussian<F> {
    type Err = ScalarParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |offset| ScalarParseError { text: s.to_string(), offset };
        let (first, used) = parse_rational_prefix::<F>(s).ok_or_else(|| err(0))?;
        let rest = &s[used..];
        if rest.is_empty() {
            return Ok(Gaussian::real(first));
        }
        if rest == "i" {
            return Ok(Gaussian::new(F::zero(), first));
        }
        let sign = match rest.as_bytes()[0] {
            b'+' => F::one(),
            b'-' => -F::one(),
            _ => return Err(err(used)),
        };
        let (second, used2) = parse_rational_prefix::<F>(&rest[1..]).ok_or_else(|| err(used + 1))?;
        if second.is_negative() || &rest[1 + used2..] != "i" {
            return Err(err(used + 1 + used2));
        }
        Ok(Gaussian::new(first, sign * second))
    }
}

/// A scalar whose modulus lies in the base field, e.g. `(3+4i)/5`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Pythagorean<F> {
    scalar: Gaussian<F>,
    modulus: F,
}

impl<F: ExactField> Pythagorean<F> {
    pub fn new(scalar: Gaussian<F>) -> Option<Self> {
        let modulus = scalar.rational_modulus()?;
        Some(Pythagorean { scalar, modulus })
    }

    pub fn scalar(&self) -> &Gaussian<F> {
        &self.scalar
    }

    pub fn modulus(&self) -> &F {
        &self.modulus
    }
}

/// Primitive Pythagorean triples `(a, b, c)` with `a² + b² = c²`.
const TRIPLES: [(i64, i64, i64); 6] = [(3, 4, 5), (5, 12, 13), (8, 15, 17), (7, 24, 25), (20, 21, 29), (12, 35, 37)];

/// A random unit-modulus Gaussian scalar built from Pythagorean triples.
pub fn random_unit<F: ExactField, R: Rng + ?Sized>(rng: &mut R) -> Gaussian<F> {
    let mut unit = Gaussian::one();
    for _ in 0..rng.random_range(0..=2) {
        let (a, b, c) = TRIPLES[rng.random_range(0..TRIPLES.len())];
        let (a, b) = if rng.random_bool(0.5) { (a, b) } else { (b, a) };
        let a = if rng.random_bool(0.5) { -a } else { a };
        let b = if rng.random_bool(0.5) { -b } else { b };
        unit = &unit * &Gaussian::new(F::from_ratio(a, c), F::from_ratio(b, c));
    }
    match rng.random_range(0..4) {
        0 => unit,
        1 => &unit * &Gaussian::i(),
        2 => -unit,
        _ => &unit * &-Gaussian::i(),
    }
}

/// A random rational in `[0, 1]` with small denominator.
fn unit_fraction<F: ExactField, R: Rng + ?Sized>(rng: &mut R) -> F {
    let k = rng.random_range(1..=8);
    F::from_ratio(rng.random_range(0..=k), k)
}

/// Draws one scalar with `|λ| ≤ radius`.
pub fn sample_scalar<F: ExactField, R: Rng + ?Sized>(rng: &mut R, radius: &F, mode: ScalarMode, field: FieldMode) -> Gaussian<F> {
    let q: F = unit_fraction::<F, _>(rng) * radius.clone();
    match field {
        FieldMode::Real => {
            if rng.random_bool(0.5) {
                Gaussian::real(-q)
            } else {
                Gaussian::real(q)
            }
        }
        FieldMode::Complex => {
            let pythagorean = mode == ScalarMode::PythagoreanOnly || rng.random_bool(0.5);
            if pythagorean {
                random_unit::<F, _>(rng).scale_by(&q)
            } else {
                let k = rng.random_range(1..=6i64);
                loop {
                    let a = rng.random_range(-k..=k);
                    let b = rng.random_range(-k..=k);
                    if a * a + b * b <= k * k {
                        let z = Gaussian::new(F::from_ratio(a, k), F::from_ratio(b, k));
                        break z.scale_by(radius);
                    }
                }
            }
        }
    }
}

/// Deterministic boundary scalars placed in front of every sample list.
fn boundary_scalars<F: ExactField>(radius: &F, mode: ScalarMode, field: FieldMode) -> Vec<Gaussian<F>> {
    let r = Gaussian::real(radius.clone());
    match field {
        FieldMode::Real => vec![r.clone(), -r.clone(), Gaussian::zero(), r.scale_by(&F::from_ratio(1, 2))],
        FieldMode::Complex => {
            let mut out = vec![
                Gaussian::new(F::from_ratio(3, 5), F::from_ratio(4, 5)).scale_by(radius),
                r.clone(),
                -r.clone(),
                Gaussian::zero(),
                Gaussian::i().scale_by(radius),
            ];
            if mode == ScalarMode::AnyScalar {
                out.push(Gaussian::new(F::from_ratio(1, 2), F::from_ratio(1, 2)).scale_by(radius));
            }
            out
        }
    }
}

/// `count` scalars with `|λ| ≤ radius`, deterministic in `seed`.
///
/// The list starts with fixed boundary scalars (`radius·(3+4i)/5` first in
/// complex mode); in `PythagoreanOnly` mode every entry has a modulus in
/// the base field.
pub fn sample_scalars<F: ExactField>(radius: &F, count: usize, seed: u64, mode: ScalarMode, field: FieldMode) -> Vec<Gaussian<F>> {
    assert!(radius.is_positive(), "radius bound must be positive");
    let mut rng = substream(seed, "scalars");
    let mut out = boundary_scalars(radius, mode, field);
    out.truncate(count);
    while out.len() < count {
        out.push(sample_scalar(&mut rng, radius, mode, field));
    }
    out
}

/// Whether `s` is admissible under `mode` and `field`.
pub fn admissible<F: ExactField>(s: &Gaussian<F>, mode: ScalarMode, field: FieldMode) -> bool {
    match (field, mode) {
        (FieldMode::Real, _) => s.is_real(),
        (FieldMode::Complex, ScalarMode::AnyScalar) => true,
        (FieldMode::Complex, ScalarMode::PythagoreanOnly) => s.rational_modulus().is_some(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Rational, Scalar};

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn modulus_squared_examples() {
        assert_eq!(Scalar::from_ratio(3, 2).modulus_squared(), q(9, 4));
        assert_eq!(Scalar::new(q(1, 1), q(1, 1)).modulus_squared(), q(2, 1));
        assert_eq!(Scalar::zero().modulus_squared(), q(0, 1));
    }

    #[test]
    fn modulus_leq_examples() {
        let one_i = Scalar::new(q(1, 1), q(1, 1));
        assert!(one_i.modulus_leq(&q(3, 2)));
        assert!(!one_i.modulus_leq(&q(1, 1)));
        assert!(Scalar::from_ratio(-2, 3).modulus_leq(&q(2, 3)));
    }

    #[test]
    #[should_panic]
    fn modulus_leq_rejects_negative_bound() {
        Scalar::one().modulus_leq(&q(-1, 1));
    }

    #[test]
    fn pythagorean_sample_contains_three_four_five() {
        let xs = sample_scalars(&q(1, 1), 1, 7, ScalarMode::PythagoreanOnly, FieldMode::Complex);
        let target = Scalar::new(q(3, 5), q(4, 5));
        assert_eq!(xs[0], target);
        assert_eq!(target.rational_modulus(), Some(q(1, 1)));
    }

    #[test]
    fn any_scalar_samples_respect_radius() {
        let xs = sample_scalars(&q(1, 2), 500, 3, ScalarMode::AnyScalar, FieldMode::Complex);
        assert_eq!(xs.len(), 500);
        assert!(xs.iter().all(|x| x.modulus_leq(&q(1, 2))));
    }

    #[test]
    fn samples_are_deterministic() {
        let a = sample_scalars(&q(2, 1), 64, 11, ScalarMode::AnyScalar, FieldMode::Complex);
        let b = sample_scalars(&q(2, 1), 64, 11, ScalarMode::AnyScalar, FieldMode::Complex);
        assert_eq!(a, b);
        let c = sample_scalars(&q(2, 1), 64, 12, ScalarMode::AnyScalar, FieldMode::Complex);
        assert_ne!(a, c);
    }

    #[test]
    fn real_mode_samples_are_real() {
        let xs = sample_scalars(&q(1, 1), 100, 5, ScalarMode::AnyScalar, FieldMode::Real);
        assert!(xs.iter().all(Scalar::is_real));
    }

    #[test]
    fn literal_round_trip() {
        for text in ["3/5+4/5i", "-1/2", "4/5i", "1-2i", "7", "-3/4-1/8i"] {
            let s: Scalar = text.parse().unwrap();
            let again: Scalar = s.to_string().parse().unwrap();
            assert_eq!(s, again, "{text}");
        }
        let s: Scalar = "3/5+4/5i".parse().unwrap();
        assert_eq!(s, Scalar::new(q(3, 5), q(4, 5)));
        assert!("3/5 + 4/5i".parse::<Scalar>().is_err());
        assert!("1/0".parse::<Scalar>().is_err());
        assert!("i".parse::<Scalar>().is_err());
    }

    #[test]
    fn exact_sqrt_on_ratios() {
        assert_eq!(q(9, 4).exact_sqrt(), Some(q(3, 2)));
        assert_eq!(q(2, 1).exact_sqrt(), None);
        assert_eq!(q(-1, 1).exact_sqrt(), None);
        let small: num_rational::Rational64 = ExactField::from_ratio(16, 25);
        assert_eq!(small.exact_sqrt(), Some(num_rational::Rational64::new(4, 5)));
    }
}
