//! Finite and cofinite families of subspaces of the plane.

use std::collections::BTreeSet;
use std::fmt;

use crate::instances::Subspace;
use crate::outcome::{CheckOutcome, Witness};
use crate::scalar::ExactField;
use crate::{Rational, Scalar};

use super::SetError;

/// A family of subspaces of `F²`: either the listed members, or everything
/// except the listed members.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum LatticeFamily {
    Finite(BTreeSet<Subspace>),
    Cofinite(BTreeSet<Subspace>),
}

fn zero() -> Subspace {
    Subspace::zero(2)
}

fn full() -> Subspace {
    Subspace::full(2)
}

fn is_line(y: &Subspace) -> bool {
    y.dim() == 1
}

impl LatticeFamily {
    pub fn finite<I: IntoIterator<Item = Subspace>>(members: I) -> Self {
        LatticeFamily::Finite(members.into_iter().collect())
    }

    pub fn all_except<I: IntoIterator<Item = Subspace>>(excluded: I) -> Self {
        LatticeFamily::Cofinite(excluded.into_iter().collect())
    }

    pub fn all() -> Self {
        LatticeFamily::Cofinite(BTreeSet::new())
    }

    pub fn contains(&self, y: &Subspace) -> bool {
        match self {
            LatticeFamily::Finite(m) => m.contains(y),
            LatticeFamily::Cofinite(ex) => !ex.contains(y),
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, LatticeFamily::Finite(m) if m.is_empty())
    }

    pub fn complement(&self) -> Self {
        match self {
            LatticeFamily::Finite(m) => LatticeFamily::Cofinite(m.clone()),
            LatticeFamily::Cofinite(ex) => LatticeFamily::Finite(ex.clone()),
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        use LatticeFamily::*;
        match (self, other) {
            (Finite(a), Finite(b)) => Finite(a.union(b).cloned().collect()),
            (Cofinite(a), Cofinite(b)) => Cofinite(a.intersection(b).cloned().collect()),
            (Finite(f), Cofinite(c)) | (Cofinite(c), Finite(f)) => Cofinite(c.difference(f).cloned().collect()),
        }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.complement().union(&other.complement()).complement()
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        use LatticeFamily::*;
        match (self, other) {
            (Finite(a), _) => a.iter().all(|y| other.contains(y)),
            (Cofinite(_), Finite(_)) => false,
            (Cofinite(a), Cofinite(b)) => b.is_subset(a),
        }
    }

    /// `λA`: unchanged for `λ ≠ 0`, `{zero}` for `λ = 0`.
    pub fn scale(&self, s: &Scalar) -> Self {
        if !s.is_zero() || self.is_empty() {
            self.clone()
        } else {
            Self::finite([zero()])
        }
    }

    /// Subspaces containing some member.
    pub fn up(&self) -> Self {
        match self {
            LatticeFamily::Finite(m) => {
                if m.contains(&zero()) {
                    Self::all()
                } else if m.is_empty() {
                    self.clone()
                } else {
                    Self::finite(m.iter().filter(|y| is_line(y)).cloned().chain([full()]))
                }
            }
            LatticeFamily::Cofinite(ex) => {
                if ex.contains(&zero()) {
                    // Excluded lines contain no other member; the plane contains every line.
                    Self::all_except(ex.iter().filter(|y| **y != full()).cloned())
                } else {
                    Self::all()
                }
            }
        }
    }

    /// Subspaces contained in some member.
    pub fn down(&self) -> Self {
        match self {
            LatticeFamily::Finite(m) => {
                if m.contains(&full()) {
                    Self::all()
                } else if m.is_empty() {
                    self.clone()
                } else {
                    Self::finite(m.iter().filter(|y| is_line(y)).cloned().chain([zero()]))
                }
            }
            LatticeFamily::Cofinite(ex) => {
                if ex.contains(&full()) {
                    Self::all_except(ex.iter().filter(|y| **y != zero()).cloned())
                } else {
                    Self::all()
                }
            }
        }
    }

    /// Some subspace outside the family.
    pub fn non_member(&self) -> Option<Subspace> {
        match self {
            LatticeFamily::Cofinite(ex) => ex.iter().next().cloned(),
            LatticeFamily::Finite(m) => [zero(), full()]
                .into_iter()
                .chain((0..).map(|k| Subspace::line(Rational::from_int(1), Rational::from_int(k))))
                .find(|y| !m.contains(y)),
        }
    }

    /// Balanced iff `zero ∈ A`: `αY = Y` for `α ≠ 0` and `0·Y = zero`.
    pub fn is_balanced(&self) -> Result<CheckOutcome, SetError> {
        if self.is_empty() {
            return Err(SetError::Empty);
        }
        if self.contains(&zero()) {
            return Ok(CheckOutcome::proven(0, 0));
        }
        let member = match self {
            LatticeFamily::Finite(m) => m.iter().next().cloned().expect("nonempty"),
            LatticeFamily::Cofinite(_) => [full()]
                .into_iter()
                .chain((0..).map(|k| Subspace::line(Rational::from_int(1), Rational::from_int(k))))
                .find(|y| self.contains(y))
                .expect("cofinite families are infinite"),
        };
        Ok(CheckOutcome::refuted(Witness::new().with("x", member).with("alpha", 0), 0, 0))
    }

    /// Absorbing iff every subspace is a member: `μY = Y` for all `μ ≠ 0`.
    pub fn is_absorbing(&self) -> Result<CheckOutcome, SetError> {
        if self.is_empty() {
            return Err(SetError::Empty);
        }
        Ok(match self.non_member() {
            None => CheckOutcome::proven(0, 0),
            Some(y) => {
                let mu = if y == zero() { "0" } else { "any nonzero" };
                CheckOutcome::refuted(Witness::new().with("x", &y).with("mu", mu), 0, 0)
            }
        })
    }
}

impl fmt::Display for LatticeFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |m: &BTreeSet<Subspace>| m.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
        match self {
            LatticeFamily::Finite(m) => write!(f, "{{{}}}", list(m)),
            LatticeFamily::Cofinite(ex) if ex.is_empty() => f.write_str("ALL"),
            LatticeFamily::Cofinite(ex) => write!(f, "ALL\\{{{}}}", list(ex)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(p: i64, q: i64) -> Subspace {
        Subspace::line(Rational::from_int(p), Rational::from_int(q))
    }

    #[test]
    fn scaling_keeps_lines() {
        let f = LatticeFamily::finite([line(1, 2)]);
        assert_eq!(f.scale(&Scalar::from_ratio(3, 1)), f);
        assert_eq!(f.scale(&Scalar::zero()), LatticeFamily::finite([zero()]));
    }

    #[test]
    fn deciders() {
        assert!(LatticeFamily::finite([zero(), full()]).is_balanced().unwrap().is_proven());
        let out = LatticeFamily::finite([zero(), line(1, 0)]).is_absorbing().unwrap();
        assert!(out.is_refuted());
        assert_eq!(out.witness.unwrap().get("x"), Some("full"));
        assert!(LatticeFamily::all().is_absorbing().unwrap().is_proven());
        assert!(LatticeFamily::all_except([zero()]).is_balanced().unwrap().is_refuted());
    }

    #[test]
    fn up_and_down_by_inclusion() {
        assert_eq!(LatticeFamily::finite([full()]).down(), LatticeFamily::all());
        assert_eq!(LatticeFamily::finite([line(1, 1)]).up(), LatticeFamily::finite([line(1, 1), full()]));
        assert_eq!(LatticeFamily::finite([line(1, 1)]).down(), LatticeFamily::finite([line(1, 1), zero()]));
        assert_eq!(LatticeFamily::all_except([zero(), line(1, 0)]).up(), LatticeFamily::all_except([zero(), line(1, 0)]));
        assert_eq!(LatticeFamily::all_except([full(), zero(), line(1, 0)]).down(), LatticeFamily::all_except([full(), line(1, 0)]));
    }

    #[test]
    fn boolean_operations() {
        let a = LatticeFamily::all_except([line(1, 0)]);
        let b = LatticeFamily::finite([line(1, 0), zero()]);
        assert_eq!(a.union(&b), LatticeFamily::all());
        assert_eq!(a.intersection(&b), LatticeFamily::finite([zero()]));
        assert!(b.is_subset(&LatticeFamily::all()));
        assert!(!a.is_subset(&b));
        assert_eq!(a.to_string(), "ALL\\{span(1,0)}");
    }
}
