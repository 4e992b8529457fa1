//! Deliberately broken instances used to show that the axiom suite bites.

use crate::evs::Evs;
use crate::rng::CheckRng;
use crate::scalar::{FieldMode, ScalarMode};
use crate::Scalar;

use super::{ConeElem, HalfLine, Subspace, SubspaceLattice, TwistedProduct};

type ScaleFn<T> = Box<dyn Fn(&Scalar, &T) -> T + Send + Sync>;
type AddFn<T> = Box<dyn Fn(&T, &T) -> T + Send + Sync>;

/// `base` with its scalar action and/or addition replaced.
pub struct Mutated<E: Evs> {
    base: E,
    label: &'static str,
    scale: Option<ScaleFn<E::Elem>>,
    add: Option<AddFn<E::Elem>>,
}

impl<E: Evs> Mutated<E> {
    pub fn label(&self) -> &'static str {
        self.label
    }
}

impl<E: Evs> Evs for Mutated<E> {
    type Elem = E::Elem;

    fn name(&self) -> String {
        format!("{}/{}", self.base.name(), self.label)
    }

    fn field_mode(&self) -> FieldMode {
        self.base.field_mode()
    }

    fn scalar_mode(&self) -> ScalarMode {
        self.base.scalar_mode()
    }

    fn zero(&self) -> E::Elem {
        self.base.zero()
    }

    fn add(&self, x: &E::Elem, y: &E::Elem) -> E::Elem {
        match &self.add {
            Some(f) => f(x, y),
            None => self.base.add(x, y),
        }
    }

    fn scale(&self, s: &Scalar, x: &E::Elem) -> E::Elem {
        match &self.scale {
            Some(f) => f(s, x),
            None => self.base.scale(s, x),
        }
    }

    fn leq(&self, x: &E::Elem, y: &E::Elem) -> bool {
        self.base.leq(x, y)
    }

    fn is_primitive(&self, x: &E::Elem) -> bool {
        self.base.is_primitive(x)
    }

    fn primitive_witness(&self, x: &E::Elem) -> E::Elem {
        self.base.primitive_witness(x)
    }

    fn sample(&self, rng: &mut CheckRng, count: usize) -> Vec<E::Elem> {
        self.base.sample(rng, count)
    }
}

/// Half-line whose action forgets the modulus: `λ·r = Re(λ)·r`.
pub fn halfline_without_modulus() -> Mutated<HalfLine> {
    Mutated { base: HalfLine::new(), label: "drop-modulus", scale: Some(Box::new(|s, r| &s.re * r)), add: None }
}

/// Half-line whose action is the identity.
pub fn halfline_identity_scale() -> Mutated<HalfLine> {
    Mutated { base: HalfLine::new(), label: "identity-scale", scale: Some(Box::new(|_, r| r.clone())), add: None }
}

/// Twisted product without the zero case: `0·(r, a) = (r, θ)`.
pub fn twisted_without_zero_case(n: usize) -> Mutated<TwistedProduct> {
    Mutated {
        base: TwistedProduct::new(n),
        label: "drop-zero-case",
        scale: Some(Box::new(|s, x: &ConeElem| ConeElem { r: x.r.clone(), a: x.a.iter().map(|v| s * v).collect() })),
        add: None,
    }
}

/// Subspace lattice whose join stacks bases without row reduction.
pub fn lattice_without_canonical_join() -> Mutated<SubspaceLattice> {
    Mutated {
        base: SubspaceLattice::new(),
        label: "uncanonical-join",
        scale: None,
        add: Some(Box::new(|x: &Subspace, y: &Subspace| {
            let mut rows = x.rows().to_vec();
            rows.extend(y.rows().iter().cloned());
            Subspace::from_rows_unchecked(x.ambient(), rows)
        })),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evs::{axiom_violated, check_axioms, Axiom};

    fn refuted<E: Evs>(e: &E) -> Vec<Axiom> {
        check_axioms(e, 2000, 42)
            .into_iter()
            .filter(|r| r.outcome.is_refuted())
            .inspect(|r| assert!(axiom_violated(e, r.axiom, r.counterexample.as_ref().unwrap())))
            .map(|r| r.axiom)
            .collect()
    }

    #[test]
    fn planted_faults_are_caught() {
        assert!(refuted(&halfline_without_modulus()).contains(&Axiom::A2Scale));
        assert!(refuted(&twisted_without_zero_case(2)).contains(&Axiom::A4));
        assert!(refuted(&lattice_without_canonical_join()).contains(&Axiom::A1Comm));
        let id = refuted(&halfline_identity_scale());
        assert!(id.contains(&Axiom::A4));
    }

    #[test]
    fn identity_scale_witness_has_zero_scalar() {
        let r = check_axioms(&halfline_identity_scale(), 100, 42).into_iter().find(|r| r.axiom == Axiom::A4).unwrap();
        let w = r.outcome.witness.unwrap();
        assert_eq!(w.get("alpha"), Some("0"));
        assert_ne!(w.get("x"), Some("0"));
    }
}
