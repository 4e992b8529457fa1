//! Sets given only by a membership test and a sampler of members.

use std::fmt;
use std::sync::Arc;

use crate::evs::{scalar_pool, Evs};
use crate::outcome::{CheckOutcome, Witness};
use crate::rng::substream;
use num_traits::One;

use crate::scalar::ExactField;
use crate::{Rational, Scalar};

type Member<T> = Arc<dyn Fn(&T) -> bool + Send + Sync>;
type Sampler<T> = Arc<dyn Fn(u64, usize) -> Vec<T> + Send + Sync>;

#[derive(Clone)]
pub struct PredicateSet<T> {
    label: String,
    member: Member<T>,
    sampler: Sampler<T>,
}

impl<T: Clone + PartialEq + fmt::Display + Send + Sync + 'static> PredicateSet<T> {
    /// `sampler(seed, count)` must only return members.
    pub fn new(
        label: impl Into<String>,
        member: impl Fn(&T) -> bool + Send + Sync + 'static,
        sampler: impl Fn(u64, usize) -> Vec<T> + Send + Sync + 'static,
    ) -> Self {
        PredicateSet { label: label.into(), member: Arc::new(member), sampler: Arc::new(sampler) }
    }

    pub fn contains(&self, x: &T) -> bool {
        (self.member)(x)
    }

    pub fn sample(&self, seed: u64, count: usize) -> Vec<T> {
        let xs = (self.sampler)(seed, count);
        debug_assert!(xs.iter().all(|x| self.contains(x)), "sampler of {} left the set", self.label);
        xs
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let (a, b) = (self.member.clone(), other.member.clone());
        let (s, m) = (self.sampler.clone(), other.member.clone());
        PredicateSet {
            label: format!("({}) & ({})", self.label, other.label),
            member: Arc::new(move |x| a(x) && b(x)),
            sampler: Arc::new(move |seed, n| s(seed, n).into_iter().filter(|x| m(x)).collect()),
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        let (a, b) = (self.member.clone(), other.member.clone());
        let (s, t) = (self.sampler.clone(), other.sampler.clone());
        PredicateSet {
            label: format!("({}) U ({})", self.label, other.label),
            member: Arc::new(move |x| a(x) || b(x)),
            sampler: Arc::new(move |seed, n| {
                let mut xs = s(seed, n.div_ceil(2));
                xs.extend(t(seed, n / 2));
                xs
            }),
        }
    }

    /// `λA` inside `e`. For `λ ≠ 0` the map `x ↦ λx` is invertible, so
    /// `y ∈ λA ⟺ λ⁻¹y ∈ A`.
    pub fn scale_in<E>(&self, e: Arc<E>, s: &Scalar) -> Self
    where
        E: Evs<Elem = T> + 'static,
    {
        let label = format!("({s})*({})", self.label);
        let sampler = self.sampler.clone();
        match s.inv() {
            None => {
                let theta = e.zero();
                let t2 = theta.clone();
                PredicateSet {
                    label,
                    member: Arc::new(move |y| *y == theta),
                    sampler: Arc::new(move |seed, n| if sampler(seed, 1).is_empty() { Vec::new() } else { vec![t2.clone(); n.min(1)] }),
                }
            }
            Some(inv) => {
                let member = self.member.clone();
                let (e1, e2) = (e.clone(), e);
                let s = s.clone();
                PredicateSet {
                    label,
                    member: Arc::new(move |y| member(&e1.scale(&inv, y))),
                    sampler: Arc::new(move |seed, n| sampler(seed, n).iter().map(|x| e2.scale(&s, x)).collect()),
                }
            }
        }
    }

    /// Samples `x ∈ A` and `|α| ≤ 1`, testing `αx ∈ A`.
    pub fn is_balanced_sampled<E: Evs<Elem = T>>(&self, e: &E, budget: u64, seed: u64) -> CheckOutcome {
        let mut rng = substream(seed, "predicate-balanced");
        let one = Rational::one();
        let alphas: Vec<Scalar> = scalar_pool(e, &mut rng, 32).into_iter().filter(|a| a.modulus_leq(&one)).collect();
        let xs = self.sample(seed, budget as usize);
        let mut tried = 0;
        for x in &xs {
            for a in &alphas {
                tried += 1;
                if !self.contains(&e.scale(a, x)) {
                    return CheckOutcome::refuted(Witness::new().with("x", x).with("alpha", a), tried, seed);
                }
            }
        }
        CheckOutcome::unfalsified(tried, seed)
    }

    /// Absorbing falsifier. Only `θ ∉ A` is a conclusive refutation; for
    /// other points a failed search over `α = 2⁻ᵏ` proves nothing.
    pub fn is_absorbing_sampled<E: Evs<Elem = T>>(&self, e: &E, budget: u64, seed: u64) -> CheckOutcome {
        let theta = e.zero();
        if !self.contains(&theta) {
            return CheckOutcome::refuted(Witness::new().with("x", &theta).with("mu", 0), 1, seed);
        }
        let mut rng = substream(seed, "predicate-absorbing");
        let units: Vec<Scalar> = scalar_pool(e, &mut rng, 24)
            .into_iter()
            .filter_map(|a| {
                let m = a.rational_modulus()?;
                (!a.is_zero()).then(|| a.scale_by(&(Rational::one() / m)))
            })
            .collect();
        let xs = e.sample(&mut rng, budget as usize);
        let mut tried = 0;
        let mut suspects = 0;
        for x in &xs {
            let found = (0..16).any(|k| {
                let alpha = Rational::new(1.into(), num_bigint::BigInt::from(1u64 << k));
                (1..=4).all(|j| {
                    let r = &alpha * Rational::from_ratio(j, 4);
                    units.iter().all(|u| {
                        tried += 1;
                        self.contains(&e.scale(&u.scale_by(&r), x))
                    })
                })
            });
            if !found {
                suspects += 1;
            }
        }
        let out = CheckOutcome::unfalsified(tried, seed);
        if suspects > 0 {
            out.with_note(format!("{suspects} sampled points found no alpha on the 2^-k grid"))
        } else {
            out
        }
    }
}

impl<T> fmt::Display for PredicateSet<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

impl<T> fmt::Debug for PredicateSet<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PredicateSet({})", self.label)
    }
}
