//! The generic exponential-vector-space interface and its law checkers.
//!
//! An [`Evs`] bundles an element type with addition, scalar action, a
//! partial order, the additive identity θ and exact membership in the
//! primitive space X₀. The checkers in this module falsify the defining
//! axioms, the primitive scaling law, order-morphism conditions and the
//! subevs criterion over seeded samples.

use std::fmt::{self, Debug, Display};

use rand::Rng;
use rayon::prelude::*;

use crate::outcome::{CheckOutcome, Witness};
use crate::rng::{substream, CheckRng};
use crate::scalar::{admissible, random_unit, sample_scalar, ExactField, FieldMode, ScalarMode};
use crate::{Rational, Scalar};

/// Representable set kinds an instance supports exactly.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SetKind {
    IntervalUnion,
    AnchoredBoxUnion,
    LatticeFamily,
    ProductSlice,
}

/// One exponential vector space instance.
pub trait Evs: Send + Sync {
    type Elem: Clone + PartialEq + Debug + Display + Send + Sync;

    /// Instance name as used on the command line.
    fn name(&self) -> String;

    fn field_mode(&self) -> FieldMode;

    fn scalar_mode(&self) -> ScalarMode;

    /// The additive identity θ.
    fn zero(&self) -> Self::Elem;

    fn add(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;

    /// Scalar action. Callers must pass scalars accepted by [`Evs::admits`].
    fn scale(&self, s: &Scalar, x: &Self::Elem) -> Self::Elem;

    fn leq(&self, x: &Self::Elem, y: &Self::Elem) -> bool;

    /// Exact membership in the primitive space X₀.
    fn is_primitive(&self, x: &Self::Elem) -> bool;

    /// Some `p ∈ X₀` with `p ≤ x`.
    fn primitive_witness(&self, x: &Self::Elem) -> Self::Elem;

    /// The full primitive set `P_x = {p ∈ X₀ : p ≤ x}` when it is known exactly.
    fn exact_primitives(&self, _x: &Self::Elem) -> Option<Vec<Self::Elem>> {
        None
    }

    /// `count` elements; boundary elements (θ, primitives) come first.
    fn sample(&self, rng: &mut CheckRng, count: usize) -> Vec<Self::Elem>;

    /// Whether the laws A1–A6 of this instance have been verified exactly,
    /// allowing unrefuted checks to be reported as Proven.
    fn exactly_verified(&self) -> bool {
        false
    }

    fn exact_sets(&self) -> Vec<SetKind> {
        Vec::new()
    }

    fn admits(&self, s: &Scalar) -> bool {
        admissible(s, self.scalar_mode(), self.field_mode())
    }
}

/// Axiom identifiers, in report order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axiom {
    A1Assoc,
    A1Comm,
    A1Id,
    A2Add,
    A2Scale,
    A3i,
    A3ii,
    A3iii,
    A3iv,
    A4,
    A5Fwd,
    A5Bwd,
    A6,
    OrderRefl,
    OrderAntisym,
    OrderTrans,
}

impl Axiom {
    /// The evs axioms proper.
    pub const AXIOMS: [Axiom; 13] = [
        Axiom::A1Assoc,
        Axiom::A1Comm,
        Axiom::A1Id,
        Axiom::A2Add,
        Axiom::A2Scale,
        Axiom::A3i,
        Axiom::A3ii,
        Axiom::A3iii,
        Axiom::A3iv,
        Axiom::A4,
        Axiom::A5Fwd,
        Axiom::A5Bwd,
        Axiom::A6,
    ];

    /// Partial-order laws of the underlying poset.
    pub const ORDER: [Axiom; 3] = [Axiom::OrderRefl, Axiom::OrderAntisym, Axiom::OrderTrans];

    pub fn id(self) -> &'static str {
        match self {
            Axiom::A1Assoc => "A1.assoc",
            Axiom::A1Comm => "A1.comm",
            Axiom::A1Id => "A1.id",
            Axiom::A2Add => "A2.add",
            Axiom::A2Scale => "A2.scale",
            Axiom::A3i => "A3.i",
            Axiom::A3ii => "A3.ii",
            Axiom::A3iii => "A3.iii",
            Axiom::A3iv => "A3.iv",
            Axiom::A4 => "A4",
            Axiom::A5Fwd => "A5.fwd",
            Axiom::A5Bwd => "A5.bwd",
            Axiom::A6 => "A6",
            Axiom::OrderRefl => "PO.refl",
            Axiom::OrderAntisym => "PO.antisym",
            Axiom::OrderTrans => "PO.trans",
        }
    }

    /// Number of (element, scalar) variables quantified by the law.
    pub fn arity(self) -> (usize, usize) {
        match self {
            Axiom::A1Assoc | Axiom::A2Add | Axiom::OrderTrans => (3, 0),
            Axiom::A1Comm | Axiom::A5Fwd | Axiom::OrderAntisym => (2, 0),
            Axiom::A1Id | Axiom::A3iv | Axiom::A5Bwd | Axiom::A6 | Axiom::OrderRefl => (1, 0),
            Axiom::A2Scale | Axiom::A3i => (2, 1),
            Axiom::A3ii | Axiom::A3iii => (1, 2),
            Axiom::A4 => (1, 1),
        }
    }
}

impl Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// A concrete assignment of a law's quantified variables.
#[derive(Clone, Debug, PartialEq)]
pub struct LawInstance<T> {
    pub elems: Vec<T>,
    pub scalars: Vec<Scalar>,
}

impl<T: Display> LawInstance<T> {
    fn witness(&self) -> Witness {
        const ELEM_NAMES: [&str; 3] = ["x", "y", "z"];
        const SCALAR_NAMES: [&str; 2] = ["alpha", "beta"];
        let mut w = Witness::new();
        for (name, e) in ELEM_NAMES.iter().zip(&self.elems) {
            w.push(*name, e);
        }
        for (name, s) in SCALAR_NAMES.iter().zip(&self.scalars) {
            w.push(*name, s);
        }
        w
    }
}

/// Whether `inst` violates `axiom` in `e`. This is both the search
/// predicate and the re-verification of reported witnesses.
pub fn axiom_violated<E: Evs>(e: &E, axiom: Axiom, inst: &LawInstance<E::Elem>) -> bool {
    let x = &inst.elems[0];
    let theta = e.zero();
    match axiom {
        Axiom::A1Assoc => {
            let (y, z) = (&inst.elems[1], &inst.elems[2]);
            e.add(&e.add(x, y), z) != e.add(x, &e.add(y, z))
        }
        Axiom::A1Comm => {
            let y = &inst.elems[1];
            e.add(x, y) != e.add(y, x)
        }
        Axiom::A1Id => e.add(x, &theta) != *x || e.add(&theta, x) != *x,
        Axiom::A2Add => {
            let (y, z) = (&inst.elems[1], &inst.elems[2]);
            e.leq(x, y) && !e.leq(&e.add(x, z), &e.add(y, z))
        }
        Axiom::A2Scale => {
            let y = &inst.elems[1];
            let a = &inst.scalars[0];
            e.leq(x, y) && !e.leq(&e.scale(a, x), &e.scale(a, y))
        }
        Axiom::A3i => {
            let y = &inst.elems[1];
            let a = &inst.scalars[0];
            e.scale(a, &e.add(x, y)) != e.add(&e.scale(a, x), &e.scale(a, y))
        }
        Axiom::A3ii => {
            let (a, b) = (&inst.scalars[0], &inst.scalars[1]);
            e.scale(a, &e.scale(b, x)) != e.scale(&(a * b), x)
        }
        Axiom::A3iii => {
            let (a, b) = (&inst.scalars[0], &inst.scalars[1]);
            !e.leq(&e.scale(&(a + b), x), &e.add(&e.scale(a, x), &e.scale(b, x)))
        }
        Axiom::A3iv => e.scale(&Scalar::one(), x) != *x,
        Axiom::A4 => {
            let a = &inst.scalars[0];
            (e.scale(a, x) == theta) != (a.is_zero() || *x == theta)
        }
        Axiom::A5Fwd => {
            let y = &inst.elems[1];
            e.is_primitive(x) && (e.add(x, &e.scale(&-Scalar::one(), x)) != theta || (y != x && e.leq(y, x)))
        }
        Axiom::A5Bwd => !e.is_primitive(x) && e.add(x, &e.scale(&-Scalar::one(), x)) == theta,
        Axiom::A6 => {
            let p = e.primitive_witness(x);
            !e.is_primitive(&p) || !e.leq(&p, x)
        }
        Axiom::OrderRefl => !e.leq(x, x),
        Axiom::OrderAntisym => {
            let y = &inst.elems[1];
            e.leq(x, y) && e.leq(y, x) && x != y
        }
        Axiom::OrderTrans => {
            let (y, z) = (&inst.elems[1], &inst.elems[2]);
            e.leq(x, y) && e.leq(y, z) && !e.leq(x, z)
        }
    }
}

/// Smallest `n` with `n^k ≥ budget`.
pub fn per_variable(budget: u64, k: usize) -> usize {
    if k == 0 {
        return 1;
    }
    let mut n: u64 = 1;
    while n.saturating_pow(k as u32) < budget {
        n += 1;
    }
    n as usize
}

/// Fixed scalars tried before random ones.
fn boundary_scalars<E: Evs>(e: &E) -> Vec<Scalar> {
    let mut out = vec![Scalar::one(), Scalar::zero(), -Scalar::one(), Scalar::from_ratio(1, 2), Scalar::from_ratio(3, 1)];
    if e.field_mode() == FieldMode::Complex {
        out.push(Scalar::i());
        out.push(Scalar::new(Rational::from_ratio(3, 5), Rational::from_ratio(4, 5)));
        if e.scalar_mode() == ScalarMode::AnyScalar {
            out.push(Scalar::new(Rational::from_int(1), Rational::from_int(1)));
        }
    }
    out.retain(|s| e.admits(s));
    out
}

/// `n` admissible scalars with modulus at most 2.
pub fn scalar_pool<E: Evs>(e: &E, rng: &mut CheckRng, n: usize) -> Vec<Scalar> {
    let radius = Rational::from_int(2);
    let mut out = boundary_scalars(e);
    out.truncate(n);
    while out.len() < n {
        out.push(sample_scalar(rng, &radius, e.scalar_mode(), e.field_mode()));
    }
    out
}

/// `n` scalar pairs `(α, β)` such that `α`, `β` and `α + β` are admissible.
///
/// Under `PythagoreanOnly` a random pair rarely has a rational-modulus sum,
/// so besides filtered random pairs this builds pairs along a common unit
/// direction and pairs `q·(m/c)·u`, `q·(k/c)·iu` from a triple `(m, k, c)`.
pub fn scalar_pairs<E: Evs>(e: &E, rng: &mut CheckRng, n: usize) -> Vec<(Scalar, Scalar)> {
    let side = per_variable(n as u64, 2);
    let left = scalar_pool(e, rng, side);
    let right = scalar_pool(e, rng, side);
    let mut out: Vec<(Scalar, Scalar)> =
        left.iter().flat_map(|a| right.iter().map(move |b| (a.clone(), b.clone()))).filter(|(a, b)| e.admits(&(a + b))).take(n).collect();
    const LEGS: [(i64, i64, i64); 3] = [(3, 4, 5), (5, 12, 13), (8, 15, 17)];
    while out.len() < n {
        let unit: Scalar = if e.field_mode() == FieldMode::Complex { random_unit(rng) } else { Scalar::one() };
        let k = rng.random_range(1..=4);
        let q1 = Rational::from_ratio(rng.random_range(-2 * k..=2 * k), k);
        let q2 = Rational::from_ratio(rng.random_range(-2 * k..=2 * k), k);
        let pair = if e.field_mode() == FieldMode::Complex && rng.random_bool(0.5) {
            let (m, l, c) = LEGS[rng.random_range(0..LEGS.len())];
            let a = unit.scale_by(&(q1.clone() * Rational::from_ratio(m, c)));
            let b = (&unit * &Scalar::i()).scale_by(&(q1 * Rational::from_ratio(l, c)));
            (a, b)
        } else {
            (unit.scale_by(&q1), unit.scale_by(&q2))
        };
        debug_assert!(e.admits(&pair.0) && e.admits(&pair.1) && e.admits(&(&pair.0 + &pair.1)));
        out.push(pair);
    }
    out
}

/// For each `x`, candidates `y` with `x ≤ y` expected: `x` itself and
/// `x + (w + (−1)·w)`, which lies above `x` whenever A2 and A3(iii) hold.
fn upper_candidates<E: Evs>(e: &E, x: &E::Elem, ws: &[E::Elem]) -> Vec<E::Elem> {
    let minus_one = -Scalar::one();
    let mut out = vec![x.clone()];
    out.extend(ws.iter().map(|w| e.add(x, &e.add(w, &e.scale(&minus_one, w)))));
    out
}

/// Enumerates the law instances tried for `axiom` under `budget`.
pub fn law_instances<E: Evs>(e: &E, axiom: Axiom, budget: u64, rng: &mut CheckRng) -> Vec<LawInstance<E::Elem>> {
    let (ke, ks) = axiom.arity();
    let n = per_variable(budget, ke + ks);
    let inst = |elems: Vec<E::Elem>, scalars: Vec<Scalar>| LawInstance { elems, scalars };
    match axiom {
        Axiom::A2Add | Axiom::OrderTrans => {
            let xs = e.sample(rng, n);
            let ws = e.sample(rng, n);
            let zs = e.sample(rng, n);
            let mut out = Vec::new();
            for x in &xs {
                for y in upper_candidates(e, x, &ws).iter().chain(ws.iter().take(n / 2)) {
                    if axiom == Axiom::A2Add {
                        out.extend(zs.iter().map(|z| inst(vec![x.clone(), y.clone(), z.clone()], vec![])));
                    } else {
                        let zs_above = upper_candidates(e, y, &zs);
                        out.extend(zs_above.into_iter().map(|z| inst(vec![x.clone(), y.clone(), z], vec![])));
                    }
                }
            }
            out
        }
        Axiom::A2Scale => {
            let xs = e.sample(rng, n);
            let ws = e.sample(rng, n);
            let scalars = scalar_pool(e, rng, n);
            let mut out = Vec::new();
            for x in &xs {
                for y in upper_candidates(e, x, &ws).iter().chain(&ws) {
                    out.extend(scalars.iter().map(|a| inst(vec![x.clone(), y.clone()], vec![a.clone()])));
                }
            }
            out
        }
        Axiom::OrderAntisym => {
            let xs = e.sample(rng, n);
            let ys = e.sample(rng, n);
            let mut out = Vec::new();
            for x in &xs {
                for y in upper_candidates(e, x, &ys).into_iter().chain(ys.iter().cloned()) {
                    out.push(inst(vec![x.clone(), y], vec![]));
                }
            }
            out
        }
        Axiom::A3iii => {
            let xs = e.sample(rng, n);
            let pairs = scalar_pairs(e, rng, n * n);
            xs.iter().flat_map(|x| pairs.iter().map(move |(a, b)| inst(vec![x.clone()], vec![a.clone(), b.clone()]))).collect()
        }
        _ => {
            let elem_pools: Vec<Vec<E::Elem>> = (0..ke).map(|_| e.sample(rng, n)).collect();
            let scalar_pools: Vec<Vec<Scalar>> = (0..ks).map(|_| scalar_pool(e, rng, n)).collect();
            let mut out = vec![inst(vec![], vec![])];
            for pool in &elem_pools {
                out = out
                    .into_iter()
                    .flat_map(|i| {
                        pool.iter().map(move |x| {
                            let mut elems = i.elems.clone();
                            elems.push(x.clone());
                            inst(elems, i.scalars.clone())
                        })
                    })
                    .collect();
            }
            for pool in &scalar_pools {
                out = out
                    .into_iter()
                    .flat_map(|i| {
                        pool.iter().map(move |s| {
                            let mut scalars = i.scalars.clone();
                            scalars.push(s.clone());
                            inst(i.elems.clone(), scalars)
                        })
                    })
                    .collect();
            }
            out
        }
    }
}

/// Outcome of one law together with the typed counterexample, if any.
#[derive(Clone, Debug)]
pub struct AxiomResult<T> {
    pub axiom: Axiom,
    pub outcome: CheckOutcome,
    pub counterexample: Option<LawInstance<T>>,
}

/// Searches a single law.
pub fn check_law<E: Evs>(e: &E, axiom: Axiom, budget: u64, seed: u64) -> AxiomResult<E::Elem> {
    let mut rng = substream(seed, axiom.id());
    let instances = law_instances(e, axiom, budget, &mut rng);
    let mut tried = 0u64;
    for inst in instances {
        tried += 1;
        if axiom_violated(e, axiom, &inst) {
            let witness = inst.witness().with("law", axiom.id());
            return AxiomResult { axiom, outcome: CheckOutcome::refuted(witness, tried, seed), counterexample: Some(inst) };
        }
    }
    let mut outcome = CheckOutcome::passed(e.exactly_verified(), tried, seed);
    if matches!(axiom, Axiom::A5Fwd | Axiom::A5Bwd) && !e.exactly_verified() {
        outcome = outcome.with_note("X0 membership is supplied by the instance; global minimality assumed");
    }
    AxiomResult { axiom, outcome, counterexample: None }
}

/// Runs A1–A6 in report order. Quantifiers range over seeded samples; each
/// k-variable law receives ⌈budget^(1/k)⌉ samples per variable.
pub fn check_axioms<E: Evs>(e: &E, budget: u64, seed: u64) -> Vec<AxiomResult<E::Elem>> {
    assert!(budget >= 1, "budget must be at least 1");
    Axiom::AXIOMS.par_iter().map(|&a| check_law(e, a, budget, seed)).collect()
}

/// Reflexivity, antisymmetry and transitivity of `leq` on samples.
pub fn check_order<E: Evs>(e: &E, budget: u64, seed: u64) -> Vec<AxiomResult<E::Elem>> {
    assert!(budget >= 1, "budget must be at least 1");
    Axiom::ORDER.par_iter().map(|&a| check_law(e, a, budget, seed)).collect()
}

fn contains_all<T: PartialEq>(big: &[T], small: &[T]) -> bool {
    small.iter().all(|s| big.contains(s))
}

/// Primitives below `x`: exact when the instance knows `P_x`, otherwise the
/// sampled primitives below `x` together with the primitive witness.
pub fn primitive_samples<E: Evs>(e: &E, x: &E::Elem, budget: u64, seed: u64) -> Vec<E::Elem> {
    if let Some(exact) = e.exact_primitives(x) {
        return exact;
    }
    let mut rng = substream(seed, "primitives");
    let mut out = vec![e.primitive_witness(x)];
    for p in e.sample(&mut rng, budget as usize) {
        if e.is_primitive(&p) && e.leq(&p, x) && !out.contains(&p) {
            out.push(p);
        }
    }
    out
}

/// Checks `P_{αx} = α·P_x` on sampled `x` and `α`.
pub fn check_primitive_scaling<E: Evs>(e: &E, budget: u64, seed: u64) -> CheckOutcome {
    let mut rng = substream(seed, "primitive-scaling");
    let n = per_variable(budget, 2);
    let xs = e.sample(&mut rng, n);
    let scalars = scalar_pool(e, &mut rng, n);
    let inner = (budget / 16).max(8);
    let mut tried = 0;
    for x in &xs {
        let px = primitive_samples(e, x, inner, seed);
        for a in &scalars {
            tried += 1;
            let ax = e.scale(a, x);
            let p_ax = primitive_samples(e, &ax, inner, seed);
            let scaled: Vec<E::Elem> = px.iter().map(|p| e.scale(a, p)).collect();
            // α·P_x ⊆ P_{αx}
            let forward = scaled.iter().all(|q| e.is_primitive(q) && e.leq(q, &ax));
            // P_{αx} ⊆ α·P_x
            let backward = if a.is_zero() {
                p_ax.iter().all(|q| *q == e.zero())
            } else {
                let inv = a.inv().expect("nonzero scalar");
                p_ax.iter().all(|q| {
                    let pre = e.scale(&inv, q);
                    e.is_primitive(&pre) && e.leq(&pre, x) && e.scale(a, &pre) == *q
                })
            };
            let exact_mismatch = e.exact_primitives(x).is_some() && !(contains_all(&scaled, &p_ax) && contains_all(&p_ax, &scaled));
            if !forward || !backward || exact_mismatch {
                let w = Witness::new()
                    .with("x", x)
                    .with("alpha", a)
                    .with("inclusion", if !forward { "alpha*P_x in P_(alpha x)" } else { "P_(alpha x) in alpha*P_x" });
                return CheckOutcome::refuted(w, tried, seed);
            }
        }
    }
    CheckOutcome::passed(e.exactly_verified(), tried, seed)
}

/// Scalars admissible in both spaces.
fn shared_scalar_pool<X: Evs, Y: Evs>(ex: &X, ey: &Y, rng: &mut CheckRng, n: usize) -> Vec<Scalar> {
    let mut out = Vec::with_capacity(n);
    let mut attempts = 0;
    while out.len() < n && attempts < 50 * n + 50 {
        attempts += 1;
        let s = if out.is_empty() {
            Scalar::one()
        } else {
            sample_scalar(
                rng,
                &Rational::from_int(2),
                ex.scalar_mode().strictest(ey.scalar_mode()),
                if ex.field_mode() == FieldMode::Real || ey.field_mode() == FieldMode::Real { FieldMode::Real } else { FieldMode::Complex },
            )
        };
        if ex.admits(&s) && ey.admits(&s) {
            out.push(s);
        }
    }
    out
}

/// Falsifies the four order-morphism conditions for `f : X → Y`.
///
/// Condition (iv) is checked on a sampled preimage pool: for pool images
/// `p ≤ q`, every pool preimage of `p` must lie below some pool preimage of
/// `q`, and every pool preimage of `q` above some pool preimage of `p`.
pub fn check_order_morphism<X, Y, Fm>(f: &Fm, ex: &X, ey: &Y, budget: u64, seed: u64) -> CheckOutcome
where
    X: Evs,
    Y: Evs,
    Fm: Fn(&X::Elem) -> Y::Elem + ?Sized,
{
    let mut rng = substream(seed, "order-morphism");
    let n = per_variable(budget, 2);
    let xs = ex.sample(&mut rng, n);
    let ys = ex.sample(&mut rng, n);
    let scalars = shared_scalar_pool(ex, ey, &mut rng, n);
    let mut tried = 0;
    let refute = |clause: &str, parts: Vec<(&str, String)>, tried| {
        let mut w = Witness::new().with("clause", clause);
        for (k, v) in parts {
            w.push(k, v);
        }
        CheckOutcome::refuted(w, tried, seed)
    };
    for x in &xs {
        for y in &ys {
            tried += 1;
            if f(&ex.add(x, y)) != ey.add(&f(x), &f(y)) {
                return refute("additive", vec![("x", x.to_string()), ("y", y.to_string())], tried);
            }
        }
        for a in &scalars {
            tried += 1;
            if f(&ex.scale(a, x)) != ey.scale(a, &f(x)) {
                return refute("homogeneous", vec![("x", x.to_string()), ("alpha", a.to_string())], tried);
            }
        }
        for y in upper_candidates(ex, x, &ys) {
            tried += 1;
            if ex.leq(x, &y) && !ey.leq(&f(x), &f(&y)) {
                return refute("monotone", vec![("x", x.to_string()), ("y", y.to_string())], tried);
            }
        }
    }
    let mut pool: Vec<X::Elem> = xs.clone();
    for x in xs.iter().take(n / 2 + 1) {
        pool.extend(upper_candidates(ex, x, &ys[..ys.len().min(4)]));
    }
    let images: Vec<Y::Elem> = pool.iter().map(f).collect();
    for (i, p) in images.iter().enumerate() {
        for (j, q) in images.iter().enumerate() {
            if i == j || !ey.leq(p, q) {
                continue;
            }
            tried += 1;
            let pre_p: Vec<&X::Elem> = pool.iter().zip(&images).filter(|(_, im)| *im == p).map(|(x, _)| x).collect();
            let pre_q: Vec<&X::Elem> = pool.iter().zip(&images).filter(|(_, im)| *im == q).map(|(x, _)| x).collect();
            if let Some(bad) = pre_p.iter().find(|x| !pre_q.iter().any(|y| ex.leq(x, y))) {
                return refute("preimage-down", vec![("p", p.to_string()), ("q", q.to_string()), ("x", bad.to_string())], tried);
            }
            if let Some(bad) = pre_q.iter().find(|y| !pre_p.iter().any(|x| ex.leq(x, y))) {
                return refute("preimage-up", vec![("p", p.to_string()), ("q", q.to_string()), ("y", bad.to_string())], tried);
            }
        }
    }
    CheckOutcome::unfalsified(tried, seed)
}

/// Falsifies the subevs criterion for `Y = {x : member(x)}`: closure under
/// `αx + y`, and a primitive of X lying in Y below every sampled `y ∈ Y`
/// (which gives both `Y₀ ⊆ X₀ ∩ Y` and the A6 condition inside Y).
pub fn check_subevs<E, M>(e: &E, member: &M, budget: u64, seed: u64) -> CheckOutcome
where
    E: Evs,
    M: Fn(&E::Elem) -> bool + ?Sized,
{
    let mut rng = substream(seed, "subevs");
    let n = per_variable(budget, 3);
    let scalars = scalar_pool(e, &mut rng, n);
    let mut pool: Vec<E::Elem> = e.sample(&mut rng, 8 * n).into_iter().filter(|x| member(x)).collect();
    if member(&e.zero()) && !pool.contains(&e.zero()) {
        pool.insert(0, e.zero());
    }
    let seeds: Vec<E::Elem> = pool.clone();
    for x in &seeds {
        for a in &scalars {
            if pool.len() >= n {
                break;
            }
            let ax = e.scale(a, x);
            if member(&ax) && !pool.contains(&ax) {
                pool.push(ax);
            }
        }
    }
    pool.truncate(n.max(1));
    let mut tried = 0;
    for x in &pool {
        for y in &pool {
            for a in &scalars {
                tried += 1;
                let z = e.add(&e.scale(a, x), y);
                if !member(&z) {
                    let w = Witness::new().with("clause", "closure").with("x", x).with("y", y).with("alpha", a).with("alpha*x+y", &z);
                    return CheckOutcome::refuted(w, tried, seed);
                }
            }
        }
    }
    let mut exact = true;
    for y in &pool {
        tried += 1;
        match e.exact_primitives(y) {
            Some(ps) => {
                if !ps.iter().any(member) {
                    let w = Witness::new().with("clause", "primitive-below").with("y", y);
                    return CheckOutcome::refuted(w, tried, seed);
                }
            }
            None => {
                exact = false;
                let p = e.primitive_witness(y);
                if !member(&p) {
                    // Only a suspect: some other primitive below y may lie in Y.
                    continue;
                }
            }
        }
    }
    let outcome = CheckOutcome::unfalsified(tried, seed);
    if exact {
        outcome
    } else {
        outcome.with_note("primitive sets not exact for this instance; clause (iii) sampled")
    }
}

/// A finite product tuple.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tuple<T>(pub Vec<T>);

impl<T: Display> Display for Tuple<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str(")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProductError {
    #[error("a product needs at least one factor")]
    Empty,
    #[error("factors disagree on the scalar field")]
    FieldMismatch,
}

/// The finite product evs with componentwise operations and order.
#[derive(Clone, Debug)]
pub struct ProductEvs<E> {
    parts: Vec<E>,
}

impl<E: Evs> ProductEvs<E> {
    pub fn new(parts: Vec<E>) -> Result<Self, ProductError> {
        let first = parts.first().ok_or(ProductError::Empty)?;
        if parts.iter().any(|p| p.field_mode() != first.field_mode()) {
            return Err(ProductError::FieldMismatch);
        }
        Ok(ProductEvs { parts })
    }

    pub fn parts(&self) -> &[E] {
        &self.parts
    }
}

/// Builds the product of `parts`.
pub fn product_evs<E: Evs>(parts: Vec<E>) -> Result<ProductEvs<E>, ProductError> {
    ProductEvs::new(parts)
}

impl<E: Evs> Evs for ProductEvs<E> {
    type Elem = Tuple<E::Elem>;

    fn name(&self) -> String {
        let names: Vec<String> = self.parts.iter().map(Evs::name).collect();
        format!("product:({})", names.join(","))
    }

    fn field_mode(&self) -> FieldMode {
        self.parts[0].field_mode()
    }

    fn scalar_mode(&self) -> ScalarMode {
        self.parts.iter().fold(ScalarMode::AnyScalar, |m, p| m.strictest(p.scalar_mode()))
    }

    fn zero(&self) -> Self::Elem {
        Tuple(self.parts.iter().map(Evs::zero).collect())
    }

    fn add(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        Tuple(self.parts.iter().zip(x.0.iter().zip(&y.0)).map(|(p, (a, b))| p.add(a, b)).collect())
    }

    fn scale(&self, s: &Scalar, x: &Self::Elem) -> Self::Elem {
        Tuple(self.parts.iter().zip(&x.0).map(|(p, a)| p.scale(s, a)).collect())
    }

    fn leq(&self, x: &Self::Elem, y: &Self::Elem) -> bool {
        self.parts.iter().zip(x.0.iter().zip(&y.0)).all(|(p, (a, b))| p.leq(a, b))
    }

    fn is_primitive(&self, x: &Self::Elem) -> bool {
        self.parts.iter().zip(&x.0).all(|(p, a)| p.is_primitive(a))
    }

    fn primitive_witness(&self, x: &Self::Elem) -> Self::Elem {
        Tuple(self.parts.iter().zip(&x.0).map(|(p, a)| p.primitive_witness(a)).collect())
    }

    fn exact_primitives(&self, x: &Self::Elem) -> Option<Vec<Self::Elem>> {
        let mut acc: Vec<Vec<E::Elem>> = vec![Vec::new()];
        for (p, a) in self.parts.iter().zip(&x.0) {
            let ps = p.exact_primitives(a)?;
            acc = acc
                .into_iter()
                .flat_map(|prefix| {
                    ps.iter().map(move |q| {
                        let mut v = prefix.clone();
                        v.push(q.clone());
                        v
                    })
                })
                .collect();
        }
        Some(acc.into_iter().map(Tuple).collect())
    }

    fn sample(&self, rng: &mut CheckRng, count: usize) -> Vec<Self::Elem> {
        let columns: Vec<Vec<E::Elem>> = self.parts.iter().map(|p| p.sample(rng, count)).collect();
        (0..count).map(|i| Tuple(columns.iter().map(|c| c[i].clone()).collect())).collect()
    }

    fn exactly_verified(&self) -> bool {
        self.parts.iter().all(Evs::exactly_verified)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn per_variable_budget_split() {
        assert_eq!(per_variable(10_000, 1), 10_000);
        assert_eq!(per_variable(10_000, 2), 100);
        assert_eq!(per_variable(10_000, 3), 22);
        assert_eq!(per_variable(1, 3), 1);
    }

    #[test]
    fn axiom_ids_are_the_report_identifiers() {
        let ids: Vec<&str> = Axiom::AXIOMS.iter().map(|a| a.id()).collect();
        assert_eq!(
            ids,
            ["A1.assoc", "A1.comm", "A1.id", "A2.add", "A2.scale", "A3.i", "A3.ii", "A3.iii", "A3.iv", "A4", "A5.fwd", "A5.bwd", "A6"]
        );
    }
}
