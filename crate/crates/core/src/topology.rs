//! Neighbourhood structure of `[0, ∞)` and of cone slices: witness
//! constructors for the local-base results, boundedness, and the audit of
//! candidate open sets against the usual topology.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::evs::{scalar_pool, Evs};
use crate::instances::HalfLine;
use crate::outcome::{CheckOutcome, Verdict, Witness};
use crate::rng::substream;
use crate::scalar::{sample_scalar, ExactField, FieldMode, ScalarMode};
use crate::sets::transport::ShippedMap;
use crate::sets::{oracle, random_interval_union, Interval, IntervalUnion, ProductSlice, SetError, SlicePiece, VectorRegion};
use crate::{Rational, Scalar};

type Set = IntervalUnion<Rational>;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TopologyError {
    #[error("{0} is not a neighbourhood of 0")]
    NotNeighbourhood(String),
    #[error("{x} is not in {set}")]
    NotInSet { x: String, set: String },
    #[error("need x > y, got x = {x}, y = {y}")]
    NotGreater { x: String, y: String },
    #[error("the scalar must be nonzero")]
    ZeroScalar,
    #[error("scalar {0} has irrational modulus")]
    IrrationalModulus(String),
    #[error("{0} is not open in the usual topology")]
    NotUsualOpen(String),
    #[error("the family is empty")]
    EmptyFamily,
    #[error("family member {0} does not contain 0")]
    MissingTheta(String),
    #[error(transparent)]
    Set(#[from] SetError),
    #[error("{0}")]
    Unsupported(String),
}

fn zero() -> Rational {
    Rational::zero()
}

fn component_of<'a>(g: &'a Set, x: &Rational) -> Option<&'a Interval<Rational>> {
    g.components().iter().find(|c| c.contains(x))
}

/// `[0, δ)`, `δ = ∞` allowed.
fn basic(delta: Option<Rational>) -> Set {
    match delta {
        Some(d) => IntervalUnion::single(Interval::closed_open(zero(), d)),
        None => IntervalUnion::everything(),
    }
}

/// Open in the subspace topology of `[0, ∞)`: every component is `(a, b)`,
/// `(a, ∞)`, `[0, b)` or `[0, ∞)`.
pub fn is_usual_open(a: &Set) -> bool {
    a.components().iter().all(|c| {
        let left_ok = !c.lo_closed() || c.lo().is_zero();
        let right_ok = c.hi().is_none() || !c.hi_closed();
        left_ok && right_ok
    })
}

fn require_open_nbhd(u: &Set) -> Result<&Interval<Rational>, TopologyError> {
    if !is_usual_open(u) {
        return Err(TopologyError::NotUsualOpen(u.to_string()));
    }
    u.components().first().filter(|c| c.contains(&zero())).ok_or_else(|| TopologyError::NotNeighbourhood(u.to_string()))
}

/// A balanced neighbourhood `[0, δ) ⊆ U` of 0, `δ` the right end of the
/// component of 0.
pub fn balanced_nbhd_inside(u: &Set) -> Result<Set, TopologyError> {
    let first = require_open_nbhd(u)?;
    let w = basic(first.hi().cloned());
    debug_assert!(w.is_subset(u));
    Ok(w)
}

/// `W = [0, δ/2)` with `W + W ⊆ U` checked exactly.
pub fn halving_nbhd(u: &Set) -> Result<Set, TopologyError> {
    let first = require_open_nbhd(u)?;
    let w = basic(first.hi().map(|d| d / Rational::from_int(2)));
    if !w.minkowski(&w).is_subset(u) {
        return Err(TopologyError::Unsupported(format!("halving of {u} failed verification")));
    }
    Ok(w)
}

/// `U_x = [0, δ_x)` with `x + U_x ⊆ G`.
pub fn decompose_at(g: &Set, x: &Rational) -> Result<Set, TopologyError> {
    if !is_usual_open(g) {
        return Err(TopologyError::NotUsualOpen(g.to_string()));
    }
    let c = component_of(g, x).ok_or_else(|| TopologyError::NotInSet { x: x.to_string(), set: g.to_string() })?;
    let u = basic(c.hi().map(|b| b - x));
    if !u.translate(x).is_subset(g) {
        return Err(TopologyError::Unsupported(format!("{x} + {u} escapes {g}")));
    }
    Ok(u)
}

/// Finite part of the decomposition `G = ⋃ (x + U_x)`.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub pieces: Vec<(Rational, Set)>,
    /// Never Proven: the full equality is an infinite union.
    pub outcome: CheckOutcome,
}

/// Decomposes at every left endpoint inside `G` and at `samples` sampled
/// points, each `x + U_x ⊆ G` exact and each `U_x` balanced.
pub fn open_decomposition(g: &Set, samples: usize, seed: u64) -> Result<Decomposition, TopologyError> {
    if g.is_empty() {
        return Err(TopologyError::Set(SetError::Empty));
    }
    let mut rng = substream(seed, "open-decomposition");
    let mut xs: Vec<Rational> = g.components().iter().filter(|c| c.lo_closed()).map(|c| c.lo().clone()).collect();
    for _ in 0..samples {
        let c = &g.components()[rng.random_range(0..g.components().len())];
        xs.push(c.sample_point(&mut rng));
    }
    let mut pieces = Vec::new();
    let mut covered = IntervalUnion::empty();
    for x in xs {
        let u = decompose_at(g, &x)?;
        if !u.is_balanced()?.is_proven() {
            return Err(TopologyError::Unsupported(format!("U_x = {u} is not balanced")));
        }
        covered = covered.union(&u.translate(&x));
        pieces.push((x, u));
    }
    let tried = pieces.len() as u64;
    let outcome = if covered.is_subset(g) {
        CheckOutcome::unfalsified(tried, seed).with_note(format!("sampled union {covered} is inside G"))
    } else {
        CheckOutcome::refuted(Witness::new().with("G", g).with("union", &covered), tried, seed)
    };
    Ok(Decomposition { pieces, outcome })
}

/// `U = V = [0, (x − y)/2)` with `↑(x + U) ∩ ↓(y + V) = ∅` checked exactly.
pub fn separation_witness(x: &Rational, y: &Rational) -> Result<(Set, Set), TopologyError> {
    if x <= y || y.is_negative() {
        return Err(TopologyError::NotGreater { x: x.to_string(), y: y.to_string() });
    }
    let u = basic(Some((x - y) / Rational::from_int(2)));
    let meet = u.translate(x).up().intersection(&u.translate(y).down());
    if !meet.is_empty() {
        return Err(TopologyError::Unsupported(format!("separation of {x}, {y} failed: {meet}")));
    }
    Ok((u.clone(), u))
}

/// Exact image `{|λ| y}` of a modulus range times a set of radii.
fn product(moduli: &Interval<Rational>, radii: &Interval<Rational>) -> Interval<Rational> {
    let zero_in = |i: &Interval<Rational>| i.lo().is_zero() && i.lo_closed();
    let lo = moduli.lo() * radii.lo();
    let lo_closed = (moduli.lo_closed() && radii.lo_closed()) || zero_in(moduli) || zero_in(radii);
    let point_zero = |i: &Interval<Rational>| i.hi().is_some_and(Zero::is_zero);
    if point_zero(moduli) || point_zero(radii) {
        return Interval::point(zero());
    }
    let hi = match (moduli.hi(), radii.hi()) {
        (Some(a), Some(b)) => Some(a * b),
        _ => None,
    };
    let hi_closed = hi.is_some() && moduli.hi_closed() && radii.hi_closed();
    Interval::new(lo, lo_closed, hi, hi_closed).expect("product of nonempty intervals")
}

/// `{|λ| : |λ − α| < ε}`
fn disc_moduli(alpha: &Rational, eps: &Rational) -> Interval<Rational> {
    if eps > alpha {
        Interval::closed_open(zero(), alpha + eps)
    } else {
        Interval::open(alpha - eps, alpha + eps)
    }
}

/// `B(α, ε)·A` for `A ⊆ [0, ∞)`.
fn disc_times(alpha: &Rational, eps: &Rational, a: &Set) -> Set {
    let m = disc_moduli(alpha, eps);
    IntervalUnion::new(a.components().iter().map(|c| product(&m, c)).collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct ContinuityWitness {
    pub eps: Rational,
    pub u: Set,
    /// `B(α, ε)·(x + U_x)`
    pub image: Set,
    /// `αG`
    pub target: Set,
}

/// `ε` and `U_x = [0, u)` with `B(α, ε)·(x + U_x) ⊆ αG`. With `δ` the room
/// around `x` inside its component, `u = δ/2` and `ε = |α|δ/(2x + δ)`
/// satisfy `(|α| − ε)x ≥ |α|(x − δ)` and `(|α| + ε)(x + u) ≤ |α|(x + δ)`.
pub fn scalar_continuity_witness(g: &Set, x: &Rational, alpha: &Scalar) -> Result<ContinuityWitness, TopologyError> {
    if !is_usual_open(g) {
        return Err(TopologyError::NotUsualOpen(g.to_string()));
    }
    let c = component_of(g, x).ok_or_else(|| TopologyError::NotInSet { x: x.to_string(), set: g.to_string() })?;
    if alpha.is_zero() {
        return Err(TopologyError::ZeroScalar);
    }
    let m = alpha.rational_modulus().ok_or_else(|| TopologyError::IrrationalModulus(alpha.to_string()))?;
    let below = (!c.lo_closed()).then(|| x - c.lo());
    let above = c.hi().map(|b| b - x);
    let delta = match (below, above) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    };
    let (eps, u) = match delta {
        Some(d) => (&m * &d / (x * Rational::from_int(2) + &d), basic(Some(d / Rational::from_int(2)))),
        None => (m.clone(), IntervalUnion::everything()),
    };
    let image = disc_times(&m, &eps, &u.translate(x));
    let target = g.scale_modulus(&m);
    if !image.is_subset(&target) {
        return Err(TopologyError::Unsupported(format!("{image} escapes {target}")));
    }
    Ok(ContinuityWitness { eps, u, image, target })
}

/// Bounded on `[0, ∞)`: `B ⊆ αU` for every balanced neighbourhood, i.e.
/// `sup B < ∞`. Unbounded sets are refuted by `x_n = n`, `λ_n = 1/n`.
pub fn is_bounded_interval(a: &Set) -> CheckOutcome {
    match a.sup() {
        None => CheckOutcome::proven(0, 0).with_witness(Witness::new().with("container", "empty")),
        Some(Some(s)) => {
            let bound = if a.components().last().is_some_and(|c| c.hi_closed()) {
                if s.is_zero() {
                    Rational::one()
                } else {
                    s * Rational::from_int(2)
                }
            } else {
                s.clone()
            };
            CheckOutcome::proven(0, 0).with_witness(Witness::new().with("container", basic(Some(bound))))
        }
        Some(None) => {
            let last = a.components().last().expect("nonempty");
            let n0 = last.lo().floor().to_integer() + 1;
            let w = Witness::new()
                .with("x_n", format!("n for n >= {n0}"))
                .with("lambda_n", "1/n")
                .with("lambda_n*x_n", 1)
                .with("nbhd", "[0,1)");
            CheckOutcome::refuted(w, 0, 0)
        }
    }
}

/// Sequence falsifier over membership only: probes `x_n ∈ {n, n + 1/2, 2n}`
/// and `λ_n = 1/n` against `[0, 1)`. Refutes when the last ten indices up
/// to `n_max` all escape, returning the first escaping index of that tail.
pub fn sequence_escape(member: &dyn Fn(&Rational) -> bool, n_max: i64) -> Option<i64> {
    let escapes = |n: i64| {
        let probes = [Rational::from_int(n), Rational::from_ratio(2 * n + 1, 2), Rational::from_int(2 * n)];
        probes.iter().any(|x| member(x) && x / Rational::from_int(n) >= Rational::one())
    };
    let tail = (n_max - 9).max(1)..=n_max;
    if !tail.clone().all(escapes) {
        return None;
    }
    (1..=n_max).rev().take_while(|&n| escapes(n)).last()
}

/// Bounded for a cone slice: contained in `α([0, s) × ball(t))`.
pub fn is_bounded_slice(a: &ProductSlice) -> CheckOutcome {
    let mut s = Rational::one();
    let mut t = Rational::one();
    for p in a.pieces() {
        match (p.r.hi(), p.v.norm_bound()) {
            (Some(h), Some(b)) => {
                s = s.max(h + Rational::one());
                t = t.max(b + Rational::one());
            }
            (None, _) => {
                let w = Witness::new().with("piece", p).with("x_n", "(n, a) with a in the piece").with("lambda_n", "1/n");
                return CheckOutcome::refuted(w.with("limit", "radial part stays >= 1"), 0, 0);
            }
            (_, None) => {
                let w = Witness::new().with("piece", p).with("x_n", "(r, n*e1)").with("lambda_n", "1/n");
                return CheckOutcome::refuted(w.with("limit", "vector part stays at e1"), 0, 0);
            }
        }
    }
    let container = ProductSlice::new(a.dim(), vec![SlicePiece { r: Interval::closed_open(zero(), s), v: VectorRegion::ball(t) }]);
    if !a.is_subset(&container) {
        return CheckOutcome::refuted(Witness::new().with("container", &container).with("defect", "containment failed"), 0, 0);
    }
    CheckOutcome::proven(0, 0).with_witness(Witness::new().with("container", container))
}

/// Compact on interval unions: every component closed and bounded.
pub fn is_compact(a: &Set) -> bool {
    a.components().iter().all(|c| c.lo_closed() && c.hi().is_some() && c.hi_closed())
}

fn random_finite_set(rng: &mut crate::rng::CheckRng) -> Set {
    let k = rng.random_range(1..=4);
    IntervalUnion::new((0..k).map(|_| Interval::point(Rational::from_ratio(rng.random_range(0..=40), 4))).collect())
}

fn bounded(a: &Set) -> bool {
    is_bounded_interval(a).is_proven()
}

pub const BOUNDED_LAWS: [&str; 5] = ["bounded.a", "bounded.b", "bounded.c", "bounded.d", "bounded.e"];

/// (a) definition by grid ⟺ the `B ⊆ αU` characterization, (b) finite sets,
/// (c) compact ⇒ bounded, (d) `A + B` and `λA`, (e) subsets.
pub fn check_bounded_laws(budget: u64, seed: u64) -> BTreeMap<&'static str, CheckOutcome> {
    let mut rng = substream(seed, "bounded-laws");
    let mut fails: [Option<Witness>; 5] = Default::default();
    let mut tried = [0u64; 5];
    let mut note = |i: usize, ok: bool, w: &dyn Fn() -> Witness, fails: &mut [Option<Witness>; 5]| {
        tried[i] += 1;
        if !ok && fails[i].is_none() {
            fails[i] = Some(w());
        }
    };
    for _ in 0..budget {
        let a = random_interval_union(&mut rng);
        note(0, oracle::grid_bounded(&a) == bounded(&a), &|| Witness::new().with("A", &a), &mut fails);
        let f = random_finite_set(&mut rng);
        note(1, bounded(&f), &|| Witness::new().with("A", &f), &mut fails);
        if is_compact(&a) {
            note(2, bounded(&a), &|| Witness::new().with("A", &a), &mut fails);
        }
        let b = random_interval_union(&mut rng);
        if bounded(&a) && bounded(&b) {
            let lambda = sample_scalar(&mut rng, &Rational::from_int(4), ScalarMode::PythagoreanOnly, FieldMode::Complex);
            let (sum, scaled) = (a.minkowski(&b), a.scale(&lambda));
            note(3, bounded(&sum) && bounded(&scaled), &|| Witness::new().with("A", &a).with("B", &b).with("lambda", &lambda), &mut fails);
        }
        if bounded(&a) {
            let sub = a.intersection(&b);
            note(4, bounded(&sub), &|| Witness::new().with("A", &a).with("subset", &sub), &mut fails);
        }
    }
    BOUNDED_LAWS
        .iter()
        .enumerate()
        .map(|(i, id)| {
            let o = match fails[i].take() {
                Some(w) => CheckOutcome::refuted(w, tried[i], seed),
                None => CheckOutcome::unfalsified(tried[i], seed),
            };
            (*id, o)
        })
        .collect()
}

/// A candidate local base at 0 on `[0, ∞)`: listed members, optionally
/// followed by the generated tail `{[0, c/m) : m ≥ 1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct NbhdFamily {
    members: Vec<Set>,
    tail: Option<Rational>,
}

impl NbhdFamily {
    pub fn new(members: Vec<Set>) -> Result<Self, TopologyError> {
        if members.is_empty() {
            return Err(TopologyError::EmptyFamily);
        }
        if let Some(bad) = members.iter().find(|u| !u.contains(&zero())) {
            return Err(TopologyError::MissingTheta(bad.to_string()));
        }
        Ok(NbhdFamily { members, tail: None })
    }

    /// `{[0, 1/n) : n = 1..=k}` and nothing else.
    pub fn reciprocal(k: i64) -> Self {
        Self::new((1..=k).map(|n| basic(Some(Rational::from_ratio(1, n)))).collect()).expect("nonempty")
    }

    /// `{[0, 1/n) : n ≥ 1}`, with `n ≤ k` listed.
    pub fn reciprocal_sequence(k: i64) -> Self {
        Self::reciprocal(k).with_tail(Rational::one())
    }

    /// Adds every `[0, c/m)` to the family. `c` must be positive.
    pub fn with_tail(mut self, c: Rational) -> Self {
        assert!(c.is_positive(), "tail scale must be positive");
        self.tail = Some(c);
        self
    }

    pub fn members(&self) -> &[Set] {
        &self.members
    }

    pub fn tail(&self) -> Option<&Rational> {
        self.tail.as_ref()
    }

    /// The largest tail member inside `[0, δ)`, if there is a tail.
    pub fn tail_member_within(&self, delta: &Rational) -> Option<Set> {
        let c = self.tail.as_ref()?;
        let m = (c / delta).ceil().max(Rational::one());
        Some(basic(Some(c / m)))
    }

    /// `{|t| u : u ∈ U}` for every member, tail included.
    pub fn scale(&self, t: &Rational) -> Result<Self, TopologyError> {
        let mut image = Self::new(self.members.iter().map(|u| u.scale_modulus(t)).collect())?;
        image.tail = self.tail.as_ref().map(|c| c * t);
        Ok(image)
    }

    /// Listed members followed by the tail member inside `[0, δ)`.
    fn candidates(&self, delta: Option<&Rational>) -> Vec<Set> {
        let mut out = self.members.clone();
        out.extend(delta.and_then(|d| self.tail_member_within(d)));
        out
    }
}

/// Right end of the component of 0, `1` standing in for `∞`; `None` when
/// that component is missing or degenerate.
fn zero_room(u: &Set) -> Option<Rational> {
    let c = u.components().iter().find(|c| c.contains(&zero()))?;
    match c.hi() {
        _ if c.is_degenerate() => None,
        Some(h) => Some(h.clone()),
        None => Some(Rational::one()),
    }
}

pub const LOCAL_BASE_CONDITIONS: [&str; 5] = ["localbase.i", "localbase.ii", "localbase.iii", "localbase.iv", "localbase.v"];

/// Points at which conditions (iv) and (v) are evaluated.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbePoints {
    /// Pairs with `x > y`.
    pub pairs: Vec<(Rational, Rational)>,
    /// `(x, α)`
    pub scalings: Vec<(Rational, Scalar)>,
}

impl ProbePoints {
    /// `x = 1, α = 1` first, then sampled points.
    pub fn sample(budget: u64, seed: u64) -> Self {
        let e = HalfLine::new();
        let mut rng = substream(seed, "localbase-points");
        let n = budget as usize;
        let xs = e.sample(&mut rng, 2 * n + 8);
        let ordered = |p: &[Rational]| match p {
            [a, b] if a != b => Some(if a > b { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) }),
            _ => None,
        };
        let mut pairs: Vec<(Rational, Rational)> = xs.chunks(2).filter_map(ordered).collect();
        for _ in 0..20 {
            if pairs.len() >= n {
                break;
            }
            pairs.extend(e.sample(&mut rng, 2 * n).chunks(2).filter_map(ordered));
        }
        pairs.truncate(n);
        let alphas = scalar_pool(&e, &mut rng, n.max(1));
        let mut scalings = vec![(Rational::one(), Scalar::one())];
        scalings.extend(xs.into_iter().zip(alphas).take(n));
        ProbePoints { pairs, scalings }
    }

    pub fn map(&self, f: impl Fn(&Rational) -> Rational) -> Self {
        ProbePoints {
            pairs: self.pairs.iter().map(|(x, y)| (f(x), f(y))).collect(),
            scalings: self.scalings.iter().map(|(x, a)| (f(x), a.clone())).collect(),
        }
    }
}

const EPS_GRID: u32 = 12;

/// Conditions (i)–(v) of the sufficient condition for a topological evs,
/// for a finite family on `[0, ∞)`.
pub fn check_local_base_at(f: &NbhdFamily, points: &ProbePoints, seed: u64) -> BTreeMap<&'static str, CheckOutcome> {
    let us = f.members();
    let mut out = BTreeMap::new();

    let mut c1 = CheckOutcome::proven(us.len() as u64, seed);
    for u in us {
        let b = u.is_balanced().map(|o| o.verdict);
        let a = u.is_absorbing().map(|o| o.verdict);
        if b != Ok(Verdict::Proven) || a != Ok(Verdict::Proven) {
            c1 = CheckOutcome::refuted(Witness::new().with("U", u), us.len() as u64, seed);
            break;
        }
    }
    out.insert(LOCAL_BASE_CONDITIONS[0], c1);

    // Tail members `[0, c/m)` are balanced and absorbing, `[0, c/2m)` halves
    // them, and meets with them contain a smaller tail member, so (i)-(iii)
    // are settled symbolically on the tail and exactly on the listed members.
    let mut c2 = CheckOutcome::proven((us.len() * us.len()) as u64, seed);
    for u in us {
        let half = zero_room(u).map(|d| d / Rational::from_int(2));
        if !f.candidates(half.as_ref()).iter().any(|v| v.minkowski(v).is_subset(u)) {
            let w = Witness::new().with("U", u).with("defect", "no V in the family with V + V inside U");
            c2 = CheckOutcome::refuted(w, (us.len() * us.len()) as u64, seed);
            break;
        }
    }
    out.insert(LOCAL_BASE_CONDITIONS[1], c2);

    let mut c3 = CheckOutcome::proven(0, seed);
    'outer: for u1 in us {
        for u2 in us {
            c3.samples_tried += 1;
            let meet = u1.intersection(u2);
            if !f.candidates(zero_room(&meet).as_ref()).iter().any(|w| w.is_subset(&meet)) {
                c3 = CheckOutcome::refuted(Witness::new().with("U1", u1).with("U2", u2), c3.samples_tried, seed);
                break 'outer;
            }
        }
        if f.tail.is_some() && zero_room(u1).is_none() {
            let w = Witness::new().with("U1", u1).with("U2", "tail").with("defect", "U1 leaves no room around 0");
            c3 = CheckOutcome::refuted(w, c3.samples_tried, seed);
            break;
        }
    }
    out.insert(LOCAL_BASE_CONDITIONS[2], c3);

    let mut c4 = CheckOutcome::unfalsified(0, seed);
    for (x, y) in &points.pairs {
        c4.samples_tried += 1;
        let cands = f.candidates(Some(&(x - y)));
        let ok = cands.iter().any(|u| {
            let up = u.translate(x).up();
            cands.iter().any(|v| up.intersection(&v.translate(y).down()).is_empty())
        });
        if !ok {
            let w = Witness::new().with("x", x).with("y", y).with("defect", "no U, V in the family separate x above y");
            c4 = CheckOutcome::refuted(w, c4.samples_tried, seed);
            break;
        }
    }
    out.insert(LOCAL_BASE_CONDITIONS[3], c4);

    out.insert(LOCAL_BASE_CONDITIONS[4], check_condition_v(f, &points.scalings, seed));
    out
}

/// (v): for each `W`, `(x, α)`, search `ε = 2⁻ᵏ` and `U` in the family for
/// `B(α, ε)·(x + U) ⊆ αx + W`. A failure with `x > 0`, `α ≠ 0` and
/// `min(αx + W) = |α|x` is impossible for every `ε`: `|λ| = |α| − ε/2`
/// sends `x` to `(|α| − ε/2)x < |α|x`.
fn check_condition_v(f: &NbhdFamily, scalings: &[(Rational, Scalar)], seed: u64) -> CheckOutcome {
    let mut tried = 0;
    for w in f.members() {
        for (x, alpha) in scalings {
            let Some(m) = alpha.rational_modulus() else { continue };
            tried += 1;
            let target = w.translate(&(&m * x));
            let found = (0..=EPS_GRID).any(|k| {
                let eps = Rational::new(1.into(), num_bigint::BigInt::from(1u64 << k));
                f.candidates(Some(&eps)).iter().any(|u| disc_times(&m, &eps, &u.translate(x)).is_subset(&target))
            });
            if found {
                continue;
            }
            let mut wit = Witness::new().with("W", w).with("x", x).with("alpha", alpha);
            let symbolic =
                x.is_positive() && m.is_positive() && target.components().first().is_some_and(|c| c.lo_closed() && *c.lo() == &m * x);
            if symbolic {
                wit.push("escape", "|lambda| = |alpha| - eps/2 gives |lambda|*x < |alpha|*x = min(alpha*x + W) for every eps > 0");
            } else {
                wit.push("escape", format!("no eps = 2^-k (k <= {EPS_GRID}) and U in the family"));
            }
            let o = CheckOutcome::refuted(wit, tried, seed);
            return if symbolic { o.with_note("impossibility proved symbolically") } else { o.with_note("grid exhausted") };
        }
    }
    CheckOutcome::unfalsified(tried, seed)
}

pub fn check_local_base_conditions(f: &NbhdFamily, budget: u64, seed: u64) -> BTreeMap<&'static str, CheckOutcome> {
    check_local_base_at(f, &ProbePoints::sample(budget, seed), seed)
}

/// Conditions (i)–(v) agree on `F` and `φF`, with (iv)/(v) evaluated at
/// transported points. Only maps of `[0, ∞)` onto itself are supported.
pub fn check_family_transport(map: ShippedMap, f: &NbhdFamily, budget: u64, seed: u64) -> Result<CheckOutcome, TopologyError> {
    let map = map.verified(budget.min(2000), seed).map_err(|e| TopologyError::Unsupported(e.to_string()))?;
    let factor = match map {
        ShippedMap::Identity => Rational::one(),
        ShippedMap::Doubling => Rational::from_int(2),
        other => return Err(TopologyError::Unsupported(format!("family transport along {other}"))),
    };
    let image = f.scale(&factor)?;
    let points = ProbePoints::sample(budget, seed);
    let before = check_local_base_at(f, &points, seed);
    let after = check_local_base_at(&image, &points.map(|x| x * &factor), seed);
    let mut w = Witness::new().with("map", map);
    let mut same = true;
    for id in LOCAL_BASE_CONDITIONS {
        let (a, b) = (before[id].verdict, after[id].verdict);
        w.push(id, format!("{a}/{b}"));
        same &= a == b;
    }
    let tried = points.pairs.len() as u64 + points.scalings.len() as u64;
    Ok(if same { CheckOutcome::unfalsified(tried, seed).with_witness(w) } else { CheckOutcome::refuted(w, tried, seed) })
}

/// Decides `(usual-open ∧ balanced ∧ absorbing) ⟺ A = [0, a)`, `a ∈ (0, ∞]`.
pub fn open_balanced_absorbing_form(a: &Set) -> CheckOutcome {
    let proven = |o: Result<CheckOutcome, SetError>| o.is_ok_and(|o| o.is_proven());
    let lhs = is_usual_open(a) && proven(a.is_balanced()) && proven(a.is_absorbing());
    let form = match a.components() {
        [c] if c.lo().is_zero() && c.lo_closed() && !c.hi_closed() && c.hi().is_none_or(|h| h.is_positive()) => {
            Some(c.hi().map_or_else(|| "inf".to_string(), ToString::to_string))
        }
        _ => None,
    };
    let mut w = Witness::new().with("A", a).with("open_balanced_absorbing", lhs);
    match &form {
        Some(x) => w.push("a", x),
        None => w.push("form", "not [0,a)"),
    }
    if lhs == form.is_some() {
        CheckOutcome::proven(1, 0).with_witness(w)
    } else {
        CheckOutcome::refuted(w, 1, 0)
    }
}

/// One audited generator.
#[derive(Clone, Debug)]
pub struct AuditRecord {
    pub index: usize,
    pub generator: Set,
    pub outcome: CheckOutcome,
}

/// Checks the necessary form of open sets for any topology making `[0, ∞)`
/// a topological evs: components containing 0 are `[0, a)` and the others
/// are open intervals. Each violation carries the escaping scalar `t`.
pub fn audit_generator(g: &Set) -> CheckOutcome {
    for c in g.components() {
        let refute =
            |t: &str, reason: &str| CheckOutcome::refuted(Witness::new().with("component", c).with("t", t).with("reason", reason), 1, 0);
        if c.contains(&zero()) {
            if c.is_degenerate() {
                return refute("mu = min(alpha, gap)", "{0} is not absorbing, so not a neighbourhood of 0");
            }
            if c.hi().is_some() && c.hi_closed() {
                let a = c.hi().expect("bounded");
                return refute("1 + eps/2 (|t| > 1)", &format!("right-closed at {a}: t*{a} = |t|*{a} > {a} leaves the component"));
            }
            continue;
        }
        if c.lo_closed() {
            let a = c.lo();
            return refute("1 - eps/2", &format!("left-closed at {a}: t*{a} = |t|*{a} < {a} leaves the component"));
        }
        if let Some(b) = c.hi().filter(|_| c.hi_closed()) {
            return refute("1 + eps/2", &format!("right-closed at {b}: t*{b} = |t|*{b} > {b} leaves the component"));
        }
    }
    CheckOutcome::proven(1, 0).with_witness(Witness::new().with("certified", "usual-open"))
}

/// Audits generators in input order.
pub fn finest_topology_audit(generators: &[Set]) -> Vec<AuditRecord> {
    use rayon::prelude::*;
    generators.par_iter().enumerate().map(|(index, g)| AuditRecord { index, generator: g.clone(), outcome: audit_generator(g) }).collect()
}

/// A random set open in `[0, ∞)`: components of a random interval union
/// with their endpoints opened, except a left end at 0.
pub fn random_usual_open(rng: &mut crate::rng::CheckRng) -> Set {
    let parts = random_interval_union(rng)
        .components()
        .iter()
        .map(|c| {
            let lo_closed = c.lo().is_zero();
            let hi = match c.hi() {
                Some(h) if h == c.lo() => Some(h + Rational::from_ratio(1, 4)),
                h => h.cloned(),
            };
            Interval::new(c.lo().clone(), lo_closed, hi, false).expect("nonempty")
        })
        .collect();
    IntervalUnion::new(parts)
}

pub const NBHD_WITNESSES: [&str; 5] =
    ["nbhd.balanced-inside", "nbhd.halving", "nbhd.decomposition", "nbhd.separation", "nbhd.scalar-continuity"];

/// Runs the five witness constructors on `budget` random usual-open sets and
/// re-verifies each returned witness independently of the constructor.
pub fn check_nbhd_witnesses(budget: u64, seed: u64) -> BTreeMap<&'static str, CheckOutcome> {
    let e = HalfLine::new();
    let mut rng = substream(seed, "nbhd-witnesses");
    let mut fails: [Option<Witness>; 5] = Default::default();
    let mut tried = [0u64; 5];
    let proven = |o: Result<CheckOutcome, SetError>| o.is_ok_and(|o| o.is_proven());
    for _ in 0..budget {
        let g = random_usual_open(&mut rng);
        let u = g.union(&basic(Some(Rational::from_ratio(1, 2))));
        let mut record = |i: usize, ok: bool, w: Witness| {
            tried[i] += 1;
            if !ok && fails[i].is_none() {
                fails[i] = Some(w);
            }
        };

        let r = balanced_nbhd_inside(&u);
        let ok = r.as_ref().is_ok_and(|w| w.is_subset(&u) && proven(w.is_balanced()) && proven(w.is_absorbing()));
        record(0, ok, Witness::new().with("U", &u).with("result", format!("{r:?}")));

        let r = halving_nbhd(&u);
        let ok = r.as_ref().is_ok_and(|w| w.minkowski(w).is_subset(&u) && proven(w.is_absorbing()));
        record(1, ok, Witness::new().with("U", &u).with("result", format!("{r:?}")));

        let c = &g.components()[rng.random_range(0..g.components().len())];
        let x = c.sample_point(&mut rng);
        let r = decompose_at(&g, &x);
        let ok = r.as_ref().is_ok_and(|w| w.contains(&zero()) && w.translate(&x).is_subset(&g) && proven(w.is_balanced()));
        record(2, ok, Witness::new().with("G", &g).with("x", &x).with("result", format!("{r:?}")));

        let pts = loop {
            let p = e.sample(&mut rng, 2);
            if p[0] != p[1] {
                break p;
            }
        };
        let (hi, lo) = if pts[0] > pts[1] { (&pts[0], &pts[1]) } else { (&pts[1], &pts[0]) };
        {
            let r = separation_witness(hi, lo);
            let ok = r.as_ref().is_ok_and(|(a, b)| {
                a.translate(hi).up().intersection(&b.translate(lo).down()).is_empty()
                    && proven(a.is_absorbing())
                    && proven(b.is_absorbing())
            });
            record(3, ok, Witness::new().with("x", hi).with("y", lo).with("result", format!("{r:?}")));
        }

        let alpha = loop {
            let a = sample_scalar(&mut rng, &Rational::from_int(3), ScalarMode::PythagoreanOnly, FieldMode::Complex);
            if !a.is_zero() {
                break a;
            }
        };
        {
            let r = scalar_continuity_witness(&g, &x, &alpha);
            let m = alpha.rational_modulus().expect("pythagorean");
            let ok = r.as_ref().is_ok_and(|w| {
                w.eps.is_positive()
                    && w.image.contains(&(&m * &x))
                    && disc_times(&m, &w.eps, &w.u.translate(&x)).is_subset(&g.scale_modulus(&m))
            });
            record(4, ok, Witness::new().with("G", &g).with("x", &x).with("alpha", &alpha).with("result", format!("{r:?}")));
        }
    }
    NBHD_WITNESSES
        .iter()
        .enumerate()
        .map(|(i, id)| {
            let o = match fails[i].take() {
                Some(w) => CheckOutcome::refuted(w, tried[i], seed),
                None => CheckOutcome::unfalsified(tried[i], seed),
            };
            (*id, o)
        })
        .collect()
}

/// Runs `check` on every set and keeps the first refutation.
fn over_corpus(corpus: &[Set], seed: u64, check: impl Fn(&Set) -> Option<Witness>) -> CheckOutcome {
    for (i, a) in corpus.iter().enumerate() {
        if let Some(w) = check(a) {
            return CheckOutcome::refuted(w, i as u64 + 1, seed);
        }
    }
    CheckOutcome::unfalsified(corpus.len() as u64, seed)
}

/// [`open_balanced_absorbing_form`] over a corpus.
pub fn check_open_form(corpus: &[Set], seed: u64) -> CheckOutcome {
    over_corpus(corpus, seed, |a| {
        let o = open_balanced_absorbing_form(a);
        o.is_refuted().then(|| o.witness.unwrap_or_default())
    })
}

/// The audit certifies a generator iff it is usual-open.
pub fn check_audit_agreement(corpus: &[Set], seed: u64) -> CheckOutcome {
    for rec in finest_topology_audit(corpus) {
        let open = is_usual_open(&rec.generator);
        if rec.outcome.is_proven() != open {
            let w = Witness::new().with("A", &rec.generator).with("audit", rec.outcome.verdict).with("usual_open", open);
            return CheckOutcome::refuted(w, rec.index as u64 + 1, seed);
        }
    }
    CheckOutcome::unfalsified(corpus.len() as u64, seed)
}

/// Bounded sets never escape under `λ_n = 1/n` and unbounded ones do,
/// up to `n_max`.
pub fn check_sequence_criterion(corpus: &[Set], n_max: i64, seed: u64) -> CheckOutcome {
    over_corpus(corpus, seed, |a| {
        let escape = sequence_escape(&|x| a.contains(x), n_max);
        (bounded(a) == escape.is_some())
            .then(|| Witness::new().with("A", a).with("bounded", bounded(a)).with("escape_from", format!("{escape:?}")))
    })
}
