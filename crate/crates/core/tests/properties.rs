//! Property tests for the stated invariants, one block per module.

use evs_lab::evs::{check_order_morphism, Evs};
use evs_lab::instances::{AnyElem, AnyEvs, HalfLine, Subspace, SubspaceLattice};
use evs_lab::parse::{parse_set, SetRep};
use evs_lab::rng::substream;
use evs_lab::scalar::{sample_scalar, ExactField};
use evs_lab::sets::corpus::is_anchored_interval;
use evs_lab::sets::oracle::grid_bounded;
use evs_lab::sets::radial::check_radial;
use evs_lab::sets::transport::{check_radial_transport, ShippedMap};
use evs_lab::sets::{AbsorbingEscape, Interval, IntervalUnion};
use evs_lab::topology::{
    decompose_at, finest_topology_audit, halving_nbhd, is_bounded_interval, is_usual_open, scalar_continuity_witness, separation_witness,
    sequence_escape,
};
use evs_lab::{FieldMode, Rational, Scalar, ScalarMode, Verdict};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn q(n: i64, d: i64) -> Rational {
    Rational::from_ratio(n, d)
}

fn rational() -> impl Strategy<Value = Rational> {
    (-24i64..=24, 1i64..=8).prop_map(|(n, d)| q(n, d))
}

fn scalar() -> impl Strategy<Value = Scalar> {
    (rational(), rational()).prop_map(|(a, b)| Scalar::new(a, b))
}

/// `c · (m² − k² + 2mk·i)/(m² + k²)`, a scalar of modulus `|c|`.
fn pythagorean() -> impl Strategy<Value = Scalar> {
    (0i64..6, 0i64..6, rational()).prop_filter_map("m = k = 0", |(m, k, c)| {
        let n = m * m + k * k;
        (n != 0).then(|| Scalar::new(q(m * m - k * k, n) * &c, q(2 * m * k, n) * &c))
    })
}

fn interval() -> impl Strategy<Value = Interval<Rational>> {
    (0i64..48, 0i64..32, any::<bool>(), any::<bool>(), 0u8..10).prop_filter_map("empty", |(lo, len, lc, hc, inf)| {
        let hi = (inf != 0).then(|| q(lo + len, 4));
        Interval::new(q(lo, 4), lc, hi, hc).ok()
    })
}

fn interval_union() -> impl Strategy<Value = IntervalUnion<Rational>> {
    (prop::collection::vec(interval(), 1..=3), any::<bool>(), 1i64..24, any::<bool>()).prop_map(|(mut parts, anchor, b, hc)| {
        if anchor {
            parts[0] = Interval::new(Rational::zero(), true, Some(q(b, 4)), hc).unwrap();
        }
        IntervalUnion::new(parts)
    })
}

/// Components with open ends, except a left end at 0.
fn usual_open() -> impl Strategy<Value = IntervalUnion<Rational>> {
    interval_union().prop_map(|a| {
        let parts = a
            .components()
            .iter()
            .map(|c| {
                let hi = c.hi().map(|h| if h == c.lo() { h + q(1, 2) } else { h.clone() });
                Interval::new(c.lo().clone(), c.lo().is_zero(), hi, false).unwrap()
            })
            .collect();
        IntervalUnion::new(parts)
    })
}

fn instance() -> impl Strategy<Value = AnyEvs> {
    prop::sample::select(vec!["halfline", "cone:2", "twisted:2", "dict2", "lattice2", "product:(halfline,dict2)"])
        .prop_map(|s| s.parse().unwrap())
}

fn proven(o: Result<evs_lab::CheckOutcome, evs_lab::sets::SetError>) -> bool {
    o.is_ok_and(|o| o.verdict == Verdict::Proven)
}

fn is_perfect_square(n: &BigInt) -> bool {
    !n.is_negative() && &(n.sqrt() * n.sqrt()) == n
}

// scalars

proptest! {
    #[test]
    fn modulus_squared_is_multiplicative(a in scalar(), b in scalar()) {
        prop_assert_eq!((&a * &b).modulus_squared(), a.modulus_squared() * b.modulus_squared());
    }

    #[test]
    fn modulus_leq_is_compatible_with_products(a in scalar(), b in scalar(), c in 0i64..30, d in 0i64..30) {
        let (c, d) = (q(c, 4), q(d, 4));
        if a.modulus_leq(&c) && b.modulus_leq(&d) {
            prop_assert!((&a * &b).modulus_leq(&(c * d)));
        }
    }

    #[test]
    fn pythagorean_samples_have_rational_modulus(seed in any::<u64>()) {
        let mut rng = substream(seed, "pythagorean");
        let s: Scalar = sample_scalar(&mut rng, &q(3, 1), ScalarMode::PythagoreanOnly, FieldMode::Complex);
        let m2 = s.modulus_squared();
        prop_assert!(is_perfect_square(m2.numer()) && is_perfect_square(m2.denom()), "{} has |.|^2 = {}", s, m2);
    }
}

// evs core and instances

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn leq_is_antisymmetric(e in instance(), seed in any::<u64>()) {
        let mut rng = substream(seed, "antisym");
        let xs = e.sample(&mut rng, 12);
        for x in &xs {
            for y in &xs {
                if e.leq(x, y) && e.leq(y, x) {
                    prop_assert_eq!(x, y);
                }
            }
        }
    }

    #[test]
    fn primitives_are_exactly_the_cancellable_elements(e in instance(), seed in any::<u64>()) {
        let mut rng = substream(seed, "a5");
        let minus = Scalar::from_ratio(-1, 1);
        for x in e.sample(&mut rng, 16) {
            let cancels = e.add(&x, &e.scale(&minus, &x)) == e.zero();
            prop_assert_eq!(cancels, e.is_primitive(&x), "x = {}", x);
        }
    }

    #[test]
    fn halfline_action_factors_through_modulus(x in 0i64..40, a in pythagorean(), m in 0i64..6, k in 1i64..6) {
        let e = HalfLine::new();
        let n = m * m + k * k;
        let unit = Scalar::new(q(m * m - k * k, n), q(2 * m * k, n));
        let x = q(x, 3);
        prop_assert_eq!(e.scale(&a, &x), e.scale(&(&a * &unit), &x));
    }

    #[test]
    fn cone_radial_part_depends_on_modulus_only(a in pythagorean(), m in 0i64..6, k in 1i64..6, seed in any::<u64>()) {
        let e: AnyEvs = "cone:2".parse().unwrap();
        let n = m * m + k * k;
        let unit = Scalar::new(q(m * m - k * k, n), q(2 * m * k, n));
        let x = e.sample(&mut substream(seed, "cone"), 1).remove(0);
        let (AnyElem::Cone(p), AnyElem::Cone(r)) = (e.scale(&a, &x), e.scale(&(&a * &unit), &x)) else { unreachable!() };
        prop_assert_eq!(p.r, r.r);
    }

    #[test]
    fn lattice_join_is_idempotent(p in rational(), r in rational()) {
        let e = SubspaceLattice::new();
        let y = Subspace::line(p.clone(), r.clone());
        prop_assert_eq!(e.add(&y, &y), y.clone());
        if y != Subspace::zero(2) {
            let back = e.add(&y, &e.scale(&Scalar::from_ratio(-1, 1), &y));
            prop_assert_eq!(&back, &y);
            prop_assert_ne!(back, e.zero());
        }
    }

    #[test]
    fn lattice_canonical_forms_are_unique(p in rational(), r in rational(), c in 1i64..9, s in any::<bool>()) {
        let c = if s { q(c, 1) } else { q(-c, 3) };
        let a = Subspace::span(2, &[vec![p.clone(), r.clone()]]);
        let b = Subspace::span(2, &[vec![&p * &c, &r * &c]]);
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(a.rows(), b.rows());
    }

    #[test]
    fn order_isomorphisms_compose(seed in 0u64..1000) {
        let e = HalfLine::new();
        let four = |x: &Rational| x * q(4, 1);
        let outcome = check_order_morphism(&four, &e, &e, 300, seed);
        prop_assert!(!outcome.is_refuted(), "{:?}", outcome.witness);
    }
}

// set algebra

proptest! {
    #[test]
    fn proven_sets_survive_brute_sampling(a in interval_union(), seed in any::<u64>()) {
        let mut rng = substream(seed, "brute");
        let members: Vec<Rational> = a.components().iter().map(|c| c.sample_point(&mut rng)).collect();
        if proven(a.is_balanced()) {
            for x in &members {
                for s in [q(0, 1), q(1, 7), q(1, 2), q(5, 6), q(1, 1)] {
                    prop_assert!(a.contains(&(x * &s)), "{} * {} escapes {}", s, x, a);
                }
            }
        }
        if proven(a.is_absorbing()) {
            for x in members.iter().chain([q(1, 1), q(40, 1)].iter()) {
                let ok = (0..40).any(|k| {
                    let eps = Rational::new(BigInt::one(), BigInt::from(1u64) << k);
                    (0..=8).all(|t| a.contains(&(x * &eps * q(t, 8))))
                });
                prop_assert!(ok, "no small scalar keeps {} inside {}", x, a);
            }
        }
    }

    #[test]
    fn refutation_witnesses_are_real(a in interval_union()) {
        if let Ok(Some((x, alpha))) = a.balanced_violation() {
            prop_assert!(a.contains(&x) && !a.contains(&(&x * &alpha)) && alpha.abs() <= Rational::one());
        }
        match a.absorbing_violation() {
            Ok(Some(AbsorbingEscape::MissingZero)) => prop_assert!(!a.contains(&Rational::zero())),
            Ok(Some(AbsorbingEscape::Gap(g))) => {
                for t in 1..=16 {
                    prop_assert!(!a.contains(&(&g * q(t, 16))));
                }
            }
            _ => {}
        }
    }

    #[test]
    fn balanced_and_absorbing_means_anchored_interval(a in interval_union()) {
        let both = proven(a.is_balanced()) && proven(a.is_absorbing());
        prop_assert_eq!(both, is_anchored_interval(&a), "{}", a);
    }

    #[test]
    fn proven_sets_contain_theta(a in interval_union()) {
        if proven(a.is_balanced()) || proven(a.is_absorbing()) {
            prop_assert!(a.contains(&Rational::zero()));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn radial_class_survives_transport(seed in any::<u64>(), axis in any::<bool>()) {
        let map = if axis { ShippedMap::ConeAxis(2) } else { ShippedMap::Doubling };
        let o = check_radial_transport(map, 40, seed).unwrap();
        prop_assert!(!o.is_refuted(), "{:?}", o.witness);
        let before = check_radial(&"halfline".parse().unwrap(), 40, seed).outcome.verdict;
        prop_assert_ne!(before, Verdict::Refuted);
    }
}

// topology

proptest! {
    #[test]
    fn witnesses_reverify(g in usual_open(), seed in any::<u64>(), alpha in pythagorean()) {
        let mut rng = substream(seed, "witness");
        let x = g.components()[0].sample_point(&mut rng);
        let u = decompose_at(&g, &x).unwrap();
        prop_assert!(u.translate(&x).is_subset(&g));
        if g.contains(&Rational::zero()) {
            let w = halving_nbhd(&g).unwrap();
            prop_assert!(w.minkowski(&w).is_subset(&g));
        }
        if x.is_positive() {
            let (a, b) = separation_witness(&x, &(&x / q(2, 1))).unwrap();
            prop_assert!(a.translate(&x).up().intersection(&b.translate(&(&x / q(2, 1))).down()).is_empty());
        }
        if !alpha.is_zero() {
            let w = scalar_continuity_witness(&g, &x, &alpha).unwrap();
            let m = alpha.rational_modulus().unwrap();
            prop_assert!(w.image.is_subset(&g.scale_modulus(&m)));
            prop_assert!(w.image.contains(&(&m * &x)));
        }
    }

    #[test]
    fn bounded_grid_matches_characterization(a in interval_union()) {
        prop_assert_eq!(grid_bounded(&a), is_bounded_interval(&a).is_proven(), "{}", a);
    }

    #[test]
    fn bounded_sets_do_not_escape_the_sequence_test(a in interval_union()) {
        let escape = sequence_escape(&|x| a.contains(x), 1000);
        prop_assert_eq!(escape.is_none(), is_bounded_interval(&a).is_proven(), "{}", a);
    }

    #[test]
    fn scaling_keeps_boundedness(a in interval_union(), l in pythagorean()) {
        if is_bounded_interval(&a).is_proven() {
            prop_assert!(is_bounded_interval(&a.scale(&l)).is_proven());
        }
    }

    #[test]
    fn audit_accepts_exactly_usual_open(gens in prop::collection::vec(prop_oneof![interval_union(), usual_open()], 1..6)) {
        let records = finest_topology_audit(&gens);
        for (r, g) in records.iter().zip(&gens) {
            prop_assert_eq!(r.outcome.is_proven(), is_usual_open(g), "{}", g);
        }
        let family_ok = records.iter().all(|r| r.outcome.is_proven());
        prop_assert_eq!(family_ok, gens.iter().all(is_usual_open));
    }
}

// cli

proptest! {
    #[test]
    fn rendered_sets_parse_back(a in interval_union()) {
        let e: AnyEvs = "halfline".parse().unwrap();
        let rep = SetRep::Interval(a);
        let back = parse_set(&rep.to_string(), &e).unwrap();
        prop_assert_eq!(&back, &rep);
        prop_assert!(back.set_eq(&rep));
    }

    #[test]
    fn rendered_slices_parse_back(seed in any::<u64>()) {
        let e: AnyEvs = "cone:2".parse().unwrap();
        let rep = SetRep::Slice(evs_lab::sets::random_slice(&mut substream(seed, "slice"), 2));
        prop_assert_eq!(parse_set(&rep.to_string(), &e).unwrap(), rep);
    }

    #[test]
    fn rendered_families_parse_back(seed in any::<u64>()) {
        let e: AnyEvs = "lattice2".parse().unwrap();
        let rep = SetRep::Lattice(evs_lab::sets::random_family(&mut substream(seed, "family")));
        prop_assert_eq!(parse_set(&rep.to_string(), &e).unwrap(), rep);
    }
}
