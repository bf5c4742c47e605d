use std::sync::Arc;

use proptest::prelude::*;

use gwloc::action::projective_space_spec;
use gwloc::algebra::{p_eval, rat, GradedRing, LocalClass, Poly, Rational, RationalFunctionT, RingClass};
use gwloc::assembly::{gw_invariant, psi_integral, InvariantOptions, Insertion};
use gwloc::edge::{blowup_tangent_delta, c_operator, edge_euler, edge_kclass, EdgeInputs};
use gwloc::graphs::{enumerate_shapes, enumerate_triples, is_minimal};

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

fn rings() -> Vec<Arc<GradedRing>> {
    let p1 = GradedRing::projective(1, "h");
    let p2 = GradedRing::projective(2, "h");
    vec![
        GradedRing::point(),
        p1.clone(),
        p2.clone(),
        GradedRing::projective(3, "h"),
        GradedRing::tensor(&p1, &GradedRing::projective(1, "y")).unwrap(),
        GradedRing::tensor(&p2, &GradedRing::projective(1, "y")).unwrap(),
    ]
}

fn ratfunc() -> impl Strategy<Value = RationalFunctionT> {
    let coeff = (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d));
    (prop::collection::vec(coeff, 0..4), prop::collection::vec(-3i64..=3, 0..3), 0usize..3).prop_map(|(num, roots, tpow)| {
        let mut den = Poly::monomial(Rational::from_integer(1.into()), tpow);
        for r in roots {
            den = &den * &Poly::from_coeffs(vec![rat(r, 1), rat(1, 1)]);
        }
        RationalFunctionT::new(Poly::from_coeffs(num), den).unwrap()
    })
}

fn nonzero_ratfunc() -> impl Strategy<Value = RationalFunctionT> {
    ratfunc().prop_filter("nonzero", |f| !f.is_zero())
}

fn class_in(ring: Arc<GradedRing>) -> impl Strategy<Value = RingClass> {
    let n = ring.len();
    prop::collection::vec(ratfunc(), n).prop_map(move |c| RingClass::from_coeffs(&ring, c).unwrap())
}

fn ring_and_classes(k: usize) -> impl Strategy<Value = (Arc<GradedRing>, Vec<RingClass>)> {
    (0..rings().len()).prop_flat_map(move |i| {
        let r = rings()[i].clone();
        (Just(r.clone()), prop::collection::vec(class_in(r), k))
    })
}

proptest! {
    #![proptest_config(config(128))]

    #[test]
    fn ring_axioms((_, v) in ring_and_classes(3)) {
        let (a, b, c) = (&v[0], &v[1], &v[2]);
        prop_assert_eq!(a.mul(b).unwrap(), b.mul(a).unwrap());
        prop_assert_eq!(a.mul(b).unwrap().mul(c).unwrap(), a.mul(&b.mul(c).unwrap()).unwrap());
        prop_assert_eq!(a.mul(&b.add(c).unwrap()).unwrap(), a.mul(b).unwrap().add(&a.mul(c).unwrap()).unwrap());
        prop_assert_eq!(RingClass::one(a.ring()).mul(a).unwrap(), a.clone());
    }

    #[test]
    fn unit_inversion((r, v) in ring_and_classes(1), u in nonzero_ratfunc()) {
        let unit = v[0].add(&RingClass::scalar(&r, &u - v[0].unit_part())).unwrap();
        let inv = unit.invert_unit().unwrap();
        prop_assert_eq!(unit.mul(&inv).unwrap(), RingClass::one(&r));
    }

    #[test]
    fn diagonal_reproduces_identity((r, v) in ring_and_classes(1)) {
        let x = &v[0];
        let mut acc = RingClass::zero(&r);
        for (e, dual) in RingClass::diagonal_decomposition(&r).unwrap() {
            acc = acc.add(&dual.scale(&e.mul(x).unwrap().integrate())).unwrap();
        }
        prop_assert_eq!(&acc, x);
    }

    #[test]
    fn trivial_bundle_chern_polynomial((r, v) in ring_and_classes(1), rank in 0usize..4, a in ratfunc(), b in ratfunc()) {
        let bound = 3;
        let x = LocalClass::from_class(v[0].clone(), bound)
            .add(&LocalClass::psi_monomial(a, &r, 1, 0, bound)).unwrap()
            .add(&LocalClass::psi_monomial(b, &r, 0, 1, bound)).unwrap();
        let chern = vec![RingClass::zero(&r); rank];
        prop_assert_eq!(p_eval(&chern, &x).unwrap(), x.pow(rank as u32));
    }

    #[test]
    fn rational_function_identities(a in nonzero_ratfunc(), b in nonzero_ratfunc()) {
        let q = &a / &b;
        prop_assert!((&q * &(&b / &a)).is_one());
        let again = RationalFunctionT::new(q.numerator().clone(), q.denominator().clone()).unwrap();
        prop_assert_eq!(again, q);
    }

    #[test]
    fn string_recursion((n, picks) in (3usize..8).prop_flat_map(|n| (Just(n), prop::collection::vec(0..n, n - 2)))) {
        // ∫ ψ^a · 1 over n+1 points = Σ_j ∫ ψ^{a − e_j} over n points.
        let mut a = vec![0u32; n];
        for p in picks {
            a[p] += 1;
        }
        let mut with_unit = a.clone();
        with_unit.push(0);
        let lhs = psi_integral(&with_unit).unwrap();
        let mut rhs = rat(0, 1);
        for j in 0..n {
            if a[j] > 0 {
                let mut b = a.clone();
                b[j] -= 1;
                rhs += psi_integral(&b).unwrap();
            }
        }
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn blowup_delta_rank_and_c1(pieces in prop::collection::vec((1u64..5, 1usize..4), 1..4)) {
        let d = blowup_tangent_delta(&pieces);
        prop_assert_eq!(d.rank(), 0);
        let s: i64 = pieces.iter().map(|&(w, r)| w as i64 * r as i64).sum();
        prop_assert_eq!(d.c1_coefficient(), 1 - s);
    }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn insertion_order_is_irrelevant(seed in 0u64..1000) {
        let s = projective_space_spec(2, &[0, 1, 5]).unwrap();
        let mut ins = vec![Insertion::new("H", 0), Insertion::new("pt", 0), Insertion::new("H^2", 0), Insertion::new("1", 1)];
        let base = gw_invariant(&s, &[rat(1, 1)], &ins, &InvariantOptions::default()).unwrap().total;
        let k = seed as usize % 4;
        ins.rotate_left(k);
        ins.swap(0, (seed as usize / 4) % 4);
        let other = gw_invariant(&s, &[rat(1, 1)], &ins, &InvariantOptions::default()).unwrap().total;
        prop_assert_eq!(base, other);
    }

    #[test]
    fn divisor_axiom_on_the_line(c in 1i64..12) {
        let s = projective_space_spec(1, &[0, c]).unwrap();
        let r = gw_invariant(&s, &[rat(1, 1)], &[Insertion::new("H", 0), Insertion::new("H", 0)], &InvariantOptions::default()).unwrap();
        prop_assert_eq!(r.value, Some(rat(1, 1)));
    }

    #[test]
    fn triples_are_well_formed(beta in 0i64..4, n in 0usize..4, which in 0usize..2) {
        let s = if which == 0 { projective_space_spec(1, &[0, 1]).unwrap() } else { projective_space_spec(2, &[0, 1, 5]).unwrap() };
        prop_assume!(beta > 0 || n >= 3);
        let b = [rat(beta, 1)];
        let ts = enumerate_triples(&s, n, &b).unwrap();
        let mut keys: Vec<String> = ts.iter().map(|t| t.canonical_key()).collect();
        keys.sort();
        keys.dedup();
        prop_assert_eq!(keys.len(), ts.len());
        for t in &ts {
            prop_assert!(t.check(&s, n, &b).is_ok());
            prop_assert!(is_minimal(t, &s));
            prop_assert!(t.automorphism_order() >= 1);
        }
        for t in enumerate_shapes(&s, n, &b).unwrap() {
            prop_assert_eq!(t.marking_count(), n);
        }
    }

    #[test]
    fn edge_euler_is_multiplicative(edge in 0usize..3, k in 1u64..5) {
        let s = projective_space_spec(2, &[0, 1, 5]).unwrap();
        let inputs = EdgeInputs::from_spec(&s, edge, k).unwrap();
        prop_assert_eq!(edge_kclass(&inputs).euler(&inputs).unwrap(), edge_euler(&inputs).unwrap());
    }

    #[test]
    fn pushforward_path_is_consistent(edge in 0usize..3, k in 1u64..4) {
        // n1 = n2 = 0, α = 1: ∫ C = ∫ [M]/e(N).
        let s = projective_space_spec(2, &[0, 1, 5]).unwrap();
        let inputs = EdgeInputs::from_spec(&s, edge, k).unwrap();
        let one = RingClass::one(&inputs.source_ring);
        let c = c_operator(&inputs, 0, 0, &one).unwrap();
        let e = edge_euler(&inputs).unwrap().coefficient(0, 0);
        let direct = e.invert_unit().unwrap().integrate();
        prop_assert_eq!(c.integrate(), direct);
    }
}
