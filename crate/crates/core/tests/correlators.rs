use gwloc::action::{product_spec, projective_space_spec, trivial_projective_spec, CorrelatorEntry};
use gwloc::algebra::{rat, Poly, RationalFunctionT};
use gwloc::assembly::{gw_invariant, parse_insertions, InvariantOptions};

fn fibre_spec(with_table: bool) -> gwloc::action::ActionSpec {
    let mut spec = product_spec(&projective_space_spec(1, &[0, 1]).unwrap(), &trivial_projective_spec(1).unwrap()).unwrap();
    if with_table {
        // Lines {p_i} x P1: <pt, pt>_1 = 1 in P1, normal weight +1 at p_0 and -1 at p_1.
        for (component, w) in [(0usize, 1i64), (1, -1)] {
            let pt = spec.components[component].ring.basis().iter().position(|m| m.iter().sum::<u32>() == 1).unwrap();
            let mono = spec.components[component].ring.basis()[pt].clone();
            spec.correlators.push(CorrelatorEntry {
                component,
                beta: vec![rat(0, 1), rat(1, 1)],
                vdim: 2,
                points: vec![(mono.clone(), 0), (mono, 0)],
                value: rat(1, 1),
                moving_factor: Some(RationalFunctionT::new(Poly::from_coeffs(vec![rat(1, 1)]), Poly::monomial(rat(w, 1), 1)).unwrap()),
            });
        }
    }
    spec
}

#[test]
fn fibre_class_uses_the_table() {
    let spec = fibre_spec(true);
    let r = gw_invariant(&spec, &[rat(0, 1), rat(1, 1)], &parse_insertions("pt|pt, 1|pt").unwrap(), &InvariantOptions::default()).unwrap();
    assert_eq!(r.value, Some(rat(1, 1)), "{}", r.total);
}

#[test]
fn missing_table_is_an_error() {
    let spec = fibre_spec(false);
    let e = gw_invariant(&spec, &[rat(0, 1), rat(1, 1)], &parse_insertions("pt|pt, 1|pt").unwrap(), &InvariantOptions::default());
    assert!(e.is_err());
}
