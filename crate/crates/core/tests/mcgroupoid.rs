use coha_core::mcgroupoid::{
    catalog, fibration_count, quasi_iso_compare, BracketEntry, DgLie3, DgLieMorphism, TwistSign,
};
use coha_core::Error;
use num_traits::Zero;

#[test]
fn catalog_cards_match_frozen_values() {
    let c = catalog();
    assert!(c.entries.len() >= 8);
    for e in &c.entries {
        assert_eq!(e.algebra.modulus(), 5);
        let [a, b, d] = e.algebra.dims();
        assert!(a <= 2 && b <= 2 && d <= 1, "{}", e.id);
        assert_eq!(e.algebra.groupoid_card().unwrap(), e.expected, "{}", e.id);
    }
}

#[test]
fn catalog_action_axioms_hold() {
    for e in &catalog().entries {
        let r = e.algebra.check_action_axioms().unwrap();
        assert!(r.holds(), "{}: {r:?}", e.id);
    }
}

#[test]
fn abelian_entries_count_cohomology() {
    for e in catalog().entries.iter().filter(|e| e.algebra.is_abelian()) {
        let [h0, h1, _] = e.algebra.cohomology_dims();
        let card = e.algebra.groupoid_card().unwrap();
        assert_eq!(card.orbit_count, 5u64.pow(h1 as u32), "{}", e.id);
        assert!(card.stabilizer_orders.iter().all(|&s| s == 5u64.pow(h0 as u32)), "{}", e.id);
    }
}

#[test]
fn quasi_isomorphisms_behave_as_catalogued() {
    let c = catalog();
    for q in &c.quasi_isomorphisms {
        let (lhs, rhs) = (&c.entry(&q.lhs).unwrap().algebra, &c.entry(&q.rhs).unwrap().algebra);
        let r = quasi_iso_compare(lhs, rhs, &q.map);
        match q.expect {
            coha_core::mcgroupoid::QuasiIsoExpectation::Pass => assert!(r.unwrap().holds(), "{}", q.id),
            coha_core::mcgroupoid::QuasiIsoExpectation::NotQuasiIso => {
                assert!(matches!(r, Err(Error::Precondition(_))), "{}", q.id)
            }
        }
    }
}

#[test]
fn identity_is_a_quasi_isomorphism() {
    for e in &catalog().entries {
        let r = quasi_iso_compare(&e.algebra, &e.algebra, &DgLieMorphism::identity(&e.algebra)).unwrap();
        assert!(r.holds(), "{}", e.id);
    }
}

#[test]
fn non_morphism_is_rejected() {
    let c = catalog();
    let g = &c.entry("nilpotent-action").unwrap().algebra;
    let h = &c.entry("abelian-zero-d-plus-acyclic").unwrap().algebra;
    // a map sending [e, a] = b to 0 but not compatible with the acyclic differential
    let phi = DgLieMorphism {
        maps: [vec![vec![0], vec![1]], vec![vec![0, 0], vec![0, 0]], vec![]],
    };
    assert!(matches!(quasi_iso_compare(g, h, &phi), Err(Error::Precondition(_))));
}

#[test]
fn fibrations_pin_the_twist_sign() {
    for f in &catalog().fibrations {
        let r = fibration_count(&f.product).unwrap();
        assert_eq!(r.mc_total, f.expected_mc_total, "{}", f.id);
        assert_eq!(r.signs_passing, f.expected_signs, "{}", f.id);
        assert!(r.holds(), "{}", f.id);
        assert!(!r.groupoid_total.is_zero());
    }
}

#[test]
fn discriminating_example_fails_with_the_other_sign() {
    let c = catalog();
    let r = fibration_count(&c.fibration("sign-discriminating").unwrap().product).unwrap();
    let minus = r.outcomes.iter().find(|o| o.sign == TwistSign::Minus).unwrap();
    assert!(!minus.set_identity);
    assert_eq!((r.mc_total, minus.fiber_sum), (3, 4));
    let r = fibration_count(&c.fibration("per-fiber-only").unwrap().product).unwrap();
    let minus = r.outcomes.iter().find(|o| o.sign == TwistSign::Minus).unwrap();
    assert!(minus.set_identity && !minus.per_fiber_identity);
}

#[test]
fn exhaustive_action_on_heisenberg() {
    let entry = |l, r, v: &[u32]| BracketEntry {
        degrees: [0, 0],
        left: l,
        right: r,
        value: v.to_vec(),
    };
    // Heisenberg g^0 acting on g^1 = span(a, b) by [e1, a] = b, with g^2 = 0
    let g = DgLie3::new(
        5,
        [3, 2, 0],
        &[vec![0, 0, 0], vec![0, 0, 0]],
        &[],
        &[
            entry(0, 1, &[0, 0, 1]),
            entry(1, 0, &[0, 0, 4]),
            BracketEntry {
                degrees: [0, 1],
                left: 0,
                right: 0,
                value: vec![0, 1],
            },
        ],
    )
    .unwrap();
    g.validate().unwrap();
    let r = g.check_action_axioms().unwrap();
    assert!(r.holds(), "{r:?}");
    let card = g.groupoid_card().unwrap();
    assert_eq!(card.orbit_count, 9);
}

#[test]
fn catalog_round_trips_through_json() {
    let c = catalog();
    let text = serde_json::to_string(&c).unwrap();
    let back: coha_core::mcgroupoid::Catalog = serde_json::from_str(&text).unwrap();
    assert_eq!(back, c);
}
