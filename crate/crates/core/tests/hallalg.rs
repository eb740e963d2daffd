use coha_core::commvar::{count_commuting_kernel, CommPair};
use coha_core::ff::{Matrix, PrimeField};
use coha_core::hallalg::{
    is_isomorphic, orbit_sum, submodules, ClassId, HallElement, Module, ModuleClassTable,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn module(p: u32, a: &[Vec<u32>], b: &[Vec<u32>]) -> Module {
    let f = PrimeField::new(p).unwrap();
    CommPair::new(Matrix::from_rows(f, a).unwrap(), Matrix::from_rows(f, b).unwrap()).unwrap()
}

fn int(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn simple(p: u32, a: u32, b: u32) -> Module {
    module(p, &[vec![a]], &[vec![b]])
}

#[test]
fn orbit_sums_match_counts_at_three() {
    let t = ModuleClassTable::enumerate(3, 3).unwrap();
    let f = PrimeField::new(3).unwrap();
    for n in 0..=3 {
        let count = if n == 0 { 1u32.into() } else { count_commuting_kernel(f, n).unwrap() };
        assert_eq!(orbit_sum(&t, n), BigInt::from(count), "n = {n}");
    }
}

#[test]
fn table_at_two() {
    let t = ModuleClassTable::enumerate(3, 2).unwrap();
    let sizes: Vec<usize> = (0..=3).map(|n| t.classes_of_length(n).len()).collect();
    assert_eq!(sizes, vec![1, 4, 28, 144]);

    // distinct points split
    let (a, b) = (t.classify(&simple(2, 0, 0)).unwrap(), t.classify(&simple(2, 1, 0)).unwrap());
    let ab = t.classify(&module(2, &[vec![0, 0], vec![0, 1]], &[vec![0, 0], vec![0, 0]])).unwrap();
    let prod = t.hall_product(&HallElement::basis(a), &HallElement::basis(b)).unwrap();
    assert_eq!(prod, HallElement::basis(ab));
    assert_eq!(t.hall_number(ab, a, b).unwrap(), 1);

    // origin simple squared
    let zero = t.classify(&module(2, &[vec![0, 0], vec![0, 0]], &[vec![0, 0], vec![0, 0]])).unwrap();
    let jordan_a = t.classify(&module(2, &[vec![0, 1], vec![0, 0]], &[vec![0, 0], vec![0, 0]])).unwrap();
    assert_eq!(t.hall_number(zero, a, a).unwrap(), 3);
    assert_eq!(t.hall_number(jordan_a, a, a).unwrap(), 1);
    assert_eq!(t.hall_number(zero, a, b).unwrap(), 0);
    assert_eq!(t.hall_number(ab, a, ClassId { length: 2, index: 0 }).unwrap(), 0);

    let sq = t.hall_product(&HallElement::basis(a), &HallElement::basis(a)).unwrap();
    assert_eq!(sq.coefficient(zero), int(3));
    assert_eq!(sq.coefficient(jordan_a), int(1));
    for (id, _) in sq.coefficients() {
        assert_eq!(id.length, 2);
        assert!(t.class(*id).unwrap().representative.is_nilpotent());
    }
}

#[test]
fn submodules_partition_by_quotient() {
    let t = ModuleClassTable::enumerate(3, 2).unwrap();
    for m in t.classes() {
        let subs = submodules(&m.representative);
        for n in t.classes().filter(|n| n.length() <= m.length()) {
            let direct = subs
                .iter()
                .filter(|s| t.classify(&s.sub).unwrap() == n.name)
                .count() as u64;
            let summed: u64 = t
                .classes_of_length(m.length() - n.length())
                .iter()
                .map(|l| t.hall_number(m.name, n.name, l.name).unwrap())
                .sum();
            assert_eq!(direct, summed);
        }
    }
}

#[test]
fn associativity_at_two() {
    let t = ModuleClassTable::enumerate(3, 2).unwrap();
    let r = t.check_associativity(3).unwrap();
    assert!(r.violations.is_empty(), "{:?}", r.violations.first());
    assert!(r.triples_checked > 0);
}

#[test]
fn products_are_graded() {
    let t = ModuleClassTable::enumerate(3, 2).unwrap();
    for x in t.classes() {
        for y in t.classes().filter(|y| x.length() + y.length() <= 3) {
            let prod = t
                .hall_product(&HallElement::basis(x.name), &HallElement::basis(y.name))
                .unwrap();
            assert!(prod.coefficients().keys().all(|id| id.length == x.length() + y.length()));
        }
    }
    let big = t.classes_of_length(2)[0].name;
    assert!(t
        .hall_product(&HallElement::basis(big), &HallElement::basis(big))
        .is_err());
}

#[test]
fn commutators_vanish_on_trivial_cases() {
    let t = ModuleClassTable::enumerate(2, 2).unwrap();
    let table = t.commutator_table(2).unwrap();
    let a = t.classify(&simple(2, 0, 0)).unwrap();
    let b = t.classify(&simple(2, 1, 1)).unwrap();
    for e in &table {
        if (e.lhs == a && e.rhs == b) || e.lhs == e.rhs {
            assert!(e.defect.is_zero());
        }
    }
}

#[test]
fn isomorphism_is_an_equivalence() {
    let t = ModuleClassTable::enumerate(2, 3).unwrap();
    let f = PrimeField::new(3).unwrap();
    let mut rng = StdRng::seed_from_u64(7);
    let reps: Vec<Module> = t.classes_of_length(2).iter().map(|c| c.representative.clone()).collect();
    let sample = |rng: &mut StdRng| {
        let m = &reps[rng.gen_range(0..reps.len())];
        loop {
            let g = Matrix::from_index(f, 2, rng.gen_range(0..81));
            if let Some(gi) = g.inverse() {
                return m.conjugate(&g, &gi);
            }
        }
    };
    for _ in 0..200 {
        let (x, y, z) = (sample(&mut rng), sample(&mut rng), sample(&mut rng));
        let xy = is_isomorphic(&x, &y).unwrap();
        assert!(is_isomorphic(&x, &x).unwrap());
        assert_eq!(xy, is_isomorphic(&y, &x).unwrap());
        if xy && is_isomorphic(&y, &z).unwrap() {
            assert!(is_isomorphic(&x, &z).unwrap());
        }
        assert_eq!(xy, t.classify(&x).unwrap() == t.classify(&y).unwrap());
    }
}

#[test]
fn table_json_round_trip() {
    let t = ModuleClassTable::enumerate(2, 2).unwrap();
    let text = serde_json::to_string(&t).unwrap();
    let back: ModuleClassTable = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_string(&back).unwrap(), text);
    let e = t
        .hall_product(&HallElement::basis(ClassId { length: 1, index: 0 }), &HallElement::basis(ClassId { length: 1, index: 0 }))
        .unwrap();
    let back: HallElement = serde_json::from_str(&serde_json::to_string(&e).unwrap()).unwrap();
    assert_eq!(back, e);
}
