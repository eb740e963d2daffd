use coha_core::commvar::{
    count, count_commuting_bruteforce, count_commuting_kernel, count_nilpotent_bruteforce, count_nilpotent_commuting,
    gl_order, interpolate_count_polynomial, lagrange_interpolate, CountMethod, Variety,
};
use coha_core::ff::{PrimeField, F4};
use coha_core::numbers::rational_from_ints;
use coha_core::Error;
use num_bigint::BigUint;

#[test]
fn kernel_and_brute_force_agree() {
    for (n, p) in [(1, 2), (1, 3), (2, 2), (2, 3)] {
        let f = PrimeField::new(p).unwrap();
        assert_eq!(
            count_commuting_kernel(f, n).unwrap(),
            count_commuting_bruteforce(f, n).unwrap(),
            "n = {n}, p = {p}"
        );
        assert_eq!(
            count_nilpotent_commuting(f, n).unwrap(),
            count_nilpotent_bruteforce(f, n).unwrap(),
            "n = {n}, p = {p}"
        );
    }
}

#[test]
fn three_routes_agree_on_small_cases() {
    for variety in [Variety::Commuting, Variety::NilpotentCommuting] {
        for p in [2, 3, 5] {
            let kernel = count(variety, CountMethod::Kernel, 2, p).unwrap();
            assert_eq!(count(variety, CountMethod::Classes, 2, p).unwrap(), kernel, "{variety:?} p = {p}");
        }
        assert_eq!(
            count(variety, CountMethod::Kernel, 3, 2).unwrap(),
            count(variety, CountMethod::Classes, 3, 2).unwrap()
        );
    }
}

#[test]
fn f4_routes_agree() {
    assert_eq!(count_commuting_kernel(F4, 2).unwrap(), count_commuting_bruteforce(F4, 2).unwrap());
    assert_eq!(count_nilpotent_commuting(F4, 1).unwrap(), BigUint::from(1u32));
}

#[test]
fn group_orders() {
    assert_eq!(gl_order(0, 2), BigUint::from(1u32));
    assert_eq!(gl_order(1, 2), BigUint::from(1u32));
    assert_eq!(gl_order(2, 2), BigUint::from(6u32));
    assert_eq!(gl_order(3, 2), BigUint::from(168u32));
}

#[test]
fn polynomials_of_small_varieties() {
    // |C_1| = q^2 and |C_2| = q^6 + q^5 - q^3
    let run = interpolate_count_polynomial(Variety::Commuting, CountMethod::Kernel, 1, 3).unwrap();
    assert_eq!(run.polynomial.degree(), Some(2));
    let run = interpolate_count_polynomial(Variety::Commuting, CountMethod::Classes, 2, 7).unwrap();
    let c: Vec<i64> = run
        .polynomial
        .integer_coefficients()
        .unwrap()
        .iter()
        .map(|x| i64::try_from(x).unwrap())
        .collect();
    assert_eq!(c, vec![0, 0, 0, -1, 0, 1, 1]);
    let run = interpolate_count_polynomial(Variety::NilpotentCommuting, CountMethod::Classes, 2, 4).unwrap();
    assert_eq!(run.polynomial.degree(), Some(3));
    assert_eq!(run.polynomial.eval(&rational_from_ints(2, 1)), rational_from_ints(10, 1));
}

#[test]
fn interpolation_through_given_points() {
    let pts: Vec<_> = [(0, 1), (1, 3), (2, 7)]
        .iter()
        .map(|&(x, y)| (rational_from_ints(x, 1), rational_from_ints(y, 1)))
        .collect();
    let p = lagrange_interpolate(&pts);
    assert_eq!(p.degree(), Some(2));
    assert_eq!(p.eval(&rational_from_ints(3, 1)), rational_from_ints(13, 1));
}

#[test]
fn infeasible_and_invalid_requests() {
    assert!(matches!(count(Variety::Commuting, CountMethod::Brute, 3, 5), Err(Error::Infeasible(_))));
    assert!(matches!(count(Variety::Commuting, CountMethod::Kernel, 2, 4), Err(Error::Precondition(_))));
    assert!(matches!(
        interpolate_count_polynomial(Variety::Commuting, CountMethod::Kernel, 3, 12),
        Err(Error::Infeasible(_))
    ));
}
