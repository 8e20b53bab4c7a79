use hillbasis::numerics::ExactScalar;
use hillbasis::potential::{two_term, two_term_int, FourierPotential, PotentialSpec};
use proptest::prelude::*;
use rug::Integer;

#[test]
fn support_examples() {
    assert_eq!(two_term_int(1, 1, 1, 3).unwrap().0.support(), vec![-2, 6]);
    assert_eq!(two_term_int(1, 1, 5, 5).unwrap().0.support(), vec![-10, 10]);
    assert!(FourierPotential::empty().support().is_empty());
}

#[test]
fn ten_frequency_example_parameters() {
    let (_, p) = two_term_int(1, 1, 5, 5).unwrap();
    assert_eq!((p.d, p.r, p.s), (5, 1, 1));
}

#[test]
fn reduced_parameters_are_coprime_small_range() {
    for big_r in 1..=300u64 {
        for big_s in 1..=300u64 {
            let (_, p) = two_term_int(1, 1, big_r, big_s).unwrap();
            assert_eq!(Integer::from(p.r).gcd(&Integer::from(p.s)), 1);
            assert_eq!(p.d * p.r, big_r);
            assert_eq!(p.d * p.s, big_s);
        }
    }
}

#[test]
fn rejects_bad_terms() {
    assert!(FourierPotential::new([(3, ExactScalar::one())]).is_err());
    assert!(FourierPotential::new([(0, ExactScalar::one())]).is_err());
    assert!(two_term_int(0, 1, 1, 1).is_err());
    assert!(two_term_int(1, 1, 0, 1).is_err());
    let p = FourierPotential::new([(2, ExactScalar::one()), (2, -ExactScalar::one()), (4, ExactScalar::one())]).unwrap();
    assert_eq!(p.support(), vec![4]);
}

#[test]
fn json_literals() {
    let two = PotentialSpec::parse(r#"{"a":"1","b":"1","R":1,"S":3}"#).unwrap().build().unwrap();
    assert_eq!(two, two_term_int(1, 1, 1, 3).unwrap().0);
    let terms = PotentialSpec::parse(r#"{"terms":[{"m":-2,"re":"1","im":"0"},{"m":6,"re":"1/2","im":"-3"}]}"#)
        .unwrap()
        .build()
        .unwrap();
    assert_eq!(terms.coefficient(6), ExactScalar::new((1, 2).into(), (-3).into()));
    assert!(PotentialSpec::parse(r#"{"terms":[{"m":3,"re":"1"}]}"#).unwrap().build().is_err());
    assert!(PotentialSpec::parse("{").is_err());
    let round = PotentialSpec::parse(&serde_json::to_string(&terms.to_spec()).unwrap()).unwrap().build().unwrap();
    assert_eq!(round, terms);
}

proptest! {
    #[test]
    fn two_term_support_and_coprimality(big_r in 1u64..=10_000, big_s in 1u64..=10_000, a in 1i64..9, b in -9i64..-1) {
        let (pot, p) = two_term(ExactScalar::from_int(a), ExactScalar::from_int(b), big_r, big_s).unwrap();
        prop_assert_eq!(pot.support(), vec![-2 * big_r as i64, 2 * big_s as i64]);
        prop_assert_eq!(Integer::from(p.r).gcd(&Integer::from(p.s)), 1);
        prop_assert_eq!(pot.as_two_term().unwrap(), p);
    }
}
