use num_bigint::BigInt;
use proptest::prelude::*;

use sixteenons::algebra::dim;
use sixteenons::io::{set_from_str, set_to_string};
use sixteenons::rational::{format_rational, parse_rational};
use sixteenons::setops::{energy, energy_prime, ratio_profiles, sumset};
use sixteenons::{CdNumber, ElementSet, Rational};

fn rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=9).prop_map(|(n, d)| Rational::new(BigInt::from(n), BigInt::from(d)))
}

fn element(level: u8) -> impl Strategy<Value = CdNumber> {
    prop::collection::vec(rational(), dim(level)).prop_map(move |c| CdNumber::new(level, c).unwrap())
}

fn nonzero(level: u8) -> impl Strategy<Value = CdNumber> {
    element(level).prop_filter("nonzero", |x| !x.is_zero())
}

fn set(level: u8, max: usize) -> impl Strategy<Value = ElementSet> {
    prop::collection::vec(nonzero(level), 1..=max).prop_map(move |xs| ElementSet::new(level, xs).unwrap())
}

proptest! {
    #[test]
    fn rational_text_round_trip(q in rational()) {
        prop_assert_eq!(parse_rational(&format_rational(&q)).unwrap(), q);
    }

    #[test]
    fn element_text_round_trip(x in (0u8..=4).prop_flat_map(element)) {
        prop_assert_eq!(x.to_string().parse::<CdNumber>().unwrap(), x);
    }

    #[test]
    fn norm_is_multiplicative_at_every_level((x, y) in (0u8..=4).prop_flat_map(|l| (element(l), element(l)))) {
        prop_assert_eq!((&x * &y).norm_sq(), x.norm_sq() * y.norm_sq());
    }

    #[test]
    fn inverses_are_two_sided(x in (0u8..=4).prop_flat_map(nonzero)) {
        let inv = x.inverse().unwrap();
        let one = CdNumber::one(x.level());
        prop_assert_eq!(&x * &inv, one.clone());
        prop_assert_eq!(&inv * &x, one);
    }

    #[test]
    fn complex_numbers_commute((x, y) in (element(1), element(1))) {
        prop_assert_eq!(&x * &y, &y * &x);
    }

    #[test]
    fn quaternions_associate((x, y, z) in (element(2), element(2), element(2))) {
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
    }

    #[test]
    fn octonions_are_alternative((x, y) in (element(3), element(3))) {
        prop_assert_eq!(&x * &(&x * &y), &(&x * &x) * &y);
        prop_assert_eq!(&(&y * &x) * &x, &y * &(&x * &x));
    }

    #[test]
    fn octonion_division_cancels((x, y) in (nonzero(3), element(3))) {
        let inv = x.inverse().unwrap();
        prop_assert_eq!(&(&y * &x) * &inv, y.clone());
        prop_assert_eq!(&inv * &(&x * &y), y);
    }

    #[test]
    fn conjugation_reverses_products_up_to_octonions((x, y) in (0u8..=3).prop_flat_map(|l| (element(l), element(l)))) {
        prop_assert_eq!((&x * &y).conjugate(), &y.conjugate() * &x.conjugate());
    }

    #[test]
    fn embedding_is_multiplicative((x, y) in (element(2), element(2))) {
        let up = |v: &CdNumber| v.embed(4).unwrap();
        prop_assert_eq!(up(&(&x * &y)), &up(&x) * &up(&y));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn set_file_round_trip(a in (0u8..=4).prop_flat_map(|l| set(l, 6))) {
        prop_assert_eq!(set_from_str(&set_to_string(&a)).unwrap(), a);
    }

    #[test]
    fn energy_prime_equals_profile_sum(a in (2u8..=4).prop_flat_map(|l| set(l, 6))) {
        let via_profiles: u64 = ratio_profiles(&a).unwrap().iter().map(|p| p.ell * p.r).sum();
        prop_assert_eq!(energy_prime(&a).unwrap(), via_profiles);
    }

    #[test]
    fn energies_agree_when_associative(a in (0u8..=2).prop_flat_map(|l| set(l, 6))) {
        prop_assert_eq!(energy(&a), energy_prime(&a).unwrap());
    }

    #[test]
    fn energy_is_at_least_the_trivial_quadruples(a in (0u8..=4).prop_flat_map(|l| set(l, 6))) {
        let n = a.len() as u64;
        prop_assert!(energy_prime(&a).unwrap() >= n * n);
        prop_assert!(energy(&a) >= n * n);
    }

    #[test]
    fn sumset_size_bounds(a in (0u8..=4).prop_flat_map(|l| set(l, 7))) {
        let n = a.len();
        let s = sumset(&a).len();
        prop_assert!(n <= s && s <= n * (n + 1) / 2);
    }
}
