use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use wittenz::exact::*;
use wittenz::PiValue;

fn q(n: i64, d: i64) -> BigRational {
    ratio(n, d)
}

#[test]
fn bernoulli_small_values() {
    assert_eq!(bernoulli(0), q(1, 1));
    assert_eq!(bernoulli(1), q(-1, 2));
    assert_eq!(bernoulli(2), q(1, 6));
    assert_eq!(bernoulli(4), q(-1, 30));
}

// independent: sum_{k<n+1} C(n+1,k) B_k = 0 solved for B_12 by hand from B_0..B_10
#[test]
fn bernoulli_twelve() {
    assert_eq!(bernoulli(12), q(-691, 2730));
}

#[test]
fn bernoulli_recurrence_to_120() {
    for n in 1..=120i64 {
        let mut s = BigRational::zero();
        for k in 0..=n {
            s += bernoulli(k as usize) * BigRational::from_integer(binomial(n + 1, k));
        }
        assert!(s.is_zero(), "recurrence fails at n = {n}");
    }
}

#[test]
fn odd_bernoulli_vanish() {
    for k in 1..=60 {
        assert!(bernoulli(2 * k + 1).is_zero());
    }
}

#[test]
fn even_bernoulli_signs_alternate() {
    for k in 1..=60usize {
        let b = bernoulli(2 * k);
        assert_eq!(b.is_positive(), k % 2 == 1, "B_{}", 2 * k);
    }
}

#[test]
fn binomial_conventions() {
    assert_eq!(binomial(5, 2), BigInt::from(10));
    assert_eq!(binomial(3, -1), BigInt::zero());
    assert_eq!(binomial(0, 0), BigInt::one());
    assert_eq!(binomial(4, 5), BigInt::zero());
}

#[test]
fn zeta_even_examples() {
    assert_eq!(zeta_even(2).unwrap(), PiValue::new(q(1, 6), 2).unwrap());
    assert_eq!(zeta_even(4).unwrap(), PiValue::new(q(1, 90), 4).unwrap());
    assert_eq!(zeta_even(6).unwrap(), PiValue::new(q(1, 945), 6).unwrap());
    assert!(zeta_even(3).is_err());
    assert!(zeta_even(0).is_err());
}

#[test]
fn zeta_even_positive() {
    for w in (2..=100).step_by(2) {
        assert!(zeta_even(w).unwrap().coefficient.is_positive(), "zeta({w})");
    }
}

#[test]
fn periodized_bernoulli_examples() {
    assert_eq!(periodized_bernoulli(1, &q(0, 1)), q(0, 1));
    assert_eq!(periodized_bernoulli(1, &q(3, 1)), q(0, 1));
    assert_eq!(periodized_bernoulli(1, &q(1, 4)), q(-1, 4));
    // x^2 - x + 1/6 at 1/2
    assert_eq!(periodized_bernoulli(2, &q(1, 2)), q(-1, 12));
    assert_eq!(periodized_bernoulli(2, &q(7, 2)), q(-1, 12));
    assert_eq!(periodized_bernoulli(2, &q(-1, 2)), q(-1, 12));
    // x^3 - 3x^2/2 + x/2 at 1/3
    assert_eq!(periodized_bernoulli(3, &q(1, 3)), q(1, 27) - q(1, 6) + q(1, 6));
}

#[test]
fn pi_value_two_pi_i_round_trip() {
    for w in (0..=20).step_by(2) {
        let c = q(17, 1234);
        let v = PiValue::from_two_pi_i(&c, w).unwrap();
        assert_eq!(v.to_two_pi_i(), c);
    }
    // (2 pi i)^2 = -4 pi^2
    assert_eq!(PiValue::from_two_pi_i(&q(1, 1), 2).unwrap().coefficient, q(-4, 1));
    assert!(PiValue::from_two_pi_i(&q(1, 1), 3).is_err());
}

#[test]
fn pi_value_json_schema() {
    let v = PiValue::new(q(4, 2835), 6).unwrap();
    let j = serde_json::to_value(&v).unwrap();
    assert_eq!(j["coefficient"]["num"], "4");
    assert_eq!(j["coefficient"]["den"], "2835");
    assert_eq!(j["pi_power"], 6);
    let back: PiValue = serde_json::from_value(j).unwrap();
    assert_eq!(back, v);
}

#[test]
fn pi_value_mismatched_add() {
    let a = PiValue::new(q(1, 2), 2).unwrap();
    let b = PiValue::new(q(1, 2), 4).unwrap();
    assert!(a.checked_add(&b).is_err());
    assert_eq!(a.checked_add(&a).unwrap().coefficient, q(1, 1));
}

#[test]
fn scalar_format() {
    assert_eq!(format_scalar(&q(6, 3)), "2");
    assert_eq!(format_scalar(&q(-3, 6)), "-1/2");
    assert_eq!(parse_scalar("10/4").unwrap(), q(5, 2));
    assert!(parse_scalar("1/0").is_err());
    assert!(parse_scalar("abc").is_err());
}

fn big_digits() -> impl Strategy<Value = String> {
    proptest::collection::vec(0u8..10, 200).prop_map(|d| {
        let mut s: String = d.iter().map(|x| char::from(b'0' + x)).collect();
        s.replace_range(0..1, "7");
        s
    })
}

fn small_rational() -> impl Strategy<Value = BigRational> {
    (-200i64..200, 1i64..60).prop_map(|(n, d)| q(n, d))
}

proptest! {
    #[test]
    fn scalar_round_trip(n in big_digits(), d in big_digits(), neg in any::<bool>()) {
        let mut num: BigInt = n.parse().unwrap();
        if neg {
            num = -num;
        }
        let v = BigRational::new(num, d.parse().unwrap());
        prop_assert_eq!(parse_scalar(&format_scalar(&v)).unwrap(), v);
    }

    #[test]
    fn pi_value_json_round_trip(n in big_digits(), d in big_digits(), half in 0u32..40) {
        let v = PiValue::new(BigRational::new(n.parse().unwrap(), d.parse().unwrap()), 2 * half).unwrap();
        let s = serde_json::to_string(&v).unwrap();
        let back: PiValue = serde_json::from_str(&s).unwrap();
        prop_assert_eq!(back, v);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn periodized_bernoulli_is_periodic(j in 0usize..=12, x in small_rational()) {
        let shifted = &x + BigRational::one();
        prop_assert_eq!(periodized_bernoulli(j, &shifted), periodized_bernoulli(j, &x));
    }

    #[test]
    fn periodized_bernoulli_reflection(j in 2usize..=12, x in small_rational()) {
        let sign = if j % 2 == 0 { q(1, 1) } else { q(-1, 1) };
        prop_assert_eq!(periodized_bernoulli(j, &(-x.clone())), sign * periodized_bernoulli(j, &x));
    }
}
