use num_bigint::BigUint;
use proptest::prelude::*;
use wittenz::catalog::get_algebra;
use wittenz::exact::{factorial, ratio};
use wittenz::factor::*;
use wittenz::method::compute;
use wittenz::oracle::Normalization;
use wittenz::PiValue;

fn big(s: &str) -> BigUint {
    s.parse().unwrap()
}

#[test]
fn small_integer() {
    let f = factor_integer(&BigUint::from(14400u32), 1000);
    let p: Vec<(u64, u32)> = f.primes.iter().map(|(p, e)| (p.try_into().unwrap(), *e)).collect();
    assert_eq!(p, vec![(2, 6), (3, 2), (5, 2)]);
    assert!(f.unfactored.is_none());
}

#[test]
fn sl5_denominator() {
    let n = BigUint::from(650970015609375u64);
    let f = factor_integer(&n, 10_000);
    assert_eq!(f.value(), n);
    assert!(f.unfactored.is_none());
    assert!(f.primes.iter().all(|(p, _)| is_probable_prime(p)));
}

#[test]
fn primality() {
    for p in [2u64, 3, 97, 1_000_000_007, 2_305_843_009_213_693_951] {
        assert!(is_probable_prime(&BigUint::from(p)), "{p}");
    }
    for c in [0u64, 1, 4, 561, 1_000_000_007 * 3] {
        assert!(!is_probable_prime(&BigUint::from(c)), "{c}");
    }
    assert!(is_probable_prime(&big("170141183460469231731687303715884105727")));
}

#[test]
fn hard_semiprime_left_unfactored() {
    // product of two 20-digit primes
    let p = big("10000000000000000051");
    let q = big("10000000000000000087");
    assert!(is_probable_prime(&p) && is_probable_prime(&q));
    let n = &p * &q;
    let f = factor_integer(&n, 10);
    assert_eq!(f.value(), n);
    let u = f.unfactored.expect("cofactor should survive a tiny budget");
    assert!(!is_probable_prime(&u));
}

#[test]
fn table_latex_strings() {
    let so7 = compute(&get_algebra("so7").unwrap(), 1, "closed", Normalization::Bare).unwrap();
    let f = factor_coefficient(&so7, 100_000).unwrap();
    assert_eq!(f.to_latex(), "\\frac{2^3\\cdot 19}{3^3\\cdot 7\\cdot 17!}\\pi^{18}");
    assert_eq!(f.factorial, Some(17));
    let sl5 = compute(&get_algebra("sl5").unwrap(), 1, "closed", Normalization::Bare).unwrap();
    let f = factor_coefficient(&sl5, 100_000).unwrap();
    assert_eq!(f.remultiply(), ratio(1, 650970015609375));
    assert_eq!(f.to_latex(), "\\frac{2^{16}\\cdot 13}{3^2\\cdot 5^3\\cdot 7\\cdot 11\\cdot 18!}\\pi^{20}");
    assert_eq!(f.factorial, Some(18));
}

#[test]
fn factorial_choice_is_a_presentation_only() {
    // 1/18! can be read with a 17! part or an 18! part; either remultiplies
    let v = PiValue::new(num_rational::BigRational::new(1.into(), factorial(18)), 18).unwrap();
    let f = factor_coefficient(&v, 1000).unwrap();
    assert_eq!(f.remultiply(), v.coefficient);
    assert_eq!(f.factorial, Some(17));
    let text = f.to_text();
    assert!(text.contains("17!") && text.ends_with("pi^18"), "{text}");
}

#[test]
fn negative_and_json() {
    let v = PiValue::new(ratio(-19, 3 * 120), 4).unwrap();
    let f = factor_coefficient(&v, 1000).unwrap();
    assert!(f.negative);
    assert!(f.to_latex().starts_with('-'));
    let j = f.to_json();
    assert_eq!(j["negative"], true);
    assert_eq!(j["pi_power"], 4);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn remultiplies(num in 1i64..1_000_000_000, den in 1i64..1_000_000_000, k in 0u64..30, w in 1u32..40) {
        let q = num_rational::BigRational::new(num.into(), factorial(k) * num_bigint::BigInt::from(den));
        let v = PiValue::new(q.clone(), 2 * w).unwrap();
        let f = factor_coefficient(&v, 2000).unwrap();
        prop_assert_eq!(f.remultiply(), q);
        prop_assert!(f.numerator.primes.iter().chain(&f.denominator.primes).all(|(p, _)| is_probable_prime(p)));
    }
}
