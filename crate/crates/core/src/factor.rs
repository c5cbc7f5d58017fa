//! Factored presentation of exact coefficients: prime powers over prime powers times k!.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exact::{factorial, PiValue};

const TRIAL_LIMIT: u64 = 10_000;
const MR_BASES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    /// (prime, exponent), increasing primes.
    pub primes: Vec<(BigUint, u32)>,
    /// Composite cofactor left unsplit when the effort budget ran out.
    pub unfactored: Option<BigUint>,
}

impl Factorization {
    pub fn value(&self) -> BigUint {
        let mut v = self.unfactored.clone().unwrap_or_else(BigUint::one);
        for (p, e) in &self.primes {
            v *= p.pow(*e);
        }
        v
    }

    pub fn to_json(&self) -> Value {
        json!({
            "primes": self.primes.iter().map(|(p, e)| json!([p.to_string(), e])).collect::<Vec<_>>(),
            "unfactored": self.unfactored.as_ref().map(|u| u.to_string()),
        })
    }

    fn push(&mut self, p: BigUint) {
        match self.primes.iter_mut().find(|(q, _)| *q == p) {
            Some(slot) => slot.1 += 1,
            None => self.primes.push((p, 1)),
        }
    }

    fn parts(&self, pow: &dyn Fn(&BigUint, u32) -> String) -> Vec<String> {
        let mut out: Vec<String> = self.primes.iter().map(|(p, e)| pow(p, *e)).collect();
        if let Some(u) = &self.unfactored {
            out.push(u.to_string());
        }
        out
    }
}

/// Miller-Rabin with the first thirteen prime bases (deterministic below 3.3e24).
pub fn is_probable_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if *n < two {
        return false;
    }
    for &p in &MR_BASES {
        let p = BigUint::from(p);
        if *n == p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    'bases: for &a in &MR_BASES {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == nm1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Brent's variant of Pollard rho; `None` when `budget` iterations pass without a split.
fn pollard_rho(n: &BigUint, budget: u64) -> Option<BigUint> {
    let one = BigUint::one();
    let mut used = 0u64;
    for c in 1u32..20 {
        let c = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &c) % n;
        let (mut x, mut y) = (BigUint::from(2u32), BigUint::from(2u32));
        let mut d = one.clone();
        while d == one {
            x = f(&x);
            y = f(&f(&y));
            let diff = if x > y { &x - &y } else { &y - &x };
            d = diff.gcd(n);
            used += 1;
            if used > budget {
                return None;
            }
        }
        if d != *n {
            return Some(d);
        }
    }
    None
}

/// Factors `n` with trial division then rho, spending at most `effort` rho steps per split.
pub fn factor_biguint(n: &BigUint, effort: u64) -> Factorization {
    let mut out = Factorization { primes: Vec::new(), unfactored: None };
    let mut n = n.clone();
    if n.is_zero() {
        out.unfactored = Some(n);
        return out;
    }
    let mut p = 2u64;
    while p <= TRIAL_LIMIT {
        let bp = BigUint::from(p);
        if &bp * &bp > n {
            break;
        }
        while (&n % &bp).is_zero() {
            n /= &bp;
            out.push(bp.clone());
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let mut stack = vec![n];
    let mut left = BigUint::one();
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if m <= BigUint::from(TRIAL_LIMIT * TRIAL_LIMIT) || is_probable_prime(&m) {
            out.push(m);
            continue;
        }
        match pollard_rho(&m, effort) {
            Some(d) => {
                let e = &m / &d;
                stack.push(d);
                stack.push(e);
            }
            None => left *= m,
        }
    }
    out.primes.sort();
    if !left.is_one() {
        out.unfactored = Some(left);
    }
    out
}

fn largest_prime_factor_small(n: &BigUint) -> Option<u64> {
    // only the primes below TRIAL_LIMIT matter for choosing k!
    let mut n = n.clone();
    let mut best = None;
    let mut p = 2u64;
    while p <= TRIAL_LIMIT && !n.is_one() {
        let bp = BigUint::from(p);
        if (&n % &bp).is_zero() {
            best = Some(p);
            while (&n % &bp).is_zero() {
                n /= &bp;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    best
}

fn odd_part(mut k: u64) -> u64 {
    while k.is_multiple_of(2) && k > 0 {
        k /= 2;
    }
    k
}

#[derive(Clone, Debug)]
pub struct FactoredValue {
    pub negative: bool,
    pub numerator: Factorization,
    pub denominator: Factorization,
    /// k when the denominator is written with a k! part.
    pub factorial: Option<u64>,
    pub pi_power: u32,
}

impl FactoredValue {
    /// The coefficient this form denotes.
    pub fn remultiply(&self) -> BigRational {
        let mut den = BigInt::from_biguint(Sign::Plus, self.denominator.value());
        if let Some(k) = self.factorial {
            den *= factorial(k);
        }
        let num = BigInt::from_biguint(Sign::Plus, self.numerator.value());
        let v = BigRational::new(num, den);
        if self.negative {
            -v
        } else {
            v
        }
    }

    fn side(f: &Factorization, sep: &str, pow: &dyn Fn(&BigUint, u32) -> String, k: Option<u64>) -> (String, usize) {
        let mut parts = f.parts(pow);
        if let Some(k) = k {
            parts.push(format!("{k}!"));
        }
        let n = parts.len();
        if parts.is_empty() {
            ("1".into(), 0)
        } else {
            (parts.join(sep), n)
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "negative": self.negative,
            "numerator": self.numerator.to_json(),
            "denominator": self.denominator.to_json(),
            "factorial": self.factorial,
            "pi_power": self.pi_power,
        })
    }

    pub fn to_latex(&self) -> String {
        let pow = |p: &BigUint, e: u32| if e == 1 { p.to_string() } else { format!("{p}^{{{e}}}") };
        let (num, _) = Self::side(&self.numerator, "\\cdot ", &pow, None);
        let (den, nd) = Self::side(&self.denominator, "\\cdot ", &pow, self.factorial);
        let sign = if self.negative { "-" } else { "" };
        let body = if nd == 0 { num } else { format!("\\frac{{{num}}}{{{den}}}") };
        // single-digit exponents print as 2^3 rather than 2^{3}
        let body = tidy_exponents(&body);
        format!("{sign}{body}\\pi^{{{}}}", self.pi_power)
    }

    pub fn to_text(&self) -> String {
        let pow = |p: &BigUint, e: u32| if e == 1 { p.to_string() } else { format!("{p}^{e}") };
        let (num, _) = Self::side(&self.numerator, " * ", &pow, None);
        let (den, nd) = Self::side(&self.denominator, " * ", &pow, self.factorial);
        let sign = if self.negative { "-" } else { "" };
        let body = match nd {
            0 => num,
            1 => format!("{num} / {den}"),
            _ => format!("{num} / ({den})"),
        };
        format!("{sign}{body} * pi^{}", self.pi_power)
    }
}

fn tidy_exponents(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let b = s.as_bytes();
    let mut i = 0;
    while i < b.len() {
        if b[i] == b'^' && i + 3 < b.len() && b[i + 1] == b'{' && b[i + 2].is_ascii_digit() && b[i + 3] == b'}' {
            out.push('^');
            out.push(b[i + 2] as char);
            i += 4;
            continue;
        }
        out.push(b[i] as char);
        i += 1;
    }
    out
}

/// Chooses k for the k! part: start at the largest small prime of the denominator, and grow k
/// while the odd part of k+1 still divides what is left of the denominator (k+1 < pi power).
fn choose_factorial(v: &BigRational, pi_power: u32) -> Option<u64> {
    let den = v.denom().magnitude();
    let mut k = largest_prime_factor_small(den)?;
    if k < 5 {
        return None;
    }
    loop {
        let next = k + 1;
        if next >= pi_power as u64 {
            break;
        }
        let rest = v * BigRational::from_integer(factorial(k));
        let od = BigUint::from(odd_part(next));
        if (rest.denom().magnitude() % &od).is_zero() {
            k = next;
        } else {
            break;
        }
    }
    Some(k)
}

pub fn factor_coefficient(value: &PiValue, effort: u64) -> Result<FactoredValue> {
    let v = &value.coefficient;
    let negative = v.numer().sign() == Sign::Minus;
    let abs = if negative { -v.clone() } else { v.clone() };
    let k = choose_factorial(&abs, value.pi_power);
    let rest = match k {
        Some(k) => &abs * BigRational::from_integer(factorial(k)),
        None => abs.clone(),
    };
    let out = FactoredValue {
        negative,
        numerator: factor_biguint(rest.numer().magnitude(), effort),
        denominator: factor_biguint(rest.denom().magnitude(), effort),
        factorial: k,
        pi_power: value.pi_power,
    };
    if out.remultiply() != *v {
        return Err(Error::InvalidArgument("factored form does not remultiply to the coefficient".into()));
    }
    Ok(out)
}

/// Factors a plain positive integer (for the CLI and tests).
pub fn factor_integer(n: &BigUint, effort: u64) -> Factorization {
    factor_biguint(n, effort)
}
