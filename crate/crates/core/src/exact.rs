//! Exact rationals, Bernoulli numbers and the `PiValue` result type.

use std::fmt;
use std::str::FromStr;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type ExactScalar = BigRational;

pub fn int(n: i64) -> ExactScalar {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> ExactScalar {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `base^e` for a possibly negative exponent.
pub fn rpow(base: &ExactScalar, e: i64) -> ExactScalar {
    if e >= 0 {
        num_traits::pow(base.clone(), e as usize)
    } else {
        num_traits::pow(base.recip(), (-e) as usize)
    }
}

pub fn pow2(e: i64) -> ExactScalar {
    if e >= 0 {
        BigRational::from_integer(BigInt::one() << (e as usize))
    } else {
        BigRational::new(BigInt::one(), BigInt::one() << ((-e) as usize))
    }
}

/// Decimal "num/den" form with the denominator omitted when it is 1.
pub fn format_scalar(q: &ExactScalar) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_scalar(s: &str) -> Result<ExactScalar> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n = BigInt::from_str(n).map_err(|e| Error::Parse(format!("{s}: {e}")))?;
    let d = BigInt::from_str(d).map_err(|e| Error::Parse(format!("{s}: {e}")))?;
    if d.is_zero() {
        return Err(Error::Parse(format!("{s}: zero denominator")));
    }
    Ok(BigRational::new(n, d))
}

static BERNOULLI: RwLock<Vec<BigRational>> = RwLock::new(Vec::new());

fn extend_bernoulli(table: &mut Vec<BigRational>, upto: usize) {
    if table.is_empty() {
        table.push(BigRational::one());
    }
    while table.len() <= upto {
        let n = table.len();
        if n > 1 && n % 2 == 1 {
            table.push(BigRational::zero());
            continue;
        }
        // sum_{k<n} C(n+1,k) B_k + (n+1) B_n = 0
        let mut c = BigInt::one();
        let mut acc = BigRational::zero();
        for (k, b) in table.iter().enumerate() {
            if !b.is_zero() {
                acc += b * &c;
            }
            c = c * BigInt::from(n + 1 - k) / BigInt::from(k + 1);
        }
        table.push(-acc / BigInt::from(n + 1));
    }
}

/// Pre-size the Bernoulli cache; `WITTENZ_BERNOULLI_MAX` raises the default.
pub fn warm_bernoulli(upto: usize) {
    let env = std::env::var("WITTENZ_BERNOULLI_MAX")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .unwrap_or(0);
    let upto = upto.max(env);
    let mut t = BERNOULLI.write().unwrap();
    extend_bernoulli(&mut t, upto);
}

/// B_n with B_1 = -1/2.
pub fn bernoulli(n: usize) -> BigRational {
    {
        let t = BERNOULLI.read().unwrap();
        if let Some(b) = t.get(n) {
            return b.clone();
        }
    }
    let mut t = BERNOULLI.write().unwrap();
    extend_bernoulli(&mut t, n.max(64));
    t[n].clone()
}

/// Bernoulli numbers B_0..=B_n in one lock acquisition.
pub fn bernoulli_table(n: usize) -> Vec<BigRational> {
    bernoulli(n);
    BERNOULLI.read().unwrap()[..=n].to_vec()
}

static PASCAL: RwLock<Vec<Vec<BigInt>>> = RwLock::new(Vec::new());

fn choose_nonneg(t: u64, k: u64) -> BigInt {
    let t = t as usize;
    let k = k as usize;
    {
        let p = PASCAL.read().unwrap();
        if t < p.len() {
            return p[t][k].clone();
        }
    }
    if t > 600 {
        let mut r = BigInt::one();
        for i in 0..k {
            r = r * BigInt::from(t - i) / BigInt::from(i + 1);
        }
        return r;
    }
    let mut p = PASCAL.write().unwrap();
    while p.len() <= t {
        let n = p.len();
        let mut row = vec![BigInt::one(); n + 1];
        for j in 1..n {
            row[j] = &p[n - 1][j - 1] + &p[n - 1][j];
        }
        p.push(row);
    }
    p[t][k].clone()
}

/// Binomial coefficient with C(t,-1) = 0 and the generalized value for t < 0.
pub fn binomial(t: i64, k: i64) -> BigInt {
    if k < 0 {
        return BigInt::zero();
    }
    if t >= 0 {
        if k > t {
            return BigInt::zero();
        }
        return choose_nonneg(t as u64, k.min(t - k) as u64);
    }
    // C(t,k) = (-1)^k C(k-t-1,k)
    let c = choose_nonneg((k - t - 1) as u64, k as u64);
    if k % 2 == 1 {
        -c
    } else {
        c
    }
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, k| a * BigInt::from(k))
}

/// A rational multiple of an even power of pi.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiValue {
    pub coefficient: ExactScalar,
    pub pi_power: u32,
}

impl PiValue {
    pub fn new(coefficient: ExactScalar, pi_power: u32) -> Result<Self> {
        if !pi_power.is_multiple_of(2) {
            return Err(Error::OddWeight(pi_power));
        }
        Ok(PiValue { coefficient, pi_power })
    }

    /// Converts a coefficient of (2 pi i)^w into a coefficient of pi^w.
    pub fn from_two_pi_i(c: &ExactScalar, w: u32) -> Result<Self> {
        if !w.is_multiple_of(2) {
            return Err(Error::OddWeight(w));
        }
        let mut v = c * pow2(w as i64);
        if (w / 2) % 2 == 1 {
            v = -v;
        }
        PiValue::new(v, w)
    }

    /// Inverse of `from_two_pi_i`.
    pub fn to_two_pi_i(&self) -> ExactScalar {
        let mut v = &self.coefficient / pow2(self.pi_power as i64);
        if (self.pi_power / 2) % 2 == 1 {
            v = -v;
        }
        v
    }

    pub fn checked_add(&self, other: &PiValue) -> Result<PiValue> {
        if self.pi_power != other.pi_power {
            return Err(Error::PiPowerMismatch { expected: self.pi_power, found: other.pi_power });
        }
        Ok(PiValue { coefficient: &self.coefficient + &other.coefficient, pi_power: self.pi_power })
    }

    pub fn scale(&self, q: &ExactScalar) -> PiValue {
        PiValue { coefficient: &self.coefficient * q, pi_power: self.pi_power }
    }
}

impl fmt::Display for PiValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})*pi^{}", format_scalar(&self.coefficient), self.pi_power)
    }
}

#[derive(Serialize, Deserialize)]
struct RationalJson {
    num: String,
    den: String,
}

#[derive(Serialize, Deserialize)]
struct PiValueJson {
    coefficient: RationalJson,
    pi_power: u32,
}

impl Serialize for PiValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PiValueJson {
            coefficient: RationalJson {
                num: self.coefficient.numer().to_string(),
                den: self.coefficient.denom().to_string(),
            },
            pi_power: self.pi_power,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PiValue {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = PiValueJson::deserialize(d)?;
        let q = parse_scalar(&format!("{}/{}", j.coefficient.num, j.coefficient.den))
            .map_err(serde::de::Error::custom)?;
        PiValue::new(q, j.pi_power).map_err(serde::de::Error::custom)
    }
}

/// zeta(w) for even w >= 2 as a multiple of pi^w.
pub fn zeta_even(w: u32) -> Result<PiValue> {
    if w < 2 || !w.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!("zeta_even needs even w >= 2, got {w}")));
    }
    // 2 zeta(w) = -(2 pi i)^w B_w / w!
    let c = -bernoulli(w as usize) / BigRational::from_integer(factorial(w as u64) * 2);
    PiValue::from_two_pi_i(&c, w)
}

/// Fractional part in [0,1).
pub fn frac(x: &ExactScalar) -> ExactScalar {
    x - BigRational::from_integer(x.numer().div_floor(x.denom()))
}

/// The 1-periodic Bernoulli function, with the value 0 for j = 1 at integers.
pub fn periodized_bernoulli(j: usize, x: &ExactScalar) -> ExactScalar {
    let x = frac(x);
    if j == 0 {
        return BigRational::one();
    }
    if j == 1 && x.is_zero() {
        return BigRational::zero();
    }
    if x.is_zero() {
        return bernoulli(j);
    }
    let b = bernoulli_table(j);
    // B_j(x) = sum_k C(j,k) B_{j-k} x^k, Horner in x
    let mut acc = BigRational::zero();
    for k in (0..=j).rev() {
        acc = acc * &x + &b[j - k] * binomial(j as i64, k as i64);
    }
    acc
}

pub fn is_positive(q: &ExactScalar) -> bool {
    q.is_positive()
}

pub fn to_f64(q: &ExactScalar) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}
