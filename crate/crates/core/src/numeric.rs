//! Deterministic fixed-point summation.
//!
//! A term 1/(d_1 d_2 ... d_k) is represented by floor(floor(floor(S/d_1)/d_2).../d_k) with
//! S = 10^digits, which equals floor(S/(d_1...d_k)). Sums of such terms are exact integer
//! additions, so the result does not depend on summation order.

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::exact::PiValue;

/// mantissa / 10^digits
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Real {
    pub mantissa: BigInt,
    pub digits: u32,
}

pub fn ten_pow(d: u32) -> BigInt {
    num_traits::pow(BigInt::from(10u32), d as usize)
}

impl Real {
    pub fn zero(digits: u32) -> Real {
        Real { mantissa: BigInt::zero(), digits }
    }

    pub fn from_rational(q: &BigRational, digits: u32) -> Real {
        Real { mantissa: (q.numer() * ten_pow(digits)).div_floor(q.denom()), digits }
    }

    pub fn rescale(&self, digits: u32) -> Real {
        let mantissa = if digits >= self.digits {
            &self.mantissa * ten_pow(digits - self.digits)
        } else {
            self.mantissa.div_floor(&ten_pow(self.digits - digits))
        };
        Real { mantissa, digits }
    }

    pub fn mul(&self, o: &Real) -> Real {
        let d = self.digits.max(o.digits);
        let m = (&self.mantissa * &o.mantissa).div_floor(&ten_pow(self.digits + o.digits - d));
        Real { mantissa: m, digits: d }
    }

    pub fn mul_rational(&self, q: &BigRational) -> Real {
        Real { mantissa: (&self.mantissa * q.numer()).div_floor(q.denom()), digits: self.digits }
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    /// Scientific notation with `sig` significant digits (truncated).
    pub fn to_scientific(&self, sig: usize) -> String {
        if self.mantissa.is_zero() {
            return "0".into();
        }
        let neg = self.mantissa.is_negative();
        let s = self.mantissa.abs().to_string();
        let exp = s.len() as i64 - 1 - self.digits as i64;
        let take = sig.min(s.len());
        let (head, tail) = s[..take].split_at(1);
        let mut out = String::new();
        if neg {
            out.push('-');
        }
        out.push_str(head);
        if !tail.is_empty() {
            out.push('.');
            out.push_str(tail);
        }
        out.push_str(&format!("e{exp}"));
        out
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_scientific(self.digits as usize))
    }
}

/// Largest d with |a - b| * 10^d <= |a|, capped at `cap`.
pub fn matching_digits(a: &Real, b: &Real, cap: u32) -> u32 {
    let d = a.digits.max(b.digits);
    let (a, b) = (a.rescale(d), b.rescale(d));
    let diff = (&a.mantissa - &b.mantissa).abs();
    let mag = a.mantissa.abs();
    if diff.is_zero() {
        return cap;
    }
    let mut k = 0u32;
    let mut t = diff;
    while k < cap {
        t *= 10u32;
        if t > mag {
            break;
        }
        k += 1;
    }
    k
}

fn arctan_inv(x: u64, scale: &BigInt) -> BigInt {
    // arctan(1/x) = sum (-1)^k / ((2k+1) x^{2k+1})
    let x2 = BigInt::from(x * x);
    let mut power = scale / BigInt::from(x);
    let mut sum = BigInt::zero();
    let mut k = 0u64;
    while !power.is_zero() {
        let t = &power / BigInt::from(2 * k + 1);
        if k.is_multiple_of(2) {
            sum += t;
        } else {
            sum -= t;
        }
        power /= &x2;
        k += 1;
    }
    sum
}

/// pi to `digits` decimals (Machin's formula).
pub fn pi(digits: u32) -> Real {
    let guard = 10;
    let scale = ten_pow(digits + guard);
    let p = arctan_inv(5, &scale) * 16 - arctan_inv(239, &scale) * 4;
    Real { mantissa: p / ten_pow(guard), digits }
}

/// Numeric value of an exact multiple of a power of pi.
pub fn evaluate_pi_value(v: &PiValue, digits: u32) -> Real {
    let guard = 10 + (v.pi_power as f64).log10().ceil() as u32;
    let p = pi(digits + guard);
    let mut acc = Real { mantissa: ten_pow(digits + guard), digits: digits + guard };
    for _ in 0..v.pi_power {
        acc = acc.mul(&p);
    }
    acc.mul_rational(&v.coefficient).rescale(digits)
}

/// (hi * 2^64 + lo) / d and the remainder, for hi < d.
#[inline(always)]
fn div_wide(hi: u64, lo: u64, d: u64) -> (u64, u64) {
    #[cfg(target_arch = "x86_64")]
    {
        let (q, r): (u64, u64);
        // SAFETY: hi < d, so the quotient fits in 64 bits and `div` cannot fault.
        unsafe {
            std::arch::asm!("div {d}", d = in(reg) d, inout("rax") lo => q, inout("rdx") hi => r, options(pure, nomem, nostack));
        }
        (q, r)
    }
    #[cfg(not(target_arch = "x86_64"))]
    {
        let cur = ((hi as u128) << 64) | lo as u128;
        ((cur / d as u128) as u64, (cur % d as u128) as u64)
    }
}

/// Big-endian fixed-width unsigned integer supporting division by a machine word.
#[derive(Clone, Debug)]
pub struct Quotient {
    limbs: Vec<u64>,
    lead: usize,
}

impl Quotient {
    pub fn from_biguint(n: &BigUint, width: usize) -> Quotient {
        let mut le = n.to_u64_digits();
        assert!(le.len() <= width, "fixed-point width too small");
        le.resize(width, 0);
        le.reverse();
        let mut q = Quotient { limbs: le, lead: 0 };
        q.normalize();
        q
    }

    fn normalize(&mut self) {
        while self.lead < self.limbs.len() && self.limbs[self.lead] == 0 {
            self.lead += 1;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.lead == self.limbs.len()
    }

    pub fn div_assign(&mut self, d: u64) {
        let mut rem: u64 = 0;
        for x in &mut self.limbs[self.lead..] {
            let (q, r) = div_wide(rem, *x, d);
            *x = q;
            rem = r;
        }
        self.normalize();
    }

    /// Copies `src` into self then divides.
    pub fn set_div(&mut self, src: &Quotient, d: u64) {
        self.limbs.copy_from_slice(&src.limbs);
        self.lead = src.lead;
        self.div_assign(d);
    }
}

/// Big-endian accumulator, two limbs wider than the quotients it collects.
#[derive(Clone, Debug)]
pub struct Accumulator {
    limbs: Vec<u64>,
}

impl Accumulator {
    pub fn new(width: usize) -> Accumulator {
        Accumulator { limbs: vec![0; width + 2] }
    }

    pub fn add(&mut self, q: &Quotient) {
        let off = self.limbs.len() - q.limbs.len();
        let mut carry = false;
        for i in (q.lead..q.limbs.len()).rev() {
            let (s, c1) = self.limbs[off + i].overflowing_add(q.limbs[i]);
            let (s, c2) = s.overflowing_add(carry as u64);
            self.limbs[off + i] = s;
            carry = c1 || c2;
        }
        let mut i = off + q.lead;
        while carry {
            i -= 1;
            let (s, c) = self.limbs[i].overflowing_add(1);
            self.limbs[i] = s;
            carry = c;
        }
    }

    pub fn to_biguint(&self) -> BigUint {
        let mut le = self.limbs.clone();
        le.reverse();
        let bytes: Vec<u32> = le.iter().flat_map(|&x| [x as u32, (x >> 32) as u32]).collect();
        BigUint::new(bytes)
    }
}

/// Product of |values| raised to exponents, packed greedily into machine words.
pub fn pack_divisors(factors: &[(u64, u32)], out: &mut Vec<u64>) {
    let mut cur: u64 = 1;
    for &(v, e) in factors {
        for _ in 0..e {
            match cur.checked_mul(v) {
                Some(p) => cur = p,
                None => {
                    out.push(cur);
                    cur = v;
                }
            }
        }
    }
    if cur != 1 {
        out.push(cur);
    }
}

pub struct FixedPoint {
    pub digits: u32,
    pub guard: u32,
    pub width: usize,
    pub one: Quotient,
}

impl FixedPoint {
    pub fn new(digits: u32, guard: u32) -> FixedPoint {
        let total = digits + guard;
        let s = ten_pow(total).to_biguint().unwrap();
        let width = (s.bits() as usize).div_ceil(64) + 1;
        FixedPoint { digits, guard, width, one: Quotient::from_biguint(&s, width) }
    }

    pub fn finish(&self, pos: &Accumulator, neg: &Accumulator) -> Real {
        let p = BigInt::from_biguint(Sign::Plus, pos.to_biguint());
        let n = BigInt::from_biguint(Sign::Plus, neg.to_biguint());
        Real { mantissa: p - n, digits: self.digits + self.guard }.rescale(self.digits)
    }
}

/// Truncated full-lattice sum of prod <x, sigma_j>^{-e_j} over 0 < max|x_i| <= bound,
/// skipping x on which some form vanishes. This is the real number Z(sigma, e).
pub fn truncated_lattice_sum(columns: &[Vec<i64>], exps: &[u32], bound: i64, precision_digits: u32) -> Real {
    let ell = columns.first().map_or(0, |c| c.len());
    let fp = FixedPoint::new(precision_digits, 20);
    let mut pos = Accumulator::new(fp.width);
    let mut neg = Accumulator::new(fp.width);
    let w: u32 = exps.iter().sum();
    let mut x = vec![-bound; ell];
    let mut q = fp.one.clone();
    let mut divs = Vec::new();
    let mut factors = Vec::new();
    'outer: loop {
        if x.iter().any(|&c| c != 0) {
            factors.clear();
            let mut negative = false;
            let mut skip = false;
            for (col, &e) in columns.iter().zip(exps) {
                if e == 0 {
                    continue;
                }
                let y: i64 = col.iter().zip(&x).map(|(a, b)| a * b).sum();
                if y == 0 {
                    skip = true;
                    break;
                }
                if y < 0 && e % 2 == 1 {
                    negative = !negative;
                }
                factors.push((y.unsigned_abs(), e));
            }
            if !skip && w > 0 {
                divs.clear();
                pack_divisors(&factors, &mut divs);
                q.set_div(&fp.one, divs.first().copied().unwrap_or(1));
                for &d in divs.iter().skip(1) {
                    if q.is_zero() {
                        break;
                    }
                    q.div_assign(d);
                }
                if negative {
                    neg.add(&q);
                } else {
                    pos.add(&q);
                }
            }
        }
        for i in (0..ell).rev() {
            if x[i] < bound {
                x[i] += 1;
                continue 'outer;
            }
            x[i] = -bound;
        }
        break;
    }
    fp.finish(&pos, &neg)
}
