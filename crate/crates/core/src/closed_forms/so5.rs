use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{beta, c, even_n, from_z};
use crate::error::{Error, Result};
use crate::exact::{pow2, PiValue};

/// Z for the so5 matrix with exponents (a, b, c, d) on columns (1,0), (0,1), (1,1), (1,2).
pub fn so5_general(a: u32, b: u32, cc: u32, d: u32) -> Result<PiValue> {
    let w = a + b + cc + d;
    if w % 2 == 1 {
        return Err(Error::OddWeight(w));
    }
    let e = [a, b, cc, d];
    if e.contains(&0) {
        return Err(Error::InvalidArgument("exponents must be positive".into()));
    }
    if e.iter().filter(|&&x| x == 1).count() > 1 {
        return Err(Error::InvalidArgument("at most one exponent may equal 1".into()));
    }
    let (a, b, d, w) = (a as i64, b as i64, d as i64, w as i64);
    let be = |j: i64| beta(j, w);
    let mut s = BigRational::zero();
    for i in 0..=b {
        let mut inner = BigRational::zero();
        for j in 0..=i {
            inner += c(w - d - j - 1, w - d - i - 1) * be(j);
        }
        for j in 0..=w - d - i {
            inner += c(w - d - j - 1, i - 1) * be(j);
        }
        s += c(a + b - i - 1, a - 1) * inner;
    }
    for i in 0..=a {
        let mut inner = BigRational::zero();
        for j in 0..=d {
            inner += c(d + i - j - 1, i - 1) * be(j) * pow2(j - d - i);
        }
        for j in 0..=i {
            inner += c(d + i - j - 1, d - 1) * be(j) * pow2(j - d - i);
        }
        s += c(a + b - i - 1, b - 1) * inner;
    }
    from_z(&s, w as u32)
}

/// zeta_W(n; so5) for even n.
pub fn so5_witten(n: u32) -> Result<PiValue> {
    even_n(n, "so5_witten")?;
    let n = n as i64;
    let w = 4 * n;
    let be = |j: i64| beta(j, w);
    let mut s = BigRational::zero();
    for i in 0..=n {
        let mut t = BigRational::zero();
        for j in 0..=3 * n - i {
            t += c(3 * n - j - 1, i - 1) * be(j);
        }
        for j in 0..=i {
            t += c(3 * n - j - 1, 3 * n - i - 1) * be(j);
        }
        for j in 0..=n {
            t += pow2(j - n - i) * c(n + i - j - 1, i - 1) * be(j);
        }
        for j in 0..=i {
            t += pow2(j - n - i) * c(n + i - j - 1, n - 1) * be(j);
        }
        s += c(2 * n - i - 1, n - 1) * t;
    }
    let pre = BigRational::new(BigInt::from(6).pow(n as u32), BigInt::from(8)) * pow2(w);
    PiValue::new(s * pre, w as u32)
}
