use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::c;
use crate::error::{Error, Result};
use crate::exact::{zeta_even, ExactScalar, PiValue};

fn zeta_coef(k: u32) -> Result<ExactScalar> {
    if k == 0 {
        return Ok(BigRational::new((-1).into(), 2.into()));
    }
    Ok(zeta_even(k)?.coefficient)
}

/// zeta_W(2m; sl3) = (4^{m+1}/3) sum_{i even <= 2m} C(4m-i-1, 2m-1) zeta(i) zeta(6m-i), with zeta(0) = -1/2.
pub fn sl3_witten(m: u32) -> Result<PiValue> {
    if m < 1 {
        return Err(Error::InvalidArgument("m must be at least 1".into()));
    }
    let m = m as i64;
    let mut s = BigRational::zero();
    for i in (0..=2 * m).step_by(2) {
        s += c(4 * m - i - 1, 2 * m - 1) * zeta_coef(i as u32)? * zeta_coef((6 * m - i) as u32)?;
    }
    let pre = BigRational::new(BigInt::from(4).pow((m + 1) as u32), BigInt::from(3));
    PiValue::new(s * pre, (6 * m) as u32)
}
