//! Explicit nested-sum formulas, one per algebra, as a second exact path next to the tree engine.

mod g2;
mod sl3;
mod sl5;
mod so5;
mod so7;

pub use g2::{g2_theorem_coefficient, g2_witten, G2Helpers, G2Variant};
pub use sl3::sl3_witten;
pub use sl5::{sl5_theorem_sum, sl5_witten};
pub use so5::{so5_general, so5_witten};
pub use so7::{so7_theorem_coefficient, so7_witten, sp6_witten, So7Helpers, So7Variant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::{bernoulli, binomial, factorial, ExactScalar, PiValue};

/// A closed form for one algebra; `zeta_w` returns zeta_W(s) at even s = `n`.
pub trait ClosedForm: Send + Sync {
    fn algebra(&self) -> &'static str;
    fn zeta_w(&self, n: u32) -> Result<PiValue>;
}

struct Sl3;
struct So5;
struct G2;
struct So7;
struct Sp6;
struct Sl5;

impl ClosedForm for Sl3 {
    fn algebra(&self) -> &'static str {
        "sl3"
    }
    fn zeta_w(&self, n: u32) -> Result<PiValue> {
        if n % 2 == 1 || n == 0 {
            return Err(Error::InvalidArgument(format!("sl3 closed form needs even s >= 2, got {n}")));
        }
        sl3_witten(n / 2)
    }
}

macro_rules! forward {
    ($t:ident, $name:literal, $f:path) => {
        impl ClosedForm for $t {
            fn algebra(&self) -> &'static str {
                $name
            }
            fn zeta_w(&self, n: u32) -> Result<PiValue> {
                $f(n)
            }
        }
    };
}

forward!(So5, "so5", so5_witten);
forward!(G2, "g2", g2_witten);
forward!(So7, "so7", so7_witten);
forward!(Sp6, "sp6", sp6_witten);
forward!(Sl5, "sl5", sl5_witten);

pub fn registry() -> Vec<Box<dyn ClosedForm>> {
    vec![Box::new(Sl3), Box::new(So5), Box::new(G2), Box::new(So7), Box::new(Sp6), Box::new(Sl5)]
}

pub fn closed_form(algebra: &str) -> Result<Box<dyn ClosedForm>> {
    registry()
        .into_iter()
        .find(|c| c.algebra().eq_ignore_ascii_case(algebra))
        .ok_or_else(|| Error::UnknownAlgebra(algebra.to_string()))
}

pub(crate) fn even_n(n: u32, who: &str) -> Result<()> {
    if n < 2 || n % 2 == 1 {
        return Err(Error::InvalidArgument(format!("{who} needs a positive even n, got {n}")));
    }
    Ok(())
}

pub(crate) fn c(t: i64, k: i64) -> ExactScalar {
    BigRational::from_integer(binomial(t, k))
}

/// B_n with B_n = 0 for negative n.
pub(crate) fn b(n: i64) -> ExactScalar {
    if n < 0 {
        BigRational::zero()
    } else {
        bernoulli(n as usize)
    }
}

pub(crate) fn fact(n: i64) -> BigInt {
    factorial(n as u64)
}

/// B_j B_{w-j} / (j! (w-j)!), zero outside 0..=w.
pub(crate) fn beta(j: i64, w: i64) -> ExactScalar {
    if j < 0 || j > w {
        return BigRational::zero();
    }
    b(j) * b(w - j) / BigRational::from_integer(fact(j) * fact(w - j))
}

/// (-1)^e
pub(crate) fn sgn(e: i64) -> ExactScalar {
    BigRational::from_integer(BigInt::from(if e.rem_euclid(2) == 1 { -1 } else { 1 }))
}

/// Pi-power coefficient of c (2 pi i)^w.
pub(crate) fn from_z(c: &ExactScalar, w: u32) -> Result<PiValue> {
    PiValue::from_two_pi_i(c, w)
}
