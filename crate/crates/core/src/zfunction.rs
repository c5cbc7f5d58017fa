//! The Z(...) object: forms with exponents, and its exact base cases.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{bernoulli, factorial, periodized_bernoulli, pow2, rpow, ExactScalar, PiValue};
use crate::linalg;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormMatrix {
    pub ell: usize,
    pub columns: Vec<Vec<i64>>,
    pub exponents: Vec<u32>,
}

impl FormMatrix {
    pub fn new(columns: Vec<Vec<i64>>, exponents: Vec<u32>) -> Result<Self> {
        let ell = columns.first().map_or(0, |c| c.len());
        let m = FormMatrix { ell, columns, exponents };
        m.check()?;
        Ok(m)
    }

    pub fn check(&self) -> Result<()> {
        if self.ell == 0 {
            return Err(Error::InvalidArgument("empty matrix".into()));
        }
        if self.columns.len() != self.exponents.len() {
            return Err(Error::InvalidArgument("columns and exponents differ in length".into()));
        }
        if self.columns.len() < self.ell {
            return Err(Error::InvalidArgument("fewer columns than rows".into()));
        }
        for c in &self.columns {
            if c.len() != self.ell {
                return Err(Error::InvalidArgument(format!("column {c:?} has wrong length")));
            }
            if c.iter().all(|&x| x == 0) {
                return Err(Error::InvalidArgument("zero column".into()));
            }
        }
        Ok(())
    }

    pub fn weight(&self) -> u32 {
        self.exponents.iter().sum()
    }

    /// Same value with zero-exponent columns dropped.
    pub fn without_absent(&self) -> FormMatrix {
        let (columns, exponents) = self
            .columns
            .iter()
            .zip(&self.exponents)
            .filter(|(_, &e)| e > 0)
            .map(|(c, &e)| (c.clone(), e))
            .unzip();
        FormMatrix { ell: self.ell, columns, exponents }
    }
}

/// sum'_{N} prod (c_j N)^{-e_j} as a coefficient of (2 pi i)^w.
pub fn rank_one_sum(scalars: &[i64], exps: &[u32]) -> ExactScalar {
    let w: u32 = exps.iter().sum();
    if w % 2 == 1 || w == 0 {
        return BigRational::zero();
    }
    let mut r = -bernoulli(w as usize) / BigRational::from_integer(factorial(w as u64));
    for (&c, &e) in scalars.iter().zip(exps) {
        r *= rpow(&BigRational::from_integer(BigInt::from(c)), -(e as i64));
    }
    r
}

/// Square case: (-1)^l / (|det| prod e_j!) sum_{z in Z^l / S Z^l} prod B_{e_j}((S^-1 z)_j),
/// as a coefficient of (2 pi i)^w. Zero exponents contribute the factor B_0 = 1.
pub fn square_leaf(cols: &[Vec<i64>], exps: &[u32]) -> Result<ExactScalar> {
    let ell = cols.len();
    let mut scale = BigRational::one();
    let mut prim = Vec::with_capacity(ell);
    for (c, &e) in cols.iter().zip(exps) {
        let (p, g) = linalg::primitive(c);
        if g != 1 {
            scale *= rpow(&BigRational::from_integer(BigInt::from(g)), -(e as i64));
        }
        prim.push(p);
    }
    let d = linalg::det(&prim);
    if d.is_zero() {
        return Err(Error::Singular);
    }
    let mut total = BigRational::zero();
    if d.abs().is_one() {
        total = exps.iter().fold(BigRational::one(), |a, &e| a * periodized_bernoulli(e as usize, &BigRational::zero()));
    } else {
        let inv = linalg::inverse(&prim).ok_or(Error::Singular)?;
        let reps = linalg::coset_representatives(&prim).ok_or(Error::Singular)?;
        for z in reps {
            let mut p = BigRational::one();
            for (j, &e) in exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let v: BigRational = inv[j].iter().zip(&z).map(|(a, &zi)| a * BigInt::from(zi)).sum();
                p *= periodized_bernoulli(e as usize, &v);
                if p.is_zero() {
                    break;
                }
            }
            total += p;
        }
        total /= BigRational::from_integer(d.abs());
    }
    for &e in exps {
        total /= BigRational::from_integer(factorial(e as u64));
    }
    if ell % 2 == 1 {
        total = -total;
    }
    Ok(total * scale)
}

/// Exact value of a 2x2 matrix with two positive exponents.
pub fn base_case_rank2(m: &FormMatrix) -> Result<PiValue> {
    m.check()?;
    if m.ell != 2 || m.columns.len() != 2 {
        return Err(Error::InvalidArgument("base case needs a 2x2 matrix".into()));
    }
    let w = m.weight();
    if w % 2 == 1 {
        return Err(Error::OddWeight(w));
    }
    if w < 4 || m.exponents.contains(&0) {
        return Err(Error::InvalidArgument(format!("base case needs both exponents >= 1 and weight >= 4, got {:?}", m.exponents)));
    }
    let c = square_leaf(&m.columns, &m.exponents)?;
    PiValue::from_two_pi_i(&c, w)
}

/// B_l B_{w-l} / (l! (w-l)!), zero outside 0..=w.
pub fn beta(l: i64, w: i64) -> ExactScalar {
    if l < 0 || l > w {
        return BigRational::zero();
    }
    let (l, r) = (l as usize, (w - l) as usize);
    bernoulli(l) * bernoulli(r) / BigRational::from_integer(factorial(l as u64) * factorial(r as u64))
}

/// Coefficient of (2 pi i)^w for a determinant-2 pair of primitive forms.
pub fn special_delta2(l: i64, w: i64) -> Result<ExactScalar> {
    if w < 4 || w % 2 == 1 || l < 0 || l > w {
        return Err(Error::InvalidArgument(format!("special_delta2 needs 0 <= l <= w, w even >= 4; got ({l},{w})")));
    }
    let one = BigRational::one();
    let corr = &one + (pow2(1 - l) - &one) * (pow2(1 - (w - l)) - &one);
    Ok(beta(l, w) * corr / BigInt::from(2))
}

/// alpha_{l,w}(delta) for |delta| in {1, 2}.
pub fn alpha(l: i64, w: i64, delta: i64) -> Result<ExactScalar> {
    match delta.abs() {
        1 => Ok(BigRational::one()),
        2 => Ok(BigRational::one() - pow2(-l) - pow2(l - w) + pow2(1 - w)),
        _ => Err(Error::Precondition(format!("alpha needs |delta| in {{1,2}}, got {delta}"))),
    }
}
