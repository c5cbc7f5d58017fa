//! Numeric verification by direct summation of the defining positive-orthant series.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::catalog::{AlgebraSpec, SeriesDescriptor};
use crate::error::{Error, Result};
use crate::exact::PiValue;
use crate::numeric::{evaluate_pi_value, matching_digits, pack_divisors, Accumulator, FixedPoint, Quotient, Real};

const GUARD: u32 = 24;

/// Sum over 1 <= m_i <= bound of prod_j <m, f_j>^{-n a_j}, to `digits` decimals.
///
/// Each form is divided out at the deepest variable it involves, so the partial quotient of
/// an outer index is shared by every inner term; a zero partial quotient ends that loop, since
/// every later term is smaller.
pub fn sum_series_bare(series: &SeriesDescriptor, n: u32, bound: u64, digits: u32) -> Real {
    let ell = series.ell;
    let fp = FixedPoint::new(digits, GUARD);
    let mut by_depth: Vec<Vec<(Vec<u64>, u32)>> = vec![Vec::new(); ell];
    for (f, a) in &series.factors {
        let deepest = (0..ell).rev().find(|&i| f[i] != 0).expect("zero form");
        by_depth[deepest].push((f.iter().map(|&x| x as u64).collect(), n * a));
    }
    let mut acc = Accumulator::new(fp.width);
    let mut qs: Vec<Quotient> = vec![fp.one.clone(); ell + 1];
    let mut m = vec![1u64; ell];
    let mut factors = Vec::new();
    let mut divs = Vec::new();
    let mut depth = 0usize;
    loop {
        factors.clear();
        for (f, e) in &by_depth[depth] {
            let v: u64 = f.iter().zip(&m).map(|(a, b)| a * b).sum();
            factors.push((v, *e));
        }
        divs.clear();
        pack_divisors(&factors, &mut divs);
        let (head, tail) = qs.split_at_mut(depth + 1);
        let q = &mut tail[0];
        q.set_div(&head[depth], divs.first().copied().unwrap_or(1));
        for &d in divs.iter().skip(1) {
            if q.is_zero() {
                break;
            }
            q.div_assign(d);
        }
        let dead = q.is_zero();
        if !dead && depth + 1 < ell {
            depth += 1;
            m[depth] = 1;
            continue;
        }
        if !dead {
            acc.add(&qs[ell]);
        }
        // advance: a dead quotient ends the loop at this depth
        let mut d = depth;
        let mut exhausted = dead;
        loop {
            if !exhausted && m[d] < bound {
                m[d] += 1;
                break;
            }
            if d == 0 {
                return fp.finish(&acc, &Accumulator::new(fp.width));
            }
            // a dead quotient at the first inner value kills the parent index too
            exhausted = m[d] == 1 && exhausted;
            d -= 1;
        }
        depth = d;
    }
}

fn extra_digits(spec: &AlgebraSpec, n: u32) -> u32 {
    ((spec.m_constant as f64).log10() * n as f64).ceil() as u32 + 2
}

/// M^n times the bare series: zeta_W(n) truncated at `bound`, with about `precision`
/// significant digits of working precision.
pub fn sum_series(spec: &AlgebraSpec, n: u32, bound: u64, precision: u32) -> Real {
    let extra = extra_digits(spec, n);
    let bare = sum_series_bare(&spec.series, n, bound, precision + extra);
    let mn = BigRational::from_integer(BigInt::from(spec.m_constant).pow(n));
    bare.mul_rational(&mn)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Normalization {
    /// zeta_W(s) = M^s zeta_g(s, ..., s)
    #[default]
    Witten,
    /// zeta_g(s, ..., s) without the M^s factor
    Bare,
    /// Whichever of the two the algebra's defining sum is usually tabulated in:
    /// Witten for sl3, so5, g2 and bare for so7, sp6, sl5.
    Native,
}

impl Normalization {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "witten" => Ok(Normalization::Witten),
            "bare" => Ok(Normalization::Bare),
            "native" => Ok(Normalization::Native),
            _ => Err(Error::InvalidArgument(format!("unknown normalization '{s}' (witten|bare|native)"))),
        }
    }

    pub fn resolve(self, spec: &AlgebraSpec) -> Normalization {
        match self {
            Normalization::Native => match spec.name {
                "so7" | "sp6" | "sl5" => Normalization::Bare,
                _ => Normalization::Witten,
            },
            n => n,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub algebra: String,
    pub n: u32,
    pub bound: u64,
    pub precision: u32,
    pub normalization: Normalization,
    pub matching_digits: u32,
    pub inconclusive: bool,
    pub exact: PiValue,
    pub exact_numeric: String,
    pub numeric: String,
}

/// Compares an exact value of zeta at s = n against the truncated series.
pub fn verify(spec: &AlgebraSpec, n: u32, exact: &PiValue, bound: u64, precision: u32, norm: Normalization) -> Result<VerificationReport> {
    let expected = n * spec.r as u32;
    if exact.pi_power != expected {
        return Err(Error::PiPowerMismatch { expected, found: exact.pi_power });
    }
    if bound < 1 {
        return Err(Error::InvalidArgument("bound must be at least 1".into()));
    }
    let extra = extra_digits(spec, n);
    let norm = norm.resolve(spec);
    let (numeric, digits) = match norm {
        Normalization::Witten | Normalization::Native => (sum_series(spec, n, bound, precision), precision + extra),
        Normalization::Bare => (sum_series_bare(&spec.series, n, bound, precision + extra), precision + extra),
    };
    let exact_num = evaluate_pi_value(exact, digits);
    let md = matching_digits(&exact_num, &numeric, precision + 5);
    Ok(VerificationReport {
        algebra: spec.name.to_string(),
        n,
        bound,
        precision,
        normalization: norm,
        matching_digits: md,
        inconclusive: precision < md + 10,
        exact: exact.clone(),
        exact_numeric: exact_num.to_scientific(precision as usize),
        numeric: numeric.to_scientific(precision as usize),
    })
}

/// sum_{y = r mod d, 0 < |y| <= bound} y^{-e} scaled by 10^digits, signed.
fn residue_sum(e: u32, d: i64, r: i64, bound: i64, fp: &FixedPoint) -> BigInt {
    let mut pos = Accumulator::new(fp.width);
    let mut neg = Accumulator::new(fp.width);
    let mut q = fp.one.clone();
    let mut divs = Vec::new();
    let start = r.rem_euclid(d);
    let mut y = start - d * (bound / d + 1);
    while y <= bound {
        if y != 0 && y.abs() <= bound {
            divs.clear();
            pack_divisors(&[(y.unsigned_abs(), e)], &mut divs);
            q.set_div(&fp.one, divs.first().copied().unwrap_or(1));
            for &dv in divs.iter().skip(1) {
                q.div_assign(dv);
            }
            if y < 0 && e % 2 == 1 {
                neg.add(&q);
            } else {
                pos.add(&q);
            }
        }
        y += d;
    }
    let f = fp.finish(&pos, &neg);
    f.mantissa
}

/// Z(columns, exps) for square nonsingular `columns`, summed in the coordinates y = sigma^T x.
///
/// The image lattice contains |det| Z^ell, so it splits into residue classes rho mod |det| and the
/// sum over each class factors into one-dimensional sums. Needs every exponent >= 2.
pub struct LeafOracle {
    bound: i64,
    digits: u32,
    cache: HashMap<(u32, i64, i64), BigInt>,
}

impl LeafOracle {
    pub fn new(bound: i64, digits: u32) -> Self {
        LeafOracle { bound, digits, cache: HashMap::new() }
    }

    fn t(&mut self, e: u32, d: i64, r: i64) -> BigInt {
        let key = (e, d, r.rem_euclid(d));
        if let Some(v) = self.cache.get(&key) {
            return v.clone();
        }
        let fp = FixedPoint::new(self.digits, 10);
        let v = residue_sum(e, d, key.2, self.bound, &fp);
        self.cache.insert(key, v.clone());
        v
    }

    pub fn evaluate(&mut self, columns: &[Vec<i64>], exps: &[u32]) -> Result<Real> {
        let ell = columns.len();
        if exps.len() != ell || columns.iter().any(|c| c.len() != ell) {
            return Err(Error::InvalidArgument("leaf oracle needs a square matrix".into()));
        }
        if exps.iter().any(|&e| e < 2) {
            return Err(Error::InvalidArgument("leaf oracle needs exponents >= 2".into()));
        }
        let det = crate::linalg::det(columns);
        let d = i64::try_from(det.magnitude().clone()).map_err(|_| Error::Singular)?;
        if d == 0 {
            return Err(Error::Singular);
        }
        let mut classes = BTreeSet::new();
        let mut x = vec![0i64; ell];
        loop {
            let rho: Vec<i64> = columns.iter().map(|c| c.iter().zip(&x).map(|(a, b)| a * b).sum::<i64>().rem_euclid(d)).collect();
            classes.insert(rho);
            let mut i = 0;
            while i < ell {
                x[i] += 1;
                if x[i] < d {
                    break;
                }
                x[i] = 0;
                i += 1;
            }
            if i == ell {
                break;
            }
        }
        let scale = crate::numeric::ten_pow(self.digits);
        let mut total = BigInt::from(0);
        for rho in classes {
            let mut prod = scale.clone();
            for (j, &e) in exps.iter().enumerate() {
                prod = prod * self.t(e, d, rho[j]) / &scale;
            }
            total += prod;
        }
        Ok(Real { mantissa: total, digits: self.digits })
    }
}
