use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{b, c, even_n, fact, from_z};
use crate::error::Result;
use crate::exact::{ExactScalar, PiValue};

struct Sl5 {
    n: i64,
    bt: HashMap<(i64, i64, i64), ExactScalar>,
    e: HashMap<(i64, i64, i64, i64, i64), ExactScalar>,
    d: HashMap<(i64, i64, i64, i64), ExactScalar>,
    c: HashMap<(i64, i64, i64, i64), ExactScalar>,
}

impl Sl5 {
    /// beta_{s,t,k}, zero when s, t or k is 1.
    fn bt(&mut self, s: i64, t: i64, k: i64) -> ExactScalar {
        if s == 1 || t == 1 || k == 1 {
            return BigRational::zero();
        }
        let r = 10 * self.n - s - t - k;
        if s.min(t).min(k).min(r) < 0 {
            return BigRational::zero();
        }
        if let Some(v) = self.bt.get(&(s, t, k)) {
            return v.clone();
        }
        let v = b(s) * b(t) * b(k) * b(r) / BigRational::from_integer(fact(s) * fact(t) * fact(k) * fact(r));
        self.bt.insert((s, t, k), v.clone());
        v
    }

    fn e(&mut self, a: i64, i: i64, k: i64, l: i64, s: i64) -> ExactScalar {
        if let Some(v) = self.e.get(&(a, i, k, l, s)) {
            return v.clone();
        }
        let n = self.n;
        let mut r = BigRational::zero();
        if a == 1 {
            for t in 0..=2 * n + l - s {
                r += c(5 * n + l - i - s - t - 1, 3 * n - i - 1) * self.bt(s, t, k);
            }
            for t in 0..=3 * n - i {
                r += c(5 * n + l - i - s - t - 1, 2 * n + l - s - 1) * self.bt(s, t, k);
            }
        } else {
            for t in 0..=n {
                r += c(5 * n + l - i - s - t - 1, 4 * n + l - i - s - 1) * self.bt(s, t, k);
            }
            for t in 0..=4 * n + l - i - s {
                r += c(5 * n + l - i - s - t - 1, n - 1) * self.bt(s, t, k);
            }
        }
        self.e.insert((a, i, k, l, s), r.clone());
        r
    }

    fn d(&mut self, a: i64, i: i64, k: i64, l: i64) -> ExactScalar {
        if let Some(v) = self.d.get(&(a, i, k, l)) {
            return v.clone();
        }
        let n = self.n;
        let mut r = BigRational::zero();
        for s in 0..=l {
            r += c(n + l - s - 1, n - 1) * self.e(a, i, k, l, s);
        }
        for s in 0..=n {
            r += c(n + l - s - 1, l - 1) * self.e(a, i, k, l, s);
        }
        self.d.insert((a, i, k, l), r.clone());
        r
    }

    fn c(&mut self, a: i64, i: i64, j: i64, k: i64) -> ExactScalar {
        if let Some(v) = self.c.get(&(a, i, j, k)) {
            return v.clone();
        }
        let n = self.n;
        let mut r = BigRational::zero();
        for l in 0..=n {
            r += c(3 * n + j - k - l - 1, 2 * n + j - k - 1) * self.d(a, i, k, l);
        }
        for l in 0..=2 * n + j - k {
            r += c(3 * n + j - k - l - 1, n - 1) * self.d(3 - a, i, k, l);
        }
        self.c.insert((a, i, j, k), r.clone());
        r
    }

    fn big_b(&mut self, a: i64, i: i64, j: i64) -> ExactScalar {
        let n = self.n;
        let mut r = BigRational::zero();
        for k in 0..=j {
            r += c(n + j - k - 1, n - 1) * self.c(a, i, j, k);
        }
        for k in 0..=n {
            r += c(n + j - k - 1, j - 1) * self.c(a, i, j, k);
        }
        r
    }
}

/// The nested sum equal to 60 zeta_W(n; sl5) / (288^n (2 pi)^{10n}); it is half of
/// Z(sigma(sl5), n) / (2 pi i)^{10n}.
pub fn sl5_theorem_sum(n: u32) -> Result<ExactScalar> {
    even_n(n, "sl5_theorem")?;
    let mut h = Sl5 { n: n as i64, bt: HashMap::new(), e: HashMap::new(), d: HashMap::new(), c: HashMap::new() };
    let n = n as i64;
    let mut s = BigRational::zero();
    for i in 0..=n {
        let mut t = BigRational::zero();
        for j in 0..=i {
            t += c(n + i - j - 1, n - 1) * h.big_b(1, i, j);
        }
        for j in 0..=n {
            t += c(n + i - j - 1, i - 1) * h.big_b(2, i, j);
        }
        s += c(2 * n - i - 1, n - 1) * t;
    }
    Ok(s)
}

/// zeta_W(n; sl5) for even n.
pub fn sl5_witten(n: u32) -> Result<PiValue> {
    let s = sl5_theorem_sum(n)?;
    let scale = BigRational::new(BigInt::from(288).pow(n), BigInt::from(60));
    from_z(&(s * scale), 10 * n)
}
