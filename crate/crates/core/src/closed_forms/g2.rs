use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{beta, c, even_n, from_z, sgn};
use crate::error::Result;
use crate::exact::{pow2, rpow, ExactScalar, PiValue};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum G2Variant {
    /// Signs and powers of two as the formulas are usually printed.
    Printed,
    /// C3 without the factor (-1)^i; theorem with 2^{i+k-3n-j} on the second group and
    /// 2^{l-i-k} in place of (-1)^i 2^{l-i-k}.
    Corrected,
}

fn pow3(e: i64) -> ExactScalar {
    rpow(&BigRational::from_integer(BigInt::from(3)), e)
}

/// Intermediate quantities A1, A2, B1..B4, C1..C4, C8 of the g2 reduction, each the
/// coefficient of (2 pi i)^{6n}.
pub struct G2Helpers {
    n: i64,
    variant: G2Variant,
    memo: HashMap<(u8, i64, i64), ExactScalar>,
}

impl G2Helpers {
    pub fn new(n: u32, variant: G2Variant) -> Self {
        G2Helpers { n: n as i64, variant, memo: HashMap::new() }
    }

    fn be(&self, l: i64) -> ExactScalar {
        beta(l, 6 * self.n)
    }

    fn d2(&self, l: i64) -> ExactScalar {
        let w = 6 * self.n;
        BigRational::one() + pow2(1 - w) - pow2(-l) - pow2(l - w)
    }

    fn cached(&mut self, tag: u8, i: i64, k: i64, f: impl FnOnce(&Self) -> ExactScalar) -> ExactScalar {
        if let Some(v) = self.memo.get(&(tag, i, k)) {
            return v.clone();
        }
        let v = f(self);
        self.memo.insert((tag, i, k), v.clone());
        v
    }

    pub fn c1(&mut self, i: i64, k: i64) -> ExactScalar {
        self.cached(1, i, k, |h| {
            let mut s = BigRational::zero();
            for l in 0..=i {
                s += c(i + k - l - 1, k - 1) * pow2(k) * h.d2(l) * pow3(l - i - k) * h.be(l);
            }
            for l in 0..=k {
                s += c(i + k - l - 1, i - 1) * pow2(k - l) * pow3(l - i - k) * h.be(l);
            }
            s
        })
    }

    pub fn c2(&mut self, i: i64, k: i64) -> ExactScalar {
        self.cached(2, i, k, |h| {
            let mut s = BigRational::zero();
            for l in 0..=i {
                s += c(i + k - l - 1, k - 1) * sgn(i) * pow2(k) * h.d2(l) * h.be(l);
            }
            for l in 0..=k {
                s += c(i + k - l - 1, i - 1) * sgn(i) * pow2(k - l) * h.be(l);
            }
            s
        })
    }

    pub fn c3(&mut self, i: i64, k: i64) -> ExactScalar {
        self.cached(3, i, k, |h| {
            let sign = if h.variant == G2Variant::Printed { sgn(i) } else { BigRational::one() };
            let mut s = BigRational::zero();
            for l in 0..=i {
                s += c(i + k - l - 1, k - 1) * h.be(l) * pow2(l - k - i);
            }
            for l in 0..=k {
                s += c(i + k - l - 1, i - 1) * h.be(l) * pow2(l - k - i);
            }
            s * sign
        })
    }

    pub fn c4(&mut self, i: i64, k: i64) -> ExactScalar {
        self.cached(4, i, k, |h| {
            let mut s = BigRational::zero();
            for l in 0..=k {
                s += c(i + k - l - 1, i - 1) * h.be(l);
            }
            for l in 0..=i {
                s += c(i + k - l - 1, k - 1) * h.be(l);
            }
            s * sgn(k)
        })
    }

    pub fn c8(&mut self, i: i64, k: i64) -> ExactScalar {
        self.cached(8, i, k, |h| {
            let mut s = BigRational::zero();
            for l in 0..=k {
                s += c(i + k - l - 1, i - 1) * h.be(l) * pow3(l - k - i);
            }
            for l in 0..=i {
                s += c(i + k - l - 1, k - 1) * h.be(l) * pow3(l - k - i);
            }
            s
        })
    }

    pub fn b1(&mut self, i: i64, j: i64) -> ExactScalar {
        let n = self.n;
        let mut s = BigRational::zero();
        for k in 0..=j {
            s += c(3 * n - i + j - k - 1, 3 * n - i - 1) * self.c1(i, k) * pow2(i + k - 3 * n - j);
        }
        for k in 0..=3 * n - i {
            s += c(3 * n - i + j - k - 1, j - 1) * self.c2(i, k) * pow2(i + k - 3 * n - j);
        }
        s
    }

    pub fn b2(&mut self, i: i64, j: i64) -> ExactScalar {
        let n = self.n;
        let mut s = BigRational::zero();
        for k in 0..=3 * n - j {
            s += c(3 * n - k - 1, j - 1) * self.c3(i, k);
        }
        for k in 0..=j {
            s += c(3 * n - k - 1, 3 * n - j - 1) * self.c4(i, k);
        }
        s
    }

    pub fn b3(&mut self, i: i64, j: i64) -> ExactScalar {
        let n = self.n;
        let mut s = BigRational::zero();
        for k in 0..=j {
            s += c(3 * n - k - 1, 3 * n - j - 1) * self.c3(i, k);
        }
        for k in 0..=3 * n - j {
            s += c(3 * n - k - 1, j - 1) * self.c4(i, k);
        }
        s
    }

    pub fn b4(&mut self, i: i64, j: i64) -> ExactScalar {
        let n = self.n;
        let mut s = BigRational::zero();
        for k in 0..=3 * n - i {
            s += c(3 * n - i + j - k - 1, j - 1) * self.c4(i, k) * pow2(i + k - 3 * n - j);
        }
        for k in 0..=j {
            s += c(3 * n - i + j - k - 1, 3 * n - i - 1) * self.c8(i, k) * pow2(i + k - 3 * n - j);
        }
        s
    }

    pub fn a1(&mut self, i: i64) -> ExactScalar {
        let n = self.n;
        (0..=n).map(|j| c(2 * n - j - 1, n - 1) * (self.b1(i, j) + self.b2(i, j))).sum()
    }

    pub fn a2(&mut self, i: i64) -> ExactScalar {
        let n = self.n;
        (0..=n).map(|j| c(2 * n - j - 1, n - 1) * (self.b3(i, j) + self.b4(i, j))).sum()
    }

    /// Z of the full g2 matrix assembled from A1 and A2.
    pub fn z(&mut self) -> ExactScalar {
        let n = self.n;
        (0..=n).map(|i| c(2 * n - i - 1, n - 1) * (self.a1(i) + self.a2(i)) * pow3(i - 2 * n)).sum()
    }
}

/// The single nested sum equal to 12 zeta_W(n; g2) / (120^n (2 pi)^{6n}).
pub fn g2_theorem_coefficient(n: u32, variant: G2Variant) -> Result<ExactScalar> {
    even_n(n, "g2_theorem")?;
    let n = n as i64;
    let w = 6 * n;
    let be = |l: i64| beta(l, w);
    let delta = |t: usize, l: i64| {
        if t == 1 {
            pow2(-l)
        } else {
            BigRational::one() + pow2(1 - w) - pow2(-l) - pow2(l - w)
        }
    };
    let fixed = variant == G2Variant::Corrected;
    let mut s = BigRational::zero();
    for i in 0..=n {
        for j in 0..=n {
            let pre = c(2 * n - i - 1, n - 1) * pow3(i - 2 * n) * c(2 * n - j - 1, n - 1);
            let mut tot = BigRational::zero();
            for k in 0..=j {
                let co = c(3 * n - i + j - k - 1, 3 * n - i - 1) * pow2(i + k - 3 * n - j);
                for (t, lam) in [(1usize, k), (2, i)] {
                    for l in 0..=lam {
                        tot += &co
                            * c(i + k - l - 1, i + k - lam - 1)
                            * (BigRational::one() + pow2(k) * delta(t, l))
                            * pow3(l - i - k)
                            * be(l);
                    }
                }
            }
            for k in 0..=3 * n - i {
                let mut co = c(3 * n - i + j - k - 1, j - 1);
                if fixed {
                    co *= pow2(i + k - 3 * n - j);
                }
                for (t, lam) in [(1usize, k), (2, i)] {
                    for l in 0..=lam {
                        tot += &co * c(i + k - l - 1, i + k - lam - 1) * (sgn(k) + sgn(i) * pow2(k) * delta(t, l)) * be(l);
                    }
                }
            }
            for (range_hi, first) in [(3 * n - j, true), (j, false)] {
                for k in 0..=range_hi {
                    let co = if first { c(3 * n - k - 1, j - 1) } else { c(3 * n - k - 1, 3 * n - j - 1) };
                    for lam in [i, k] {
                        for l in 0..=lam {
                            let tail = if fixed { pow2(l - i - k) } else { sgn(i) * pow2(l - i - k) };
                            tot += &co * c(i + k - l - 1, i + k - lam - 1) * (sgn(k) + tail) * be(l);
                        }
                    }
                }
            }
            s += pre * tot;
        }
    }
    Ok(s)
}

/// zeta_W(n; g2) for even n.
pub fn g2_witten(n: u32) -> Result<PiValue> {
    let s = g2_theorem_coefficient(n, G2Variant::Corrected)?;
    let scale = BigRational::new(BigInt::from(120).pow(n), BigInt::from(12));
    from_z(&(s * scale), 6 * n)
}
