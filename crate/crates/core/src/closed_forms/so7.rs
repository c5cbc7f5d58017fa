use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{b, c, even_n, fact, from_z, sgn};
use crate::error::Result;
use crate::exact::{pow2, ExactScalar, PiValue};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum So7Variant {
    /// B(j), B'(a,b,j) and beta_{s,t} exactly as usually printed.
    Printed,
    /// beta_{s,t} = 0 when an index is 1; B(j) and B' use the C-node with the target
    /// exponent moved (`c2n`), and B(j)'s first sum uses C(j, j-k, k, 2(j-k)).
    Corrected,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Tag {
    E,
    Ep,
    Epp,
    D,
    Dp,
    C,
    Cp,
    Cpp,
    C2n,
}

/// The B / C / D / E hierarchy for so7 (shared with sp6), as coefficients of (2 pi i)^{9n}.
pub struct So7Helpers {
    n: i64,
    variant: So7Variant,
    memo: HashMap<(Tag, [i64; 5]), ExactScalar>,
}

impl So7Helpers {
    pub fn new(n: u32, variant: So7Variant) -> Self {
        So7Helpers { n: n as i64, variant, memo: HashMap::new() }
    }

    fn get(&self, t: Tag, k: [i64; 5]) -> Option<ExactScalar> {
        self.memo.get(&(t, k)).cloned()
    }

    fn put(&mut self, t: Tag, k: [i64; 5], v: ExactScalar) -> ExactScalar {
        self.memo.insert((t, k), v.clone());
        v
    }

    /// beta_{s,t} = -B_s B_t B_{9n-s-t} / (s! t! (9n-s-t)!)
    pub fn bt(&self, s: i64, t: i64) -> ExactScalar {
        let r = 9 * self.n - s - t;
        if s < 0 || t < 0 || r < 0 {
            return BigRational::zero();
        }
        if self.variant == So7Variant::Corrected && (s == 1 || t == 1 || r == 1) {
            return BigRational::zero();
        }
        -(b(s) * b(t) * b(r)) / BigRational::from_integer(fact(s) * fact(t) * fact(r))
    }

    fn b2(&self, a: i64, bb: i64) -> ExactScalar {
        let one = BigRational::one();
        self.bt(a, bb) * (&one + (pow2(1 - a) - &one) * (pow2(1 - bb) - &one)) / BigInt::from(2)
    }

    fn b3(&self, a: i64, bb: i64, cc: i64) -> ExactScalar {
        let one = BigRational::one();
        self.bt(a, bb) * (&one + (pow2(1 - a) - &one) * (pow2(1 - bb) - &one) * (pow2(1 - cc) - &one)) / BigInt::from(2)
    }

    pub fn e(&mut self, cc: i64, l: i64, s: i64) -> ExactScalar {
        let key = [cc, l, s, 0, 0];
        if let Some(v) = self.get(Tag::E, key) {
            return v;
        }
        let mut r = BigRational::zero();
        for t in 0..=cc {
            r += c(cc + s - t - 1, s - 1) * self.bt(l, t) * pow2(t - cc - s);
        }
        for t in 0..=s {
            r += c(cc + s - t - 1, cc - 1) * self.bt(l, t) * pow2(t - cc - s);
        }
        self.put(Tag::E, key, r)
    }

    pub fn ep(&mut self, cc: i64, l: i64, s: i64) -> ExactScalar {
        let key = [cc, l, s, 0, 0];
        if let Some(v) = self.get(Tag::Ep, key) {
            return v;
        }
        let mut r = BigRational::zero();
        for t in 0..=cc {
            r += c(cc + s - t - 1, s - 1) * self.bt(l, t);
        }
        for t in 0..=s {
            r += c(cc + s - t - 1, cc - 1) * self.bt(l, t);
        }
        self.put(Tag::Ep, key, r)
    }

    pub fn epp(&mut self, l: i64, s: i64) -> ExactScalar {
        let key = [l, s, 0, 0, 0];
        if let Some(v) = self.get(Tag::Epp, key) {
            return v;
        }
        let n = self.n;
        let mut r = BigRational::zero();
        for t in 0..=n {
            r += c(n + s - t - 1, s - 1) * self.b3(l, t, 9 * n - l - t);
        }
        for t in 0..=s {
            r += c(n + s - t - 1, n - 1) * self.b2(l, t);
        }
        self.put(Tag::Epp, key, r)
    }

    pub fn d(&mut self, a: i64, bb: i64, cc: i64, j: i64, l: i64) -> ExactScalar {
        let key = [a, bb, cc, j, l];
        if let Some(v) = self.get(Tag::D, key) {
            return v;
        }
        let n = self.n;
        let u = 4 * n - a;
        let v = 3 * n + a + bb - cc - j - l;
        let mut r = BigRational::zero();
        for s in 0..=u {
            r += c(u + v - s - 1, v - 1) * self.e(cc, l, s) * sgn(v);
        }
        for s in 0..=v {
            r += c(u + v - s - 1, u - 1) * self.ep(cc, l, s) * sgn(v - s);
        }
        self.put(Tag::D, key, r)
    }

    pub fn dp(&mut self, i: i64, k: i64, l: i64) -> ExactScalar {
        let key = [i, k, l, 0, 0];
        if let Some(v) = self.get(Tag::Dp, key) {
            return v;
        }
        let n = self.n;
        let mut r = BigRational::zero();
        for s in 0..=4 * n + k - i - l {
            r += c(7 * n - l - s - 1, 3 * n + i - k - 1) * self.epp(l, s) * pow2(l + s - 7 * n);
        }
        for s in 0..=3 * n + i - k {
            r += c(7 * n - l - s - 1, 4 * n + k - i - l - 1) * self.epp(l, s) * pow2(l + s - 7 * n);
        }
        self.put(Tag::Dp, key, r)
    }

    pub fn c(&mut self, a: i64, bb: i64, cc: i64, j: i64) -> ExactScalar {
        let key = [a, bb, cc, j, 0];
        if let Some(v) = self.get(Tag::C, key) {
            return v;
        }
        let n = self.n;
        let p = n + a - bb - cc;
        let mut r = BigRational::zero();
        for l in 0..=cc {
            r += c(n + a - bb - l - 1, p - 1) * self.d(a, bb, n, j, l) * sgn(p);
        }
        for l in 0..=p {
            r += c(n + a - bb - l - 1, cc - 1) * self.d(a, bb, n, j, l) * sgn(p - l);
        }
        self.put(Tag::C, key, r)
    }

    /// The C-node whose D children carry the moved exponent: D(a, 0, 2n+a-b-l, b, l).
    pub fn c2n(&mut self, a: i64, bb: i64, cc: i64) -> ExactScalar {
        let key = [a, bb, cc, 0, 0];
        if let Some(v) = self.get(Tag::C2n, key) {
            return v;
        }
        let n = self.n;
        let p = n + a - bb - cc;
        let mut r = BigRational::zero();
        for l in 0..=cc {
            r += c(p + cc - l - 1, p - 1) * self.d(a, 0, 2 * n + a - bb - l, bb, l) * sgn(p);
        }
        for l in 0..=p {
            r += c(p + cc - l - 1, cc - 1) * self.d(a, 0, 2 * n + a - bb - l, bb, l) * sgn(p - l);
        }
        self.put(Tag::C2n, key, r)
    }

    pub fn cp(&mut self, a: i64, bb: i64, cc: i64, j: i64) -> ExactScalar {
        let key = [a, bb, cc, j, 0];
        if let Some(v) = self.get(Tag::Cp, key) {
            return v;
        }
        let n = self.n;
        let (mu, nu) = (n + a - j, n + bb - cc);
        let mut r = BigRational::zero();
        for l in 0..=mu {
            r += c(mu + nu - l - 1, nu - 1) * self.d(a, bb, cc, j, l);
        }
        for l in 0..=nu {
            r += c(mu + nu - l - 1, mu - 1) * self.d(a, bb, cc, j, l);
        }
        self.put(Tag::Cp, key, r)
    }

    pub fn cpp(&mut self, i: i64, k: i64) -> ExactScalar {
        let key = [i, k, 0, 0, 0];
        if let Some(v) = self.get(Tag::Cpp, key) {
            return v;
        }
        let n = self.n;
        let mut r = BigRational::zero();
        for l in 0..=k {
            r += c(n + k - l - 1, n - 1) * pow2(n) * self.dp(i, k, l);
        }
        for l in 0..=n {
            r += c(n + k - l - 1, k - 1) * pow2(n - l) * self.d(i + l - k, n, 3 * n + i - k, 0, l);
        }
        self.put(Tag::Cpp, key, r)
    }

    fn cbrace(&mut self, i: i64, k: i64) -> ExactScalar {
        let n = self.n;
        self.cp(n + i, 3 * n + i - k, 3 * n + i - k, 2 * n + i - k)
    }

    pub fn big_b(&mut self, j: i64) -> ExactScalar {
        let n = self.n;
        let fixed = self.variant == So7Variant::Corrected;
        let mut r = BigRational::zero();
        for k in 0..=j {
            let last = if fixed { 2 * (j - k) } else { j };
            r += c(n + j - k - 1, n - 1) * self.c(j, j - k, k, last);
        }
        for k in 0..=n {
            let node = if fixed { self.c2n(j, j - k, n) } else { self.c(j, j - k, n, j) };
            r += c(n + j - k - 1, j - 1) * node * sgn(k);
        }
        r
    }

    pub fn big_bp(&mut self, a: i64, bb: i64, j: i64) -> ExactScalar {
        let n = self.n;
        let fixed = self.variant == So7Variant::Corrected;
        let mut r = BigRational::zero();
        for k in 0..=bb {
            let node = if fixed { self.c2n(a, j - k, k) } else { self.c(a, j - k, k, j) };
            r += c(n + j - k - 1, n + j - bb - 1) * node;
        }
        for k in 0..=n + j - bb {
            r += c(n + j - k - 1, bb - 1) * self.cp(a, k, n, j);
        }
        r
    }

    pub fn big_bpp(&mut self, i: i64, j: i64) -> ExactScalar {
        let n = self.n;
        let mut r = BigRational::zero();
        for k in 0..=2 * n + i - j {
            r += c(2 * n + i - k - 1, j - 1) * pow2(2 * n + i - j - k) * self.cbrace(i, k) * sgn(i - j - k);
        }
        for k in 0..=j {
            r += c(2 * n + i - k - 1, 2 * n + i - j - 1) * pow2(2 * n + i - j) * self.cpp(i, k) * sgn(i - j);
        }
        r
    }

    /// The full sum, equal to 48 zeta / ((-720)^n (2 pi)^{9n}) up to the normalisation noted
    /// on `so7_witten`.
    pub fn total(&mut self) -> ExactScalar {
        let n = self.n;
        let mut s = BigRational::zero();
        for i in 0..=n {
            let mut t = BigRational::zero();
            for j in 0..=i {
                t += c(n + i - j - 1, n - 1) * (self.big_b(j) * pow2(-i) + self.big_bpp(i, j) * sgn(i));
            }
            for j in 0..=n {
                t += c(n + i - j - 1, i - 1) * (self.big_bp(j, n, j) * pow2(-i) + self.big_bp(i + n, j, j) * sgn(i + j));
            }
            s += c(2 * n - i - 1, n - 1) * t;
        }
        s * pow2(n)
    }
}

/// Coefficient of (2 pi i)^{9n} in Z(sigma(so7), n), from the nested-sum theorem.
pub fn so7_theorem_coefficient(n: u32, variant: So7Variant) -> Result<ExactScalar> {
    even_n(n, "so7_theorem")?;
    Ok(So7Helpers::new(n, variant).total())
}

/// zeta_W(n; so7) for even n.
pub fn so7_witten(n: u32) -> Result<PiValue> {
    let z = so7_theorem_coefficient(n, So7Variant::Corrected)?;
    let scale = BigRational::new(BigInt::from(720).pow(n), BigInt::from(48));
    from_z(&(z * scale), 9 * n)
}

/// zeta_W(n; sp6); the two algebras share one reduction.
pub fn sp6_witten(n: u32) -> Result<PiValue> {
    so7_witten(n)
}
