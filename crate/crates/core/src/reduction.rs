//! Partial-fraction reduction of Z along a computation tree.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{binomial, factorial, periodized_bernoulli, rpow, ExactScalar, PiValue};
use crate::linalg;
use crate::tree::ComputationTree;
use crate::zfunction::{alpha, beta, rank_one_sum, square_leaf, FormMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Kept {
    X,
    Y,
}

/// One summand C / (kept^kept_exponent (x+y)^sum_exponent).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitTerm {
    pub kept: Kept,
    pub kept_exponent: u32,
    pub sum_exponent: u32,
    pub coefficient: BigInt,
}

/// 1/(x^s y^t) as a combination of x^-a (x+y)^-b and y^-a (x+y)^-b.
pub fn partial_fraction_split(s: u32, t: u32) -> Result<Vec<SplitTerm>> {
    if s < 1 || t < 1 {
        return Err(Error::InvalidArgument(format!("split needs s, t >= 1, got ({s},{t})")));
    }
    let mut out = Vec::with_capacity((s + t) as usize);
    for a in 0..s {
        out.push(SplitTerm {
            kept: Kept::X,
            kept_exponent: s - a,
            sum_exponent: t + a,
            coefficient: binomial((t + a - 1) as i64, a as i64),
        });
    }
    for b in 0..t {
        out.push(SplitTerm {
            kept: Kept::Y,
            kept_exponent: t - b,
            sum_exponent: s + b,
            coefficient: binomial((s + b - 1) as i64, b as i64),
        });
    }
    Ok(out)
}

/// Evaluates a split at rational x, y.
pub fn evaluate_split(terms: &[SplitTerm], x: &ExactScalar, y: &ExactScalar) -> ExactScalar {
    let z = x + y;
    terms
        .iter()
        .map(|t| {
            let k = if t.kept == Kept::X { x } else { y };
            BigRational::from_integer(t.coefficient.clone())
                * rpow(k, -(t.kept_exponent as i64))
                * rpow(&z, -(t.sum_exponent as i64))
        })
        .sum()
}

fn gcd2(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |a, &x| a.gcd(&x))
}

fn q(n: i64) -> ExactScalar {
    BigRational::from_integer(BigInt::from(n))
}

fn as_small_int(x: &ExactScalar) -> Option<i64> {
    if x.is_integer() {
        i64::try_from(x.numer()).ok()
    } else {
        None
    }
}

/// Rank-two triple with u*lambda*(a,b) + lambda*(c,d) = (e,f); coefficient of (2 pi i)^w.
pub fn key_lemma_coefficient(cols: &[[i64; 2]; 3], exps: [u32; 3]) -> Result<ExactScalar> {
    let [i, j, k] = exps;
    let w = i + j + k;
    if w % 2 == 1 {
        return Err(Error::OddWeight(w));
    }
    if i == 0 || j == 0 || k == 0 {
        return Err(Error::InvalidArgument(format!("key lemma needs positive exponents, got {exps:?}")));
    }
    for (name, c) in ["(a,b)", "(c,d)", "(e,f)"].iter().zip(cols) {
        let g = gcd2(c);
        if g != 1 {
            return Err(Error::Precondition(format!("gcd of column {name} = {c:?} is {g}, not 1")));
        }
    }
    let cv: Vec<Vec<i64>> = cols[..2].iter().map(|c| c.to_vec()).collect();
    let sol = linalg::solve(&cv, &cols[2])
        .ok_or_else(|| Error::Precondition("third column is not a combination of the first two".into()))?;
    let (lam_l, lam) = (sol[0].clone(), sol[1].clone());
    if lam_l.is_zero() || lam.is_zero() {
        return Err(Error::Precondition("degenerate dependency (zero coefficient)".into()));
    }
    let u = &lam_l / &lam;
    let ua = u.abs();
    if !(ua == q(1) || ua == q(2) || ua == BigRational::new(1.into(), 2.into())) {
        return Err(Error::Precondition(format!("|u| = {ua} not in {{1, 2, 1/2}}")));
    }
    let [[a, b], _, [e, f]] = *cols;
    let delta = a * f - b * e;
    if !(delta.abs() == 1 || delta.abs() == 2) {
        return Err(Error::Precondition(format!("|delta| = {} not in {{1, 2}}", delta.abs())));
    }
    let ud = as_small_int(&(&u * q(delta)))
        .filter(|x| x.abs() == 1 || x.abs() == 2)
        .ok_or_else(|| Error::Precondition(format!("|u delta| = {} not in {{1, 2}}", (&u * q(delta)).abs())))?;
    let (i, j, w) = (i as i64, j as i64, w as i64);
    let mut total = BigRational::zero();
    let a1 = (0..=i).map(|l| alpha(l, w, delta)).collect::<Result<Vec<_>>>()?;
    let a2 = (0..=j).map(|l| alpha(l, w, ud)).collect::<Result<Vec<_>>>()?;
    for l in 0..=i {
        let c = binomial(i + j - l - 1, j - 1);
        if c.is_zero() {
            continue;
        }
        total += rpow(&u, i - l) * rpow(&lam, i + j - l) * beta(l, w) * &a1[l as usize] * c;
    }
    for l in 0..=j {
        let c = binomial(i + j - l - 1, i - 1);
        if c.is_zero() {
            continue;
        }
        total += rpow(&u, i) * rpow(&lam, i + j - l) * beta(l, w) * &a2[l as usize] * c;
    }
    Ok(total)
}

pub fn evaluate_key_lemma(cols: &[[i64; 2]; 3], exps: [u32; 3]) -> Result<PiValue> {
    let c = key_lemma_coefficient(cols, exps)?;
    PiValue::from_two_pi_i(&c, exps.iter().sum())
}

fn has_unit_entry(v: &[i64]) -> bool {
    v.iter().any(|x| x.abs() == 1)
}

fn beta_periodic(l: i64, s: i64) -> ExactScalar {
    if l < 0 || l > s {
        return BigRational::zero();
    }
    let z = BigRational::zero();
    periodized_bernoulli(l as usize, &z) * periodized_bernoulli((s - l) as usize, &z)
        / BigRational::from_integer(factorial(l as u64) * factorial((s - l) as u64))
}

/// Merge step for an (r-1) x r matrix, coefficient of (2 pi i)^w. Column order in `cols`
/// is sigma_1, sigma_2, sigma_3 followed by the rest.
pub fn higher_rank_coefficient(cols: &[Vec<i64>], exps: &[u32], u: i64, lambda: &ExactScalar) -> Result<ExactScalar> {
    let r = cols.len();
    if r < 3 || exps.len() != r {
        return Err(Error::InvalidArgument("need at least three columns with exponents".into()));
    }
    let ell = cols[0].len();
    if ell + 1 != r {
        return Err(Error::InvalidArgument(format!("expected {} rows for {r} columns, got {ell}", r - 1)));
    }
    if u.abs() != 1 {
        return Err(Error::Precondition(format!("u = {u} is not +-1")));
    }
    if lambda.is_zero() {
        return Err(Error::Precondition("lambda is zero".into()));
    }
    let ul = lambda * q(u);
    for p in 0..ell {
        if &ul * q(cols[0][p]) + lambda * q(cols[1][p]) != q(cols[2][p]) {
            return Err(Error::Precondition("u lambda sigma_1 + lambda sigma_2 != sigma_3".into()));
        }
    }
    let d = linalg::det(&cols[1..]);
    if !d.abs().is_one() {
        return Err(Error::Precondition(format!("det(sigma_2..sigma_r) = {d}, not +-1")));
    }
    if !has_unit_entry(&cols[0]) || !has_unit_entry(&cols[1]) {
        return Err(Error::Precondition("sigma_1 or sigma_2 has no +-1 entry".into()));
    }
    let (e1, e2) = (exps[0] as i64, exps[1] as i64);
    let s = e1 + e2 + exps[2] as i64;
    let uq = q(u);
    let mut brace = BigRational::zero();
    for l in 0..=e1 {
        let c = binomial(e1 + e2 - l - 1, e2 - 1);
        if !c.is_zero() {
            brace += rpow(&uq, l) * beta_periodic(l, s) * rpow(lambda, -l) * c;
        }
    }
    for l in 0..=e2 {
        let c = binomial(e1 + e2 - l - 1, e1 - 1);
        if !c.is_zero() {
            brace += beta_periodic(l, s) * rpow(lambda, -l) * c;
        }
    }
    let mut rest = BigRational::one();
    for &e in &exps[3..] {
        rest *= periodized_bernoulli(e as usize, &BigRational::zero()) / BigRational::from_integer(factorial(e as u64));
    }
    if (r - 3) % 2 == 1 {
        rest = -rest;
    }
    Ok(rest * rpow(&uq, e1) * rpow(lambda, e1 + e2) * brace)
}

/// The merge step applied to columns `triple` of `m` (0-based).
pub fn evaluate_higher_rank(m: &FormMatrix, triple: (usize, usize, usize), u: i64, lambda: &ExactScalar) -> Result<PiValue> {
    m.check()?;
    let (a, b, c) = triple;
    let r = m.columns.len();
    if a >= r || b >= r || c >= r || a == b || b == c || a == c {
        return Err(Error::InvalidArgument(format!("bad column triple {triple:?}")));
    }
    let mut order = vec![a, b, c];
    order.extend((0..r).filter(|x| ![a, b, c].contains(x)));
    let cols: Vec<Vec<i64>> = order.iter().map(|&i| m.columns[i].clone()).collect();
    let exps: Vec<u32> = order.iter().map(|&i| m.exponents[i]).collect();
    let w = m.weight();
    if w % 2 == 1 {
        return Err(Error::OddWeight(w));
    }
    let coef = higher_rank_coefficient(&cols, &exps, u, lambda)?;
    PiValue::from_two_pi_i(&coef, w)
}

/// Formal recursion: children with the exponent moved onto the target, sums from 0.
/// `left[i]` is Z(L removed, R := i, T := s - i); `right[i]` is Z(R removed, L := i, T := s - i).
fn formal_combination(lam_l: &ExactScalar, lam_r: &ExactScalar, e_l: u32, e_r: u32, left: &[ExactScalar], right: &[ExactScalar]) -> ExactScalar {
    let (el, er) = (e_l as i64, e_r as i64);
    let mut r = BigRational::zero();
    for (i, v) in left.iter().enumerate() {
        let c = binomial(el + er - i as i64 - 1, el - 1);
        if !c.is_zero() && !v.is_zero() {
            r += rpow(lam_r, -(i as i64)) * v * c;
        }
    }
    for (i, v) in right.iter().enumerate() {
        let c = binomial(el + er - i as i64 - 1, er - 1);
        if !c.is_zero() && !v.is_zero() {
            r += rpow(lam_l, -(i as i64)) * v * c;
        }
    }
    r * rpow(lam_l, el) * rpow(lam_r, er)
}

/// Explicit recursion with the sublattice terms subtracted. `left[i-1]`, `right[i-1]` hold the
/// children for i >= 1; `perp_l`, `perp_r` are Z restricted to sigma_L-perp, sigma_R-perp of
/// the matrix with L and R merged fully into T.
fn explicit_combination(
    lam_l: &ExactScalar,
    lam_r: &ExactScalar,
    e_l: u32,
    e_r: u32,
    left: &[ExactScalar],
    right: &[ExactScalar],
    perp_l: &ExactScalar,
    perp_r: &ExactScalar,
) -> ExactScalar {
    let (el, er) = (e_l as i64, e_r as i64);
    let mut r = BigRational::zero();
    for (k, v) in left.iter().enumerate() {
        let i = k as i64 + 1;
        r += rpow(lam_r, -i) * v * binomial(el + er - i - 1, el - 1);
    }
    for (k, v) in right.iter().enumerate() {
        let i = k as i64 + 1;
        r += rpow(lam_l, -i) * v * binomial(el + er - i - 1, er - 1);
    }
    r -= perp_l * binomial(el + er - 1, el);
    r -= perp_r * binomial(el + er - 1, er);
    r * rpow(lam_l, el) * rpow(lam_r, er)
}

type FormList = Vec<(Vec<i64>, u32)>;

fn canonical(mut forms: FormList) -> FormList {
    forms.retain(|(_, e)| *e > 0);
    forms.sort();
    forms
}

/// Z restricted to v-perp: forms pulled back to a basis of the perp lattice, made primitive,
/// parallel ones merged. `None` when some form vanishes there (every term is omitted).
fn restrict(forms: &[(Vec<i64>, u32)], v: &[i64]) -> Option<(FormList, ExactScalar)> {
    let basis = linalg::perp_basis(v);
    let mut scale = BigRational::one();
    let mut merged: Vec<(Vec<i64>, u32)> = Vec::new();
    for (f, e) in forms {
        if *e == 0 {
            continue;
        }
        let g: Vec<i64> = basis.iter().map(|b| b.iter().zip(f).map(|(x, y)| x * y).sum()).collect();
        if g.iter().all(|&x| x == 0) {
            return None;
        }
        let (p, c) = linalg::primitive(&g);
        if c != 1 {
            scale *= rpow(&q(c), -(*e as i64));
        }
        match merged.iter_mut().find(|(x, _)| *x == p) {
            Some(slot) => slot.1 += e,
            None => merged.push((p, *e)),
        }
    }
    Some((canonical(merged), scale))
}

/// Evaluates Z for arbitrary forms by repeatedly splitting along any dependency, with the
/// sublattice terms handled explicitly. Used for the restricted sums of the explicit recursion
/// and as an independent path for small inputs.
#[derive(Default)]
pub struct AutoEvaluator {
    memo: HashMap<FormList, ExactScalar>,
}

impl AutoEvaluator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn perp(&mut self, forms: &[(Vec<i64>, u32)], v: &[i64]) -> Result<ExactScalar> {
        match restrict(forms, v) {
            Some((f, s)) => Ok(self.eval(f)? * s),
            None => Ok(BigRational::zero()),
        }
    }

    pub fn eval(&mut self, forms: FormList) -> Result<ExactScalar> {
        let forms = canonical(forms);
        if forms.is_empty() {
            return Err(Error::InvalidArgument("no forms".into()));
        }
        let w: u32 = forms.iter().map(|f| f.1).sum();
        if w % 2 == 1 {
            return Ok(BigRational::zero());
        }
        if let Some(v) = self.memo.get(&forms) {
            return Ok(v.clone());
        }
        let ell = forms[0].0.len();
        let n = forms.len();
        let v = if ell == 1 {
            let s: Vec<i64> = forms.iter().map(|f| f.0[0]).collect();
            let e: Vec<u32> = forms.iter().map(|f| f.1).collect();
            rank_one_sum(&s, &e)
        } else if n == ell {
            let c: Vec<Vec<i64>> = forms.iter().map(|f| f.0.clone()).collect();
            let e: Vec<u32> = forms.iter().map(|f| f.1).collect();
            square_leaf(&c, &e)?
        } else if n < ell {
            return Err(Error::Singular);
        } else {
            self.split(&forms)?
        };
        self.memo.insert(forms, v.clone());
        Ok(v)
    }

    fn split(&mut self, forms: &FormList) -> Result<ExactScalar> {
        let n = forms.len();
        for t in 0..n {
            for a in 0..n {
                for b in a + 1..n {
                    if a == t || b == t {
                        continue;
                    }
                    let cols = [forms[a].0.clone(), forms[b].0.clone(), forms[t].0.clone()];
                    if linalg::rank(&cols) == 2 {
                        return self.step(forms, a, b, forms[t].0.clone());
                    }
                }
            }
        }
        for a in 0..n {
            for b in a + 1..n {
                for c in 0..n {
                    for d in c + 1..n {
                        if [c, d].iter().any(|x| *x == a || *x == b) || c < a {
                            continue;
                        }
                        let cols = [forms[a].0.clone(), forms[b].0.clone(), forms[c].0.clone(), forms[d].0.clone()];
                        if linalg::rank(&cols) != 3 {
                            continue;
                        }
                        let Some(k) = linalg::kernel_vector(&cols) else { continue };
                        let t: Vec<i64> = (0..forms[a].0.len()).map(|p| k[0] * cols[0][p] + k[1] * cols[1][p]).collect();
                        if t.iter().all(|&x| x == 0) {
                            continue;
                        }
                        return self.step(forms, a, b, linalg::primitive(&t).0);
                    }
                }
            }
        }
        Err(Error::Precondition(format!("no reduction strategy for forms {forms:?}")))
    }

    fn step(&mut self, forms: &FormList, a: usize, b: usize, target: Vec<i64>) -> Result<ExactScalar> {
        let (fl, el) = forms[a].clone();
        let (fr, er) = forms[b].clone();
        let sol = linalg::solve(&[fl.clone(), fr.clone()], &target).ok_or(Error::Singular)?;
        let t_idx = forms.iter().position(|f| f.0 == target);
        let et = t_idx.map_or(0, |i| forms[i].1);
        let s = el + er + et;
        let with = |drop: usize, keep: usize, ki: u32| -> FormList {
            let mut out: FormList = Vec::new();
            for (idx, f) in forms.iter().enumerate() {
                if idx == drop || Some(idx) == t_idx {
                    continue;
                }
                if idx == keep {
                    out.push((f.0.clone(), ki));
                } else {
                    out.push(f.clone());
                }
            }
            out.push((target.clone(), s - ki));
            out
        };
        let mut left = Vec::new();
        for i in 1..=er {
            left.push(self.eval(with(a, b, i))?);
        }
        let mut right = Vec::new();
        for i in 1..=el {
            right.push(self.eval(with(b, a, i))?);
        }
        let mut base: FormList = forms
            .iter()
            .enumerate()
            .filter(|(idx, _)| *idx != a && *idx != b && Some(*idx) != t_idx)
            .map(|(_, f)| f.clone())
            .collect();
        base.push((target.clone(), s));
        let pl = self.perp(&base, &fl)?;
        let pr = self.perp(&base, &fr)?;
        let mut r = explicit_combination(&sol[0], &sol[1], el, er, &left, &right, &pl, &pr);
        if et == 0 {
            let rest: FormList = forms.to_vec();
            r += self.perp(&rest, &target)?;
        }
        Ok(r)
    }
}

/// Evaluates Z(m) without a tree, as a multiple of pi^w.
pub fn evaluate_auto(m: &FormMatrix) -> Result<PiValue> {
    m.check()?;
    let forms: FormList = m.columns.iter().cloned().zip(m.exponents.iter().copied()).collect();
    let c = AutoEvaluator::new().eval(forms)?;
    PiValue::from_two_pi_i(&c, m.weight())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ReductionMode {
    /// Formal recursion at good parents and wherever an exponent has reached zero;
    /// explicit sublattice corrections elsewhere.
    #[default]
    Hybrid,
    /// Formal recursion at every node.
    Formal,
}

const MAXR: usize = 12;
const LEAF: usize = usize::MAX;
type Exps = [i16; MAXR];

struct Flat {
    l: usize,
    r: usize,
    t: usize,
    left: usize,
    right: usize,
    good: bool,
    bottom: bool,
    lam_l: ExactScalar,
    lam_r: ExactScalar,
    path: String,
}

struct Engine<'a> {
    cols: &'a [Vec<i64>],
    ell: usize,
    nodes: Vec<Flat>,
    mode: ReductionMode,
    lemmas: bool,
    memo: HashMap<(usize, Exps), ExactScalar>,
    leaves: HashMap<Exps, ExactScalar>,
    auto: AutoEvaluator,
}

fn flatten(tree: &ComputationTree, cols: &[Vec<i64>], path: String, out: &mut Vec<Flat>) -> Result<usize> {
    let Some((l, r, t)) = tree.labels() else { return Ok(LEAF) };
    let (a, b) = tree.children().unwrap();
    let n = cols.len();
    if l == 0 || r == 0 || t == 0 || l > n || r > n || t > n {
        return Err(Error::Tree(format!("label out of range at {path}")));
    }
    let (l, r, t) = (l - 1, r - 1, t - 1);
    let sol = linalg::solve(&[cols[l].clone(), cols[r].clone()], &cols[t])
        .ok_or_else(|| Error::AtNode { path: path.clone(), source: Box::new(Error::Tree("no dependency".into())) })?;
    let idx = out.len();
    out.push(Flat {
        l,
        r,
        t,
        left: LEAF,
        right: LEAF,
        good: tree.is_good_parent(),
        bottom: a.is_leaf() && b.is_leaf(),
        lam_l: sol[0].clone(),
        lam_r: sol[1].clone(),
        path: path.clone(),
    });
    let li = flatten(a, cols, format!("{path}/-{}", l + 1), out)?;
    let ri = flatten(b, cols, format!("{path}/-{}", r + 1), out)?;
    out[idx].left = li;
    out[idx].right = ri;
    Ok(idx)
}

impl Engine<'_> {
    fn present(&self, e: &Exps) -> Vec<usize> {
        (0..self.cols.len()).filter(|&k| e[k] >= 0).collect()
    }

    fn leaf(&mut self, e: &Exps) -> Result<ExactScalar> {
        if let Some(v) = self.leaves.get(e) {
            return Ok(v.clone());
        }
        let p = self.present(e);
        if p.len() != self.ell {
            return Err(Error::Precondition(format!("leaf has {} columns, expected {}", p.len(), self.ell)));
        }
        let cols: Vec<Vec<i64>> = p.iter().map(|&k| self.cols[k].clone()).collect();
        let ex: Vec<u32> = p.iter().map(|&k| e[k] as u32).collect();
        let v = square_leaf(&cols, &ex)?;
        self.leaves.insert(*e, v.clone());
        Ok(v)
    }

    fn forms(&self, e: &Exps) -> FormList {
        self.present(e).into_iter().filter(|&k| e[k] > 0).map(|k| (self.cols[k].clone(), e[k] as u32)).collect()
    }

    fn eval(&mut self, idx: usize, e: Exps) -> Result<ExactScalar> {
        if idx == LEAF {
            return self.leaf(&e);
        }
        if let Some(v) = self.memo.get(&(idx, e)) {
            return Ok(v.clone());
        }
        let v = self.eval_node(idx, e).map_err(|err| match err {
            Error::AtNode { .. } => err,
            other => Error::AtNode { path: self.nodes[idx].path.clone(), source: Box::new(other) },
        })?;
        self.memo.insert((idx, e), v.clone());
        Ok(v)
    }

    fn bottom_lemma(&self, idx: usize, e: &Exps) -> Option<ExactScalar> {
        let nd = &self.nodes[idx];
        let (l, r, t) = (nd.l, nd.r, nd.t);
        let p = self.present(e);
        if p.len() != self.ell + 1 {
            return None;
        }
        if self.ell == 2 {
            if e[l] <= 0 || e[r] <= 0 || e[t] <= 0 {
                return None;
            }
            let c = |k: usize| [self.cols[k][0], self.cols[k][1]];
            key_lemma_coefficient(&[c(l), c(r), c(t)], [e[l] as u32, e[r] as u32, e[t] as u32]).ok()
        } else {
            let u = &nd.lam_l / &nd.lam_r;
            let u = as_small_int(&u).filter(|x| x.abs() == 1)?;
            let mut order = vec![l, r, t];
            order.extend(p.iter().copied().filter(|k| ![l, r, t].contains(k)));
            let cols: Vec<Vec<i64>> = order.iter().map(|&k| self.cols[k].clone()).collect();
            let ex: Vec<u32> = order.iter().map(|&k| e[k] as u32).collect();
            higher_rank_coefficient(&cols, &ex, u, &nd.lam_r).ok()
        }
    }

    fn eval_node(&mut self, idx: usize, e: Exps) -> Result<ExactScalar> {
        let (l, r, t, left, right, good, bottom) = {
            let n = &self.nodes[idx];
            (n.l, n.r, n.t, n.left, n.right, n.good, n.bottom)
        };
        if e[l] < 0 || e[r] < 0 || e[t] < 0 {
            return Err(Error::Precondition("node refers to a removed column".into()));
        }
        let (el, er, et) = (e[l] as u32, e[r] as u32, e[t] as u32);
        let s = el + er + et;
        let any_zero = self.present(&e).iter().any(|&k| e[k] == 0);
        let formal = self.mode == ReductionMode::Formal || good || any_zero;
        if formal && bottom && self.lemmas {
            if let Some(v) = self.bottom_lemma(idx, &e) {
                return Ok(v);
            }
        }
        let child_l = |i: u32| {
            let mut c = e;
            c[l] = -1;
            c[r] = i as i16;
            c[t] = (s - i) as i16;
            c
        };
        let child_r = |i: u32| {
            let mut c = e;
            c[r] = -1;
            c[l] = i as i16;
            c[t] = (s - i) as i16;
            c
        };
        let (lam_l, lam_r) = (self.nodes[idx].lam_l.clone(), self.nodes[idx].lam_r.clone());
        if formal {
            let mut lv = Vec::new();
            if el >= 1 {
                for i in 0..=er {
                    lv.push(self.eval(left, child_l(i))?);
                }
            }
            let mut rv = Vec::new();
            if er >= 1 {
                for i in 0..=el {
                    rv.push(self.eval(right, child_r(i))?);
                }
            }
            return Ok(formal_combination(&lam_l, &lam_r, el, er, &lv, &rv));
        }
        let mut lv = Vec::new();
        for i in 1..=er {
            lv.push(self.eval(left, child_l(i))?);
        }
        let mut rv = Vec::new();
        for i in 1..=el {
            rv.push(self.eval(right, child_r(i))?);
        }
        let mut base = e;
        base[l] = -1;
        base[r] = -1;
        base[t] = s as i16;
        let bf = self.forms(&base);
        let pl = self.auto.perp(&bf, &self.cols[l].clone())?;
        let pr = self.auto.perp(&bf, &self.cols[r].clone())?;
        Ok(explicit_combination(&lam_l, &lam_r, el, er, &lv, &rv, &pl, &pr))
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ReductionOptions {
    pub mode: ReductionMode,
    /// Evaluate last-generation nodes by the closed rank-two / higher-rank merge formulas
    /// when their hypotheses hold.
    pub lemmas: bool,
}

impl Default for ReductionOptions {
    fn default() -> Self {
        ReductionOptions { mode: ReductionMode::Hybrid, lemmas: true }
    }
}

fn run_engine(m: &FormMatrix, tree: &ComputationTree, opts: ReductionOptions) -> Result<(ExactScalar, HashMap<Exps, ExactScalar>)> {
    m.check()?;
    let r = m.columns.len();
    if r > MAXR {
        return Err(Error::InvalidArgument(format!("at most {MAXR} columns supported")));
    }
    if m.exponents.contains(&0) {
        return Err(Error::Precondition("tree reduction needs positive exponents; use evaluate_auto".into()));
    }
    if m.exponents.iter().any(|&e| e > 1000) {
        return Err(Error::InvalidArgument("exponent too large".into()));
    }
    let w = m.weight();
    if w % 2 == 1 {
        return Err(Error::OddWeight(w));
    }
    let mut nodes = Vec::new();
    let root = flatten(tree, &m.columns, "root".into(), &mut nodes)?;
    let mut eng = Engine {
        cols: &m.columns,
        ell: m.ell,
        nodes,
        mode: opts.mode,
        lemmas: opts.lemmas,
        memo: HashMap::new(),
        leaves: HashMap::new(),
        auto: AutoEvaluator::new(),
    };
    let mut e: Exps = [-1; MAXR];
    for (k, &x) in m.exponents.iter().enumerate() {
        e[k] = x as i16;
    }
    let v = eng.eval(root, e)?;
    Ok((v, eng.leaves))
}

/// Coefficient of (2 pi i)^w of Z(m) computed along `tree`.
pub fn reduce_coefficient(m: &FormMatrix, tree: &ComputationTree, opts: ReductionOptions) -> Result<ExactScalar> {
    Ok(run_engine(m, tree, opts)?.0)
}

/// A square base case reached by the recursion, with its exact (2 pi i)^w coefficient.
#[derive(Clone, Debug)]
pub struct LeafRecord {
    pub columns: Vec<Vec<i64>>,
    pub exponents: Vec<u32>,
    pub value: ExactScalar,
}

/// Every distinct leaf evaluated while reducing `m` along `tree`.
pub fn leaf_inventory(m: &FormMatrix, tree: &ComputationTree, opts: ReductionOptions) -> Result<Vec<LeafRecord>> {
    let (_, leaves) = run_engine(m, tree, opts)?;
    let mut out: Vec<LeafRecord> = leaves
        .into_iter()
        .map(|(e, value)| {
            let idx: Vec<usize> = (0..m.columns.len()).filter(|&k| e[k] >= 0).collect();
            LeafRecord {
                columns: idx.iter().map(|&k| m.columns[k].clone()).collect(),
                exponents: idx.iter().map(|&k| e[k] as u32).collect(),
                value,
            }
        })
        .collect();
    out.sort_by(|a, b| (&a.columns, &a.exponents).cmp(&(&b.columns, &b.exponents)));
    Ok(out)
}

pub fn reduce_by_tree(m: &FormMatrix, tree: &ComputationTree) -> Result<PiValue> {
    reduce_by_tree_with(m, tree, ReductionOptions::default())
}

pub fn reduce_by_tree_with(m: &FormMatrix, tree: &ComputationTree, opts: ReductionOptions) -> Result<PiValue> {
    let c = reduce_coefficient(m, tree, opts)?;
    PiValue::from_two_pi_i(&c, m.weight())
}

#[derive(Clone, Debug, Serialize)]
pub struct NodeReport {
    pub path: String,
    pub removed_left: usize,
    pub removed_right: usize,
    pub target: usize,
    pub lambda_left: Option<String>,
    pub lambda_right: Option<String>,
    pub good_parent: bool,
    pub last_generation_lemma: Option<bool>,
    pub issues: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LeafReport {
    pub path: String,
    pub columns: Vec<usize>,
    pub determinant: String,
    pub issues: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub passed: bool,
    pub internal_nodes: usize,
    pub good_parent_nodes: usize,
    pub nodes: Vec<NodeReport>,
    pub leaves: Vec<LeafReport>,
}

impl ValidationReport {
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        for n in &self.nodes {
            for i in &n.issues {
                out.push(format!("{}: {}", n.path, i));
            }
        }
        for l in &self.leaves {
            for i in &l.issues {
                out.push(format!("{}: {}", l.path, i));
            }
        }
        out
    }
}

/// Structural checks of a tree against a matrix.
pub fn validate_tree(m: &FormMatrix, tree: &ComputationTree) -> ValidationReport {
    let mut nodes = Vec::new();
    let mut leaves = Vec::new();
    let present: Vec<usize> = (1..=m.columns.len()).collect();
    walk(m, tree, &present, "root".into(), &mut nodes, &mut leaves);
    let passed = nodes.iter().all(|n| n.issues.is_empty()) && leaves.iter().all(|l| l.issues.is_empty());
    ValidationReport {
        passed,
        internal_nodes: tree.internal_nodes(),
        good_parent_nodes: nodes.iter().filter(|n| n.good_parent).count(),
        nodes,
        leaves,
    }
}

fn walk(m: &FormMatrix, tree: &ComputationTree, present: &[usize], path: String, nodes: &mut Vec<NodeReport>, leaves: &mut Vec<LeafReport>) {
    let col = |k: usize| m.columns[k - 1].clone();
    let Some((l, r, t)) = tree.labels() else {
        let mut issues = Vec::new();
        let cols: Vec<Vec<i64>> = present.iter().map(|&k| col(k)).collect();
        let mut det = String::from("-");
        if present.len() != m.ell {
            issues.push(format!("leaf has {} columns, expected {}", present.len(), m.ell));
        } else {
            let d = linalg::det(&cols);
            if d.is_zero() {
                issues.push("leaf columns are singular".into());
            }
            det = d.to_string();
        }
        leaves.push(LeafReport { path, columns: present.to_vec(), determinant: det, issues });
        return;
    };
    let (a, b) = tree.children().unwrap();
    let mut issues = Vec::new();
    let (mut ll, mut lr) = (None, None);
    let mut lemma = None;
    let in_range = |k: usize| k >= 1 && k <= m.columns.len();
    if !(in_range(l) && in_range(r) && in_range(t)) {
        issues.push("label out of range".into());
    } else {
        for k in [l, r, t] {
            if !present.contains(&k) {
                issues.push(format!("column {k} was already removed"));
            }
        }
        match linalg::solve(&[col(l), col(r)], &col(t)) {
            Some(s) if !s[0].is_zero() && !s[1].is_zero() => {
                if a.is_leaf() && b.is_leaf() {
                    lemma = Some(lemma_applicable(m, present, (l, r, t), &s));
                }
                ll = Some(crate::exact::format_scalar(&s[0]));
                lr = Some(crate::exact::format_scalar(&s[1]));
            }
            _ => issues.push(format!("no dependency: column {t} is not a combination of columns {l} and {r}")),
        }
        if l == r || l == t || r == t {
            issues.push(format!("labels ({l},{r},{t}) are not distinct"));
        }
    }
    nodes.push(NodeReport {
        path: path.clone(),
        removed_left: l,
        removed_right: r,
        target: t,
        lambda_left: ll,
        lambda_right: lr,
        good_parent: tree.is_good_parent(),
        last_generation_lemma: lemma,
        issues,
    });
    let la: Vec<usize> = present.iter().copied().filter(|&k| k != l).collect();
    let lb: Vec<usize> = present.iter().copied().filter(|&k| k != r).collect();
    walk(m, a, &la, format!("{path}/-{l}"), nodes, leaves);
    walk(m, b, &lb, format!("{path}/-{r}"), nodes, leaves);
}

fn lemma_applicable(m: &FormMatrix, present: &[usize], (l, r, t): (usize, usize, usize), lam: &[ExactScalar]) -> bool {
    let col = |k: usize| m.columns[k - 1].clone();
    if present.len() != m.ell + 1 {
        return false;
    }
    if m.ell == 2 {
        let c = |k: usize| [m.columns[k - 1][0], m.columns[k - 1][1]];
        return key_lemma_coefficient(&[c(l), c(r), c(t)], [2, 2, 2]).is_ok();
    }
    let Some(u) = as_small_int(&(&lam[0] / &lam[1])).filter(|x| x.abs() == 1) else { return false };
    let mut cols = vec![col(l), col(r), col(t)];
    cols.extend(present.iter().copied().filter(|k| ![l, r, t].contains(k)).map(col));
    let exps = vec![2u32; cols.len()];
    higher_rank_coefficient(&cols, &exps, u, &lam[1]).is_ok()
}
