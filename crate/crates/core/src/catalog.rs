//! Root data for the supported algebras and their default computation trees.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg;
use crate::tree::{bottom, node, ComputationTree};
use crate::zfunction::FormMatrix;

/// Positive-orthant series: sum over m in Z_{>0}^ell of prod_j <m, form_j>^{-n * multiplier_j}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeriesDescriptor {
    pub ell: usize,
    pub factors: Vec<(Vec<i64>, u32)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AlgebraSpec {
    pub name: &'static str,
    pub ell: usize,
    pub r: usize,
    pub sigma: Vec<Vec<i64>>,
    #[serde(rename = "M")]
    pub m_constant: u64,
    pub weyl_order: u64,
    /// The constant printed on the left of each closed-form theorem.
    pub divisor: u64,
    pub tree: ComputationTree,
    pub series: SeriesDescriptor,
}

impl AlgebraSpec {
    fn build(name: &'static str, sigma: Vec<Vec<i64>>, m_constant: u64, weyl_order: u64, divisor: u64, tree: ComputationTree) -> Self {
        let ell = sigma[0].len();
        let series = SeriesDescriptor { ell, factors: sigma.iter().map(|c| (c.clone(), 1)).collect() };
        AlgebraSpec { name, ell, r: sigma.len(), sigma, m_constant, weyl_order, divisor, tree, series }
    }

    /// All columns with exponent `n`.
    pub fn matrix(&self, n: u32) -> FormMatrix {
        FormMatrix { ell: self.ell, columns: self.sigma.clone(), exponents: vec![n; self.r] }
    }

    /// Product over columns of the column sum.
    pub fn m_from_sigma(&self) -> u64 {
        self.sigma.iter().map(|c| c.iter().sum::<i64>() as u64).product()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "name": self.name,
            "ell": self.ell,
            "columns": self.sigma,
            "M": self.m_constant,
            "weyl_order": self.weyl_order,
            "divisor": self.divisor,
            "tree": self.tree,
        })
    }
}

fn cols(v: &[&[i64]]) -> Vec<Vec<i64>> {
    v.iter().map(|c| c.to_vec()).collect()
}

pub fn sl3() -> AlgebraSpec {
    AlgebraSpec::build("sl3", cols(&[&[1, 0], &[0, 1], &[1, 1]]), 2, 6, 6, bottom(1, 2, 3))
}

pub fn so5() -> AlgebraSpec {
    let t = node(2, 1, 3, bottom(1, 4, 3), bottom(2, 3, 4));
    AlgebraSpec::build("so5", cols(&[&[1, 0], &[0, 1], &[1, 1], &[1, 2]]), 6, 8, 8, t)
}

pub fn g2_tree() -> ComputationTree {
    let c345 = bottom(3, 4, 5);
    let c346 = bottom(3, 4, 6);
    node(
        6,
        5,
        4,
        node(2, 1, 3, node(4, 1, 3, bottom(5, 1, 3), c345.clone()), node(2, 3, 4, c345, bottom(4, 2, 5))),
        node(1, 2, 3, node(3, 2, 4, bottom(2, 6, 4), c346.clone()), node(1, 4, 3, c346, bottom(6, 1, 3))),
    )
}

pub fn g2() -> AlgebraSpec {
    let s = cols(&[&[1, 0], &[0, 1], &[1, 1], &[1, 2], &[1, 3], &[2, 3]]);
    AlgebraSpec::build("g2", s, 120, 12, 12, g2_tree())
}

/// Default tree for so7; the root merges into column `root_target` (7, or 1 for the alternative).
pub fn so7_tree(root_target: usize) -> ComputationTree {
    let e = |a, b, t, f1, f2, tl, tr| node(a, b, t, bottom(f1, f2, tl), bottom(f1, f2, tr));
    let d47 = e(4, 7, 9, 3, 9, 7, 4);
    let d37 = e(3, 7, 9, 4, 9, 7, 3);
    let c1 = node(5, 8, 4, d47.clone(), d47.clone());
    let c2 = node(2, 5, 3, d37.clone(), d37.clone());
    let c4 = node(1, 2, 4, d47.clone(), d47.clone());
    let c6 = node(1, 6, 7, d37, d47);
    let b1 = node(2, 8, 9, c1, c2.clone());
    let b2 = node(1, 5, 9, c2, c4.clone());
    let b4 = node(6, 2, 3, c4, c6);
    node(6, 8, root_target, node(1, 8, 7, b1, b2.clone()), node(6, 5, 2, b2, b4))
}

fn so7_sigma() -> Vec<Vec<i64>> {
    cols(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 0], &[0, 1, 1], &[0, 2, 1], &[2, 2, 1], &[1, 2, 1], &[1, 1, 1]])
}

pub fn so7() -> AlgebraSpec {
    AlgebraSpec::build("so7", so7_sigma(), 720, 48, 48, so7_tree(7))
}

/// Column relabelling so7 -> sp6, the permutation (12)(398657).
pub fn so7_to_sp6_labels() -> BTreeMap<usize, usize> {
    [(1, 2), (2, 1), (3, 9), (9, 8), (8, 6), (6, 5), (5, 7), (7, 3), (4, 4)].into_iter().collect()
}

pub fn sp6_sigma() -> Vec<Vec<i64>> {
    cols(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 0], &[0, 1, 1], &[0, 1, 2], &[1, 2, 2], &[1, 1, 2], &[1, 1, 1]])
}

/// The sp6 spec with the so7 tree transported through the relabelling.
pub fn sp6_from_so7() -> AlgebraSpec {
    let tree = so7_tree(7).relabel(&so7_to_sp6_labels());
    AlgebraSpec::build("sp6", sp6_sigma(), 720, 48, 48, tree)
}

pub fn sl5_tree() -> ComputationTree {
    let b = bottom(1, 10, 9);
    let d = node(4, 6, 9, node(8, 6, 1, b.clone(), b.clone()), node(4, 8, 10, b.clone(), b));
    let a1 = node(2, 7, 9, node(3, 7, 4, d.clone(), d.clone()), node(2, 3, 6, d.clone(), d));
    let rev: BTreeMap<usize, usize> =
        [(1, 4), (2, 3), (3, 2), (4, 1), (5, 7), (6, 6), (7, 5), (8, 9), (9, 8), (10, 10)].into_iter().collect();
    let a2 = a1.relabel(&rev);
    node(5, 7, 10, a1, a2)
}

pub fn sl5() -> AlgebraSpec {
    let s = cols(&[
        &[1, 0, 0, 0],
        &[0, 1, 0, 0],
        &[0, 0, 1, 0],
        &[0, 0, 0, 1],
        &[1, 1, 0, 0],
        &[0, 1, 1, 0],
        &[0, 0, 1, 1],
        &[1, 1, 1, 0],
        &[0, 1, 1, 1],
        &[1, 1, 1, 1],
    ]);
    AlgebraSpec::build("sl5", s, 288, 120, 60, sl5_tree())
}

type Builder = fn() -> AlgebraSpec;

const REGISTRY: &[(&str, Builder)] = &[("sl3", sl3), ("so5", so5), ("g2", g2), ("so7", so7), ("sp6", sp6_from_so7), ("sl5", sl5)];

pub fn algebra_names() -> Vec<&'static str> {
    REGISTRY.iter().map(|(n, _)| *n).collect()
}

pub fn get_algebra(name: &str) -> Result<AlgebraSpec> {
    REGISTRY
        .iter()
        .find(|(n, _)| n.eq_ignore_ascii_case(name))
        .map(|(_, b)| b())
        .ok_or_else(|| Error::UnknownAlgebra(name.to_string()))
}

/// Every 3-subset of columns (1-based, increasing) spanning a plane, no two columns parallel.
pub fn list_dependencies(spec: &AlgebraSpec) -> Vec<(usize, usize, usize)> {
    let c = &spec.sigma;
    let n = c.len();
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for d in b + 1..n {
                let pair = |x: usize, y: usize| linalg::rank(&[c[x].clone(), c[y].clone()]) == 2;
                if pair(a, b) && pair(a, d) && pair(b, d) && linalg::rank(&[c[a].clone(), c[b].clone(), c[d].clone()]) == 2 {
                    out.push((a + 1, b + 1, d + 1));
                }
            }
        }
    }
    out
}

/// The so7 dependency list as printed: {(1,5,9),(4,5,8)} with all triples of (1,6,7,8), (2,3,5,6), (3,4,7,9).
pub fn printed_so7_dependencies() -> Vec<(usize, usize, usize)> {
    let mut out = vec![(1, 5, 9), (4, 5, 8)];
    for q in [[1, 6, 7, 8], [2, 3, 5, 6], [3, 4, 7, 9]] {
        for skip in 0..4 {
            let t: Vec<usize> = (0..4).filter(|&i| i != skip).map(|i| q[i]).collect();
            out.push((t[0], t[1], t[2]));
        }
    }
    out.sort();
    out
}

pub fn printed_sl5_dependencies() -> Vec<(usize, usize, usize)> {
    vec![(1, 2, 5), (1, 6, 8), (1, 9, 10), (2, 3, 6), (2, 7, 9), (3, 4, 7), (3, 5, 8), (4, 6, 9), (4, 8, 10), (5, 7, 10)]
}
