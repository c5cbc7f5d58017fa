//! Computation trees: which pair of columns is merged into which target at each step.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ComputationTree {
    Node {
        removed_left: usize,
        removed_right: usize,
        target: usize,
        left: Box<ComputationTree>,
        right: Box<ComputationTree>,
    },
    Leaf {
        leaf: bool,
    },
}

pub fn leaf() -> ComputationTree {
    ComputationTree::Leaf { leaf: true }
}

/// Internal node; the left child drops `l`, the right child drops `r`.
pub fn node(l: usize, r: usize, t: usize, left: ComputationTree, right: ComputationTree) -> ComputationTree {
    ComputationTree::Node { removed_left: l, removed_right: r, target: t, left: Box::new(left), right: Box::new(right) }
}

/// Node whose two children are leaves.
pub fn bottom(l: usize, r: usize, t: usize) -> ComputationTree {
    node(l, r, t, leaf(), leaf())
}

impl ComputationTree {
    pub fn is_leaf(&self) -> bool {
        matches!(self, ComputationTree::Leaf { .. })
    }

    pub fn labels(&self) -> Option<(usize, usize, usize)> {
        match self {
            ComputationTree::Node { removed_left, removed_right, target, .. } => Some((*removed_left, *removed_right, *target)),
            ComputationTree::Leaf { .. } => None,
        }
    }

    pub fn children(&self) -> Option<(&ComputationTree, &ComputationTree)> {
        match self {
            ComputationTree::Node { left, right, .. } => Some((left, right)),
            ComputationTree::Leaf { .. } => None,
        }
    }

    pub fn internal_nodes(&self) -> usize {
        match self.children() {
            Some((a, b)) => 1 + a.internal_nodes() + b.internal_nodes(),
            None => 0,
        }
    }

    pub fn depth(&self) -> usize {
        match self.children() {
            Some((a, b)) => 1 + a.depth().max(b.depth()),
            None => 0,
        }
    }

    /// Every internal child names its sibling's removed column among its own removed pair.
    pub fn is_good_parent(&self) -> bool {
        let Some((l, r, _)) = self.labels() else { return true };
        let (a, b) = self.children().unwrap();
        if a.is_leaf() && b.is_leaf() {
            return true;
        }
        for (kid, sibling) in [(a, r), (b, l)] {
            let Some((kl, kr, _)) = kid.labels() else { continue };
            if sibling != kl && sibling != kr {
                return false;
            }
            if !kid.is_good_parent() {
                return false;
            }
        }
        true
    }

    pub fn relabel(&self, p: &BTreeMap<usize, usize>) -> ComputationTree {
        let m = |x: usize| *p.get(&x).unwrap_or(&x);
        match self {
            ComputationTree::Node { removed_left, removed_right, target, left, right } => {
                node(m(*removed_left), m(*removed_right), m(*target), left.relabel(p), right.relabel(p))
            }
            ComputationTree::Leaf { .. } => leaf(),
        }
    }

    pub fn max_label(&self) -> usize {
        match self {
            ComputationTree::Node { removed_left, removed_right, target, left, right } => {
                (*removed_left).max(*removed_right).max(*target).max(left.max_label()).max(right.max_label())
            }
            ComputationTree::Leaf { .. } => 0,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("tree serializes")
    }

    pub fn from_json(s: &str) -> Result<ComputationTree> {
        let t: ComputationTree = serde_json::from_str(s).map_err(|e| Error::Tree(e.to_string()))?;
        t.check_shape()?;
        Ok(t)
    }

    fn check_shape(&self) -> Result<()> {
        match self {
            ComputationTree::Leaf { leaf } if !leaf => Err(Error::Tree("leaf marker must be true".into())),
            ComputationTree::Leaf { .. } => Ok(()),
            ComputationTree::Node { removed_left, removed_right, target, left, right } => {
                let (l, r, t) = (*removed_left, *removed_right, *target);
                if l == 0 || r == 0 || t == 0 {
                    return Err(Error::Tree("column labels are 1-based".into()));
                }
                if l == r || l == t || r == t {
                    return Err(Error::Tree(format!("node ({l},{r}->{t}) repeats a column")));
                }
                left.check_shape()?;
                right.check_shape()
            }
        }
    }

    /// Indented text rendering, one node per line.
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.render_into(&mut out, 0, "");
        out
    }

    fn render_into(&self, out: &mut String, depth: usize, tag: &str) {
        let pad = "  ".repeat(depth);
        match self {
            ComputationTree::Leaf { .. } => {
                let _ = writeln!(out, "{pad}{tag}leaf");
            }
            ComputationTree::Node { removed_left, removed_right, target, left, right } => {
                let _ = writeln!(out, "{pad}{tag}{removed_left} | {removed_right} -> ({target})");
                left.render_into(out, depth + 1, &format!("-{removed_left}: "));
                right.render_into(out, depth + 1, &format!("-{removed_right}: "));
            }
        }
    }
}
