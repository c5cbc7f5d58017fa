use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;
use wittenz::catalog::*;
use wittenz::reduction::validate_tree;
use wittenz::tree::ComputationTree;
use wittenz::Error;

fn subsets(v: [usize; 4]) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for skip in 0..4 {
        let t: Vec<usize> = (0..4).filter(|&i| i != skip).map(|i| v[i]).collect();
        out.push((t[0], t[1], t[2]));
    }
    out
}

fn set(v: Vec<(usize, usize, usize)>) -> BTreeSet<(usize, usize, usize)> {
    v.into_iter()
        .map(|(a, b, c)| {
            let mut t = [a, b, c];
            t.sort();
            (t[0], t[1], t[2])
        })
        .collect()
}

#[test]
fn lookup() {
    assert_eq!(algebra_names(), vec!["sl3", "so5", "g2", "so7", "sp6", "sl5"]);
    assert_eq!(get_algebra("SO7").unwrap().name, "so7");
    assert!(matches!(get_algebra("e8"), Err(Error::UnknownAlgebra(_))));
}

#[test]
fn matrices() {
    assert_eq!(so5().sigma, vec![vec![1, 0], vec![0, 1], vec![1, 1], vec![1, 2]]);
    assert_eq!(so5().divisor, 8);
    assert_eq!(g2().sigma, vec![vec![1, 0], vec![0, 1], vec![1, 1], vec![1, 2], vec![1, 3], vec![2, 3]]);
    assert_eq!(g2().divisor, 12);
    let s = sl5();
    assert_eq!((s.ell, s.r), (4, 10));
    assert_eq!(s.sigma[9], vec![1, 1, 1, 1]);
    assert_eq!(s.divisor, 60);
    assert_eq!((so7().ell, so7().r), (3, 9));
}

#[test]
fn constants() {
    let expect = [("sl3", 2, 6), ("so5", 6, 8), ("g2", 120, 12), ("so7", 720, 48), ("sp6", 720, 48), ("sl5", 288, 60)];
    for (name, m, div) in expect {
        let s = get_algebra(name).unwrap();
        assert_eq!(s.m_constant, m, "{name}");
        assert_eq!(s.divisor, div, "{name}");
        assert_eq!(s.m_from_sigma(), s.m_constant, "{name}");
    }
}

#[test]
fn columns_are_primitive() {
    let mut no_unit = Vec::new();
    for name in algebra_names() {
        for c in get_algebra(name).unwrap().sigma {
            assert_eq!(c.iter().fold(0i64, |a, &x| a.gcd(&x)), 1, "{name} {c:?}");
            if !c.iter().any(|x| x.abs() == 1) {
                no_unit.push((name, c));
            }
        }
    }
    assert_eq!(no_unit, vec![("g2", vec![2, 3])]);
}

#[test]
fn matrix_exponents() {
    let m = so7().matrix(4);
    assert_eq!(m.exponents, vec![4; 9]);
    assert_eq!(m.weight(), 36);
}

#[test]
fn sl3_dependencies() {
    assert_eq!(list_dependencies(&sl3()), vec![(1, 2, 3)]);
}

#[test]
fn so7_dependencies_contain_the_printed_fourteen() {
    let printed = set(printed_so7_dependencies());
    assert_eq!(printed.len(), 14);
    let mut expect = set(vec![(1, 5, 9), (4, 5, 8)]);
    for s in [[1, 6, 7, 8], [2, 3, 5, 6], [3, 4, 7, 9]] {
        expect.extend(set(subsets(s)));
    }
    assert_eq!(printed, expect);
    let all = set(list_dependencies(&so7()));
    assert!(all.is_superset(&printed));
    let extra: Vec<_> = all.difference(&printed).copied().collect();
    assert_eq!(extra, vec![(1, 2, 4), (2, 8, 9)]);
}

#[test]
fn so7_trees_use_both_unlisted_dependencies() {
    let printed = set(printed_so7_dependencies());
    for t in [so7_tree(7), so7_tree(1)] {
        let rep = validate_tree(&so7().matrix(2), &t);
        assert!(rep.passed);
        let outside: BTreeSet<_> = rep
            .nodes
            .iter()
            .map(|n| {
                let mut k = [n.removed_left, n.removed_right, n.target];
                k.sort();
                (k[0], k[1], k[2])
            })
            .filter(|k| !printed.contains(k))
            .collect();
        assert_eq!(outside, BTreeSet::from([(1, 2, 4), (2, 8, 9)]));
    }
}

#[test]
fn sl5_dependencies() {
    let printed = set(printed_sl5_dependencies());
    assert_eq!(printed.len(), 10);
    assert_eq!(set(list_dependencies(&sl5())), printed);
}

#[test]
fn sp6_relabelling() {
    let p = so7_to_sp6_labels();
    assert_eq!(p.len(), 9);
    assert_eq!(p.values().copied().collect::<BTreeSet<_>>(), (1..=9).collect());
    // (12)(398657)
    assert_eq!((p[&1], p[&2], p[&3], p[&9], p[&8], p[&6], p[&5], p[&7], p[&4]), (2, 1, 9, 8, 6, 5, 7, 3, 4));
    let mut q: BTreeMap<usize, usize> = (1..=9).map(|k| (k, k)).collect();
    for _ in 0..6 {
        q = q.into_iter().map(|(k, v)| (k, p[&v])).collect();
    }
    assert!(q.iter().all(|(k, v)| k == v));
    let sp6 = get_algebra("sp6").unwrap();
    assert_eq!(sp6.sigma, sp6_sigma());
}

#[test]
fn sp6_dependency_families() {
    let p = so7_to_sp6_labels();
    let mapped = set(printed_so7_dependencies().into_iter().map(|(a, b, c)| (p[&a], p[&b], p[&c])).collect());
    let mut expect = set(vec![(2, 7, 8), (4, 6, 7)]);
    for s in [[2, 3, 5, 6], [1, 5, 7, 9], [3, 4, 8, 9]] {
        expect.extend(set(subsets(s)));
    }
    assert_eq!(mapped, expect);
    let sp6 = get_algebra("sp6").unwrap();
    assert!(set(list_dependencies(&sp6)).is_superset(&expect));
    let family = set(subsets([1, 6, 7, 8]).into_iter().map(|(a, b, c)| (p[&a], p[&b], p[&c])).collect());
    assert_eq!(family, set(subsets([2, 3, 5, 6])));
    let rep = validate_tree(&sp6.matrix(2), &sp6.tree);
    assert!(rep.passed, "{:?}", rep.failures());
}

#[test]
fn default_trees() {
    for name in algebra_names() {
        let s = get_algebra(name).unwrap();
        let rep = validate_tree(&s.matrix(2), &s.tree);
        assert!(rep.passed, "{name}: {:?}", rep.failures());
        let deps = set(list_dependencies(&s));
        for n in &rep.nodes {
            let mut k = [n.removed_left, n.removed_right, n.target];
            k.sort();
            assert!(deps.contains(&(k[0], k[1], k[2])), "{name} {k:?}");
        }
        assert_eq!(rep.leaves.len(), s.tree.internal_nodes() + 1);
    }
    assert_eq!(sl3().tree.internal_nodes(), 1);
    assert_eq!(g2_tree().internal_nodes(), 15);
}

#[test]
fn good_parents() {
    let g = g2_tree();
    assert!(!g.is_good_parent());
    let rep = validate_tree(&g2().matrix(2), &g);
    assert_eq!(rep.good_parent_nodes, rep.internal_nodes - 1);
    for (name, good, total) in [("sl3", 1, 1), ("so5", 3, 3), ("so7", 32, 63), ("sp6", 32, 63), ("sl5", 32, 63)] {
        let s = get_algebra(name).unwrap();
        let rep = validate_tree(&s.matrix(2), &s.tree);
        assert_eq!((rep.good_parent_nodes, rep.internal_nodes), (good, total), "{name}");
        assert!(rep.passed);
    }
}

#[test]
fn tree_json_round_trip() {
    for name in algebra_names() {
        let t = get_algebra(name).unwrap().tree;
        assert_eq!(ComputationTree::from_json(&t.to_json()).unwrap(), t);
    }
    let v: serde_json::Value = serde_json::from_str(&sl3().tree.to_json()).unwrap();
    assert_eq!(v["removed_left"], 1);
    assert_eq!(v["removed_right"], 2);
    assert_eq!(v["target"], 3);
    assert_eq!(v["left"]["leaf"], true);
    assert!(ComputationTree::from_json("{\"removed_left\": 1}").is_err());
    assert!(ComputationTree::from_json("[1,2]").is_err());
}

#[test]
fn spec_json() {
    let j = so7().to_json();
    assert_eq!(j["M"], 720);
    assert_eq!(j["divisor"], 48);
    assert!(j["tree"].is_object());
    assert_eq!(j["columns"].as_array().map(|c| c.len()), Some(9));
}
