//! Shared fixtures for the integration tests.
#![allow(dead_code)]

use extremal::crystal::{generate, CrystalGraph, Window};
use extremal::lattice::RootSystem;
use extremal::monomial::{parse_exps, Exponents};
use extremal::torep::section5_anchor;
use extremal::qcoeff::{LaurentPoly, RationalQ};
use num::rational::Rational64;
use proptest::prelude::*;
use extremal::monomial::{normalize_exps, Monomial};

/// Node labels of the two displayed crystal fragments (s = 0 and s = 1),
/// in the same order for both.
pub const FRAGMENT_NODES: [[&str; 17]; 2] = [
    [
        "Y_{1,1}Y_{1,-1}Y_{0,2}^{-1}Y_{0,0}^{-1}",
        "Y_{1,3}^{-1}Y_{1,-1}Y_{2,2}Y_{0,0}^{-1}",
        "Y_{1,3}^{-1}Y_{1,1}^{-1}Y_{2,2}Y_{2,0}",
        "Y_{1,-1}Y_{2,4}^{-1}Y_{3,3}Y_{0,0}^{-1}",
        "Y_{1,1}^{-1}Y_{2,4}^{-1}Y_{2,0}Y_{3,3}",
        "Y_{1,-1}Y_{3,5}^{-1}Y_{0,4}Y_{0,0}^{-1}",
        "Y_{2,4}^{-1}Y_{2,2}^{-1}Y_{3,3}Y_{3,1}",
        "Y_{1,1}^{-1}Y_{2,0}Y_{3,5}^{-1}Y_{0,4}",
        "Y_{2,2}^{-1}Y_{3,5}^{-1}Y_{3,1}Y_{0,4}",
        "Y_{1,5}Y_{1,1}^{-1}Y_{2,0}Y_{0,6}^{-1}",
        "Y_{3,5}^{-1}Y_{3,3}^{-1}Y_{0,4}Y_{0,2}",
        "Y_{1,5}Y_{2,2}^{-1}Y_{3,1}Y_{0,6}^{-1}",
        "Y_{1,5}Y_{3,3}^{-1}Y_{0,6}^{-1}Y_{0,2}",
        "Y_{1,7}^{-1}Y_{2,6}Y_{2,2}^{-1}Y_{3,1}",
        "Y_{1,5}Y_{1,3}Y_{0,6}^{-1}Y_{0,4}^{-1}",
        "Y_{1,7}^{-1}Y_{2,6}Y_{3,3}^{-1}Y_{0,2}",
        "Y_{2,8}^{-1}Y_{3,7}Y_{3,3}^{-1}Y_{0,2}",
    ],
    [
        "Y_{1,1}Y_{1,-5}Y_{0,2}^{-1}Y_{0,-4}^{-1}",
        "Y_{1,3}^{-1}Y_{1,-5}Y_{2,2}Y_{0,-4}^{-1}",
        "Y_{1,3}^{-1}Y_{1,-3}^{-1}Y_{2,2}Y_{2,-4}",
        "Y_{1,-5}Y_{2,4}^{-1}Y_{3,3}Y_{0,-4}^{-1}",
        "Y_{1,-3}^{-1}Y_{2,4}^{-1}Y_{2,-4}Y_{3,3}",
        "Y_{1,-5}Y_{3,5}^{-1}Y_{0,4}Y_{0,-4}^{-1}",
        "Y_{2,4}^{-1}Y_{2,-2}^{-1}Y_{3,3}Y_{3,-3}",
        "Y_{1,-3}^{-1}Y_{2,-4}Y_{3,5}^{-1}Y_{0,4}",
        "Y_{2,-2}^{-1}Y_{3,5}^{-1}Y_{3,-3}Y_{0,4}",
        "Y_{1,5}Y_{1,-3}^{-1}Y_{2,-4}Y_{0,6}^{-1}",
        "Y_{3,5}^{-1}Y_{3,-1}^{-1}Y_{0,4}Y_{0,-2}",
        "Y_{1,5}Y_{2,-2}^{-1}Y_{3,-3}Y_{0,6}^{-1}",
        "Y_{1,5}Y_{3,-1}^{-1}Y_{0,6}^{-1}Y_{0,-2}",
        "Y_{1,7}^{-1}Y_{2,6}Y_{2,-2}^{-1}Y_{3,-3}",
        "Y_{1,5}Y_{1,-1}Y_{0,6}^{-1}Y_{0,0}^{-1}",
        "Y_{1,7}^{-1}Y_{2,6}Y_{3,-1}^{-1}Y_{0,-2}",
        "Y_{2,8}^{-1}Y_{3,7}Y_{3,-1}^{-1}Y_{0,-2}",
    ],
];

/// Displayed f~-arrows (source, label, target) between fragment nodes.
pub const FRAGMENT_EDGES: [(usize, usize, usize); 22] = [
    (0, 1, 1),
    (1, 1, 2),
    (1, 2, 3),
    (2, 2, 4),
    (3, 1, 4),
    (3, 3, 5),
    (4, 2, 6),
    (4, 3, 7),
    (5, 1, 7),
    (6, 3, 8),
    (7, 2, 8),
    (7, 0, 9),
    (8, 3, 10),
    (8, 0, 11),
    (9, 2, 11),
    (10, 0, 12),
    (11, 3, 12),
    (11, 1, 13),
    (12, 0, 14),
    (12, 1, 15),
    (13, 3, 15),
    (15, 2, 16),
];

/// Arrows drawn with one end outside the fragment: (node, label, raising).
/// `raising` means the arrow enters the node, so e~ is defined there.
pub const FRAGMENT_DANGLING: [(usize, usize, bool); 5] =
    [(0, 0, true), (1, 0, true), (3, 0, true), (15, 0, false), (16, 0, false)];

pub fn rank3() -> RootSystem {
    RootSystem::new(3).unwrap()
}

pub fn fragment_exps(s: usize) -> Vec<Exponents> {
    FRAGMENT_NODES[s].iter().map(|t| parse_exps(t).unwrap()).collect()
}

/// The connected crystal of the s-th component, generated in a window
/// wide enough to hold every fragment node with its neighbours.
pub fn component_graph(s: usize) -> CrystalGraph {
    let rs = rank3();
    generate(&rs, &[section5_anchor(s as i64).unwrap()], Window::new(-16, 16).unwrap()).unwrap()
}

pub struct FragmentCheck {
    pub missing_nodes: Vec<String>,
    pub wrong_edges: Vec<String>,
    pub extra_edges: Vec<String>,
    pub dangling: Vec<String>,
}

impl FragmentCheck {
    pub fn ok(&self) -> bool {
        self.missing_nodes.is_empty() && self.wrong_edges.is_empty() && self.extra_edges.is_empty() && self.dangling.is_empty()
    }
}

/// Compares a displayed fragment with the generated crystal: every node is
/// present, every arrow is an f~-edge with the drawn label, no further
/// f~-edge joins two fragment nodes, and the dangling arrows exist.
pub fn check_fragment(s: usize) -> FragmentCheck {
    let g = component_graph(s);
    let exps = fragment_exps(s);
    let idx: Vec<Option<usize>> = exps.iter().map(|e| g.find_exps(e)).collect();
    let mut out = FragmentCheck { missing_nodes: vec![], wrong_edges: vec![], extra_edges: vec![], dangling: vec![] };
    for (k, x) in idx.iter().enumerate() {
        if x.is_none() {
            out.missing_nodes.push(FRAGMENT_NODES[s][k].to_string());
        }
    }
    if !out.missing_nodes.is_empty() {
        return out;
    }
    let idx: Vec<usize> = idx.into_iter().map(Option::unwrap).collect();
    for &(a, i, b) in &FRAGMENT_EDGES {
        if g.f_edge(idx[a], i) != Some(idx[b]) {
            out.wrong_edges.push(format!("{} -{i}-> {}", FRAGMENT_NODES[s][a], FRAGMENT_NODES[s][b]));
        }
    }
    for a in 0..idx.len() {
        for i in g.root_system().nodes() {
            if let Some(t) = g.f_edge(idx[a], i) {
                if let Some(b) = idx.iter().position(|&x| x == t) {
                    if !FRAGMENT_EDGES.contains(&(a, i, b)) {
                        out.extra_edges.push(format!("{} -{i}-> {}", FRAGMENT_NODES[s][a], FRAGMENT_NODES[s][b]));
                    }
                }
            }
        }
    }
    for &(k, i, raising) in &FRAGMENT_DANGLING {
        let other = if raising { g.e_edge(idx[k], i) } else { g.f_edge(idx[k], i) };
        if other.map_or(true, |t| idx.contains(&t)) {
            out.dangling.push(format!("{} label {i} raising={raising}", FRAGMENT_NODES[s][k]));
        }
    }
    out
}

pub fn laurent() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((-4i64..=4, -3i64..=3), 0..4).prop_map(|t| LaurentPoly::from_terms(t.into_iter().map(|(e, c)| (e, c))))
}

pub fn nonzero_laurent() -> impl Strategy<Value = LaurentPoly> {
    laurent().prop_filter("nonzero", |p| !p.is_zero())
}

pub fn rational() -> impl Strategy<Value = RationalQ> {
    (laurent(), nonzero_laurent()).prop_map(|(a, b)| RationalQ::new(a, b).unwrap())
}

/// A monomial of one parity class with small support for n in {3, 5}.
pub fn monomial() -> impl Strategy<Value = (RootSystem, Monomial)> {
    (prop_oneof![Just(3usize), Just(5)], 0i64..2, prop::collection::vec((0usize..6, -3i64..=3, -2i64..=2), 0..7), -3i64..=3)
        .prop_map(|(n, class, vars, d)| {
            let rs = RootSystem::new(n).unwrap();
            let exps: Exponents = normalize_exps(vars.into_iter().map(|(i, l, u)| {
                let i = i % rs.size();
                let l = 2 * l + (class + i as i64).rem_euclid(2);
                ((i, l), u)
            }));
            let m = Monomial::from_exps(&rs, exps, Rational64::from_integer(d)).unwrap();
            (rs, m)
        })
}

