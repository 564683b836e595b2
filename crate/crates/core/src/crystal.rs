//! Kashiwara operators on monomials, windowed generation of connected
//! crystals, J-subcrystals, extremality orbits and twisted-map checks.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::RootSystem;
use crate::monomial::{Exponents, Monomial};

/// epsilon_i, phi_i and the extremal positions p_i, q_i of a monomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KashiwaraStats {
    pub eps: i64,
    pub phi: i64,
    /// Largest L with eps_{i,L} = eps_i; defined iff eps > 0.
    pub p: Option<i64>,
    /// Smallest L with phi_{i,L} = phi_i; defined iff phi > 0.
    pub qq: Option<i64>,
}

/// Statistics of a single row given as ascending (l, u) pairs.
pub fn row_stats(row: impl DoubleEndedIterator<Item = (i64, i64)> + Clone) -> KashiwaraStats {
    let (mut s, mut phi, mut qq) = (0i64, 0i64, None);
    for (l, u) in row.clone() {
        s += u;
        if s > phi {
            phi = s;
            qq = Some(l);
        }
    }
    let (mut s, mut eps, mut p) = (0i64, 0i64, None);
    for (l, u) in row.rev() {
        s -= u;
        if s > eps {
            eps = s;
            p = Some(l);
        }
    }
    KashiwaraStats { eps, phi, p, qq }
}

pub fn stats(m: &Monomial, i: usize) -> KashiwaraStats {
    let row: Vec<(i64, i64)> = m.row(i).collect();
    row_stats(row.into_iter())
}

/// e~_i m = m A_{i,p_i(m)-1}, or `None` when eps_i(m) = 0.
pub fn e_tilde(rs: &RootSystem, m: &Monomial, i: usize) -> Option<Monomial> {
    stats(m, i).p.map(|p| m.mul_a(rs, i, p - 1, 1))
}

/// f~_i m = m A_{i,q_i(m)+1}^{-1}, or `None` when phi_i(m) = 0.
pub fn f_tilde(rs: &RootSystem, m: &Monomial, i: usize) -> Option<Monomial> {
    stats(m, i).qq.map(|q| m.mul_a(rs, i, q + 1, -1))
}

/// Spectral window [lmin, lmax]: a monomial is inside when its whole support is.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub lmin: i64,
    pub lmax: i64,
}

impl Window {
    pub fn new(lmin: i64, lmax: i64) -> Result<Self> {
        if lmin > lmax {
            return Err(Error::Window(format!("empty window [{lmin}, {lmax}]")));
        }
        Ok(Window { lmin, lmax })
    }

    /// The default window [-4(n+1), 4(n+1)].
    pub fn default_for(rs: &RootSystem) -> Self {
        let w = 4 * rs.size() as i64;
        Window { lmin: -w, lmax: w }
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        m.span().map_or(true, |(a, b)| a >= self.lmin && b <= self.lmax)
    }

    /// True when the support lies at least `margin` away from both edges.
    pub fn contains_with_margin(&self, m: &Monomial, margin: i64) -> bool {
        m.span()
            .map_or(true, |(a, b)| a >= self.lmin + margin && b <= self.lmax - margin)
    }
}

/// Windowed crystal: nodes in canonical order, f~-edges (src, i, dst), and
/// interior flags (every e~/f~ image of an interior node lies in the window).
#[derive(Clone, Debug)]
pub struct CrystalGraph {
    rs: RootSystem,
    window: Window,
    nodes: Vec<Monomial>,
    anchors: Vec<usize>,
    index: HashMap<Exponents, usize>,
    f_edge: Vec<Vec<Option<usize>>>,
    e_edge: Vec<Vec<Option<usize>>>,
    interior: Vec<bool>,
}

/// Generates the union of the connected crystals of the anchors inside the window.
pub fn generate(rs: &RootSystem, anchors: &[Monomial], window: Window) -> Result<CrystalGraph> {
    let labels: Vec<usize> = rs.nodes().collect();
    generate_with_labels(rs, anchors, window, &labels)
}

/// As [`generate`], using only the operators with labels in `labels`.
pub fn generate_with_labels(
    rs: &RootSystem,
    anchors: &[Monomial],
    window: Window,
    labels: &[usize],
) -> Result<CrystalGraph> {
    if anchors.is_empty() {
        return Err(Error::Argument("generation needs at least one anchor".into()));
    }
    for a in anchors {
        if a.weight().h.len() != rs.size() {
            return Err(Error::Validation(format!("anchor {a} has a weight of the wrong rank")));
        }
        if !window.contains(a) {
            return Err(Error::Window(format!(
                "anchor {a} lies outside the window [{}, {}]",
                window.lmin, window.lmax
            )));
        }
    }
    let mut seen: HashMap<Exponents, Monomial> = HashMap::new();
    let mut queue: VecDeque<Monomial> = VecDeque::new();
    let mut start: Vec<Monomial> = anchors.to_vec();
    start.sort();
    for a in start {
        insert_node(&mut seen, &mut queue, a)?;
    }
    while let Some(m) = queue.pop_front() {
        for &i in labels {
            for x in [f_tilde(rs, &m, i), e_tilde(rs, &m, i)].into_iter().flatten() {
                if window.contains(&x) {
                    insert_node(&mut seen, &mut queue, x)?;
                }
            }
        }
    }
    let mut nodes: Vec<Monomial> = seen.into_values().collect();
    nodes.sort();
    let mut anchor_idx: Vec<usize> = Vec::new();
    let g = assemble(rs, window, nodes, labels);
    for a in anchors {
        anchor_idx.push(g.find(a).expect("anchor is a node"));
    }
    anchor_idx.sort_unstable();
    anchor_idx.dedup();
    Ok(CrystalGraph { anchors: anchor_idx, ..g })
}

fn insert_node(seen: &mut HashMap<Exponents, Monomial>, queue: &mut VecDeque<Monomial>, m: Monomial) -> Result<()> {
    match seen.get(m.exps()) {
        Some(old) if old.weight() != m.weight() => Err(Error::Validation(format!(
            "monomial {m} reached with weights {} and {}",
            old.weight(),
            m.weight()
        ))),
        Some(_) => Ok(()),
        None => {
            seen.insert(m.exps().to_vec(), m.clone());
            queue.push_back(m);
            Ok(())
        }
    }
}

fn assemble(rs: &RootSystem, window: Window, nodes: Vec<Monomial>, labels: &[usize]) -> CrystalGraph {
    let index: HashMap<Exponents, usize> = nodes.iter().enumerate().map(|(k, m)| (m.exps().to_vec(), k)).collect();
    let size = rs.size();
    let mut f_edge = vec![vec![None; size]; nodes.len()];
    let mut e_edge = vec![vec![None; size]; nodes.len()];
    let mut interior = vec![true; nodes.len()];
    for (k, m) in nodes.iter().enumerate() {
        for i in rs.nodes() {
            for (up, img) in [(false, f_tilde(rs, m, i)), (true, e_tilde(rs, m, i))] {
                let Some(x) = img else { continue };
                if !window.contains(&x) {
                    interior[k] = false;
                    continue;
                }
                if !labels.contains(&i) {
                    continue;
                }
                if let Some(&t) = index.get(x.exps()) {
                    if up {
                        e_edge[k][i] = Some(t);
                    } else {
                        f_edge[k][i] = Some(t);
                    }
                }
            }
        }
    }
    CrystalGraph {
        rs: *rs,
        window,
        nodes,
        anchors: Vec::new(),
        index,
        f_edge,
        e_edge,
        interior,
    }
}

impl CrystalGraph {
    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Monomial] {
        &self.nodes
    }

    pub fn node(&self, k: usize) -> &Monomial {
        &self.nodes[k]
    }

    pub fn anchors(&self) -> &[usize] {
        &self.anchors
    }

    pub fn is_interior(&self, k: usize) -> bool {
        self.interior[k]
    }

    pub fn interior_flags(&self) -> &[bool] {
        &self.interior
    }

    /// Index of a node with these exponents and this exact weight.
    pub fn find(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m.exps()).copied().filter(|&k| self.nodes[k] == *m)
    }

    pub fn find_exps(&self, e: &[(crate::monomial::Var, i64)]) -> Option<usize> {
        self.index.get(e).copied()
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.find(m).is_some()
    }

    pub fn f_edge(&self, k: usize, i: usize) -> Option<usize> {
        self.f_edge[k][i]
    }

    pub fn e_edge(&self, k: usize, i: usize) -> Option<usize> {
        self.e_edge[k][i]
    }

    /// The nodes inside a smaller window, with edges and interior flags
    /// recomputed there. Anchors outside the new window are dropped.
    pub fn restrict(&self, window: Window) -> CrystalGraph {
        let nodes: Vec<Monomial> = self.nodes.iter().filter(|m| window.contains(m)).cloned().collect();
        let labels: Vec<usize> = self.rs.nodes().collect();
        let g = assemble(&self.rs, window, nodes, &labels);
        let anchors = self.anchors.iter().filter_map(|&a| g.find(&self.nodes[a])).collect();
        CrystalGraph { anchors, ..g }
    }

    /// All f~-edges (src, i, dst) in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for (k, row) in self.f_edge.iter().enumerate() {
            for (i, t) in row.iter().enumerate() {
                if let Some(t) = t {
                    out.push((k, i, *t));
                }
            }
        }
        out
    }

    /// Connected closure of node `k` under the operators with labels in `j`.
    pub fn sub_crystal(&self, k: usize, j: &[usize]) -> Result<CrystalGraph> {
        if k >= self.len() {
            return Err(Error::Argument(format!("node {k} not in the graph")));
        }
        for &i in j {
            self.rs.check_node(i)?;
        }
        let mut seen = BTreeSet::from([k]);
        let mut stack = vec![k];
        while let Some(x) = stack.pop() {
            for &i in j {
                for y in [self.f_edge[x][i], self.e_edge[x][i]].into_iter().flatten() {
                    if seen.insert(y) {
                        stack.push(y);
                    }
                }
            }
        }
        let nodes: Vec<Monomial> = seen.iter().map(|&x| self.nodes[x].clone()).collect();
        let mut g = assemble(&self.rs, self.window, nodes, j);
        // keep only edges between members, and inherit interiority
        for (x, m) in g.nodes.iter().enumerate() {
            g.interior[x] = self.interior[self.index[m.exps()]];
        }
        g.anchors = vec![g.index[self.nodes[k].exps()]];
        Ok(g)
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph crystal {\n");
        for (k, m) in self.nodes.iter().enumerate() {
            let style = if self.interior[k] { "" } else { ", style=dashed" };
            let _ = writeln!(s, "  n{k} [label=\"{m}\"{style}];");
        }
        for (a, i, b) in self.edges() {
            let _ = writeln!(s, "  n{a} -> n{b} [label=\"{i}\"];");
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            nodes: self.nodes.clone(),
            edges: self.edges(),
            interior: self.interior.clone(),
        }
    }
}

/// JSON form of a crystal graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub nodes: Vec<Monomial>,
    pub edges: Vec<(usize, usize, usize)>,
    pub interior: Vec<bool>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExtremalVerdict {
    Extremal,
    NotExtremal,
    InconclusiveWindow,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExtremalReport {
    pub verdict: ExtremalVerdict,
    pub depth: usize,
    pub orbit: Vec<Monomial>,
    /// Orbit element and direction where both e~_i and f~_i act nontrivially.
    pub failure: Option<(Monomial, usize)>,
}

/// S_i on a monomial that is i-extremal: f~_i^{phi} or e~_i^{eps}.
/// Returns `None` if an intermediate step leaves the window.
pub fn s_action(rs: &RootSystem, m: &Monomial, i: usize, window: &Window) -> Option<Monomial> {
    let st = stats(m, i);
    let mut x = m.clone();
    for _ in 0..st.phi {
        x = f_tilde(rs, &x, i).expect("phi counts the f-string");
        if !window.contains(&x) {
            return None;
        }
    }
    for _ in 0..st.eps {
        x = e_tilde(rs, &x, i).expect("eps counts the e-string");
        if !window.contains(&x) {
            return None;
        }
    }
    Some(x)
}

/// Explores the S_i-orbit of `m` by words of length at most `depth` and
/// checks that every orbit element is i-extremal for every i.
pub fn is_extremal(rs: &RootSystem, m: &Monomial, depth: usize, window: &Window) -> ExtremalReport {
    let mut orbit = vec![m.clone()];
    let mut seen: BTreeSet<Monomial> = BTreeSet::from([m.clone()]);
    let mut frontier = vec![m.clone()];
    let mut inconclusive = false;
    for level in 0..=depth {
        let mut next = Vec::new();
        for x in &frontier {
            for i in rs.nodes() {
                let st = stats(x, i);
                if st.eps > 0 && st.phi > 0 {
                    return ExtremalReport {
                        verdict: ExtremalVerdict::NotExtremal,
                        depth,
                        orbit,
                        failure: Some((x.clone(), i)),
                    };
                }
                if level == depth {
                    continue;
                }
                match s_action(rs, x, i, window) {
                    Some(y) => {
                        if seen.insert(y.clone()) {
                            orbit.push(y.clone());
                            next.push(y);
                        }
                    }
                    None => inconclusive = true,
                }
            }
        }
        frontier = next;
    }
    ExtremalReport {
        verdict: if inconclusive {
            ExtremalVerdict::InconclusiveWindow
        } else {
            ExtremalVerdict::Extremal
        },
        depth,
        orbit,
        failure: None,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TwistViolation {
    pub node: Monomial,
    pub label: usize,
    pub raising: bool,
    pub expected: Option<String>,
    pub found: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TwistReport {
    pub checked: usize,
    pub violations: Vec<TwistViolation>,
}

/// Checks f~_{theta(i)} o map = map o f~_i and the same for e~ on all
/// interior nodes, comparing exponents only.
pub fn check_twist<M, T>(g: &CrystalGraph, map: M, theta: T) -> TwistReport
where
    M: Fn(&Exponents) -> Exponents,
    T: Fn(usize) -> usize,
{
    let rs = g.rs;
    let lift = |e: Exponents| Monomial::from_exps(&rs, e, num::Zero::zero()).expect("mapped exponents are valid");
    let mut checked = 0;
    let mut violations = Vec::new();
    for (k, m) in g.nodes.iter().enumerate() {
        if !g.interior[k] {
            continue;
        }
        let image = lift(map(&m.exps().to_vec()));
        for i in rs.nodes() {
            for raising in [false, true] {
                let op = |x: &Monomial, j: usize| if raising { e_tilde(&rs, x, j) } else { f_tilde(&rs, x, j) };
                let lhs = op(m, i).map(|x| map(&x.exps().to_vec()));
                let rhs = op(&image, theta(i)).map(|x| x.exps().to_vec());
                checked += 1;
                if lhs != rhs {
                    let show = |e: Option<Exponents>| e.map(|e| crate::monomial::format_exps(&e));
                    violations.push(TwistViolation {
                        node: m.clone(),
                        label: i,
                        raising,
                        expected: show(lhs),
                        found: show(rhs),
                    });
                }
            }
        }
    }
    TwistReport { checked, violations }
}

#[derive(Clone, Debug, Serialize)]
pub struct AutomorphismReport {
    pub mapped_nodes: usize,
    pub mapped_edges: usize,
    pub violations: Vec<String>,
}

/// Checks that a node-wise map (with full weights) sends nodes to nodes and
/// f~-edges to f~-edges with the same label, wherever images fall inside
/// the window, and that edge sets correspond in both directions.
pub fn check_automorphism<F: Fn(&Monomial) -> Monomial>(g: &CrystalGraph, map: F) -> AutomorphismReport {
    let images: Vec<Option<usize>> = g
        .nodes
        .iter()
        .map(|m| {
            let x = map(m);
            g.window.contains(&x).then(|| g.find(&x)).flatten()
        })
        .collect();
    let mut violations = Vec::new();
    let mut mapped_nodes = 0;
    for (k, m) in g.nodes.iter().enumerate() {
        let x = map(m);
        if g.window.contains(&x) {
            mapped_nodes += 1;
            if images[k].is_none() {
                violations.push(format!("image of {m} ({}) is not a node", x.full_string()));
            }
        }
    }
    let mut mapped_edges = 0;
    for (a, i, b) in g.edges() {
        if let (Some(x), Some(y)) = (images[a], images[b]) {
            mapped_edges += 1;
            if g.f_edge[x][i] != Some(y) {
                violations.push(format!("edge {} -{i}-> {} is not preserved", g.nodes[a], g.nodes[b]));
            }
        }
    }
    // Reflected edges must come from edges: compare edge counts among mapped pairs.
    for (x, i, y) in g.edges() {
        let pre_a = images.iter().position(|&t| t == Some(x));
        let pre_b = images.iter().position(|&t| t == Some(y));
        if let (Some(a), Some(b)) = (pre_a, pre_b) {
            if g.f_edge[a][i] != Some(b) {
                violations.push(format!("edge {} -{i}-> {} has no preimage edge", g.nodes[x], g.nodes[y]));
            }
        }
    }
    AutomorphismReport {
        mapped_nodes,
        mapped_edges,
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::varpi;
    use num::rational::Rational64;
    use num::Zero;

    fn m0(rs: &RootSystem, l: usize) -> Monomial {
        Monomial::make(rs, vec![((l, 0), 1), ((0, rs.d_ell(l) as i64), -1)], varpi(rs, l)).unwrap()
    }

    #[test]
    fn stats_examples() {
        let rs = RootSystem::new(3).unwrap();
        let s = stats(&m0(&rs, 1), 1);
        assert_eq!(s, KashiwaraStats { eps: 0, phi: 1, p: None, qq: Some(0) });
        let m = Monomial::parse(&rs, "Y_{2,1}Y_{1,2}^{-1}", Rational64::zero()).unwrap();
        let s = stats(&m, 1);
        assert_eq!((s.eps, s.phi, s.p), (1, 0, Some(2)));
        assert_eq!(stats(&Monomial::identity(&rs), 2), KashiwaraStats { eps: 0, phi: 0, p: None, qq: None });
    }

    #[test]
    fn operators_on_examples() {
        let rs = RootSystem::new(3).unwrap();
        let f = f_tilde(&rs, &m0(&rs, 1), 1).unwrap();
        assert_eq!(f.to_string(), "Y_{1,2}^{-1}Y_{2,1}");
        assert_eq!(e_tilde(&rs, &f, 1).unwrap(), m0(&rs, 1));
        let f2 = f_tilde(&rs, &m0(&rs, 2), 2).unwrap();
        assert_eq!(f2.to_string(), "Y_{0,2}^{-1}Y_{1,1}Y_{2,2}^{-1}Y_{3,1}");
        assert!(e_tilde(&rs, &m0(&rs, 2), 2).is_none());
    }

    #[test]
    fn one_wide_window_gives_single_node() {
        let rs = RootSystem::new(3).unwrap();
        let m = Monomial::parse(&rs, "Y_{1,0}", Rational64::zero()).unwrap();
        let g = generate(&rs, &[m], Window::new(0, 0).unwrap()).unwrap();
        assert_eq!(g.len(), 1);
        assert!(g.edges().is_empty());
        assert!(!g.is_interior(0));
    }

    #[test]
    fn anchor_outside_window_is_an_error() {
        let rs = RootSystem::new(3).unwrap();
        assert!(generate(&rs, &[m0(&rs, 1)], Window::new(2, 8).unwrap()).is_err());
    }

    #[test]
    fn sub_crystal_sizes() {
        let rs = RootSystem::new(3).unwrap();
        let g = generate(&rs, &[m0(&rs, 1)], Window::new(-8, 12).unwrap()).unwrap();
        let k = g.find(&m0(&rs, 1)).unwrap();
        assert_eq!(g.sub_crystal(k, &[1, 2, 3]).unwrap().len(), 4);
        assert_eq!(g.sub_crystal(k, &[]).unwrap().len(), 1);
    }

    #[test]
    fn json_round_trip() {
        let rs = RootSystem::new(3).unwrap();
        let g = generate(&rs, &[m0(&rs, 1)], Window::new(-4, 8).unwrap()).unwrap();
        let js = serde_json::to_string(&g.to_json()).unwrap();
        let back: GraphJson = serde_json::from_str(&js).unwrap();
        assert_eq!(back, g.to_json());
        assert!(g.to_dot().starts_with("digraph"));
    }
}
