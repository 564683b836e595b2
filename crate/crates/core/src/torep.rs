//! Loop weight modules of the quantum toroidal algebra realized on monomial
//! crystals. Thin modules act through the crystal statistics; the module of
//! 2varpi_1 (n = 3) is assembled from local sl2 blocks on the union of the
//! crystals of M_s. Also: q-characters, h-eigenvalues from the phi-series,
//! extremal vectors, and an exact check of the defining relations.

use std::collections::{BTreeMap, HashMap, HashSet};

use num::rational::Rational64;
use rayon::prelude::*;
use serde::Serialize;

use crate::closedness::{class_key, closed_report, default_margin};
use crate::crystal::{generate, stats, CrystalGraph, ExtremalVerdict, Window};
use crate::error::{Error, Result};
use crate::lattice::{reflect, root_coords, RootSystem, Weight};
use crate::monomial::{fundamental_monomial, normalize_exps, Exponents, Monomial};
use crate::qcoeff::{
    qfactorial, qint, series_log, series_of_rational, Direction, Field, GenericQ, LaurentPoly, QSeries, RationalQ,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Flavor {
    Thin,
    Section5,
}

/// One term of x^±_{i,r} v_source = coeff q^{r l} v_target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionEntry {
    pub target: usize,
    pub coeff: RationalQ,
    pub l: i64,
}

/// Local sl2 block used in one direction at one node.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Template {
    /// The statistics rule x^+ -> q^{r(p-1)}, x^- -> q^{r(q+1)}.
    Thin,
    /// Trivial row: the generators of this direction act by zero.
    Zero,
    /// Kirillov-Reshetikhin block of a q-string of the given length.
    String { len: usize },
    /// Tensor product of two fundamental blocks in general position.
    Tensor,
    /// Class cut by the window; no action is defined.
    Truncated,
}

/// Sparse vector over Q(q), without zero entries.
pub type Vector = BTreeMap<usize, RationalQ>;

fn q_pow(e: i64) -> RationalQ {
    RationalQ::q_pow(e)
}

fn q_minus_qinv() -> LaurentPoly {
    LaurentPoly::from_terms([(1, 1), (-1, -1)])
}

fn add_into(v: &mut Vector, k: usize, c: RationalQ) {
    let e = v.entry(k).or_insert_with(RationalQ::zero);
    *e = &*e + &c;
    if e.is_zero() {
        v.remove(&k);
    }
}

pub fn basis_vector(k: usize) -> Vector {
    Vector::from([(k, RationalQ::one())])
}

/// The levels l for which the crystal of varpi_l is closed: 1, r+1 and n.
pub fn is_thin_ell(rs: &RootSystem, ell: usize) -> bool {
    ell == 1 || ell == rs.r() + 1 || ell == rs.n()
}

/// M_s = e^{2varpi_1 + s delta} Y_{1,1} Y_{1,-1-4s} Y_{0,2}^{-1} Y_{0,-4s}^{-1} for n = 3.
pub fn section5_anchor(s: i64) -> Result<Monomial> {
    let rs = RootSystem::new(3)?;
    let exps = normalize_exps([((1, 1), 1), ((1, -1 - 4 * s), 1), ((0, 2), -1), ((0, -4 * s), -1)]);
    Monomial::from_exps(&rs, exps, Rational64::from_integer(s))
}

/// phi^±_i(z) on v_m from the statistics: k_i^{±1} and
/// ±(q-q^{-1})(phi_i q^{±s(q_i+1)} - eps_i q^{±s(p_i-1)}) for s > 0.
pub fn actmod_phi_series(m: &Monomial, i: usize, dir: Direction, order: usize) -> QSeries {
    let st = stats(m, i);
    let sg = dir.sign();
    let mut c = vec![q_pow(sg * m.weight().h[i])];
    let qq = RationalQ::from_poly(q_minus_qinv());
    for s in 1..=order as i64 {
        let mut t = LaurentPoly::zero();
        if st.phi > 0 {
            t = &t + &LaurentPoly::monomial(st.phi, sg * s * (st.qq.expect("q_i defined") + 1));
        }
        if st.eps > 0 {
            t = &t - &LaurentPoly::monomial(st.eps, sg * s * (st.p.expect("p_i defined") - 1));
        }
        c.push(&(&RationalQ::from_poly(t) * &qq) * &RationalQ::from_int(sg));
    }
    QSeries::new(dir, c, order)
}

/// phi^±_i(z) of an l-weight vector of l-weight m (Frenkel-Reshetikhin form):
/// q^{deg Q - deg R} Q(zq^{-1})R(zq)/(Q(zq)R(zq^{-1})), expanded in z^{±1}.
pub fn fr_phi_series(m: &Monomial, i: usize, dir: Direction, order: usize) -> Result<QSeries> {
    let sg = dir.sign();
    let deg: i64 = m.row(i).map(|(_, u)| u).sum();
    let mut acc = QSeries::constant(dir, q_pow(sg * deg), order);
    let one = RationalQ::one();
    for (l, u) in m.row(i) {
        // Y_{i,l} contributes (1 - w q^{sg(l-1)})/(1 - w q^{sg(l+1)}) in w = z^{sg}
        let (mut a, mut b) = (q_pow(sg * (l - 1)), q_pow(sg * (l + 1)));
        if u < 0 {
            std::mem::swap(&mut a, &mut b);
        }
        let f = series_of_rational(&[one.clone(), -a], &[one.clone(), -b], dir, order)?;
        for _ in 0..u.abs() {
            acc = acc.mul(&f);
        }
    }
    Ok(acc)
}

/// Module over a crystal graph with explicit action tables.
#[derive(Clone, Debug)]
pub struct LoopModule {
    graph: CrystalGraph,
    flavor: Flavor,
    twist: i64,
    plus: Vec<Vec<Vec<ActionEntry>>>,
    minus: Vec<Vec<Vec<ActionEntry>>>,
    templates: Vec<Vec<Template>>,
    usable: Vec<bool>,
}

/// The thin module V(e^{varpi_l}Y_{l,0}Y_{0,d_l}^{-1}) on the crystal generated in
/// the window. Refused unless the crystal is closed (l = 1, r+1, n).
pub fn build_thin(rs: &RootSystem, ell: usize, window: Window) -> Result<LoopModule> {
    rs.check_ell(ell)?;
    if !is_thin_ell(rs, ell) {
        let rep = closed_report(rs, ell, Window::default_for(rs), default_margin(rs))?;
        let detail = rep
            .directions
            .iter()
            .find_map(|d| d.witness.as_ref().map(|w| format!("; direction {}: {} requires {}", d.direction, w.monomial, w.missing)))
            .unwrap_or_default();
        return Err(Error::Refused(format!(
            "the crystal of varpi_{ell} is not closed for n = {} (closed only for l = 1, r+1, n){detail}",
            rs.n()
        )));
    }
    let g = generate(rs, &[fundamental_monomial(rs, ell)?], window)?;
    Ok(thin_from_graph(g))
}

/// Thin action on an arbitrary generated crystal.
pub fn thin_from_graph(g: CrystalGraph) -> LoopModule {
    let rs = *g.root_system();
    let size = rs.size();
    let mut plus = vec![vec![Vec::new(); size]; g.len()];
    let mut minus = vec![vec![Vec::new(); size]; g.len()];
    for (k, m) in g.nodes().iter().enumerate() {
        for i in rs.nodes() {
            let st = stats(m, i);
            if let Some(t) = g.e_edge(k, i) {
                plus[k][i].push(ActionEntry {
                    target: t,
                    coeff: RationalQ::one(),
                    l: st.p.expect("e~ defined") - 1,
                });
            }
            if let Some(t) = g.f_edge(k, i) {
                minus[k][i].push(ActionEntry {
                    target: t,
                    coeff: RationalQ::one(),
                    l: st.qq.expect("f~ defined") + 1,
                });
            }
        }
    }
    let usable = g.interior_flags().to_vec();
    LoopModule {
        templates: vec![vec![Template::Thin; size]; g.len()],
        graph: g,
        flavor: Flavor::Thin,
        twist: 0,
        plus,
        minus,
        usable,
    }
}

struct Blocks {
    plus: Vec<Vec<Vec<ActionEntry>>>,
    minus: Vec<Vec<Vec<ActionEntry>>>,
    templates: Vec<Vec<Template>>,
}

impl Blocks {
    fn link(&mut self, i: usize, src: usize, dst: usize, coeff_down: RationalQ, coeff_up: RationalQ, l: i64) {
        self.minus[src][i].push(ActionEntry {
            target: dst,
            coeff: coeff_down,
            l,
        });
        self.plus[dst][i].push(ActionEntry {
            target: src,
            coeff: coeff_up,
            l,
        });
    }
}

/// Assigns a local sl2 block to one A_{i,*}-class; Err names the mismatch.
fn assign_block(rs: &RootSystem, g: &CrystalGraph, class: &[usize], i: usize, b: &mut Blocks) -> std::result::Result<(), String> {
    let rows: Vec<Vec<(i64, i64)>> = class.iter().map(|&k| g.node(k).row(i).collect()).collect();
    if rows.iter().all(|r| r.is_empty()) {
        for &k in class {
            b.templates[k][i] = Template::Zero;
        }
        return if class.len() == 1 { Ok(()) } else { Err("several members with trivial row".into()) };
    }
    let tops: Vec<usize> = (0..class.len()).filter(|&x| !rows[x].is_empty() && rows[x].iter().all(|&(_, u)| u > 0)).collect();
    if tops.len() != 1 {
        return Err(format!("{} dominant members", tops.len()));
    }
    let top = class[tops[0]];
    let pts: Vec<i64> = rows[tops[0]].iter().flat_map(|&(l, u)| std::iter::repeat(l).take(u as usize)).collect();
    let find = |m: &Monomial| g.find_exps(m.exps()).filter(|k| class.contains(k));
    let qi = |k: i64| RationalQ::from_poly(qint(k));
    if pts.windows(2).all(|w| w[1] == w[0] + 2) {
        let k = pts.len();
        let a = pts[0];
        let mut chain = vec![top];
        for _ in 0..k {
            let cur = *chain.last().unwrap();
            let nxt = g.f_edge(cur, i).filter(|x| class.contains(x)).ok_or("string chain leaves the class")?;
            chain.push(nxt);
        }
        if class.len() != k + 1 {
            return Err(format!("string of length {k} in a class of {} members", class.len()));
        }
        for j in 0..k {
            let c = a + 2 * (k as i64 - j as i64 - 1);
            b.link(i, chain[j], chain[j + 1], qi(j as i64 + 1), qi((k - j) as i64), c + 1);
        }
        for &x in &chain {
            b.templates[x][i] = Template::String { len: k };
        }
        return Ok(());
    }
    if pts.len() == 2 {
        let (a, bb) = (pts[0], pts[1]);
        if bb == a + 2 || a == bb {
            return Err("special position".into());
        }
        let tm = g.node(top);
        let m2 = find(&tm.mul_a(rs, i, a + 1, -1)).ok_or("missing Y_{a+2}^{-1}Y_b")?;
        let m1 = find(&tm.mul_a(rs, i, bb + 1, -1)).ok_or("missing Y_aY_{b+2}^{-1}")?;
        let bot = find(&tm.mul_a(rs, i, a + 1, -1).mul_a(rs, i, bb + 1, -1)).ok_or("missing bottom")?;
        if class.len() != 4 {
            return Err(format!("tensor block in a class of {} members", class.len()));
        }
        let den = LaurentPoly::from_terms([(bb, 1), (a, -1)]);
        let c1 = RationalQ::new(LaurentPoly::from_terms([(bb - 1, 1), (a + 1, -1)]), den.clone()).map_err(|e| e.to_string())?;
        let c2 = RationalQ::new(LaurentPoly::from_terms([(bb + 1, 1), (a - 1, -1)]), den).map_err(|e| e.to_string())?;
        let one = RationalQ::one();
        b.link(i, top, m2, c1.clone(), one.clone(), a + 1);
        b.link(i, top, m1, c2.clone(), one.clone(), bb + 1);
        b.link(i, m2, bot, one.clone(), c1, bb + 1);
        b.link(i, m1, bot, one, c2, a + 1);
        for x in [top, m1, m2, bot] {
            b.templates[x][i] = Template::Tensor;
        }
        return Ok(());
    }
    Err(format!("dominant row with {} points", pts.len()))
}

/// Index s of the crystal of M_s containing m: the support of every node
/// of that crystal has width between 4s+3 and 4s+6.
pub fn section5_component(m: &Monomial) -> Option<usize> {
    let (a, b) = m.span()?;
    (b - a >= 3).then(|| ((b - a - 3) / 4) as usize)
}

/// Largest s whose crystal meets the window.
pub fn section5_smax(window: Window) -> Option<usize> {
    let w = window.lmax - window.lmin;
    (w >= 3).then(|| ((w - 3) / 4) as usize)
}

const SECTION5_PAD: i64 = 8;

/// The module of 2varpi_1 for n = 3 restricted to a window: the union of the
/// crystals of M_s, 0 <= s <= smax, intersected with the window. Each crystal
/// is generated in a padded window containing the anchors and then cut
/// down. The window must not meet the crystals with s > smax. Classes cut by
/// the window are marked truncated; any other class without a matching block
/// is an error.
pub fn build_section5(smax: usize, window: Window) -> Result<LoopModule> {
    let rs = RootSystem::new(3)?;
    if let Some(need) = section5_smax(window).filter(|&s| s > smax) {
        return Err(Error::Argument(format!(
            "the window [{}, {}] meets the crystals of M_s up to s = {need}; smax = {smax} is too small",
            window.lmin, window.lmax
        )));
    }
    let anchors = (0..=smax as i64).map(section5_anchor).collect::<Result<Vec<_>>>()?;
    let hull = Window::new(
        window.lmin.min(-1 - 4 * smax as i64) - SECTION5_PAD,
        window.lmax.max(2) + SECTION5_PAD,
    )?;
    let g = generate(&rs, &anchors, hull)?.restrict(window);
    let size = rs.size();
    let mut b = Blocks {
        plus: vec![vec![Vec::new(); size]; g.len()],
        minus: vec![vec![Vec::new(); size]; g.len()],
        templates: vec![vec![Template::Zero; size]; g.len()],
    };
    let margin = 2 * size as i64;
    for i in rs.nodes() {
        let mut classes: BTreeMap<Exponents, Vec<usize>> = BTreeMap::new();
        for (k, m) in g.nodes().iter().enumerate() {
            classes.entry(class_key(&rs, m, i)).or_default().push(k);
        }
        for class in classes.values() {
            let cut = class.iter().any(|&k| !g.is_interior(k) || !window.contains_with_margin(g.node(k), margin));
            if cut {
                for &k in class {
                    b.templates[k][i] = Template::Truncated;
                }
                continue;
            }
            if let Err(why) = assign_block(&rs, &g, class, i, &mut b) {
                return Err(Error::Template(format!(
                    "no local block for the class of {} in direction {i}: {why}",
                    g.node(class[0])
                )));
            }
        }
    }
    let usable = (0..g.len())
        .map(|k| g.is_interior(k) && b.templates[k].iter().all(|t| *t != Template::Truncated))
        .collect();
    Ok(LoopModule {
        graph: g,
        flavor: Flavor::Section5,
        twist: 0,
        plus: b.plus,
        minus: b.minus,
        templates: b.templates,
        usable,
    })
}

/// Serializable view of a module.
#[derive(Clone, Debug, Serialize)]
pub struct ModuleJson {
    pub flavor: Flavor,
    pub twist: i64,
    pub window: Window,
    pub nodes: Vec<String>,
    pub usable: Vec<bool>,
    pub actions: Vec<ActionJson>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ActionJson {
    pub sign: char,
    pub i: usize,
    pub source: usize,
    pub target: usize,
    pub coeff: String,
    pub l: i64,
}

impl LoopModule {
    pub fn graph(&self) -> &CrystalGraph {
        &self.graph
    }

    pub fn root_system(&self) -> &RootSystem {
        self.graph.root_system()
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn len(&self) -> usize {
        self.graph.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graph.is_empty()
    }

    pub fn node(&self, k: usize) -> &Monomial {
        self.graph.node(k)
    }

    pub fn find(&self, m: &Monomial) -> Option<usize> {
        self.graph.find(m)
    }

    /// Nodes where every generator acts by the module's own rules.
    pub fn is_usable(&self, k: usize) -> bool {
        self.usable[k]
    }

    pub fn template(&self, k: usize, i: usize) -> Template {
        self.templates[k][i]
    }

    pub fn twist(&self) -> i64 {
        self.twist
    }

    /// Action entries of x^±_{i,*} at node k, with the twist folded into l.
    pub fn entries(&self, sign: Direction, i: usize, k: usize) -> Vec<ActionEntry> {
        let t = match sign {
            Direction::Plus => &self.plus[k][i],
            Direction::Minus => &self.minus[k][i],
        };
        t.iter()
            .map(|e| ActionEntry {
                target: e.target,
                coeff: e.coeff.clone(),
                l: e.l + self.twist,
            })
            .collect()
    }

    /// The pullback by t_b with b = q^k: x^±_{i,r} acts as q^{kr} x^±_{i,r}
    /// and h_{i,m} as q^{km} h_{i,m}.
    pub fn spectral_twist(&self, k: i64) -> LoopModule {
        LoopModule {
            twist: self.twist + k,
            ..self.clone()
        }
    }

    fn check(&self, k: usize) -> Result<()> {
        if k >= self.len() {
            return Err(Error::Argument(format!("basis index {k} out of range")));
        }
        if !self.usable[k] {
            return Err(Error::Window(format!("v_{} is not an interior basis vector", self.node(k))));
        }
        Ok(())
    }

    /// x^±_{i,r} v.
    pub fn act_x(&self, sign: Direction, i: usize, r: i64, v: &Vector) -> Result<Vector> {
        self.root_system().check_node(i)?;
        let mut out = Vector::new();
        for (&k, c) in v {
            self.check(k)?;
            for e in self.entries(sign, i, k) {
                add_into(&mut out, e.target, &(c * &e.coeff) * &q_pow(r * e.l));
            }
        }
        Ok(out)
    }

    /// (x^±_{i,0})^k v / [k]_q!.
    pub fn divided_power_x(&self, sign: Direction, i: usize, k: u32, v: &Vector) -> Result<Vector> {
        let mut w = v.clone();
        for _ in 0..k {
            w = self.act_x(sign, i, 0, &w)?;
        }
        let f = RationalQ::from_poly(qfactorial(k)).inv()?;
        Ok(w.into_iter().map(|(x, c)| (x, &c * &f)).collect())
    }

    /// phi^±_i(z) eigenvalue series at node k, up to z^{±order}.
    pub fn phi_series(&self, k: usize, i: usize, dir: Direction, order: usize) -> Result<QSeries> {
        let m = self.node(k);
        let s = match self.flavor {
            Flavor::Thin => actmod_phi_series(m, i, dir, order),
            Flavor::Section5 => fr_phi_series(m, i, dir, order)?,
        };
        if self.twist == 0 {
            return Ok(s);
        }
        let sg = dir.sign();
        let c = s.coeffs.iter().enumerate().map(|(t, c)| c * &q_pow(sg * self.twist * t as i64)).collect();
        Ok(QSeries::new(dir, c, order))
    }

    /// Eigenvalue of h_{i,mdeg} at node k, read from the formal logarithm of
    /// the phi-series.
    pub fn h_eigenvalue(&self, k: usize, i: usize, mdeg: i64) -> Result<RationalQ> {
        if mdeg == 0 {
            return Err(Error::Argument("h_{i,m} needs m != 0".into()));
        }
        let dir = if mdeg > 0 { Direction::Plus } else { Direction::Minus };
        let order = mdeg.unsigned_abs() as usize;
        let s = self.phi_series(k, i, dir, order)?;
        let k0 = s.coeff(0).inv()?;
        let g = series_log(&s.scale(&k0), order)?;
        let den = RationalQ::from_poly(q_minus_qinv().scale(dir.sign()));
        Ok(&g.coeff(order) * &den.inv()?)
    }

    /// h_{i,mdeg} v.
    pub fn act_h(&self, i: usize, mdeg: i64, v: &Vector) -> Result<Vector> {
        let mut out = Vector::new();
        for (&k, c) in v {
            self.check(k)?;
            add_into(&mut out, k, c * &self.h_eigenvalue(k, i, mdeg)?);
        }
        Ok(out)
    }

    /// Coordinates in the basis w_m = v_m / q.
    pub fn to_w_coordinates(&self, v: &Vector) -> Vector {
        v.iter().map(|(&k, c)| (k, c * &q_pow(1))).collect()
    }

    /// q-character of the nodes whose support lies in [lmin, lmax] (the whole
    /// graph when None): every basis vector is an l-weight vector.
    pub fn qcharacter(&self, range: Option<(i64, i64)>) -> BTreeMap<Monomial, usize> {
        let mut out = BTreeMap::new();
        for m in self.graph.nodes() {
            let inside = match (range, m.span()) {
                (None, _) => true,
                (Some(_), None) => true,
                (Some((a, b)), Some((x, y))) => a <= x && y <= b,
            };
            if inside {
                *out.entry(m.clone()).or_insert(0) += 1;
            }
        }
        out
    }

    pub fn to_json(&self) -> ModuleJson {
        let mut actions = Vec::new();
        for k in 0..self.len() {
            for i in self.root_system().nodes() {
                for (sign, c) in [(Direction::Plus, '+'), (Direction::Minus, '-')] {
                    for e in self.entries(sign, i, k) {
                        actions.push(ActionJson {
                            sign: c,
                            i,
                            source: k,
                            target: e.target,
                            coeff: e.coeff.to_string(),
                            l: e.l,
                        });
                    }
                }
            }
        }
        ModuleJson {
            flavor: self.flavor,
            twist: self.twist,
            window: self.graph.window(),
            nodes: self.graph.nodes().iter().map(|m| m.full_string()).collect(),
            usable: self.usable.clone(),
            actions,
        }
    }

    /// Interior nodes whose span keeps `margin` away from the window edges.
    pub fn test_vectors(&self, margin: i64) -> Vec<usize> {
        let w = self.graph.window();
        (0..self.len()).filter(|&k| self.usable[k] && w.contains_with_margin(self.node(k), margin)).collect()
    }

    /// Usable nodes from which every word of at most `depth` generators
    /// stays on usable nodes.
    pub fn stable_vectors(&self, depth: usize) -> Vec<usize> {
        let rs = *self.root_system();
        let mut ok: Vec<bool> = self.usable.clone();
        for _ in 0..depth {
            let prev = ok.clone();
            for k in 0..self.len() {
                if !prev[k] {
                    continue;
                }
                ok[k] = rs.nodes().all(|i| {
                    self.plus[k][i].iter().chain(&self.minus[k][i]).all(|e| prev[e.target])
                });
            }
        }
        (0..self.len()).filter(|&k| ok[k]).collect()
    }

    /// Action tables evaluated in a field, with phi-series up to `phi_order`
    /// and h_{i,m} for the given degrees at usable nodes.
    pub fn tables<F: Field>(&self, field: F, phi_order: usize, h_degrees: &[i64]) -> Result<ActionTables<F>> {
        let rs = *self.root_system();
        let conv = |c: &RationalQ| field.from_rational(c);
        let mut x: [Vec<Vec<Vec<(usize, F::Elem, i64)>>>; 2] = [Vec::new(), Vec::new()];
        for (s, sign) in [Direction::Plus, Direction::Minus].into_iter().enumerate() {
            for k in 0..self.len() {
                let mut per = Vec::with_capacity(rs.size());
                for i in rs.nodes() {
                    let mut row = Vec::new();
                    for e in self.entries(sign, i, k) {
                        row.push((e.target, conv(&e.coeff)?, e.l));
                    }
                    per.push(row);
                }
                x[s].push(per);
            }
        }
        let diag: Vec<Result<Diag<F::Elem>>> = (0..self.len())
            .into_par_iter()
            .map(|k| {
                let mut d = Diag::default();
                if !self.usable[k] {
                    return Ok(d);
                }
                for i in rs.nodes() {
                    for (s, dir) in [Direction::Plus, Direction::Minus].into_iter().enumerate() {
                        let ser = self.phi_series(k, i, dir, phi_order)?;
                        let v = ser.coeffs.iter().map(&conv).collect::<Result<Vec<_>>>()?;
                        d.phi[s].push(v);
                    }
                    let mut hs = Vec::new();
                    for &m in h_degrees {
                        hs.push((m, conv(&self.h_eigenvalue(k, i, m)?)?));
                    }
                    d.h.push(hs);
                }
                Ok(d)
            })
            .collect();
        let diag = diag.into_iter().collect::<Result<Vec<_>>>()?;
        Ok(ActionTables {
            rs,
            field,
            labels: self.graph.nodes().iter().map(|m| m.to_string()).collect(),
            weights: self.graph.nodes().iter().map(|m| m.weight().clone()).collect(),
            check_delta: true,
            usable: self.usable.clone(),
            x,
            diag,
        })
    }
}

/// Diagonal data at one node: phi^±_{i,±s} (s = 0..order) and h_{i,m}.
#[derive(Clone, Debug)]
pub struct Diag<E> {
    pub phi: [Vec<Vec<E>>; 2],
    pub h: Vec<Vec<(i64, E)>>,
}

impl<E> Default for Diag<E> {
    fn default() -> Self {
        Diag {
            phi: [Vec::new(), Vec::new()],
            h: Vec::new(),
        }
    }
}

/// A module given by action tables over a field: x-entries (target,
/// coefficient, l) acting as coeff q^{rl}, and diagonal data.
pub struct ActionTables<F: Field> {
    pub rs: RootSystem,
    pub field: F,
    pub labels: Vec<String>,
    pub weights: Vec<Weight>,
    /// Whether weights carry a meaningful delta-coefficient.
    pub check_delta: bool,
    pub usable: Vec<bool>,
    /// [sign][node][i]
    pub x: [Vec<Vec<Vec<(usize, F::Elem, i64)>>>; 2],
    pub diag: Vec<Diag<F::Elem>>,
}

impl<F: Field> ActionTables<F> {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }
}

/// Comparison of a module's phi-series with the Frenkel-Reshetikhin form.
#[derive(Clone, Debug, Serialize)]
pub struct PhiMismatch {
    pub node: String,
    pub direction: usize,
    pub sign: char,
    pub first_index: usize,
    pub module: String,
    pub fr: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct FrReport {
    pub compared: usize,
    pub order: usize,
    pub mismatches: Vec<PhiMismatch>,
}

/// Compares the module's phi-series with the Frenkel-Reshetikhin form at
/// every usable node, every direction and both signs.
pub fn compare_with_fr(module: &LoopModule, order: usize) -> Result<FrReport> {
    let rs = *module.root_system();
    let mut compared = 0;
    let mut mismatches = Vec::new();
    for k in (0..module.len()).filter(|&k| module.is_usable(k)) {
        let m = module.node(k);
        for i in rs.nodes() {
            for (dir, c) in [(Direction::Plus, '+'), (Direction::Minus, '-')] {
                compared += 1;
                let a = module.phi_series(k, i, dir, order)?;
                let b = fr_phi_series(&m.with_delta(m.delta()), i, dir, order)?;
                let b = if module.twist() == 0 {
                    b
                } else {
                    let c = b.coeffs.iter().enumerate().map(|(t, x)| x * &q_pow(dir.sign() * module.twist() * t as i64)).collect();
                    QSeries::new(dir, c, order)
                };
                if let Some(t) = (0..=order).find(|&t| a.coeff(t) != b.coeff(t)) {
                    mismatches.push(PhiMismatch {
                        node: m.to_string(),
                        direction: i,
                        sign: c,
                        first_index: t,
                        module: a.coeff(t).to_string(),
                        fr: b.coeff(t).to_string(),
                    });
                }
            }
        }
    }
    Ok(FrReport {
        compared,
        order,
        mismatches,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ExtremalVectorReport {
    pub verdict: ExtremalVerdict,
    pub weight: Weight,
    /// Number of distinct weights reached in the Weyl group orbit.
    pub orbit: usize,
    pub failure: Option<String>,
}

/// Checks that v_m is extremal: along the W-orbit, for mu(h_i) >= 0 the vector
/// is killed by x^+_{i,0} and S_i v = (x^-_{i,0})^{(mu(h_i))} v (symmetrically
/// for mu(h_i) <= 0), and the S_i-images depend only on the weight.
pub fn verify_extremal_vector(module: &LoopModule, k: usize, depth: usize) -> Result<ExtremalVectorReport> {
    let rs = *module.root_system();
    let weight = module.node(k).weight().clone();
    let mut seen: HashMap<Weight, Vector> = HashMap::from([(weight.clone(), basis_vector(k))]);
    let mut frontier = vec![weight.clone()];
    let report = |verdict, orbit, failure| ExtremalVectorReport {
        verdict,
        weight: weight.clone(),
        orbit,
        failure,
    };
    for _ in 0..depth {
        let mut next = Vec::new();
        for mu in &frontier {
            let v = seen[mu].clone();
            for i in rs.nodes() {
                let h = mu.pair(i);
                let (kill, raise) = if h >= 0 { (Direction::Plus, Direction::Minus) } else { (Direction::Minus, Direction::Plus) };
                let step = module.act_x(kill, i, 0, &v).and_then(|z| Ok((z, module.divided_power_x(raise, i, h.unsigned_abs() as u32, &v)?)));
                let (z, w) = match step {
                    Ok(x) => x,
                    Err(Error::Window(e)) => return Ok(report(ExtremalVerdict::InconclusiveWindow, seen.len(), Some(e))),
                    Err(e) => return Err(e),
                };
                if !z.is_empty() {
                    return Ok(report(
                        ExtremalVerdict::NotExtremal,
                        seen.len(),
                        Some(format!("x^{}_{{{i},0}} does not kill the vector of weight {mu}", if h >= 0 { '+' } else { '-' })),
                    ));
                }
                if w.is_empty() {
                    return Ok(report(ExtremalVerdict::NotExtremal, seen.len(), Some(format!("S_{i} kills the vector of weight {mu}"))));
                }
                let nu = reflect(&rs, mu, i);
                match seen.get(&nu) {
                    Some(old) if *old != w => {
                        return Ok(report(
                            ExtremalVerdict::NotExtremal,
                            seen.len(),
                            Some(format!("two vectors of weight {nu} in the orbit")),
                        ))
                    }
                    Some(_) => {}
                    None => {
                        seen.insert(nu.clone(), w);
                        next.push(nu);
                    }
                }
            }
        }
        frontier = next;
    }
    Ok(report(ExtremalVerdict::Extremal, seen.len(), None))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    /// k_h x^±_{j,r} k_{-h} = q^{±alpha_j(h)} x^±_{j,r}
    Kx,
    /// [h_{i,m}, h_{j,m'}] = 0
    Hh,
    /// [h_{i,m}, x^±_{j,r}] = ±(1/m)[mC_{ij}] x^±_{j,m+r}
    Hx,
    /// [x^+_{i,r}, x^-_{j,r'}] = delta_{ij}(phi^+_{i,r+r'} - phi^-_{i,r+r'})/(q-q^{-1})
    Xx,
    /// the quadratic exchange relation
    Quadratic,
    /// the cubic Serre relation for adjacent nodes
    Serre,
    /// [x^±_{i,r}, x^±_{j,r'}] = 0 for non-adjacent i != j
    Commuting,
}

impl Relation {
    pub const ALL: [Relation; 7] = [
        Relation::Kx,
        Relation::Hh,
        Relation::Hx,
        Relation::Xx,
        Relation::Quadratic,
        Relation::Serre,
        Relation::Commuting,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Relation::Kx => "kx",
            Relation::Hh => "hh",
            Relation::Hx => "hx",
            Relation::Xx => "xx",
            Relation::Quadratic => "quadratic",
            Relation::Serre => "serre",
            Relation::Commuting => "commuting",
        }
    }

    pub fn from_id(s: &str) -> Result<Relation> {
        Relation::ALL
            .into_iter()
            .find(|r| r.id() == s)
            .ok_or_else(|| Error::Argument(format!("unknown relation {s:?}; expected one of kx, hh, hx, xx, quadratic, serre, commuting")))
    }
}

/// Parameter ranges: |r|, |r'|, |r1|, |r2| <= r_max and m in m_values.
#[derive(Clone, Debug, Serialize)]
pub struct RelationRanges {
    pub r_max: i64,
    pub m_values: Vec<i64>,
}

impl Default for RelationRanges {
    fn default() -> Self {
        RelationRanges {
            r_max: 3,
            m_values: vec![-2, -1, 1, 2],
        }
    }
}

impl RelationRanges {
    /// phi-series order needed by the xx relation.
    pub fn phi_order(&self) -> usize {
        2 * self.r_max as usize
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationRecord {
    pub relation: Relation,
    pub params: BTreeMap<String, i64>,
    pub vector: String,
    pub residual_is_zero: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inconclusive_reason: Option<String>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct RelationCount {
    pub checked: usize,
    pub zero: usize,
    pub nonzero: usize,
    pub inconclusive: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationReport {
    pub vectors: usize,
    pub counts: BTreeMap<Relation, RelationCount>,
    /// Every nonzero or inconclusive instance; all instances when requested.
    pub records: Vec<RelationRecord>,
}

impl RelationReport {
    pub fn nonzero(&self) -> usize {
        self.counts.values().map(|c| c.nonzero).sum()
    }

    pub fn inconclusive(&self) -> usize {
        self.counts.values().map(|c| c.inconclusive).sum()
    }

    pub fn checked(&self) -> usize {
        self.counts.values().map(|c| c.checked).sum()
    }

    /// Every instance checked, none nonzero and none inconclusive.
    pub fn all_zero(&self) -> bool {
        self.nonzero() == 0 && self.inconclusive() == 0 && self.checked() > 0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Op {
    X(usize, usize, i64),
    H(usize, i64),
    Phi(usize, usize, usize),
}

type FVec<E> = BTreeMap<usize, E>;

struct Evaluator<'a, F: Field> {
    t: &'a ActionTables<F>,
    base: usize,
    cache: HashMap<Vec<Op>, std::result::Result<FVec<F::Elem>, usize>>,
}

impl<'a, F: Field> Evaluator<'a, F> {
    fn one(&self) -> F::Elem {
        self.t.field.from_laurent(&LaurentPoly::one())
    }

    /// Applies ops right to left to v_base; Err carries an unusable node.
    fn word(&mut self, ops: &[Op]) -> std::result::Result<FVec<F::Elem>, usize> {
        if ops.is_empty() {
            return Ok(FVec::from([(self.base, self.one())]));
        }
        if let Some(v) = self.cache.get(ops) {
            return v.clone();
        }
        let inner = self.word(&ops[1..]);
        let out = inner.and_then(|v| self.apply(ops[0], &v));
        self.cache.insert(ops.to_vec(), out.clone());
        out
    }

    fn apply(&self, op: Op, v: &FVec<F::Elem>) -> std::result::Result<FVec<F::Elem>, usize> {
        let f = &self.t.field;
        let mut out: FVec<F::Elem> = FVec::new();
        let mut push = |k: usize, c: F::Elem| {
            let e = out.entry(k).or_insert_with(|| f.zero());
            *e = f.add(e, &c);
        };
        for (&k, c) in v {
            if !self.t.usable[k] {
                return Err(k);
            }
            match op {
                Op::X(s, i, r) => {
                    for (tgt, coeff, l) in &self.t.x[s][k][i] {
                        push(*tgt, f.shift(&f.mul(c, coeff), r * l));
                    }
                }
                Op::H(i, m) => {
                    let h = &self.t.diag[k].h[i].iter().find(|x| x.0 == m).expect("h degree tabulated").1;
                    push(k, f.mul(c, h));
                }
                Op::Phi(s, i, t) => push(k, f.mul(c, &self.t.diag[k].phi[s][i][t])),
            }
        }
        out.retain(|_, c| !f.is_zero(c));
        Ok(out)
    }

    /// Whether sum coeff * word(v_base) vanishes.
    fn residual(&mut self, terms: &[(F::Elem, Vec<Op>)]) -> std::result::Result<bool, usize> {
        let f = &self.t.field;
        let mut acc: FVec<F::Elem> = FVec::new();
        for (c, w) in terms {
            let v = self.word(w)?;
            for (k, x) in v {
                let e = acc.entry(k).or_insert_with(|| f.zero());
                *e = f.add(e, &f.mul(c, &x));
            }
        }
        Ok(acc.values().all(|c| f.is_zero(c)))
    }
}

struct Instance {
    relation: Relation,
    params: Vec<(&'static str, i64)>,
    outcome: std::result::Result<bool, usize>,
}

fn instances_at<F: Field>(t: &ActionTables<F>, base: usize, ranges: &RelationRanges, which: &[Relation]) -> Vec<Instance> {
    let f = &t.field;
    let rs = t.rs;
    let mut ev = Evaluator {
        t,
        base,
        cache: HashMap::new(),
    };
    let lp = |p: LaurentPoly| f.from_laurent(&p);
    let one = lp(LaurentPoly::one());
    let minus_one = lp(LaurentPoly::constant(-1));
    let rr = -ranges.r_max..=ranges.r_max;
    let signs = [(0usize, 1i64), (1usize, -1i64)];
    let mut out = Vec::new();
    let mut emit = |relation, params: Vec<(&'static str, i64)>, outcome| {
        out.push(Instance {
            relation,
            params,
            outcome,
        })
    };
    for &rel in which {
        match rel {
            Relation::Kx => {
                for (s, sg) in signs {
                    for j in rs.nodes() {
                        let outcome = if !t.usable[base] {
                            Err(base)
                        } else {
                            let alpha = root_coords(&rs, j).scale(sg);
                            Ok(t.x[s][base][j].iter().all(|(tgt, _, _)| {
                                let d = &t.weights[*tgt] - &t.weights[base];
                                d.h == alpha.h && (!t.check_delta || d.delta == alpha.delta)
                            }))
                        };
                        emit(rel, vec![("sign", sg), ("j", j as i64)], outcome);
                    }
                }
            }
            Relation::Hh => {
                for i in rs.nodes() {
                    for j in rs.nodes() {
                        for &m in &ranges.m_values {
                            for &m2 in &ranges.m_values {
                                let terms = vec![
                                    (one.clone(), vec![Op::H(i, m), Op::H(j, m2)]),
                                    (minus_one.clone(), vec![Op::H(j, m2), Op::H(i, m)]),
                                ];
                                emit(rel, vec![("i", i as i64), ("j", j as i64), ("m", m), ("m'", m2)], ev.residual(&terms));
                            }
                        }
                    }
                }
            }
            Relation::Hx => {
                for (s, sg) in signs {
                    for i in rs.nodes() {
                        for j in rs.nodes() {
                            for &m in &ranges.m_values {
                                for r in rr.clone() {
                                    let mm = lp(LaurentPoly::constant(m));
                                    let c = lp(qint(m * rs.cartan(i, j)).scale(-sg));
                                    let terms = vec![
                                        (mm.clone(), vec![Op::H(i, m), Op::X(s, j, r)]),
                                        (f.neg(&mm), vec![Op::X(s, j, r), Op::H(i, m)]),
                                        (c, vec![Op::X(s, j, m + r)]),
                                    ];
                                    emit(
                                        rel,
                                        vec![("sign", sg), ("i", i as i64), ("j", j as i64), ("m", m), ("r", r)],
                                        ev.residual(&terms),
                                    );
                                }
                            }
                        }
                    }
                }
            }
            Relation::Xx => {
                let qq = lp(q_minus_qinv());
                for i in rs.nodes() {
                    for j in rs.nodes() {
                        for r in rr.clone() {
                            for r2 in rr.clone() {
                                let mut terms = vec![
                                    (qq.clone(), vec![Op::X(0, i, r), Op::X(1, j, r2)]),
                                    (f.neg(&qq), vec![Op::X(1, j, r2), Op::X(0, i, r)]),
                                ];
                                if i == j {
                                    let tt = r + r2;
                                    if tt >= 0 {
                                        terms.push((minus_one.clone(), vec![Op::Phi(0, i, tt as usize)]));
                                    }
                                    if tt <= 0 {
                                        terms.push((one.clone(), vec![Op::Phi(1, i, (-tt) as usize)]));
                                    }
                                }
                                emit(rel, vec![("i", i as i64), ("j", j as i64), ("r", r), ("r'", r2)], ev.residual(&terms));
                            }
                        }
                    }
                }
            }
            Relation::Quadratic => {
                for (s, sg) in signs {
                    for i in rs.nodes() {
                        for j in rs.nodes() {
                            let qc = lp(LaurentPoly::q_pow(sg * rs.cartan(i, j)));
                            let nqc = f.neg(&qc);
                            for r in rr.clone() {
                                for r2 in rr.clone() {
                                    let terms = vec![
                                        (one.clone(), vec![Op::X(s, i, r + 1), Op::X(s, j, r2)]),
                                        (nqc.clone(), vec![Op::X(s, j, r2), Op::X(s, i, r + 1)]),
                                        (nqc.clone(), vec![Op::X(s, i, r), Op::X(s, j, r2 + 1)]),
                                        (one.clone(), vec![Op::X(s, j, r2 + 1), Op::X(s, i, r)]),
                                    ];
                                    emit(
                                        rel,
                                        vec![("sign", sg), ("i", i as i64), ("j", j as i64), ("r", r), ("r'", r2)],
                                        ev.residual(&terms),
                                    );
                                }
                            }
                        }
                    }
                }
            }
            Relation::Serre => {
                let q2 = f.neg(&lp(qint(2)));
                for (s, sg) in signs {
                    for i in rs.nodes() {
                        for j in rs.adjacent(i) {
                            for r1 in rr.clone() {
                                for r2 in r1..=ranges.r_max {
                                    for r3 in rr.clone() {
                                        let mut terms = Vec::new();
                                        for (a1, a2) in [(r1, r2), (r2, r1)] {
                                            terms.push((one.clone(), vec![Op::X(s, i, a1), Op::X(s, i, a2), Op::X(s, j, r3)]));
                                            terms.push((q2.clone(), vec![Op::X(s, i, a1), Op::X(s, j, r3), Op::X(s, i, a2)]));
                                            terms.push((one.clone(), vec![Op::X(s, j, r3), Op::X(s, i, a1), Op::X(s, i, a2)]));
                                        }
                                        emit(
                                            rel,
                                            vec![("sign", sg), ("i", i as i64), ("j", j as i64), ("r1", r1), ("r2", r2), ("r'", r3)],
                                            ev.residual(&terms),
                                        );
                                    }
                                }
                            }
                        }
                    }
                }
            }
            Relation::Commuting => {
                for (s, sg) in signs {
                    for i in rs.nodes() {
                        for j in rs.nodes().filter(|&j| rs.cartan(i, j) == 0) {
                            for r in rr.clone() {
                                for r2 in rr.clone() {
                                    let terms = vec![
                                        (one.clone(), vec![Op::X(s, i, r), Op::X(s, j, r2)]),
                                        (minus_one.clone(), vec![Op::X(s, j, r2), Op::X(s, i, r)]),
                                    ];
                                    emit(
                                        rel,
                                        vec![("sign", sg), ("i", i as i64), ("j", j as i64), ("r", r), ("r'", r2)],
                                        ev.residual(&terms),
                                    );
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

/// Checks the chosen defining relations on the basis vectors `vectors`.
/// Residuals of the relations with denominators are multiplied through by
/// m and by (q - q^{-1}). Instances whose words reach a non-usable node are
/// reported as inconclusive.
pub fn check_relations<F: Field>(
    t: &ActionTables<F>,
    vectors: &[usize],
    ranges: &RelationRanges,
    which: &[Relation],
    record_all: bool,
) -> RelationReport {
    let per: Vec<(usize, Vec<Instance>)> = vectors.par_iter().map(|&k| (k, instances_at(t, k, ranges, which))).collect();
    let mut counts: BTreeMap<Relation, RelationCount> = which.iter().map(|&r| (r, RelationCount::default())).collect();
    let mut records = Vec::new();
    for (k, insts) in per {
        for inst in insts {
            let c = counts.get_mut(&inst.relation).expect("relation counted");
            c.checked += 1;
            let (zero, reason) = match inst.outcome {
                Ok(true) => {
                    c.zero += 1;
                    (true, None)
                }
                Ok(false) => {
                    c.nonzero += 1;
                    (false, None)
                }
                Err(bad) => {
                    c.inconclusive += 1;
                    (false, Some(format!("word reaches v_{} outside the usable region", t.labels[bad])))
                }
            };
            if record_all || !zero {
                records.push(RelationRecord {
                    relation: inst.relation,
                    params: inst.params.iter().map(|&(a, b)| (a.to_string(), b)).collect(),
                    vector: t.labels[k].clone(),
                    residual_is_zero: zero,
                    inconclusive_reason: reason,
                });
            }
        }
    }
    RelationReport {
        vectors: vectors.len(),
        counts,
        records,
    }
}

/// Relation check of a module over Q(q) on its test vectors whose depth-3
/// neighbourhood is usable (the longest relation words have three letters).
pub fn check_module(module: &LoopModule, margin: i64, ranges: &RelationRanges, which: &[Relation]) -> Result<RelationReport> {
    let t = module.tables(GenericQ, ranges.phi_order(), &ranges.m_values)?;
    let stable: HashSet<usize> = module.stable_vectors(3).into_iter().collect();
    let vectors: Vec<usize> = module.test_vectors(margin).into_iter().filter(|k| stable.contains(k)).collect();
    Ok(check_relations(&t, &vectors, ranges, which, false))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monomial::parse_exps;

    fn rs3() -> RootSystem {
        RootSystem::new(3).unwrap()
    }

    fn node(module: &LoopModule, s: &str) -> usize {
        let e = parse_exps(s).unwrap();
        module.graph().find_exps(&e).unwrap_or_else(|| panic!("{s} not in the module"))
    }

    fn q(e: i64) -> RationalQ {
        q_pow(e)
    }

    #[test]
    fn thin_action_examples() {
        let rs = rs3();
        let module = build_thin(&rs, 1, Window::new(-12, 12).unwrap()).unwrap();
        let m0 = node(&module, "Y_{1,0}Y_{0,1}^{-1}");
        let m1 = node(&module, "Y_{2,1}Y_{1,2}^{-1}");
        assert_eq!(module.act_x(Direction::Minus, 1, 0, &basis_vector(m0)).unwrap(), basis_vector(m1));
        let up = module.act_x(Direction::Plus, 1, 1, &basis_vector(m1)).unwrap();
        assert_eq!(up, Vector::from([(m0, q(1))]));
        assert!(module.act_x(Direction::Plus, 1, 3, &basis_vector(m0)).unwrap().is_empty());
    }

    #[test]
    fn phi_series_examples() {
        let rs = rs3();
        let module = build_thin(&rs, 1, Window::new(-12, 12).unwrap()).unwrap();
        let m0 = node(&module, "Y_{1,0}Y_{0,1}^{-1}");
        let s = module.phi_series(m0, 1, Direction::Plus, 4).unwrap();
        assert_eq!(s.coeff(0), q(1));
        let qq = RationalQ::from_poly(q_minus_qinv());
        for t in 1..=4 {
            assert_eq!(s.coeff(t), &qq * &q(t as i64));
        }
        let m1 = node(&module, "Y_{2,1}Y_{1,2}^{-1}");
        let s = module.phi_series(m1, 1, Direction::Plus, 4).unwrap();
        assert_eq!(s.coeff(0), q(-1));
        for t in 1..=4 {
            assert_eq!(s.coeff(t), -(&qq * &q(t as i64)));
        }
        // a direction with trivial row
        let s = module.phi_series(m0, 2, Direction::Plus, 3).unwrap();
        assert!(s.coeff(0).is_one() && (1..=3).all(|t| s.coeff(t).is_zero()));
        for (k, i) in [(m0, 1), (m1, 1), (m0, 0)] {
            for dir in [Direction::Plus, Direction::Minus] {
                assert_eq!(module.phi_series(k, i, dir, 6).unwrap(), fr_phi_series(module.node(k), i, dir, 6).unwrap());
            }
        }
    }

    #[test]
    fn h_eigenvalues() {
        let rs = rs3();
        let module = build_thin(&rs, 1, Window::new(-12, 12).unwrap()).unwrap();
        let m0 = node(&module, "Y_{1,0}Y_{0,1}^{-1}");
        assert!(module.h_eigenvalue(m0, 1, 1).unwrap().is_one());
        let h2 = module.h_eigenvalue(m0, 1, 2).unwrap();
        assert_eq!(h2, &RationalQ::from_poly(qint(2)) * &RationalQ::from_ratio(1, 2).unwrap());
        assert!(module.h_eigenvalue(m0, 2, -1).unwrap().is_zero());
        // [h_{1,1}, x^+_{1,0}] v = [2] x^+_{1,1} v
        let m1 = node(&module, "Y_{2,1}Y_{1,2}^{-1}");
        let v = basis_vector(m1);
        let a = module.act_h(1, 1, &module.act_x(Direction::Plus, 1, 0, &v).unwrap()).unwrap();
        let b = module.act_x(Direction::Plus, 1, 0, &module.act_h(1, 1, &v).unwrap()).unwrap();
        let lhs: Vector = a.iter().map(|(&k, c)| (k, c - &b[&k])).collect();
        let rhs: Vector = module
            .act_x(Direction::Plus, 1, 1, &v)
            .unwrap()
            .into_iter()
            .map(|(k, c)| (k, &c * &RationalQ::from_poly(qint(2))))
            .collect();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn refuses_non_closed_levels() {
        let rs = RootSystem::new(5).unwrap();
        match build_thin(&rs, 2, Window::new(-12, 12).unwrap()) {
            Err(Error::Refused(msg)) => assert!(msg.contains("requires")),
            other => panic!("expected a refusal, got {:?}", other.map(|m| m.len())),
        }
    }

    #[test]
    fn divided_powers() {
        let rs = rs3();
        let module = build_thin(&rs, 1, Window::new(-12, 12).unwrap()).unwrap();
        let m0 = node(&module, "Y_{1,0}Y_{0,1}^{-1}");
        let v = basis_vector(m0);
        assert_eq!(module.divided_power_x(Direction::Minus, 1, 0, &v).unwrap(), v);
        assert_eq!(
            module.divided_power_x(Direction::Minus, 1, 1, &v).unwrap(),
            module.act_x(Direction::Minus, 1, 0, &v).unwrap()
        );
    }

    #[test]
    fn exprod_block_coefficients() {
        let module = build_section5(7, Window::new(-16, 16).unwrap()).unwrap();
        let ms = node(&module, "Y_{1,1}Y_{1,-5}Y_{0,2}^{-1}Y_{0,-4}^{-1}");
        assert_eq!(module.template(ms, 1), Template::Tensor);
        let v = module.act_x(Direction::Minus, 1, 0, &basis_vector(ms)).unwrap();
        let m1 = node(&module, "Y_{1,3}^{-1}Y_{1,-5}Y_{2,2}Y_{0,-4}^{-1}");
        let m2 = node(&module, "Y_{1,1}Y_{1,-3}^{-1}Y_{2,-4}Y_{0,2}^{-1}");
        // a = -5, b = 1: (q^2 - q^{-6})/(q - q^{-5}) and (1 - q^{-4})/(q - q^{-5})
        let den = LaurentPoly::from_terms([(1, 1), (-5, -1)]);
        let c1 = RationalQ::new(LaurentPoly::from_terms([(2, 1), (-6, -1)]), den.clone()).unwrap();
        let c2 = RationalQ::new(LaurentPoly::from_terms([(0, 1), (-4, -1)]), den).unwrap();
        assert_eq!(v, Vector::from([(m1, c1), (m2, c2)]));
        let m0 = node(&module, "Y_{1,1}Y_{1,-1}Y_{0,2}^{-1}Y_{0,0}^{-1}");
        assert_eq!(module.template(m0, 1), Template::String { len: 2 });
    }
}
