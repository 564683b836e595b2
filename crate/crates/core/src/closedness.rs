//! q-closedness in a direction, stability under Kashiwara operators, and the
//! combined closedness report for fundamental monomial crystals.
//!
//! A q-closed verdict certifies that every A_{i,*}-class is a sum of simple
//! sl2 q-characters, which is stronger than asking for the character of an
//! arbitrary representation.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::Serialize;

use crate::crystal::{e_tilde, f_tilde, generate, row_stats, CrystalGraph, Window};
use crate::error::{Error, Result};
use crate::lattice::RootSystem;
use crate::monomial::{fundamental_monomial, xi_drop, Exponents, Monomial};

/// Laurent monomial in the variables Y_l of a single row.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Sl2Monomial(pub Vec<(i64, i64)>);

impl Sl2Monomial {
    pub fn new<I: IntoIterator<Item = (i64, i64)>>(it: I) -> Result<Self> {
        let mut acc: BTreeMap<i64, i64> = BTreeMap::new();
        for (l, u) in it {
            *acc.entry(l).or_insert(0) += u;
        }
        let v: Vec<(i64, i64)> = acc.into_iter().filter(|&(_, u)| u != 0).collect();
        if let Some(&(l0, _)) = v.first() {
            if v.iter().any(|&(l, _)| (l - l0).rem_euclid(2) != 0) {
                return Err(Error::Parity("sl2 monomial mixes parity classes".into()));
            }
        }
        Ok(Sl2Monomial(v))
    }

    /// The row i of a monomial.
    pub fn row_of(m: &Monomial, i: usize) -> Self {
        Sl2Monomial(m.row(i).collect())
    }

    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|&(_, u)| u > 0)
    }

    /// Multiplication by A_l^{-k} = (Y_{l-1} Y_{l+1})^{-k}.
    fn lower(&self, l: i64, k: i64) -> Self {
        let mut acc: BTreeMap<i64, i64> = self.0.iter().cloned().collect();
        *acc.entry(l - 1).or_insert(0) -= k;
        *acc.entry(l + 1).or_insert(0) -= k;
        Sl2Monomial(acc.into_iter().filter(|&(_, u)| u != 0).collect())
    }
}

impl fmt::Display for Sl2Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for &(l, u) in &self.0 {
            write!(f, "Y_{{{l}}}")?;
            if u != 1 {
                write!(f, "^{{{u}}}")?;
            }
        }
        Ok(())
    }
}

/// A q-string {a, a+2, ..., a+2(k-1)}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct QString {
    pub start: i64,
    pub len: usize,
}

impl QString {
    fn end(&self) -> i64 {
        self.start + 2 * (self.len as i64 - 1)
    }

    /// Two strings are in general position unless their union is a string
    /// strictly containing both.
    fn general_position(&self, o: &QString) -> bool {
        let contained = |a: &QString, b: &QString| a.start >= b.start && a.end() <= b.end();
        if contained(self, o) || contained(o, self) {
            return true;
        }
        // the union is a string iff the gap between them is at most 2
        let gap = if self.start <= o.start { o.start - self.end() } else { self.start - o.end() };
        gap > 2
    }

    /// Lowering exponents of the j-th term: A^{-1} at a+2k-1, a+2k-3, ...
    fn term_lowerings(&self, j: usize) -> Vec<i64> {
        let k = self.len as i64;
        (1..=j as i64).map(|t| self.start + 2 * (k - t) + 1).collect()
    }
}

/// Greedy decomposition of a dominant monomial into maximal q-strings,
/// always starting from the smallest remaining point.
pub fn string_decomposition(m: &Sl2Monomial) -> Result<Vec<QString>> {
    if !m.is_dominant() {
        return Err(Error::Argument(format!("{m} is not dominant")));
    }
    let mut pts: BTreeMap<i64, i64> = m.0.iter().cloned().collect();
    let mut out = Vec::new();
    while let Some((&a, _)) = pts.iter().next() {
        let mut len = 0usize;
        let mut l = a;
        while let Some(c) = pts.get_mut(&l) {
            *c -= 1;
            if *c == 0 {
                pts.remove(&l);
            }
            len += 1;
            l += 2;
        }
        out.push(QString { start: a, len });
    }
    // greedy runs from the minimum are always nested or separated; the check
    // guards against changes to the decomposition order
    for (x, s) in out.iter().enumerate() {
        for t in &out[x + 1..] {
            if !s.general_position(t) {
                return Err(Error::Unsupported(format!(
                    "strings at {} (length {}) and {} (length {}) are in special position",
                    s.start, s.len, t.start, t.len
                )));
            }
        }
    }
    Ok(out)
}

/// Terms of a simple sl2 q-character: lowering exponents relative to the
/// dominant monomial (l -> k means A_l^{-k}) with their multiplicities.
pub fn sl2_character_lowerings(dominant: &Sl2Monomial) -> Result<BTreeMap<Vec<(i64, i64)>, u64>> {
    let strings = string_decomposition(dominant)?;
    let mut terms: BTreeMap<Vec<(i64, i64)>, u64> = BTreeMap::from([(Vec::new(), 1)]);
    for s in strings {
        let mut next: BTreeMap<Vec<(i64, i64)>, u64> = BTreeMap::new();
        for (d, mult) in &terms {
            for j in 0..=s.len {
                let mut acc: BTreeMap<i64, i64> = d.iter().cloned().collect();
                for l in s.term_lowerings(j) {
                    *acc.entry(l).or_insert(0) += 1;
                }
                *next.entry(acc.into_iter().collect()).or_insert(0) += mult;
            }
        }
        terms = next;
    }
    Ok(terms)
}

/// The simple sl2 q-character with dominant monomial `dominant`, as monomials
/// with multiplicities.
pub fn sl2_simple_qchar(dominant: &Sl2Monomial) -> Result<Vec<(Sl2Monomial, u64)>> {
    let mut out: BTreeMap<Sl2Monomial, u64> = BTreeMap::new();
    for (d, mult) in sl2_character_lowerings(dominant)? {
        let mut m = dominant.clone();
        for (l, k) in d {
            m = m.lower(l, k);
        }
        *out.entry(m).or_insert(0) += mult;
    }
    Ok(out.into_iter().collect())
}

/// e~ (raising) or f~ on a single-row monomial, the rank-one crystal.
pub fn sl2_kashiwara(m: &Sl2Monomial, raising: bool) -> Option<Sl2Monomial> {
    let st = row_stats(m.0.iter().cloned());
    if raising {
        st.p.map(|p| m.lower(p - 1, -1))
    } else {
        st.qq.map(|q| m.lower(q + 1, 1))
    }
}

/// Result of the rank-one q-closedness test.
#[derive(Clone, Debug, Serialize)]
pub struct Sl2Report {
    pub closed: bool,
    /// (class maximum, required monomial missing from the set)
    pub witness: Option<(Sl2Monomial, Sl2Monomial)>,
}

/// q-closedness of a finite set of single-row monomials: subtract simple
/// characters from the top down (A_l has degree 2, so degree orders each class).
pub fn qclosed_sl2(set: &[Sl2Monomial]) -> Result<Sl2Report> {
    let degree = |m: &Sl2Monomial| m.0.iter().map(|&(_, u)| u).sum::<i64>();
    let mut remaining: BTreeMap<&Sl2Monomial, ()> = set.iter().map(|m| (m, ())).collect();
    let mut order: Vec<&Sl2Monomial> = set.iter().collect();
    order.sort_by(|a, b| degree(b).cmp(&degree(a)).then(a.cmp(b)));
    for top in order {
        if !remaining.contains_key(top) {
            continue;
        }
        if !top.is_dominant() {
            let a = top.0.iter().find(|&&(_, u)| u < 0).map(|&(l, _)| l).expect("non-dominant");
            return Ok(Sl2Report {
                closed: false,
                witness: Some((top.clone(), top.lower(a - 1, -1))),
            });
        }
        for (d, mult) in sl2_character_lowerings(top)? {
            let mut m = top.clone();
            for (l, k) in d {
                m = m.lower(l, k);
            }
            if mult != 1 || remaining.remove(&m).is_none() {
                return Ok(Sl2Report {
                    closed: false,
                    witness: Some((top.clone(), m)),
                });
            }
        }
    }
    Ok(Sl2Report {
        closed: true,
        witness: None,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Closed,
    NotClosed,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Closed => "closed",
            Verdict::NotClosed => "not-closed",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

/// A class element and a monomial of its A_{i,*}-class required by the sl2
/// theory but absent from the set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub monomial: Monomial,
    pub missing: Monomial,
}

#[derive(Clone, Debug, Serialize)]
pub struct DirectionReport {
    pub direction: usize,
    pub verdict: Verdict,
    pub classes: usize,
    pub boundary_classes: usize,
    pub unsupported_classes: usize,
    /// First witness in class order.
    pub witness: Option<Witness>,
    pub witnesses: Vec<Witness>,
}

/// Restricts verdicts to classes whose members stay `margin` away from the
/// window edges; other classes are reported as boundary classes.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ClassFilter {
    pub window: Window,
    pub margin: i64,
}

/// Class representative m * prod_l A_{i,l}^{u_{i+1,l}(m)} (the row i+1 is cleared).
pub(crate) fn class_key(rs: &RootSystem, m: &Monomial, i: usize) -> Exponents {
    let ip = rs.node(i as i64 + 1);
    let mut x = m.clone();
    for (l, u) in m.row(ip).collect::<Vec<_>>() {
        x = x.mul_a(rs, i, l, u);
    }
    x.exps().to_vec()
}

/// A-coordinate height: sum_l c_l with m = rep * prod A_{i,l}^{c_l}.
fn height(rs: &RootSystem, m: &Monomial, i: usize) -> i64 {
    -m.row(rs.node(i as i64 + 1)).map(|(_, u)| u).sum::<i64>()
}

enum ClassOutcome {
    Ok,
    Fail(Witness),
    Unsupported,
}

fn check_class(rs: &RootSystem, class: &[&Monomial], i: usize) -> ClassOutcome {
    let mut remaining: HashMap<Exponents, &Monomial> = class.iter().map(|m| (m.exps().to_vec(), *m)).collect();
    let mut order: Vec<&Monomial> = class.to_vec();
    order.sort_by(|a, b| height(rs, b, i).cmp(&height(rs, a, i)).then(a.cmp(b)));
    for top in order {
        if !remaining.contains_key(top.exps()) {
            continue;
        }
        let xi = Sl2Monomial::row_of(top, i);
        if !xi.is_dominant() {
            let a = xi.0.iter().find(|&&(_, u)| u < 0).map(|&(l, _)| l).expect("non-dominant row");
            return ClassOutcome::Fail(Witness {
                monomial: top.clone(),
                missing: top.mul_a(rs, i, a - 1, 1),
            });
        }
        let terms = match sl2_character_lowerings(&xi) {
            Ok(t) => t,
            Err(_) => return ClassOutcome::Unsupported,
        };
        for (d, mult) in terms {
            let mut m = top.clone();
            for &(l, k) in &d {
                m = m.mul_a(rs, i, l, -k);
            }
            if mult != 1 || remaining.remove(m.exps()).is_none() {
                return ClassOutcome::Fail(Witness {
                    monomial: top.clone(),
                    missing: m,
                });
            }
        }
    }
    ClassOutcome::Ok
}

/// Decides q-closedness of a finite set in direction i by greedy subtraction
/// of simple sl2 characters from each A_{i,*}-class.
pub fn qclosed_direction(rs: &RootSystem, set: &[Monomial], i: usize, filter: Option<&ClassFilter>) -> DirectionReport {
    let mut classes: BTreeMap<Exponents, Vec<&Monomial>> = BTreeMap::new();
    for m in set {
        classes.entry(class_key(rs, m, i)).or_default().push(m);
    }
    let mut boundary = 0;
    let mut unsupported = 0;
    let mut witnesses = Vec::new();
    let mut conclusive = 0;
    for class in classes.values() {
        if let Some(f) = filter {
            if class.iter().any(|m| !f.window.contains_with_margin(m, f.margin)) {
                boundary += 1;
                continue;
            }
        }
        conclusive += 1;
        match check_class(rs, class, i) {
            ClassOutcome::Ok => {}
            ClassOutcome::Fail(w) => witnesses.push(w),
            ClassOutcome::Unsupported => unsupported += 1,
        }
    }
    let verdict = if !witnesses.is_empty() {
        Verdict::NotClosed
    } else if conclusive == 0 || unsupported > 0 {
        Verdict::Inconclusive
    } else {
        Verdict::Closed
    };
    DirectionReport {
        direction: i,
        verdict,
        classes: classes.len(),
        boundary_classes: boundary,
        unsupported_classes: unsupported,
        witness: witnesses.first().cloned(),
        witnesses,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct KashiwaraReport {
    pub closed: bool,
    pub checked: usize,
    /// (element, label, image missing from the set)
    pub witness: Option<(Monomial, usize, Monomial)>,
}

/// True iff e~_i and f~_i (i in `labels`) map every element accepted by
/// `interior` into the set.
pub fn kashiwara_closed<F: Fn(&Monomial) -> bool>(
    rs: &RootSystem,
    set: &[Monomial],
    labels: &[usize],
    interior: F,
) -> KashiwaraReport {
    let present: std::collections::HashSet<&Monomial> = set.iter().collect();
    let mut checked = 0;
    for m in set {
        if !interior(m) {
            continue;
        }
        checked += 1;
        for &i in labels {
            for x in [e_tilde(rs, m, i), f_tilde(rs, m, i)].into_iter().flatten() {
                if !present.contains(&x) {
                    return KashiwaraReport {
                        closed: false,
                        checked,
                        witness: Some((m.clone(), i, x)),
                    };
                }
            }
        }
    }
    KashiwaraReport {
        closed: true,
        checked,
        witness: None,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClosednessReport {
    pub n: usize,
    pub ell: usize,
    pub window: Window,
    pub margin: i64,
    pub nodes: usize,
    pub directions: Vec<DirectionReport>,
    pub kashiwara: KashiwaraReport,
    pub verdict: Verdict,
}

/// Default distance from the window edges below which classes are not judged.
pub fn default_margin(rs: &RootSystem) -> i64 {
    2 * rs.size() as i64 + 4
}

/// Builds the crystal of e^{varpi_l}Y_{l,0}Y_{0,d_l}^{-1} in the window and
/// runs the q-closedness test in every direction and the Kashiwara test.
pub fn closed_report(rs: &RootSystem, ell: usize, window: Window, margin: i64) -> Result<ClosednessReport> {
    let m0 = fundamental_monomial(rs, ell)?;
    let g = generate(rs, &[m0], window)?;
    let set = g.nodes().to_vec();
    let filter = ClassFilter { window, margin };
    let directions: Vec<DirectionReport> = rs.nodes().map(|i| qclosed_direction(rs, &set, i, Some(&filter))).collect();
    let labels: Vec<usize> = rs.nodes().collect();
    let interior: std::collections::HashSet<&Monomial> =
        g.nodes().iter().enumerate().filter(|&(k, _)| g.is_interior(k)).map(|(_, m)| m).collect();
    let kashiwara = kashiwara_closed(rs, &set, &labels, |m| interior.contains(m));
    let verdict = if !kashiwara.closed || directions.iter().any(|d| d.verdict == Verdict::NotClosed) {
        Verdict::NotClosed
    } else if directions.iter().all(|d| d.verdict == Verdict::Closed) {
        Verdict::Closed
    } else {
        Verdict::Inconclusive
    };
    Ok(ClosednessReport {
        n: rs.n(),
        ell,
        window,
        margin,
        nodes: g.len(),
        directions,
        kashiwara,
        verdict,
    })
}

/// q-closedness of the I_j-subcrystal through node `k`, in every direction
/// i != j. The check runs on the subcrystal itself: Xi^j is required to be
/// injective on it, and then classes and characters agree with those of the
/// Xi^j-image.
pub fn subcrystal_closed(g: &CrystalGraph, k: usize, j: usize) -> Result<Vec<DirectionReport>> {
    let rs = *g.root_system();
    let labels: Vec<usize> = rs.nodes().filter(|&i| i != j).collect();
    let sub = g.sub_crystal(k, &labels)?;
    let mut images = std::collections::HashSet::new();
    for m in sub.nodes() {
        if !images.insert(xi_drop(&rs, m, j).exps().to_vec()) {
            return Err(Error::Validation(format!("Xi^{j} is not injective on the subcrystal of {m}")));
        }
    }
    if sub.interior_flags().iter().any(|&x| !x) {
        return Err(Error::Window(format!("the I_{j}-subcrystal of node {k} reaches the window edge")));
    }
    Ok(labels.into_iter().map(|i| qclosed_direction(&rs, sub.nodes(), i, None)).collect())
}
