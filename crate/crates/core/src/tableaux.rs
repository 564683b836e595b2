//! Row-tableau model of the fundamental crystals: boxes, the monomials
//! m_{T;j}, tableau Kashiwara rules and promotion.
//!
//! For l <= r+1 a tableau has l entries. For l > r+1 the crystal of varpi_l
//! is the psi-image of the crystal of varpi_{n+1-l}; its tableaux have
//! n+1-l entries, m_{T;j} means psi(m_{T;j}) and the operator labels are
//! twisted by i -> -i.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::RootSystem;
use crate::monomial::{fundamental_monomial, normalize_exps, psi_exps, weight_from_anchor, Exponents, Monomial};

/// Strictly increasing entries in 1..=n+1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RowTableau(pub Vec<usize>);

impl RowTableau {
    pub fn new(rs: &RootSystem, entries: Vec<usize>) -> Result<Self> {
        if entries.iter().any(|&k| k == 0 || k > rs.size()) {
            return Err(Error::Argument(format!("tableau entries {entries:?} outside 1..={}", rs.size())));
        }
        if entries.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Argument(format!("tableau entries {entries:?} are not strictly increasing")));
        }
        Ok(RowTableau(entries))
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }
}

impl fmt::Display for RowTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|k| k.to_string()).collect();
        write!(f, "{}", s.join(","))
    }
}

/// (T; j) with j kept unreduced.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TabIndex {
    pub t: RowTableau,
    pub j: i64,
}

/// Number of tableau entries used for the crystal of varpi_l.
pub fn tableau_length(rs: &RootSystem, ell: usize) -> usize {
    if ell <= rs.r() + 1 {
        ell
    } else {
        rs.size() - ell
    }
}

fn flipped(rs: &RootSystem, ell: usize) -> bool {
    ell > rs.r() + 1
}

/// All tableaux of the given length, in lexicographic order.
pub fn all_tableaux(rs: &RootSystem, len: usize) -> Vec<RowTableau> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(len);
    fn rec(start: usize, top: usize, len: usize, cur: &mut Vec<usize>, out: &mut Vec<RowTableau>) {
        if cur.len() == len {
            out.push(RowTableau(cur.clone()));
            return;
        }
        for k in start..=top {
            cur.push(k);
            rec(k + 1, top, len, cur, out);
            cur.pop();
        }
    }
    rec(1, rs.size(), len, &mut cur, &mut out);
    out
}

/// The box [k]_p = Y_{k-1,p+k}^{-1} Y_{k,p+k-1}, with Y_{n+1,p} = Y_{0,p}.
pub fn box_exps(rs: &RootSystem, k: usize, p: i64) -> Result<Exponents> {
    if k == 0 || k > rs.size() {
        return Err(Error::Argument(format!("box index {k} outside 1..={}", rs.size())));
    }
    let kk = k as i64;
    Ok(normalize_exps([((k - 1, p + kk), -1), (((k) % rs.size(), p + kk - 1), 1)]))
}

/// Exponents of m_{T;j} for a tableau of length `len` (the unflipped formula).
fn base_exps(rs: &RootSystem, len: usize, idx: &TabIndex) -> Result<Exponents> {
    let l = len as i64;
    let n = rs.n() as i64;
    let j0 = idx.j.rem_euclid(l);
    let k = idx.j.div_euclid(l);
    let mut all = Vec::new();
    for (p0, &ip) in idx.t.0.iter().enumerate() {
        let p = p0 as i64 + 1;
        let spec = if p <= j0 { n - l - 2 * p + 2 * j0 + 2 } else { l + 1 - 2 * p + 2 * j0 };
        all.extend(box_exps(rs, ip, spec + k * (n + 1))?);
    }
    Ok(normalize_exps(all))
}

fn check_index(rs: &RootSystem, ell: usize, idx: &TabIndex) -> Result<()> {
    rs.check_ell(ell)?;
    let len = tableau_length(rs, ell);
    if idx.t.0.len() != len {
        return Err(Error::Argument(format!(
            "the crystal of varpi_{ell} uses tableaux with {len} entries, got {}",
            idx.t
        )));
    }
    RowTableau::new(rs, idx.t.0.clone()).map(|_| ())
}

/// Exponents of m_{T;j} in the crystal of varpi_l.
pub fn tab_exps(rs: &RootSystem, ell: usize, idx: &TabIndex) -> Result<Exponents> {
    check_index(rs, ell, idx)?;
    let e = base_exps(rs, tableau_length(rs, ell), idx)?;
    Ok(if flipped(rs, ell) { psi_exps(rs, &e) } else { e })
}

/// m_{T;j} with its full weight, anchored at M_0 = e^{varpi_l}Y_{l,0}Y_{0,d_l}^{-1}.
pub fn tab_monomial(rs: &RootSystem, ell: usize, idx: &TabIndex) -> Result<Monomial> {
    let e = tab_exps(rs, ell, idx)?;
    weight_from_anchor(rs, &e, &fundamental_monomial(rs, ell)?)
}

/// The unflipped tableau rules for e~_i (raising) and f~_i.
fn base_kashiwara(rs: &RootSystem, idx: &TabIndex, i: usize, raising: bool) -> Option<TabIndex> {
    let t = &idx.t.0;
    let top = rs.size();
    if i != 0 {
        let (from, to) = if raising { (i + 1, i) } else { (i, i + 1) };
        if !t.contains(&from) || t.contains(&to) {
            return None;
        }
        let mut e: Vec<usize> = t.iter().map(|&x| if x == from { to } else { x }).collect();
        e.sort_unstable();
        return Some(TabIndex { t: RowTableau(e), j: idx.j });
    }
    let (first, last) = (t[0], t[t.len() - 1]);
    if raising {
        if first != 1 || last == top {
            return None;
        }
        let mut e: Vec<usize> = t[1..].to_vec();
        e.push(top);
        Some(TabIndex { t: RowTableau(e), j: idx.j - 1 })
    } else {
        if first == 1 || last != top {
            return None;
        }
        let mut e = vec![1];
        e.extend_from_slice(&t[..t.len() - 1]);
        Some(TabIndex { t: RowTableau(e), j: idx.j + 1 })
    }
}

/// e~_i (raising) or f~_i on (T; j) by the tableau rules.
pub fn tab_kashiwara(rs: &RootSystem, ell: usize, idx: &TabIndex, i: usize, raising: bool) -> Option<TabIndex> {
    let label = if flipped(rs, ell) { rs.node(-(i as i64)) } else { i };
    base_kashiwara(rs, idx, label, raising)
}

/// Promotion: entries increase by one; n+1 wraps to 1 and then j increases.
pub fn tab_promotion(rs: &RootSystem, idx: &TabIndex) -> TabIndex {
    let top = rs.size();
    let wrap = idx.t.0.contains(&top);
    let mut e: Vec<usize> = idx.t.0.iter().map(|&x| if x == top { 1 } else { x + 1 }).collect();
    e.sort_unstable();
    TabIndex {
        t: RowTableau(e),
        j: idx.j + wrap as i64,
    }
}

/// All m_{T;j} for j in the range, with their indices; sorted by monomial
/// and free of repetitions.
pub fn enumerate(
    rs: &RootSystem,
    ell: usize,
    j_range: std::ops::RangeInclusive<i64>,
) -> Result<Vec<(TabIndex, Monomial)>> {
    rs.check_ell(ell)?;
    let len = tableau_length(rs, ell);
    let mut out = Vec::new();
    for j in j_range {
        for t in all_tableaux(rs, len) {
            let idx = TabIndex { t, j };
            let m = tab_monomial(rs, ell, &idx)?;
            out.push((idx, m));
        }
    }
    out.sort_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)));
    out.dedup_by(|a, b| a.1 == b.1);
    Ok(out)
}
