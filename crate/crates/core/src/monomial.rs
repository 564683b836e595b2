//! Laurent monomials in the variables Y_{i,l} with an attached weight, the
//! simple monomials A_{i,l}, and the variable-level maps Xi, tau, phi, psi and
//! Gamma_N.

use std::collections::BTreeMap;
use std::fmt;

use num::rational::Rational64;
use num::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lattice::{root_coords, RootSystem, Weight};

/// A variable Y_{i,l} as (node, spectral index).
pub type Var = (usize, i64);

/// Sparse exponent table sorted by (i, l) with no zero entries.
pub type Exponents = Vec<(Var, i64)>;

/// Parity class of a variable: the parity of i + l.
pub fn var_class((i, l): Var) -> u8 {
    (i as i64 + l).rem_euclid(2) as u8
}

/// Canonicalizes an exponent list: merges repeated variables, drops zeros, sorts.
pub fn normalize_exps<I: IntoIterator<Item = (Var, i64)>>(it: I) -> Exponents {
    let mut acc: BTreeMap<Var, i64> = BTreeMap::new();
    for (v, u) in it {
        let e = acc.entry(v).or_insert(0);
        *e = e.checked_add(u).expect("exponent overflow");
    }
    acc.into_iter().filter(|&(_, u)| u != 0).collect()
}

fn merge(a: &[(Var, i64)], b: &[(Var, i64)], sb: i64) -> Exponents {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut x, mut y) = (0, 0);
    while x < a.len() || y < b.len() {
        if y == b.len() || (x < a.len() && a[x].0 < b[y].0) {
            out.push(a[x]);
            x += 1;
        } else if x == a.len() || b[y].0 < a[x].0 {
            out.push((b[y].0, b[y].1 * sb));
            y += 1;
        } else {
            let u = a[x].1 + sb * b[y].1;
            if u != 0 {
                out.push((a[x].0, u));
            }
            x += 1;
            y += 1;
        }
    }
    out
}

/// Column sums sum_l u_{i,l} indexed by node.
pub fn column_sums(size: usize, exps: &[(Var, i64)]) -> Vec<i64> {
    let mut h = vec![0; size];
    for &((i, _), u) in exps {
        h[i] += u;
    }
    h
}

/// m = e^{weight} prod Y_{i,l}^{u_{i,l}}.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    exps: Exponents,
    weight: Weight,
}

impl Monomial {
    /// Validating constructor: the h-part of the weight must equal the column
    /// sums, and all variables must lie in one parity class.
    pub fn make(rs: &RootSystem, exps: Exponents, weight: Weight) -> Result<Self> {
        if weight.h.len() != rs.size() {
            return Err(Error::Validation(format!(
                "weight has {} h-values, expected {}",
                weight.h.len(),
                rs.size()
            )));
        }
        for &((i, _), _) in &exps {
            rs.check_node(i).map_err(|_| Error::Validation(format!("node {i} out of range")))?;
        }
        let exps = normalize_exps(exps);
        check_parity(&exps)?;
        let sums = column_sums(rs.size(), &exps);
        if sums != weight.h {
            return Err(Error::Validation(format!(
                "column sums {sums:?} differ from weight h-values {:?}",
                weight.h
            )));
        }
        Ok(Monomial { exps, weight })
    }

    /// Builds a monomial whose h-part is read off from the exponents.
    pub fn from_exps(rs: &RootSystem, exps: Exponents, delta: Rational64) -> Result<Self> {
        let exps = normalize_exps(exps);
        let h = column_sums(rs.size(), &exps);
        Self::make(rs, exps, Weight { h, delta })
    }

    /// Parses a product such as `Y_{1,3}^{-1}Y_{2,2}` (or `1`); the h-part
    /// of the weight is read from the exponents.
    pub fn parse(rs: &RootSystem, s: &str, delta: Rational64) -> Result<Self> {
        Self::from_exps(rs, parse_exps(s)?, delta)
    }

    pub fn identity(rs: &RootSystem) -> Self {
        Monomial {
            exps: Vec::new(),
            weight: Weight::zero(rs),
        }
    }

    pub fn exps(&self) -> &[(Var, i64)] {
        &self.exps
    }

    pub fn weight(&self) -> &Weight {
        &self.weight
    }

    pub fn delta(&self) -> Rational64 {
        self.weight.delta
    }

    pub fn is_identity(&self) -> bool {
        self.exps.is_empty() && self.weight.h.iter().all(|&x| x == 0) && self.weight.delta.is_zero()
    }

    /// Parity of i+l shared by every variable; `None` for a constant monomial.
    pub fn class(&self) -> Option<u8> {
        self.exps.first().map(|&(v, _)| var_class(v))
    }

    pub fn exponent(&self, i: usize, l: i64) -> i64 {
        self.exps
            .binary_search_by(|&(v, _)| v.cmp(&(i, l)))
            .map(|k| self.exps[k].1)
            .unwrap_or(0)
    }

    /// Nonzero exponents of row i, ascending in l.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (i64, i64)> + '_ {
        let start = self.exps.partition_point(|&((j, _), _)| j < i);
        self.exps[start..].iter().take_while(move |&&((j, _), _)| j == i).map(|&((_, l), u)| (l, u))
    }

    /// Smallest and largest spectral index in the support.
    pub fn span(&self) -> Option<(i64, i64)> {
        let mut it = self.exps.iter().map(|&((_, l), _)| l);
        let first = it.next()?;
        Some(it.fold((first, first), |(a, b), l| (a.min(l), b.max(l))))
    }

    /// Group product; exponents and weights add. Parity classes are not
    /// re-checked here (see [`Monomial::checked_mul`]).
    pub fn mul(&self, o: &Monomial) -> Monomial {
        Monomial {
            exps: merge(&self.exps, &o.exps, 1),
            weight: &self.weight + &o.weight,
        }
    }

    /// self * o^{-1}.
    pub fn div(&self, o: &Monomial) -> Monomial {
        Monomial {
            exps: merge(&self.exps, &o.exps, -1),
            weight: &self.weight - &o.weight,
        }
    }

    pub fn checked_mul(&self, o: &Monomial) -> Result<Monomial> {
        let m = self.mul(o);
        check_parity(&m.exps)?;
        Ok(m)
    }

    pub fn inv(&self) -> Monomial {
        Monomial {
            exps: self.exps.iter().map(|&(v, u)| (v, -u)).collect(),
            weight: -&self.weight,
        }
    }

    pub fn pow(&self, k: i64) -> Monomial {
        if k == 0 {
            return Monomial {
                exps: Vec::new(),
                weight: self.weight.scale(0),
            };
        }
        Monomial {
            exps: self.exps.iter().map(|&(v, u)| (v, u * k)).collect(),
            weight: self.weight.scale(k),
        }
    }

    /// Same exponents with a replaced delta-coefficient.
    pub fn with_delta(&self, delta: Rational64) -> Monomial {
        Monomial {
            exps: self.exps.clone(),
            weight: self.weight.with_delta(delta),
        }
    }

    /// Multiplies by A_{i,l}^k.
    pub fn mul_a(&self, rs: &RootSystem, i: usize, l: i64, k: i64) -> Monomial {
        self.mul(&a_monomial(rs, i, l).pow(k))
    }

    /// Canonical string including the weight, e.g. `e^{(-1,1,0,0; 0)}Y_{0,1}^{-1}Y_{1,0}`.
    pub fn full_string(&self) -> String {
        format!("e^{{{}}}{}", self.weight, self)
    }
}

fn check_parity(exps: &[(Var, i64)]) -> Result<()> {
    if let Some(&(v0, _)) = exps.first() {
        let c = var_class(v0);
        if let Some(&(v, _)) = exps.iter().find(|&&(v, _)| var_class(v) != c) {
            return Err(Error::Parity(format!(
                "Y_{{{},{}}} and Y_{{{},{}}} lie in different parity classes",
                v0.0, v0.1, v.0, v.1
            )));
        }
    }
    Ok(())
}

/// A_{i,l} = e^{alpha_i} Y_{i,l-1} Y_{i,l+1} Y_{i-1,l}^{-1} Y_{i+1,l}^{-1}.
pub fn a_monomial(rs: &RootSystem, i: usize, l: i64) -> Monomial {
    let [im, ip] = rs.adjacent(i);
    Monomial {
        exps: normalize_exps([((i, l - 1), 1), ((i, l + 1), 1), ((im, l), -1), ((ip, l), -1)]),
        weight: root_coords(rs, i),
    }
}

/// Writes an exponent-only ratio as prod A_{i,l}^{c_{i,l}}, peeling the
/// variable of largest spectral index at each step. `None` if the ratio is
/// not in the subgroup generated by the A's.
pub fn a_decomposition(rs: &RootSystem, exps: &[(Var, i64)]) -> Option<Vec<(Var, i64)>> {
    let mut cur: Exponents = exps.to_vec();
    let lo = cur.iter().map(|&((_, l), _)| l).min().unwrap_or(0);
    let mut out: BTreeMap<Var, i64> = BTreeMap::new();
    while let Some(&((j, top), u)) = cur.iter().max_by_key(|&&((i, l), _)| (l, std::cmp::Reverse(i))) {
        if top <= lo {
            return None;
        }
        // Y_{j,top} only occurs with the largest index in A_{j,top-1}.
        let a = a_monomial(rs, j, top - 1);
        cur = merge(&cur, &a.exps.iter().map(|&(v, x)| (v, x * u)).collect::<Vec<_>>(), -1);
        *out.entry((j, top - 1)).or_insert(0) += u;
    }
    Some(out.into_iter().filter(|&(_, c)| c != 0).collect())
}

/// M_0 = e^{varpi_l} Y_{l,0} Y_{0,d_l}^{-1}, the generator of the fundamental crystal.
pub fn fundamental_monomial(rs: &RootSystem, ell: usize) -> Result<Monomial> {
    rs.check_ell(ell)?;
    Monomial::make(
        rs,
        vec![((ell, 0), 1), ((0, rs.d_ell(ell) as i64), -1)],
        crate::lattice::varpi(rs, ell),
    )
}

/// Rebuilds the full weight of a monomial given by its exponents from an
/// anchor of the same A-class: wt(m) = wt(anchor) + sum c_{i,l} alpha_i.
pub fn weight_from_anchor(rs: &RootSystem, exps: &[(Var, i64)], anchor: &Monomial) -> Result<Monomial> {
    let ratio = merge(exps, &anchor.exps, -1);
    let dec = a_decomposition(rs, &ratio)
        .ok_or_else(|| Error::Validation("monomial is not in the A-class of the anchor".into()))?;
    let shift: i64 = dec.iter().filter(|&&((i, _), _)| i == 0).map(|&(_, c)| c).sum();
    Monomial::from_exps(rs, exps.to_vec(), anchor.delta() + Rational64::from_integer(shift))
}

/// Xi_i: keeps only the row i; the weight becomes the induced sl2 weight.
pub fn xi_keep(rs: &RootSystem, m: &Monomial, i: usize) -> Monomial {
    let exps: Exponents = m.exps.iter().filter(|&&((j, _), _)| j == i).cloned().collect();
    let h = column_sums(rs.size(), &exps);
    Monomial {
        exps,
        weight: Weight::from_h(h),
    }
}

/// Xi^i: erases the row i; the weight keeps its h-values away from i.
pub fn xi_drop(rs: &RootSystem, m: &Monomial, i: usize) -> Monomial {
    let exps: Exponents = m.exps.iter().filter(|&&((j, _), _)| j != i).cloned().collect();
    let h = column_sums(rs.size(), &exps);
    Monomial {
        exps,
        weight: Weight::from_h(h),
    }
}

/// tau_{2p,alpha}: shifts every spectral index by `twop` and the weight by `alpha`.
pub fn tau(m: &Monomial, twop: i64, alpha: &Weight) -> Result<Monomial> {
    if twop % 2 != 0 {
        return Err(Error::Parity(format!("tau needs an even shift, got {twop}")));
    }
    if !alpha.is_delta_multiple() || alpha.h.len() != m.weight.h.len() {
        return Err(Error::Argument("tau shifts the weight by a multiple of delta only".into()));
    }
    Ok(tau_delta(m, twop, alpha.delta))
}

/// tau with alpha = c*delta; the shift parity is the caller's responsibility.
pub(crate) fn tau_delta(m: &Monomial, twop: i64, c: Rational64) -> Monomial {
    Monomial {
        exps: m.exps.iter().map(|&((i, l), u)| ((i, l.checked_add(twop).expect("spectral overflow")), u)).collect(),
        weight: m.weight.with_delta(m.weight.delta + c),
    }
}

/// Exponent-level phi: Y_{i,l} -> Y_{i+1,l+1}.
pub fn phi_exps(rs: &RootSystem, exps: &[(Var, i64)]) -> Exponents {
    normalize_exps(exps.iter().map(|&((i, l), u)| ((rs.node(i as i64 + 1), l + 1), u)))
}

/// phi on exponents together with the forced h-part (cyclically rotated);
/// the delta-coefficient is not determined and is not returned.
pub fn twist_phi(rs: &RootSystem, m: &Monomial) -> (Exponents, Vec<i64>) {
    let e = phi_exps(rs, &m.exps);
    let h = column_sums(rs.size(), &e);
    (e, h)
}

/// psi: Y_{i,l} -> Y_{-i,l}, Lambda_i -> Lambda_{-i}, delta part preserved.
pub fn twist_psi(rs: &RootSystem, m: &Monomial) -> Monomial {
    let exps = psi_exps(rs, &m.exps);
    let h = (0..rs.size()).map(|i| m.weight.h[rs.node(-(i as i64))]).collect();
    Monomial {
        exps,
        weight: Weight { h, delta: m.weight.delta },
    }
}

pub fn psi_exps(rs: &RootSystem, exps: &[(Var, i64)]) -> Exponents {
    normalize_exps(exps.iter().map(|&((i, l), u)| ((rs.node(-(i as i64)), l), u)))
}

/// Image of a monomial under Gamma_N: spectral indices in Z/N.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ResidueMonomial {
    pub modulus: i64,
    pub exps: Exponents,
    pub h: Vec<i64>,
}

impl fmt::Display for ResidueMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exps.is_empty() {
            return write!(f, "1");
        }
        for &((i, l), u) in &self.exps {
            write!(f, "Y_{{{i},{l}~}}")?;
            if u != 1 {
                write!(f, "^{{{u}}}")?;
            }
        }
        Ok(())
    }
}

/// Gamma_N: accumulates exponents on residues l mod N.
pub fn gamma_n(m: &Monomial, modulus: i64) -> Result<ResidueMonomial> {
    if modulus <= 0 || modulus % 2 != 0 {
        return Err(Error::Parity(format!("Gamma_N needs a positive even N, got {modulus}")));
    }
    Ok(ResidueMonomial {
        modulus,
        exps: normalize_exps(m.exps.iter().map(|&((i, l), u)| ((i, l.rem_euclid(modulus)), u))),
        h: m.weight.h.clone(),
    })
}

/// Parses `Y_{i,l}^{u}` factors; `1` or the empty string is the identity.
pub fn parse_exps(s: &str) -> Result<Exponents> {
    let bad = |msg: &str| Error::Validation(format!("cannot parse monomial {s:?}: {msg}"));
    let t: String = s.chars().filter(|c| !c.is_whitespace() && *c != '*').collect();
    if t.is_empty() || t == "1" {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut rest = t.as_str();
    while !rest.is_empty() {
        rest = rest.strip_prefix("Y_{").ok_or_else(|| bad("expected Y_{"))?;
        let close = rest.find('}').ok_or_else(|| bad("unclosed index"))?;
        let (idx, tail) = rest.split_at(close);
        let (i, l) = idx.split_once(',').ok_or_else(|| bad("index needs i,l"))?;
        let i: usize = i.parse().map_err(|_| bad("bad node"))?;
        let l: i64 = l.parse().map_err(|_| bad("bad spectral index"))?;
        rest = &tail[1..];
        let mut u = 1i64;
        if let Some(r) = rest.strip_prefix('^') {
            if let Some(r) = r.strip_prefix('{') {
                let c = r.find('}').ok_or_else(|| bad("unclosed exponent"))?;
                u = r[..c].parse().map_err(|_| bad("bad exponent"))?;
                rest = &r[c + 1..];
            } else {
                let end = r
                    .char_indices()
                    .find(|&(k, ch)| !(ch.is_ascii_digit() || (k == 0 && ch == '-')))
                    .map(|(k, _)| k)
                    .unwrap_or(r.len());
                u = r[..end].parse().map_err(|_| bad("bad exponent"))?;
                rest = &r[end..];
            }
        }
        out.push(((i, l), u));
    }
    Ok(normalize_exps(out))
}

pub fn format_exps(exps: &[(Var, i64)]) -> String {
    if exps.is_empty() {
        return "1".into();
    }
    let mut s = String::new();
    for &((i, l), u) in exps {
        s.push_str(&format!("Y_{{{i},{l}}}"));
        if u != 1 {
            s.push_str(&format!("^{{{u}}}"));
        }
    }
    s
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_exps(&self.exps))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.full_string())
    }
}

#[derive(Serialize, Deserialize)]
struct MonomialRepr {
    weight: Weight,
    exp: Vec<(usize, i64, i64)>,
}

impl Serialize for Monomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MonomialRepr {
            weight: self.weight.clone(),
            exp: self.exps.iter().map(|&((i, l), u)| (i, l, u)).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Monomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = MonomialRepr::deserialize(d)?;
        let size = r.weight.h.len();
        let n = size.checked_sub(1).ok_or_else(|| D::Error::custom("empty weight"))?;
        let rs = RootSystem::new(n).map_err(D::Error::custom)?;
        Monomial::make(&rs, r.exp.into_iter().map(|(i, l, u)| ((i, l), u)).collect(), r.weight)
            .map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::varpi;

    fn rs3() -> RootSystem {
        RootSystem::new(3).unwrap()
    }

    fn mono(rs: &RootSystem, s: &str) -> Monomial {
        Monomial::parse(rs, s, Rational64::zero()).unwrap()
    }

    #[test]
    fn make_validates_column_sums() {
        let rs = rs3();
        let m = Monomial::make(&rs, vec![((1, 0), 1), ((0, 1), -1)], varpi(&rs, 1)).unwrap();
        assert_eq!(m.to_string(), "Y_{0,1}^{-1}Y_{1,0}");
        assert!(Monomial::make(&rs, vec![((1, 1), 1)], crate::lattice::fundamental(&rs, 0)).is_err());
        assert!(Monomial::make(&rs, vec![], Weight::zero(&rs)).unwrap().is_identity());
    }

    #[test]
    fn mixed_parity_is_rejected() {
        let rs = rs3();
        assert!(matches!(
            Monomial::parse(&rs, "Y_{1,0}Y_{1,1}^{-1}", Rational64::zero()),
            Err(Error::Parity(_))
        ));
    }

    #[test]
    fn a_monomial_wraps_and_carries_delta() {
        let rs = rs3();
        let a0 = a_monomial(&rs, 0, 1);
        assert_eq!(a0.to_string(), "Y_{0,0}Y_{0,2}Y_{1,1}^{-1}Y_{3,1}^{-1}");
        assert_eq!(a0.delta(), Rational64::from_integer(1));
        let a1 = a_monomial(&rs, 1, 1);
        assert!(a1.mul(&a1.inv()).is_identity());
    }

    #[test]
    fn lowering_by_a_inverse() {
        let rs = rs3();
        let m0 = Monomial::make(&rs, vec![((1, 0), 1), ((0, 1), -1)], varpi(&rs, 1)).unwrap();
        let m1 = m0.mul_a(&rs, 1, 1, -1);
        assert_eq!(m1.to_string(), "Y_{1,2}^{-1}Y_{2,1}");
        assert_eq!(m1.weight().h, vec![0, -1, 1, 0]);
    }

    #[test]
    fn a_decomposition_recovers_delta() {
        let rs = rs3();
        let m0 = Monomial::make(&rs, vec![((1, 0), 1), ((0, 1), -1)], varpi(&rs, 1)).unwrap();
        let mut m = m0.clone();
        for (i, l) in [(1, 1), (2, 2), (3, 3), (0, 4)] {
            m = m.mul_a(&rs, i, l, -1);
        }
        let rebuilt = weight_from_anchor(&rs, m.exps(), &m0).unwrap();
        assert_eq!(rebuilt, m);
        assert_eq!(m.delta(), Rational64::from_integer(-1));
        assert!(weight_from_anchor(&rs, &parse_exps("Y_{1,0}").unwrap(), &m0).is_err());
    }

    #[test]
    fn tau_phi_psi_gamma() {
        let rs = rs3();
        let m0 = Monomial::make(&rs, vec![((1, 0), 1), ((0, 1), -1)], varpi(&rs, 1)).unwrap();
        let t = tau(&m0, 4, &Weight::delta(&rs).scale(-1)).unwrap();
        assert_eq!(t.to_string(), "Y_{0,5}^{-1}Y_{1,4}");
        assert_eq!(t.delta(), Rational64::from_integer(-1));
        assert!(tau(&m0, 3, &Weight::zero(&rs)).is_err());
        assert_eq!(format_exps(&twist_phi(&rs, &m0).0), "Y_{1,2}^{-1}Y_{2,1}");
        assert_eq!(format_exps(&phi_exps(&rs, &parse_exps("Y_{3,2}").unwrap())), "Y_{0,3}");
        let p = twist_psi(&rs, &m0);
        assert_eq!(p.to_string(), "Y_{0,1}^{-1}Y_{3,0}");
        assert_eq!(p.weight(), &varpi(&rs, 3));
        assert_eq!(twist_psi(&rs, &p), m0);
        let g = gamma_n(&mono(&rs, "Y_{1,4}Y_{1,0}"), 4).unwrap();
        assert_eq!(g.exps, vec![((1, 0), 2)]);
        assert!(gamma_n(&m0, 3).is_err());
    }

    #[test]
    fn xi_maps() {
        let rs = rs3();
        let m = mono(&rs, "Y_{1,1}Y_{2,2}^{-1}Y_{3,1}Y_{0,2}^{-1}");
        assert_eq!(xi_keep(&rs, &m, 1).to_string(), "Y_{1,1}");
        let m0 = Monomial::make(&rs, vec![((2, 0), 1), ((0, 2), -1)], varpi(&rs, 2)).unwrap();
        assert_eq!(xi_drop(&rs, &m0, 0).to_string(), "Y_{2,0}");
        assert!(xi_keep(&rs, &Monomial::identity(&rs), 2).is_identity());
    }

    #[test]
    fn parse_and_json_round_trip() {
        let rs = rs3();
        let m = mono(&rs, "Y_{1,3}^{-1} Y_{2,2}Y_{0,-4}^2").with_delta(Rational64::new(1, 2));
        assert_eq!(m.to_string(), "Y_{0,-4}^{2}Y_{1,3}^{-1}Y_{2,2}");
        let js = serde_json::to_string(&m).unwrap();
        assert_eq!(js, r#"{"weight":{"h":[2,-1,1,0],"delta":"1/2"},"exp":[[0,-4,2],[1,3,-1],[2,2,1]]}"#);
        let back: Monomial = serde_json::from_str(&js).unwrap();
        assert_eq!(back, m);
        assert!(parse_exps("Y_{1,}").is_err());
    }
}
