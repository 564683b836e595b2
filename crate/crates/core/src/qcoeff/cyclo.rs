use std::collections::HashMap;
use std::fmt;
use std::path::PathBuf;
use std::sync::{Arc, Mutex, OnceLock};

use num::bigint::BigInt;
use num::{BigRational, One, Zero};

use super::laurent::LaurentPoly;
use super::rational::RationalQ;
use crate::error::{Error, Result};

type Poly = Vec<BigRational>;

fn memo() -> &'static Mutex<HashMap<u64, Arc<Vec<i64>>>> {
    static M: OnceLock<Mutex<HashMap<u64, Arc<Vec<i64>>>>> = OnceLock::new();
    M.get_or_init(|| Mutex::new(HashMap::new()))
}

fn disk_dir() -> &'static Mutex<Option<PathBuf>> {
    static D: OnceLock<Mutex<Option<PathBuf>>> = OnceLock::new();
    D.get_or_init(|| Mutex::new(None))
}

/// Directory where computed cyclotomic polynomials are stored as text files.
pub fn set_disk_cache(dir: Option<PathBuf>) {
    *disk_dir().lock().unwrap() = dir;
}

fn read_disk(n: u64) -> Option<Vec<i64>> {
    let dir = disk_dir().lock().unwrap().clone()?;
    let text = std::fs::read_to_string(dir.join(format!("phi_{n}.txt"))).ok()?;
    text.split_whitespace().map(|t| t.parse().ok()).collect()
}

fn write_disk(n: u64, coeffs: &[i64]) {
    let Some(dir) = disk_dir().lock().unwrap().clone() else {
        return;
    };
    let line: Vec<String> = coeffs.iter().map(|c| c.to_string()).collect();
    // the cache is an optimization; failures to write are not errors
    let _ = std::fs::create_dir_all(&dir);
    let _ = std::fs::write(dir.join(format!("phi_{n}.txt")), line.join(" ") + "\n");
}

/// Integer polynomial division by a monic divisor (ascending coefficients).
fn div_monic(a: &[i64], d: &[i64]) -> Vec<i64> {
    let mut r = a.to_vec();
    let dd = d.len() - 1;
    let mut q = vec![0i64; a.len() - dd];
    for k in (0..q.len()).rev() {
        let c = r[k + dd];
        q[k] = c;
        for (j, dc) in d.iter().enumerate() {
            r[k + j] -= c * dc;
        }
    }
    debug_assert!(r.iter().all(|&c| c == 0), "cyclotomic division is exact");
    q
}

/// Phi_N as ascending integer coefficients, computed once per N by exact
/// division of q^N - 1 by Phi_d for the proper divisors d of N.
pub fn cyclotomic_poly(n: u64) -> Arc<Vec<i64>> {
    assert!(n > 0, "root order must be positive");
    if let Some(p) = memo().lock().unwrap().get(&n) {
        return p.clone();
    }
    let coeffs = read_disk(n).unwrap_or_else(|| {
        let mut acc = vec![0i64; n as usize + 1];
        acc[0] = -1;
        acc[n as usize] = 1;
        for d in (1..n).filter(|d| n % d == 0) {
            acc = div_monic(&acc, &cyclotomic_poly(d));
        }
        write_disk(n, &acc);
        acc
    });
    let p = Arc::new(coeffs);
    memo().lock().unwrap().insert(n, p.clone());
    p
}

fn trim(p: &mut Poly) {
    while p.last().map_or(false, |c| c.is_zero()) {
        p.pop();
    }
}

fn reduce(mut p: Poly, phi: &[i64]) -> Poly {
    let d = phi.len() - 1;
    trim(&mut p);
    while p.len() > d {
        let k = p.len() - 1;
        let c = p[k].clone();
        for (j, pc) in phi.iter().enumerate() {
            if *pc != 0 {
                p[k - d + j] -= &c * BigRational::from_integer(BigInt::from(*pc));
            }
        }
        trim(&mut p);
    }
    p
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Poly {
    let mut out = a.to_vec();
    out.resize(a.len().max(b.len()), BigRational::zero());
    for (k, c) in b.iter().enumerate() {
        out[k] -= c;
    }
    trim(&mut out);
    out
}

/// Euclidean division over Q[x].
fn poly_divrem(a: &[BigRational], b: &[BigRational]) -> (Poly, Poly) {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lead = b[db].clone();
    let mut q = vec![BigRational::zero(); r.len().saturating_sub(db)];
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1;
        let c = &r[k] / &lead;
        q[k - db] = c.clone();
        for (j, bc) in b.iter().enumerate() {
            r[k - db + j] -= &c * bc;
        }
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

/// Element of Q[q]/(Phi_N), i.e. of the cyclotomic field Q(eps).
#[derive(Clone)]
pub struct CycloElem {
    n: u64,
    phi: Arc<Vec<i64>>,
    coeffs: Poly,
}

impl PartialEq for CycloElem {
    fn eq(&self, o: &Self) -> bool {
        self.n == o.n && self.coeffs == o.coeffs
    }
}
impl Eq for CycloElem {}

impl CycloElem {
    pub fn zero(n: u64) -> Self {
        CycloElem {
            n,
            phi: cyclotomic_poly(n),
            coeffs: Vec::new(),
        }
    }

    pub fn one(n: u64) -> Self {
        Self::from_integer(n, 1)
    }

    pub fn from_integer(n: u64, k: i64) -> Self {
        let mut e = Self::zero(n);
        if k != 0 {
            e.coeffs = vec![BigRational::from_integer(BigInt::from(k))];
        }
        e
    }

    fn with(&self, coeffs: Poly) -> Self {
        CycloElem {
            n: self.n,
            phi: self.phi.clone(),
            coeffs: reduce(coeffs, &self.phi),
        }
    }

    /// The image of q^e, i.e. eps^e.
    pub fn q_pow(n: u64, e: i64) -> Self {
        let k = e.rem_euclid(n as i64) as usize;
        let z = Self::zero(n);
        let mut p = vec![BigRational::zero(); k + 1];
        p[k] = BigRational::one();
        z.with(p)
    }

    pub fn from_laurent(n: u64, p: &LaurentPoly) -> Self {
        let z = Self::zero(n);
        let mut dense = vec![BigRational::zero(); n as usize];
        for &(e, c) in p.terms() {
            dense[e.rem_euclid(n as i64) as usize] += BigRational::from_integer(BigInt::from(c));
        }
        z.with(dense)
    }

    pub fn order(&self) -> u64 {
        self.n
    }

    /// Coefficients in the power basis 1, eps, ..., eps^{deg Phi_N - 1}.
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut c = self.coeffs.clone();
        c.resize(c.len().max(o.coeffs.len()), BigRational::zero());
        for (k, x) in o.coeffs.iter().enumerate() {
            c[k] += x;
        }
        trim(&mut c);
        CycloElem {
            n: self.n,
            phi: self.phi.clone(),
            coeffs: c,
        }
    }

    pub fn neg(&self) -> Self {
        CycloElem {
            n: self.n,
            phi: self.phi.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.n);
        }
        self.with(poly_mul(&self.coeffs, &o.coeffs))
    }

    /// Multiplicative inverse via the extended Euclidean algorithm in Q[x].
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Specialization("inverse of zero".into()));
        }
        let phi: Poly = self
            .phi
            .iter()
            .map(|&c| BigRational::from_integer(BigInt::from(c)))
            .collect();
        let (mut r0, mut r1) = (phi, self.coeffs.clone());
        let (mut s0, mut s1): (Poly, Poly) = (Vec::new(), vec![BigRational::one()]);
        while !r1.is_empty() {
            let (q, r) = poly_divrem(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // r0 is a nonzero constant because Phi_N is irreducible
        if r0.len() != 1 {
            return Err(Error::Specialization("element is not invertible".into()));
        }
        let c = r0[0].clone();
        Ok(self.with(s0.iter().map(|x| x / &c).collect()))
    }

    /// Complex approximation, for display only.
    pub fn approx(&self) -> (f64, f64) {
        use num::ToPrimitive;
        let theta = 2.0 * std::f64::consts::PI / self.n as f64;
        self.coeffs.iter().enumerate().fold((0.0, 0.0), |(re, im), (k, c)| {
            let v = c.to_f64().unwrap_or(f64::NAN);
            (re + v * (theta * k as f64).cos(), im + v * (theta * k as f64).sin())
        })
    }
}

/// Image of a rational function under q -> eps (primitive N-th root of unity).
pub fn eval_cyclotomic(p: &RationalQ, n: u64) -> Result<CycloElem> {
    let den = CycloElem::from_laurent(n, p.den());
    if den.is_zero() {
        return Err(Error::Specialization(format!(
            "denominator {} vanishes at a primitive {n}-th root of unity",
            p.den()
        )));
    }
    Ok(CycloElem::from_laurent(n, p.num()).mul(&den.inv()?))
}

impl fmt::Display for CycloElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let s = c.to_string();
            if !first && !s.starts_with('-') {
                write!(f, "+")?;
            }
            first = false;
            match k {
                0 => write!(f, "{s}")?,
                _ => {
                    if s == "-1" {
                        write!(f, "-")?;
                    } else if s != "1" {
                        write!(f, "{s}*")?;
                    }
                    if k == 1 {
                        write!(f, "e")?;
                    } else {
                        write!(f, "e^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CycloElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} (mod Phi_{})", self.n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(*cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(*cyclotomic_poly(8), vec![1, 0, 0, 0, 1]);
        assert_eq!(*cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn q_squared_is_minus_one_mod_phi4() {
        assert_eq!(CycloElem::q_pow(4, 2), CycloElem::from_integer(4, -1));
    }

    #[test]
    fn inverse_roundtrip() {
        let a = CycloElem::from_laurent(12, &LaurentPoly::from_terms([(1, 1), (-1, -1)]));
        assert_eq!(a.mul(&a.inv().unwrap()), CycloElem::one(12));
    }
}
