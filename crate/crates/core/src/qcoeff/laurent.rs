use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::bigint::BigInt;
use num::{Integer, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Sparse element of Z[q, q^-1]; terms sorted by exponent, no zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LaurentPoly {
    terms: Vec<(i64, i64)>,
}

fn checked_add(a: i64, b: i64) -> i64 {
    a.checked_add(b).expect("Laurent coefficient overflow")
}

fn checked_mul(a: i64, b: i64) -> i64 {
    a.checked_mul(b).expect("Laurent coefficient overflow")
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    pub fn constant(c: i64) -> Self {
        Self::monomial(c, 0)
    }

    /// `c * q^e`.
    pub fn monomial(c: i64, e: i64) -> Self {
        if c == 0 {
            Self::zero()
        } else {
            LaurentPoly { terms: vec![(e, c)] }
        }
    }

    pub fn q_pow(e: i64) -> Self {
        Self::monomial(1, e)
    }

    /// Builds from arbitrary (exponent, coefficient) pairs, merging duplicates.
    pub fn from_terms<I: IntoIterator<Item = (i64, i64)>>(it: I) -> Self {
        let mut v: Vec<(i64, i64)> = it.into_iter().collect();
        v.sort_unstable_by_key(|t| t.0);
        let mut out: Vec<(i64, i64)> = Vec::with_capacity(v.len());
        for (e, c) in v {
            match out.last_mut() {
                Some(last) if last.0 == e => last.1 = checked_add(last.1, c),
                _ => out.push((e, c)),
            }
        }
        out.retain(|t| t.1 != 0);
        LaurentPoly { terms: out }
    }

    pub fn terms(&self) -> &[(i64, i64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0] == (0, 1)
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// The constant value if the polynomial has no q-dependence.
    pub fn as_constant(&self) -> Option<i64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [(0, c)] => Some(*c),
            _ => None,
        }
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.first().map(|t| t.0)
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.last().map(|t| t.0)
    }

    pub fn coeff(&self, e: i64) -> i64 {
        match self.terms.binary_search_by_key(&e, |t| t.0) {
            Ok(k) => self.terms[k].1,
            Err(_) => 0,
        }
    }

    /// Lowest-degree coefficient (0 for the zero polynomial).
    pub fn lowest_coeff(&self) -> i64 {
        self.terms.first().map_or(0, |t| t.1)
    }

    /// Multiplication by `q^e`.
    pub fn shift(&self, e: i64) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|&(x, c)| (x + e, c)).collect(),
        }
    }

    pub fn scale(&self, k: i64) -> Self {
        if k == 0 {
            return Self::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|&(e, c)| (e, checked_mul(c, k))).collect(),
        }
    }

    /// Exact division of every coefficient by `k`; panics if not exact.
    pub fn div_scalar(&self, k: i64) -> Self {
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .map(|&(e, c)| {
                    assert!(c % k == 0, "inexact scalar division");
                    (e, c / k)
                })
                .collect(),
        }
    }

    /// Gcd of the coefficients (0 for the zero polynomial), always nonnegative.
    pub fn content(&self) -> i64 {
        self.terms.iter().fold(0i64, |g, t| g.gcd(&t.1))
    }

    /// Substitution q -> q^-1.
    pub fn bar(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|&(e, c)| (-e, c)))
    }

    /// Substitution q -> q^k (k may be negative or zero).
    pub fn subs_pow(&self, k: i64) -> Self {
        Self::from_terms(self.terms.iter().map(|&(e, c)| (e * k, c)))
    }

    /// Value at q = 1.
    pub fn eval_at_one(&self) -> i64 {
        self.terms.iter().fold(0, |s, t| checked_add(s, t.1))
    }

    /// Exact rational value at an integer point q = x (x != 0).
    pub fn eval_rational(&self, x: i64) -> num::BigRational {
        let xq = num::BigRational::from_integer(BigInt::from(x));
        let mut s = num::BigRational::zero();
        for &(e, c) in &self.terms {
            let p = if e >= 0 {
                num::pow::pow(xq.clone(), e as usize)
            } else {
                num::pow::pow(xq.clone(), (-e) as usize).recip()
            };
            s += p * num::BigRational::from_integer(BigInt::from(c));
        }
        s
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Exact division in Z[q, q^-1]; `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &LaurentPoly) -> Option<LaurentPoly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(Self::zero());
        }
        let (dmin, dmax) = (d.min_exp().unwrap(), d.max_exp().unwrap());
        let lead = d.terms.last().unwrap().1;
        let mut rem: std::collections::BTreeMap<i64, i64> = self.terms.iter().cloned().collect();
        let mut quot = Vec::new();
        let dspan = dmax - dmin;
        while let Some((&top, &c)) = rem.iter().next_back() {
            let low = *rem.keys().next().unwrap();
            if top - low < dspan || c % lead != 0 {
                return None;
            }
            let qc = c / lead;
            let qe = top - dmax;
            quot.push((qe, qc));
            for &(e, dc) in &d.terms {
                let entry = rem.entry(e + qe).or_insert(0);
                *entry = checked_add(*entry, -checked_mul(qc, dc));
                if *entry == 0 {
                    rem.remove(&(e + qe));
                }
            }
        }
        Some(Self::from_terms(quot))
    }

    fn to_dense_big(&self) -> Vec<BigInt> {
        let lo = self.min_exp().unwrap_or(0);
        let hi = self.max_exp().unwrap_or(0);
        let mut v = vec![BigInt::zero(); (hi - lo + 1) as usize];
        for &(e, c) in &self.terms {
            v[(e - lo) as usize] = BigInt::from(c);
        }
        v
    }

    fn from_dense_big(v: &[BigInt]) -> Self {
        Self::from_terms(v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, c)| {
            (k as i64, c.to_i64().expect("gcd coefficient exceeds 64 bits"))
        }))
    }

    /// Greatest common divisor over Q[q] of the q-power-free parts, returned as a
    /// primitive polynomial with minimal exponent 0 and positive leading coefficient.
    pub fn gcd(&self, other: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() {
            return other.primitive_normalized();
        }
        if other.is_zero() {
            return self.primitive_normalized();
        }
        if self.terms.len() == 1 || other.terms.len() == 1 {
            return Self::one();
        }
        let a = self.to_dense_big();
        let b = other.to_dense_big();
        let g = dense_gcd(a, b);
        Self::from_dense_big(&g)
    }

    fn primitive_normalized(&self) -> LaurentPoly {
        if self.is_zero() {
            return Self::zero();
        }
        let c = self.content();
        let mut p = self.div_scalar(c).shift(-self.min_exp().unwrap());
        if p.terms.last().unwrap().1 < 0 {
            p = -p;
        }
        p
    }
}

fn trim(v: &mut Vec<BigInt>) {
    while v.len() > 1 && v.last().map_or(false, |c| c.is_zero()) {
        v.pop();
    }
}

fn strip_low_zeros(v: &mut Vec<BigInt>) {
    let k = v.iter().position(|c| !c.is_zero()).unwrap_or(0);
    v.drain(..k);
}

fn primitive_part(mut v: Vec<BigInt>) -> Vec<BigInt> {
    trim(&mut v);
    let g = v.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    if !g.is_zero() && !g.is_one() {
        for c in v.iter_mut() {
            *c = &*c / &g;
        }
    }
    if v.last().map_or(false, |c| c.is_negative()) {
        for c in v.iter_mut() {
            *c = -&*c;
        }
    }
    v
}

fn is_zero_dense(v: &[BigInt]) -> bool {
    v.iter().all(|c| c.is_zero())
}

/// Pseudo-remainder of a by b (dense ascending coefficients).
fn prem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut r: Vec<BigInt> = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lb = b[db].clone();
    while r.len() > db && !is_zero_dense(&r) {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        for c in r.iter_mut() {
            *c = &*c * &lb;
        }
        let shift = dr - db;
        for (k, bc) in b.iter().enumerate() {
            r[k + shift] -= &lr * bc;
        }
        trim(&mut r);
        if r.len() - 1 == dr {
            // leading term cancelled exactly to zero only if r is now zero
            if r[dr].is_zero() {
                r.pop();
            }
        }
    }
    r
}

fn dense_gcd(a: Vec<BigInt>, b: Vec<BigInt>) -> Vec<BigInt> {
    let mut a = a;
    let mut b = b;
    strip_low_zeros(&mut a);
    strip_low_zeros(&mut b);
    let mut a = primitive_part(a);
    let mut b = primitive_part(b);
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !(b.len() == 1 && b[0].is_zero()) && !b.is_empty() {
        if b.len() == 1 {
            return vec![BigInt::one()];
        }
        let mut r = prem(&a, &b);
        if r.is_empty() || is_zero_dense(&r) {
            return primitive_part(b);
        }
        strip_low_zeros(&mut r);
        a = b;
        b = primitive_part(r);
    }
    primitive_part(a)
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, &(e, c)) in self.terms.iter().rev().enumerate() {
            let mag = c.abs();
            if c < 0 {
                write!(f, "-")?;
            } else if k > 0 {
                write!(f, "+")?;
            }
            match e {
                0 => write!(f, "{mag}")?,
                _ => {
                    if mag != 1 {
                        write!(f, "{mag}")?;
                    }
                    if e == 1 {
                        write!(f, "q")?;
                    } else {
                        write!(f, "q^{e}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, o: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let (a, b) = (&self.terms, &o.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut x, mut y) = (0, 0);
        while x < a.len() && y < b.len() {
            match a[x].0.cmp(&b[y].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[x]);
                    x += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[y]);
                    y += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = checked_add(a[x].1, b[y].1);
                    if c != 0 {
                        out.push((a[x].0, c));
                    }
                    x += 1;
                    y += 1;
                }
            }
        }
        out.extend_from_slice(&a[x..]);
        out.extend_from_slice(&b[y..]);
        LaurentPoly { terms: out }
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|&(e, c)| (e, -c)).collect(),
        }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, o: &LaurentPoly) -> LaurentPoly {
        self + &(-o)
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, o: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || o.is_zero() {
            return LaurentPoly::zero();
        }
        if self.terms.len() == 1 {
            let (e, c) = self.terms[0];
            return o.shift(e).scale(c);
        }
        if o.terms.len() == 1 {
            let (e, c) = o.terms[0];
            return self.shift(e).scale(c);
        }
        let lo = self.min_exp().unwrap() + o.min_exp().unwrap();
        let hi = self.max_exp().unwrap() + o.max_exp().unwrap();
        let mut dense = vec![0i64; (hi - lo + 1) as usize];
        for &(e1, c1) in &self.terms {
            for &(e2, c2) in &o.terms {
                let k = (e1 + e2 - lo) as usize;
                dense[k] = checked_add(dense[k], checked_mul(c1, c2));
            }
        }
        LaurentPoly {
            terms: dense
                .into_iter()
                .enumerate()
                .filter(|t| t.1 != 0)
                .map(|(k, c)| (k as i64 + lo, c))
                .collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, o: LaurentPoly) -> LaurentPoly {
                (&self).$m(&o)
            }
        }
        impl $tr<&LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, o: &LaurentPoly) -> LaurentPoly {
                (&self).$m(o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Quantum integer [l]_q = (q^l - q^-l)/(q - q^-1).
pub fn qint(l: i64) -> LaurentPoly {
    let sign = l.signum();
    let k = l.abs();
    LaurentPoly::from_terms((0..k).map(|t| (k - 1 - 2 * t, sign)))
}

/// Quantum factorial [k]_q!.
pub fn qfactorial(k: u32) -> LaurentPoly {
    (1..=k as i64).fold(LaurentPoly::one(), |acc, t| &acc * &qint(t))
}

/// Quantum binomial coefficient; exact division of quantum factorials.
pub fn qbinom(m: i64, k: i64) -> Result<LaurentPoly> {
    if m < 0 || k < 0 || k > m {
        return Err(Error::Argument(format!("qbinom({m}, {k}) out of range")));
    }
    let num = qfactorial(m as u32);
    let den = &qfactorial(k as u32) * &qfactorial((m - k) as u32);
    Ok(num.div_exact(&den).expect("quantum binomial division is exact"))
}
