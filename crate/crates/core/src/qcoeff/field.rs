use std::fmt;

use super::cyclo::{eval_cyclotomic, CycloElem};
use super::laurent::LaurentPoly;
use super::rational::{Frac, RationalQ};
use crate::error::Result;

/// Scalar field in which module actions are evaluated: Q(q) for generic q, or
/// a cyclotomic field when q is specialized at a root of unity.
pub trait Field: Sync + Send {
    type Elem: Clone + Send + Sync + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Multiplication by q^e.
    fn shift(&self, a: &Self::Elem, e: i64) -> Self::Elem;
    fn from_laurent(&self, p: &LaurentPoly) -> Self::Elem;
    fn from_rational(&self, p: &RationalQ) -> Result<Self::Elem>;
    fn render(&self, a: &Self::Elem) -> String;
}

/// Generic q: elements of Q(q) as unnormalized fractions.
#[derive(Clone, Copy, Debug, Default)]
pub struct GenericQ;

impl Field for GenericQ {
    type Elem = Frac;

    fn zero(&self) -> Frac {
        Frac::zero()
    }
    fn is_zero(&self, a: &Frac) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &Frac, b: &Frac) -> Frac {
        a.add(b)
    }
    fn mul(&self, a: &Frac, b: &Frac) -> Frac {
        a.mul(b)
    }
    fn neg(&self, a: &Frac) -> Frac {
        a.neg()
    }
    fn shift(&self, a: &Frac, e: i64) -> Frac {
        a.shift(e)
    }
    fn from_laurent(&self, p: &LaurentPoly) -> Frac {
        Frac::from_poly(p.clone())
    }
    fn from_rational(&self, p: &RationalQ) -> Result<Frac> {
        Ok(Frac::from(p))
    }
    fn render(&self, a: &Frac) -> String {
        a.to_rational().to_string()
    }
}

/// q specialized at a primitive N-th root of unity.
#[derive(Clone, Debug)]
pub struct CycloField {
    n: u64,
    pows: Vec<CycloElem>,
}

impl CycloField {
    pub fn new(n: u64) -> Self {
        CycloField {
            n,
            pows: (0..n as i64).map(|k| CycloElem::q_pow(n, k)).collect(),
        }
    }

    pub fn order(&self) -> u64 {
        self.n
    }

    pub fn q_pow(&self, e: i64) -> &CycloElem {
        &self.pows[e.rem_euclid(self.n as i64) as usize]
    }
}

impl Field for CycloField {
    type Elem = CycloElem;

    fn zero(&self) -> CycloElem {
        CycloElem::zero(self.n)
    }
    fn is_zero(&self, a: &CycloElem) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &CycloElem, b: &CycloElem) -> CycloElem {
        a.add(b)
    }
    fn mul(&self, a: &CycloElem, b: &CycloElem) -> CycloElem {
        a.mul(b)
    }
    fn neg(&self, a: &CycloElem) -> CycloElem {
        a.neg()
    }
    fn shift(&self, a: &CycloElem, e: i64) -> CycloElem {
        if e.rem_euclid(self.n as i64) == 0 {
            return a.clone();
        }
        a.mul(self.q_pow(e))
    }
    fn from_laurent(&self, p: &LaurentPoly) -> CycloElem {
        CycloElem::from_laurent(self.n, p)
    }
    fn from_rational(&self, p: &RationalQ) -> Result<CycloElem> {
        eval_cyclotomic(p, self.n)
    }
    fn render(&self, a: &CycloElem) -> String {
        a.to_string()
    }
}
