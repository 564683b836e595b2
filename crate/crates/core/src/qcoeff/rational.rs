use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::bigint::BigInt;
use num::{BigRational, Integer, Zero};

use super::laurent::LaurentPoly;
use crate::error::{Error, Result};

/// Element of Q(q) kept in canonical form.
///
/// The denominator has minimal exponent 0 and a positive constant term; the
/// pair is gcd-reduced over Q[q] and the joint integer content is 1. Equal
/// rational functions therefore have identical fields.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalQ {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl RationalQ {
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Argument("zero denominator".into()));
        }
        Ok(Self::normalize(num, den))
    }

    fn normalize(num: LaurentPoly, den: LaurentPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let shift = den.min_exp().unwrap();
        let (mut num, mut den) = (num.shift(-shift), den.shift(-shift));
        if !den.is_monomial() {
            let g = num.gcd(&den);
            if !g.is_one() {
                num = num.div_exact(&g).expect("gcd divides numerator");
                den = den.div_exact(&g).expect("gcd divides denominator");
            }
        }
        let c = num.content().gcd(&den.content());
        if c > 1 {
            num = num.div_scalar(c);
            den = den.div_scalar(c);
        }
        if den.lowest_coeff() < 0 {
            num = -num;
            den = -den;
        }
        RationalQ { num, den }
    }

    pub fn zero() -> Self {
        RationalQ {
            num: LaurentPoly::zero(),
            den: LaurentPoly::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_poly(LaurentPoly::one())
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        RationalQ {
            num: p,
            den: LaurentPoly::one(),
        }
    }

    pub fn from_int(k: i64) -> Self {
        Self::from_poly(LaurentPoly::constant(k))
    }

    /// The rational number a/b.
    pub fn from_ratio(a: i64, b: i64) -> Result<Self> {
        Self::new(LaurentPoly::constant(a), LaurentPoly::constant(b))
    }

    pub fn q_pow(e: i64) -> Self {
        Self::from_poly(LaurentPoly::q_pow(e))
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn den(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// Returns the Laurent polynomial when the denominator is 1.
    pub fn as_laurent(&self) -> Option<&LaurentPoly> {
        self.den.is_one().then_some(&self.num)
    }

    pub fn inv(&self) -> Result<Self> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, k: i32) -> Result<Self> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..k.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    /// Substitution q -> q^-1.
    pub fn bar(&self) -> Self {
        Self::normalize(self.num.bar(), self.den.bar())
    }

    /// Multiplication by q^e.
    pub fn shift(&self, e: i64) -> Self {
        RationalQ {
            num: self.num.shift(e),
            den: self.den.clone(),
        }
    }

    /// Exact value at an integer point; `None` when the denominator vanishes.
    pub fn eval_rational(&self, x: i64) -> Option<BigRational> {
        let d = self.den.eval_rational(x);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval_rational(x) / d)
    }

    pub fn from_big_ratio(r: &BigRational) -> Result<Self> {
        let to_i64 = |b: &BigInt| {
            i64::try_from(b.clone()).map_err(|_| Error::Argument("rational exceeds 64 bits".into()))
        };
        Self::new(
            LaurentPoly::constant(to_i64(r.numer())?),
            LaurentPoly::constant(to_i64(r.denom())?),
        )
    }
}

impl Default for RationalQ {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<LaurentPoly> for RationalQ {
    fn from(p: LaurentPoly) -> Self {
        Self::from_poly(p)
    }
}

impl fmt::Display for RationalQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RationalQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Add for &RationalQ {
    type Output = RationalQ;
    fn add(self, o: &RationalQ) -> RationalQ {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return RationalQ::normalize(&self.num + &o.num, self.den.clone());
        }
        RationalQ::normalize(
            &(&self.num * &o.den) + &(&o.num * &self.den),
            &self.den * &o.den,
        )
    }
}

impl Neg for &RationalQ {
    type Output = RationalQ;
    fn neg(self) -> RationalQ {
        RationalQ {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for RationalQ {
    type Output = RationalQ;
    fn neg(self) -> RationalQ {
        -&self
    }
}

impl Sub for &RationalQ {
    type Output = RationalQ;
    fn sub(self, o: &RationalQ) -> RationalQ {
        self + &(-o)
    }
}

impl Mul for &RationalQ {
    type Output = RationalQ;
    fn mul(self, o: &RationalQ) -> RationalQ {
        if self.is_zero() || o.is_zero() {
            return RationalQ::zero();
        }
        if self.den.is_one() && o.den.is_one() {
            return RationalQ::from_poly(&self.num * &o.num);
        }
        RationalQ::normalize(&self.num * &o.num, &self.den * &o.den)
    }
}

impl Div for &RationalQ {
    type Output = RationalQ;
    /// Panics on division by zero; use [`RationalQ::inv`] for a checked form.
    fn div(self, o: &RationalQ) -> RationalQ {
        assert!(!o.is_zero(), "division by zero rational function");
        RationalQ::normalize(&self.num * &o.den, &self.den * &o.num)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for RationalQ {
            type Output = RationalQ;
            fn $m(self, o: RationalQ) -> RationalQ {
                (&self).$m(&o)
            }
        }
        impl $tr<&RationalQ> for RationalQ {
            type Output = RationalQ;
            fn $m(self, o: &RationalQ) -> RationalQ {
                (&self).$m(o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

/// Unnormalized fraction used for fast accumulation; only the zero test is
/// canonical (a fraction is zero iff its numerator is).
#[derive(Clone, Debug)]
pub struct Frac {
    pub num: LaurentPoly,
    pub den: LaurentPoly,
}

impl Frac {
    pub fn zero() -> Self {
        Frac {
            num: LaurentPoly::zero(),
            den: LaurentPoly::one(),
        }
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        Frac {
            num: p,
            den: LaurentPoly::one(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &Frac) -> Frac {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return Frac {
                num: &self.num + &o.num,
                den: self.den.clone(),
            };
        }
        if o.den.is_monomial() && self.den.is_monomial() {
            // both monomial: rescale to the common q-power
            let (e1, c1) = self.den.terms()[0];
            let (e2, c2) = o.den.terms()[0];
            let l = c1.lcm(&c2);
            let top = e1.max(e2);
            return Frac {
                num: &self.num.shift(top - e1).scale(l / c1) + &o.num.shift(top - e2).scale(l / c2),
                den: LaurentPoly::monomial(l, top),
            };
        }
        Frac {
            num: &(&self.num * &o.den) + &(&o.num * &self.den),
            den: &self.den * &o.den,
        }
    }

    pub fn mul(&self, o: &Frac) -> Frac {
        if self.is_zero() || o.is_zero() {
            return Frac::zero();
        }
        let den = if o.den.is_one() {
            self.den.clone()
        } else if self.den.is_one() {
            o.den.clone()
        } else {
            &self.den * &o.den
        };
        Frac {
            num: &self.num * &o.num,
            den,
        }
    }

    pub fn neg(&self) -> Frac {
        Frac {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn shift(&self, e: i64) -> Frac {
        Frac {
            num: self.num.shift(e),
            den: self.den.clone(),
        }
    }

    pub fn to_rational(&self) -> RationalQ {
        RationalQ::new(self.num.clone(), self.den.clone()).expect("fraction has nonzero denominator")
    }
}

impl From<&RationalQ> for Frac {
    fn from(r: &RationalQ) -> Self {
        Frac {
            num: r.num().clone(),
            den: r.den().clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(t: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(t.iter().cloned())
    }

    #[test]
    fn canonical_form_cancels_common_factor() {
        // (q^2 - q^-2) / (q - q^-1) = q + q^-1
        let r = RationalQ::new(lp(&[(2, 1), (-2, -1)]), lp(&[(1, 1), (-1, -1)])).unwrap();
        assert_eq!(r, RationalQ::from_poly(lp(&[(1, 1), (-1, 1)])));
        assert_eq!(r.to_string(), "q+q^-1");
    }

    #[test]
    fn sign_and_content_conventions() {
        let r = RationalQ::new(lp(&[(0, 2)]), lp(&[(1, -4), (0, -2)])).unwrap();
        assert_eq!(r.den(), &lp(&[(1, 2), (0, 1)]));
        assert_eq!(r.num(), &lp(&[(0, -1)]));
        assert_eq!(r.to_string(), "(-1)/(2q+1)");
    }

    #[test]
    fn frac_zero_test_matches_rational() {
        let a = RationalQ::new(lp(&[(0, 1)]), lp(&[(1, 1), (0, -1)])).unwrap();
        let fa = Frac::from(&a);
        let s = fa.add(&fa.neg());
        assert!(s.is_zero());
        assert_eq!(fa.add(&fa).to_rational(), &a + &a);
    }
}
