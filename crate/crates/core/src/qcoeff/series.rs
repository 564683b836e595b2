use serde::{Deserialize, Serialize};

use super::rational::RationalQ;
use crate::error::{Error, Result};

/// Expansion variable: `Plus` expands in z, `Minus` in z^-1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    Plus,
    Minus,
}

impl Direction {
    pub fn sign(self) -> i64 {
        match self {
            Direction::Plus => 1,
            Direction::Minus => -1,
        }
    }
}

/// Truncated series sum_{s=0}^{order} c_s z^{±s}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    pub direction: Direction,
    pub coeffs: Vec<RationalQ>,
}

impl QSeries {
    pub fn new(direction: Direction, mut coeffs: Vec<RationalQ>, order: usize) -> Self {
        coeffs.resize(order + 1, RationalQ::zero());
        QSeries { direction, coeffs }
    }

    pub fn constant(direction: Direction, c: RationalQ, order: usize) -> Self {
        Self::new(direction, vec![c], order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of z^{±s}; zero beyond the truncation order.
    pub fn coeff(&self, s: usize) -> RationalQ {
        self.coeffs.get(s).cloned().unwrap_or_else(RationalQ::zero)
    }

    pub fn truncate(&self, order: usize) -> QSeries {
        Self::new(self.direction, self.coeffs[..=order.min(self.order())].to_vec(), order)
    }

    pub fn mul(&self, o: &QSeries) -> QSeries {
        let order = self.order().min(o.order());
        let mut out = vec![RationalQ::zero(); order + 1];
        for (a, ca) in self.coeffs.iter().enumerate().take(order + 1) {
            if ca.is_zero() {
                continue;
            }
            for (b, cb) in o.coeffs.iter().enumerate().take(order + 1 - a) {
                out[a + b] = &out[a + b] + &(ca * cb);
            }
        }
        QSeries::new(self.direction, out, order)
    }

    pub fn scale(&self, c: &RationalQ) -> QSeries {
        QSeries {
            direction: self.direction,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }
}

/// Expands num(w)/den(w) as a power series in the expansion variable w
/// (w = z for `Plus`, w = z^-1 for `Minus`). Polynomials are given by their
/// ascending coefficient lists in w.
pub fn series_of_rational(
    num: &[RationalQ],
    den: &[RationalQ],
    direction: Direction,
    order: usize,
) -> Result<QSeries> {
    let d0 = den
        .first()
        .filter(|c| !c.is_zero())
        .ok_or_else(|| Error::Expansion("denominator has no invertible constant term".into()))?;
    let d0inv = d0.inv()?;
    let mut c: Vec<RationalQ> = Vec::with_capacity(order + 1);
    for k in 0..=order {
        let mut acc = num.get(k).cloned().unwrap_or_else(RationalQ::zero);
        for j in 1..=k.min(den.len().saturating_sub(1)) {
            if !den[j].is_zero() {
                acc = &acc - &(&den[j] * &c[k - j]);
            }
        }
        c.push(&acc * &d0inv);
    }
    Ok(QSeries::new(direction, c, order))
}

/// Formal logarithm of a series with constant term 1.
pub fn series_log(s: &QSeries, order: usize) -> Result<QSeries> {
    if !s.coeff(0).is_one() {
        return Err(Error::Argument("logarithm needs constant term 1".into()));
    }
    if order > s.order() {
        return Err(Error::Argument(format!(
            "log order {order} exceeds series order {}",
            s.order()
        )));
    }
    // n f_n = sum_{k=1}^n k g_k f_{n-k} with f = exp(g)
    let mut g = vec![RationalQ::zero(); order + 1];
    for n in 1..=order {
        let mut acc = &s.coeff(n) * &RationalQ::from_int(n as i64);
        for k in 1..n {
            acc = &acc - &(&(&g[k] * &RationalQ::from_int(k as i64)) * &s.coeff(n - k));
        }
        g[n] = &acc * &RationalQ::from_ratio(1, n as i64)?;
    }
    Ok(QSeries::new(s.direction, g, order))
}

/// Formal exponential of a series with constant term 0.
pub fn series_exp(g: &QSeries, order: usize) -> Result<QSeries> {
    if !g.coeff(0).is_zero() {
        return Err(Error::Argument("exponential needs constant term 0".into()));
    }
    let mut f = vec![RationalQ::zero(); order + 1];
    f[0] = RationalQ::one();
    for n in 1..=order {
        let mut acc = RationalQ::zero();
        for k in 1..=n {
            let gk = g.coeff(k);
            if !gk.is_zero() {
                acc = &acc + &(&(&gk * &RationalQ::from_int(k as i64)) * &f[n - k]);
            }
        }
        f[n] = &acc * &RationalQ::from_ratio(1, n as i64)?;
    }
    Ok(QSeries::new(g.direction, f, order))
}
