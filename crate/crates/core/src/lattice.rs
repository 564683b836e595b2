//! Affine weight lattice of type A_n^(1): Cartan data, weights in
//! (h-values, delta-coefficient) coordinates, simple reflections.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num::rational::Rational64;
use num::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Cyclic Dynkin diagram with nodes I = Z/(n+1), n = 2r+1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RootSystem {
    n: usize,
}

impl RootSystem {
    pub fn new(n: usize) -> Result<Self> {
        if n < 3 || n % 2 == 0 {
            return Err(Error::EvenRank(n));
        }
        Ok(RootSystem { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        (self.n - 1) / 2
    }

    /// Number of nodes, n+1.
    pub fn size(&self) -> usize {
        self.n + 1
    }

    pub fn nodes(&self) -> std::ops::Range<usize> {
        0..self.n + 1
    }

    /// Reduces an integer node label modulo n+1.
    pub fn node(&self, i: i64) -> usize {
        i.rem_euclid(self.size() as i64) as usize
    }

    pub fn cartan(&self, i: usize, j: usize) -> i64 {
        if i == j {
            2
        } else if self.node(i as i64 + 1) == j || self.node(i as i64 - 1) == j {
            -1
        } else {
            0
        }
    }

    pub fn adjacent(&self, i: usize) -> [usize; 2] {
        [self.node(i as i64 - 1), self.node(i as i64 + 1)]
    }

    /// The parity function s: I -> {0,1} of the monomial class in which i+l
    /// has parity `class` (spectral indices l on row i satisfy l = s_i mod 2).
    pub fn parity_of(&self, class: u8, i: usize) -> u8 {
        ((class as usize + i) % 2) as u8
    }

    /// Graph distance between the nodes 0 and l.
    pub fn d_ell(&self, l: usize) -> usize {
        l.min(self.size() - l)
    }

    pub fn check_node(&self, i: usize) -> Result<()> {
        if i > self.n {
            return Err(Error::Argument(format!("node {i} outside 0..={}", self.n)));
        }
        Ok(())
    }

    pub fn check_ell(&self, l: usize) -> Result<()> {
        if l == 0 || l > self.n {
            return Err(Error::Argument(format!("ell = {l} outside 1..={}", self.n)));
        }
        Ok(())
    }
}

/// lambda = sum_i h[i] Lambda_i + delta * delta.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight {
    pub h: Vec<i64>,
    pub delta: Rational64,
}

impl Weight {
    pub fn zero(rs: &RootSystem) -> Self {
        Weight {
            h: vec![0; rs.size()],
            delta: Rational64::zero(),
        }
    }

    pub fn from_h(h: Vec<i64>) -> Self {
        Weight {
            h,
            delta: Rational64::zero(),
        }
    }

    pub fn delta(rs: &RootSystem) -> Self {
        Weight {
            h: vec![0; rs.size()],
            delta: Rational64::one(),
        }
    }

    /// Multiple c*delta.
    pub fn delta_multiple(rs: &RootSystem, c: Rational64) -> Self {
        Weight {
            h: vec![0; rs.size()],
            delta: c,
        }
    }

    /// lambda(h_i).
    pub fn pair(&self, i: usize) -> i64 {
        self.h[i]
    }

    /// Pairing with the canonical central element c = h_0 + ... + h_n.
    pub fn level(&self) -> i64 {
        self.h.iter().sum()
    }

    pub fn scale(&self, k: i64) -> Self {
        Weight {
            h: self.h.iter().map(|x| x * k).collect(),
            delta: self.delta * k,
        }
    }

    pub fn is_delta_multiple(&self) -> bool {
        self.h.iter().all(|&x| x == 0)
    }

    pub fn with_delta(&self, delta: Rational64) -> Self {
        Weight {
            h: self.h.clone(),
            delta,
        }
    }
}

/// alpha_i: alpha_i(h_j) = C_{j,i}, delta-coefficient 1 for i = 0.
pub fn root_coords(rs: &RootSystem, i: usize) -> Weight {
    Weight {
        h: rs.nodes().map(|j| rs.cartan(j, i)).collect(),
        delta: if i == 0 { Rational64::one() } else { Rational64::zero() },
    }
}

/// Fundamental weight Lambda_i.
pub fn fundamental(rs: &RootSystem, i: usize) -> Weight {
    let mut h = vec![0; rs.size()];
    h[i] = 1;
    Weight::from_h(h)
}

/// Level-zero fundamental weight varpi_l = Lambda_l - Lambda_0.
pub fn varpi(rs: &RootSystem, l: usize) -> Weight {
    &fundamental(rs, l) - &fundamental(rs, 0)
}

/// s_i(lambda) = lambda - lambda(h_i) alpha_i.
pub fn reflect(rs: &RootSystem, lambda: &Weight, i: usize) -> Weight {
    lambda - &root_coords(rs, i).scale(lambda.pair(i))
}

impl Add for &Weight {
    type Output = Weight;
    fn add(self, o: &Weight) -> Weight {
        Weight {
            h: self.h.iter().zip(&o.h).map(|(a, b)| a + b).collect(),
            delta: self.delta + o.delta,
        }
    }
}

impl Sub for &Weight {
    type Output = Weight;
    fn sub(self, o: &Weight) -> Weight {
        Weight {
            h: self.h.iter().zip(&o.h).map(|(a, b)| a - b).collect(),
            delta: self.delta - o.delta,
        }
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        self.scale(-1)
    }
}

pub(crate) fn fmt_rational(r: &Rational64) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub(crate) fn parse_rational(s: &str) -> Result<Rational64> {
    let bad = || Error::Validation(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((a, b)) => {
            let (a, b): (i64, i64) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
            if b == 0 {
                return Err(bad());
            }
            Ok(Rational64::new(a, b))
        }
        None => Ok(Rational64::from_integer(s.trim().parse().map_err(|_| bad())?)),
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let h: Vec<String> = self.h.iter().map(|x| x.to_string()).collect();
        write!(f, "({}; {})", h.join(","), fmt_rational(&self.delta))
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Serialize, Deserialize)]
struct WeightRepr {
    h: Vec<i64>,
    delta: String,
}

impl Serialize for Weight {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        WeightRepr {
            h: self.h.clone(),
            delta: fmt_rational(&self.delta),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Weight {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = WeightRepr::deserialize(d)?;
        let delta = parse_rational(&r.delta).map_err(serde::de::Error::custom)?;
        Ok(Weight { h: r.h, delta })
    }
}
