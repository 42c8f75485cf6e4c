//! Sparse bivariate polynomials over Q, in either `Q[x,y]` or the Laurent
//! ring `Q[t,u,u^-1]` (second variable invertible, first one not).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{BigRational, One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::rational_string;

/// Which coordinate ring a polynomial lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RingKind {
    /// `Q[x,y]`: both exponents nonnegative.
    Xy,
    /// `Q[t,u,u^-1]`: the `u` exponent may be negative, the `t` exponent not.
    Laurent,
}

impl RingKind {
    /// Generator names, in (first, second) order.
    pub fn vars(self) -> (&'static str, &'static str) {
        match self {
            RingKind::Xy => ("x", "y"),
            RingKind::Laurent => ("t", "u"),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SubstitutionError {
    #[error("negative power of a non-unit: image of the invertible variable must be c*u^k")]
    NonUnitImage,
    #[error("substitution would leave the ring: negative exponent produced for {0}")]
    NegativeExponent(&'static str),
}

/// Exponent pair: first variable (x or t, always >= 0), second (y or u).
pub type Exps = (u32, i64);

/// A polynomial, stored as a map from exponent pairs to nonzero coefficients.
/// `BTreeMap` keeps the term order deterministic.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly2 {
    ring: RingKind,
    terms: BTreeMap<Exps, BigRational>,
}

impl Poly2 {
    pub fn zero(ring: RingKind) -> Self {
        Poly2 {
            ring,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: RingKind, c: BigRational) -> Self {
        let mut p = Poly2::zero(ring);
        p.add_term((0, 0), c);
        p
    }

    pub fn one(ring: RingKind) -> Self {
        Poly2::constant(ring, BigRational::one())
    }

    /// Single monomial `c * v1^a * v2^b`. Panics if `b < 0` in the `Xy` ring;
    /// use [`Poly2::try_monomial`] for fallible construction.
    pub fn monomial(ring: RingKind, a: u32, b: i64, c: BigRational) -> Self {
        Poly2::try_monomial(ring, a, b, c).expect("negative exponent in polynomial ring")
    }

    pub fn try_monomial(ring: RingKind, a: u32, b: i64, c: BigRational) -> Option<Self> {
        if ring == RingKind::Xy && b < 0 {
            return None;
        }
        let mut p = Poly2::zero(ring);
        p.add_term((a, b), c);
        Some(p)
    }

    /// First generator (x or t).
    pub fn gen1(ring: RingKind) -> Self {
        Poly2::monomial(ring, 1, 0, BigRational::one())
    }

    /// Second generator (y or u).
    pub fn gen2(ring: RingKind) -> Self {
        Poly2::monomial(ring, 0, 1, BigRational::one())
    }

    pub fn ring(&self) -> RingKind {
        self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exps, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: Exps) -> BigRational {
        self.terms.get(&e).cloned().unwrap_or_else(BigRational::zero)
    }

    fn add_term(&mut self, e: Exps, c: BigRational) {
        if c.is_zero() {
            return;
        }
        debug_assert!(self.ring == RingKind::Laurent || e.1 >= 0);
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    fn assert_same_ring(&self, other: &Poly2) {
        assert_eq!(self.ring, other.ring, "polynomial ring mismatch");
    }

    pub fn scale(&self, c: &BigRational) -> Poly2 {
        if c.is_zero() {
            return Poly2::zero(self.ring);
        }
        let mut out = Poly2::zero(self.ring);
        for (e, q) in &self.terms {
            out.terms.insert(*e, q * c);
        }
        out
    }

    pub fn pow(&self, k: u32) -> Poly2 {
        let mut acc = Poly2::one(self.ring);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// The single term `(exponents, coefficient)` if this is a monomial.
    pub fn as_monomial(&self) -> Option<(Exps, BigRational)> {
        if self.terms.len() == 1 {
            let (e, c) = self.terms.iter().next().unwrap();
            Some((*e, c.clone()))
        } else {
            None
        }
    }

    /// Partial derivative with respect to the first generator.
    pub fn d1(&self) -> Poly2 {
        let mut out = Poly2::zero(self.ring);
        for (&(a, b), c) in &self.terms {
            if a > 0 {
                out.add_term((a - 1, b), c * BigRational::from_integer(a.into()));
            }
        }
        out
    }

    /// Partial derivative with respect to the second generator. In the
    /// Laurent ring this is the usual rule for all integer exponents.
    pub fn d2(&self) -> Poly2 {
        let mut out = Poly2::zero(self.ring);
        for (&(a, b), c) in &self.terms {
            if b != 0 {
                out.add_term((a, b - 1), c * BigRational::from_integer(b.into()));
            }
        }
        out
    }

    /// Weighted degree of a monomial under generator weights `(w1, w2)`.
    pub fn monomial_weight(e: Exps, w: (i64, i64)) -> i64 {
        e.0 as i64 * w.0 + e.1 * w.1
    }

    /// Split into weight-homogeneous parts; keys are the weighted degrees.
    pub fn weight_components(&self, w: (i64, i64)) -> BTreeMap<i64, Poly2> {
        let mut out: BTreeMap<i64, Poly2> = BTreeMap::new();
        for (&e, c) in &self.terms {
            let d = Poly2::monomial_weight(e, w);
            out.entry(d)
                .or_insert_with(|| Poly2::zero(self.ring))
                .add_term(e, c.clone());
        }
        out
    }

    /// Substitute generator images: `v1 -> g1`, `v2 -> g2`. Negative powers of
    /// the second variable require `g2` to be a unit monomial `c*u^k`.
    pub fn substitute(&self, g1: &Poly2, g2: &Poly2) -> Result<Poly2, SubstitutionError> {
        g1.assert_same_ring(g2);
        let ring = g1.ring;
        // Negative u-exponents need the inverse of g2.
        let needs_inverse = self.terms.keys().any(|&(_, b)| b < 0);
        let g2_inv = if needs_inverse {
            let ((a, b), c) = g2.as_monomial().ok_or(SubstitutionError::NonUnitImage)?;
            if a != 0 || c.is_zero() || ring == RingKind::Xy {
                return Err(SubstitutionError::NonUnitImage);
            }
            Some(Poly2::monomial(ring, 0, -b, c.recip()))
        } else {
            None
        };
        let mut out = Poly2::zero(ring);
        for (&(a, b), c) in &self.terms {
            let mut term = g1.pow(a);
            if b >= 0 {
                term = &term * &g2.pow(b as u32);
            } else {
                term = &term * &g2_inv.as_ref().unwrap().pow((-b) as u32);
            }
            out = &out + &term.scale(c);
        }
        Ok(out)
    }

    /// Total-degree bound in the first variable (max exponent).
    pub fn max_exp1(&self) -> u32 {
        self.terms.keys().map(|e| e.0).max().unwrap_or(0)
    }
}

impl Add for &Poly2 {
    type Output = Poly2;
    fn add(self, rhs: &Poly2) -> Poly2 {
        self.assert_same_ring(rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &Poly2 {
    type Output = Poly2;
    fn sub(self, rhs: &Poly2) -> Poly2 {
        self.assert_same_ring(rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl Neg for &Poly2 {
    type Output = Poly2;
    fn neg(self) -> Poly2 {
        let mut out = Poly2::zero(self.ring);
        for (e, c) in &self.terms {
            out.terms.insert(*e, -c.clone());
        }
        out
    }
}

impl Mul for &Poly2 {
    type Output = Poly2;
    fn mul(self, rhs: &Poly2) -> Poly2 {
        self.assert_same_ring(rhs);
        let mut out = Poly2::zero(self.ring);
        for (&(a1, b1), c1) in &self.terms {
            for (&(a2, b2), c2) in &rhs.terms {
                out.add_term((a1 + a2, b1 + b2), c1 * c2);
            }
        }
        out
    }
}

impl fmt::Display for Poly2 {
    /// Terms in ascending `(exp1, exp2)` order, e.g. `-y + 3x^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let (v1, v2) = self.ring.vars();
        for (i, (&(a, b), c)) in self.terms.iter().enumerate() {
            let mono = {
                let mut s = String::new();
                if a == 1 {
                    s.push_str(v1);
                } else if a > 1 {
                    s.push_str(&format!("{v1}^{a}"));
                }
                if b == 1 {
                    s.push_str(v2);
                } else if b != 0 {
                    s.push_str(&format!("{v2}^{b}"));
                }
                s
            };
            let abs = c.abs();
            let coeff = if mono.is_empty() || !abs.is_one() {
                rational_string(&abs)
            } else {
                String::new()
            };
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            write!(f, "{coeff}{mono}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Poly2 {
    // Debug = Display for readable assertion failures.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
