//! Rational functions of one variable kept in factored form
//! `c * (t - r_1)^{m_1} * ... * (t - r_k)^{m_k}` with rational roots.
//!
//! This is the shape every section generator and every linear-equivalence
//! witness takes; keeping the factorization explicit makes divisors and
//! divisibility exact one-liners.

use std::collections::BTreeMap;
use std::fmt;

use num::{BigRational, One, Signed, Zero};

use super::{rational_pow, rational_string};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FactoredRational {
    scalar: BigRational,
    // root -> multiplicity, no zero multiplicities stored
    factors: BTreeMap<BigRational, i64>,
}

impl FactoredRational {
    pub fn one() -> Self {
        FactoredRational {
            scalar: BigRational::one(),
            factors: BTreeMap::new(),
        }
    }

    /// A nonzero constant. Panics on zero.
    pub fn constant(c: BigRational) -> Self {
        assert!(!c.is_zero(), "factored rational must be nonzero");
        FactoredRational {
            scalar: c,
            factors: BTreeMap::new(),
        }
    }

    /// The monic linear factor `t - root`.
    pub fn linear(root: BigRational) -> Self {
        Self::from_factors(BigRational::one(), vec![(root, 1)])
    }

    pub fn from_factors(scalar: BigRational, factors: Vec<(BigRational, i64)>) -> Self {
        assert!(!scalar.is_zero(), "factored rational must be nonzero");
        let mut map: BTreeMap<BigRational, i64> = BTreeMap::new();
        for (root, mult) in factors {
            *map.entry(root).or_insert(0) += mult;
        }
        map.retain(|_, m| *m != 0);
        FactoredRational {
            scalar,
            factors: map,
        }
    }

    pub fn scalar(&self) -> &BigRational {
        &self.scalar
    }

    pub fn factors(&self) -> impl Iterator<Item = (&BigRational, i64)> {
        self.factors.iter().map(|(r, m)| (r, *m))
    }

    pub fn multiplicity(&self, root: &BigRational) -> i64 {
        self.factors.get(root).copied().unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.scalar.is_one() && self.factors.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn mul(&self, other: &FactoredRational) -> FactoredRational {
        let mut out = self.clone();
        out.scalar *= &other.scalar;
        for (root, mult) in &other.factors {
            let e = out.factors.entry(root.clone()).or_insert(0);
            *e += mult;
            if *e == 0 {
                out.factors.remove(root);
            }
        }
        out
    }

    pub fn inv(&self) -> FactoredRational {
        FactoredRational {
            scalar: self.scalar.recip(),
            factors: self.factors.iter().map(|(r, m)| (r.clone(), -m)).collect(),
        }
    }

    pub fn div(&self, other: &FactoredRational) -> FactoredRational {
        self.mul(&other.inv())
    }

    pub fn pow(&self, k: i64) -> FactoredRational {
        FactoredRational {
            scalar: rational_pow(&self.scalar, k),
            factors: self
                .factors
                .iter()
                .filter(|(_, m)| **m * k != 0)
                .map(|(r, m)| (r.clone(), m * k))
                .collect(),
        }
    }

    /// Does `other / self` lie in `Q[t]`? True iff no root of the quotient
    /// has negative multiplicity.
    pub fn divides(&self, other: &FactoredRational) -> bool {
        let mut roots: Vec<&BigRational> = self.factors.keys().collect();
        roots.extend(other.factors.keys());
        roots
            .into_iter()
            .all(|r| other.multiplicity(r) - self.multiplicity(r) >= 0)
    }

    /// Substitute `t -> a*t + b` (an affine reparametrization, `a != 0`);
    /// the result is again factored with roots `(r - b)/a`.
    pub fn compose_affine(&self, a: &BigRational, b: &BigRational) -> FactoredRational {
        assert!(!a.is_zero(), "affine map must be invertible");
        let mut scalar = self.scalar.clone();
        let mut factors = BTreeMap::new();
        for (root, &mult) in &self.factors {
            scalar *= rational_pow(a, mult);
            factors.insert((root - b) / a, mult);
        }
        FactoredRational { scalar, factors }
    }

    /// Evaluate at a rational point; `None` at a pole.
    pub fn eval(&self, at: &BigRational) -> Option<BigRational> {
        let mut out = self.scalar.clone();
        for (root, &mult) in &self.factors {
            let base = at - root;
            if base.is_zero() {
                if mult < 0 {
                    return None;
                }
                return Some(BigRational::zero());
            }
            out *= rational_pow(&base, mult);
        }
        Some(out)
    }

    /// Sum of all multiplicities (the degree as a rational function of t).
    pub fn total_degree(&self) -> i64 {
        self.factors.values().sum()
    }
}

impl fmt::Display for FactoredRational {
    /// `2*(t-1)^2*(t+1)^-1`, with `t` itself for the root 0.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut pieces: Vec<String> = Vec::new();
        if !self.scalar.is_one() || self.factors.is_empty() {
            pieces.push(rational_string(&self.scalar));
        }
        for (root, &mult) in &self.factors {
            let base = if root.is_zero() {
                "t".to_string()
            } else if root.is_negative() {
                format!("(t+{})", rational_string(&-root.clone()))
            } else {
                format!("(t-{})", rational_string(root))
            };
            if mult == 1 {
                pieces.push(base);
            } else {
                pieces.push(format!("{base}^{mult}"));
            }
        }
        write!(f, "{}", pieces.join("*"))
    }
}

impl fmt::Debug for FactoredRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{rat, rat_int};

    #[test]
    fn multiply_and_cancel() {
        let f = FactoredRational::linear(rat_int(1));
        let g = f.inv();
        assert!(f.mul(&g).is_one());
        let h = FactoredRational::from_factors(rat_int(2), vec![(rat_int(1), 1), (rat_int(-1), 1)]);
        assert_eq!(h.multiplicity(&rat_int(1)), 1);
        assert_eq!(h.mul(&f).multiplicity(&rat_int(1)), 2);
    }

    #[test]
    fn divisibility() {
        // (t-1)^2 / (t-1) is a polynomial, the reverse is not.
        let f = FactoredRational::linear(rat_int(1));
        let f2 = f.pow(2);
        assert!(f.divides(&f2));
        assert!(!f2.divides(&f));
        // constants divide everything
        assert!(FactoredRational::constant(rat(3, 2)).divides(&f));
    }

    #[test]
    fn affine_composition() {
        // f(t) = t - 1, t -> 2t + 3: f = 2t + 2 = 2*(t - (-1))
        let f = FactoredRational::linear(rat_int(1));
        let g = f.compose_affine(&rat_int(2), &rat_int(3));
        assert_eq!(g.scalar(), &rat_int(2));
        assert_eq!(g.multiplicity(&rat_int(-1)), 1);
        assert_eq!(g.eval(&rat_int(0)), Some(rat_int(2)));
    }

    #[test]
    fn eval_at_pole() {
        let f = FactoredRational::linear(rat_int(0)).inv();
        assert_eq!(f.eval(&rat_int(0)), None);
        assert_eq!(f.eval(&rat_int(2)), Some(rat(1, 2)));
    }

    #[test]
    fn display_form() {
        let f = FactoredRational::from_factors(
            rat_int(2),
            vec![(rat_int(1), 2), (rat_int(0), -1), (rat_int(-1), 1)],
        );
        assert_eq!(f.to_string(), "2*(t+1)*t^-1*(t-1)^2");
    }
}
