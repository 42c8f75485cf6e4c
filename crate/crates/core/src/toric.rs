//! Affine toric surfaces `V_{d,e} = A^2/Z_d` (the cyclic group acting with
//! weights `(1, e)`): invariant rings, isomorphism testing, extraction of a
//! hyperbolic divisor pair from a one-parameter grading, and lattice-pair
//! normal forms.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num::{BigInt, BigRational, Integer, One, Signed, Zero};
use thiserror::Error;

use crate::divisor::{pt, CurveKind, DivisorPair, QDivisor};
use crate::dpd::{negative_points, DpdPresentation, NegPointData};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ToricError {
    #[error("invalid (d, e): need d >= 1, 0 <= e < d and gcd(e, d) = 1, got ({0}, {1})")]
    InvalidParameters(u64, u64),
    #[error("invalid V(d,e) syntax: {0:?} (expected e.g. \"V5,2\")")]
    InvalidSyntax(String),
    #[error("weights must satisfy w_x > 0 > w_y, got ({0}, {1})")]
    InvalidWeights(i64, i64),
    #[error("induced grading is not hyperbolic")]
    NotHyperbolic,
    #[error("no invariant monomial found in rescaled degree {0}")]
    EmptyComponent(i64),
    #[error("floor sequence of degree {0} is not linear in the degree")]
    FloorMismatch(i64),
    #[error("lattice vectors are linearly dependent")]
    DependentVectors,
}

/// The parameters of `V_{d,e}`: `d >= 1`, `0 <= e < d`, `gcd(e, d) = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ToricData {
    d: u64,
    e: u64,
}

impl ToricData {
    pub fn new(d: u64, e: u64) -> Result<Self, ToricError> {
        if d == 0 || e >= d || gcd_u64(e, d) != 1 {
            return Err(ToricError::InvalidParameters(d, e));
        }
        Ok(ToricData { d, e })
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn e(&self) -> u64 {
        self.e
    }

    /// CLI syntax `"Vd,e"`, e.g. `"V5,2"`.
    pub fn parse(s: &str) -> Result<Self, ToricError> {
        let body = s
            .strip_prefix('V')
            .or_else(|| s.strip_prefix('v'))
            .ok_or_else(|| ToricError::InvalidSyntax(s.into()))?;
        let (d, e) = body
            .split_once(',')
            .ok_or_else(|| ToricError::InvalidSyntax(s.into()))?;
        let d: u64 = d.trim().parse().map_err(|_| ToricError::InvalidSyntax(s.into()))?;
        let e: u64 = e.trim().parse().map_err(|_| ToricError::InvalidSyntax(s.into()))?;
        ToricData::new(d, e)
    }

    /// `min(e, e^{-1} mod d)`, the canonical member of the isomorphism class.
    pub fn iso_class_representative(&self) -> u64 {
        if self.d == 1 {
            return 0;
        }
        self.e.min(mod_inverse(self.e, self.d))
    }
}

impl fmt::Display for ToricData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "V{},{}", self.d, self.e)
    }
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Inverse of `e` mod `d` for coprime inputs.
fn mod_inverse(e: u64, d: u64) -> u64 {
    let eg = BigInt::from(e).extended_gcd(&BigInt::from(d));
    debug_assert!(eg.gcd.is_one());
    let inv = eg.x.mod_floor(&BigInt::from(d));
    u64::try_from(&inv).expect("reduced residue fits")
}

/// `V_{d,e} ~ V_{d',e'}` iff `d = d'` and `e = e'` or `e e' = 1 mod d`.
pub fn vde_isomorphic(a: &ToricData, b: &ToricData) -> bool {
    // u128 keeps the product exact for any admissible d
    a.d == b.d && (a.e == b.e || (a.e as u128 * b.e as u128) % a.d as u128 == 1 % a.d as u128)
}

/// Minimal generating set (Hilbert basis) of the invariant-monomial semigroup
/// `{(a, b) : a + e*b = 0 mod d}`, by bounded enumeration: every generator
/// has both exponents at most `d`. Sorted by descending x-exponent.
pub fn invariant_basis(t: &ToricData) -> Vec<(u64, u64)> {
    let d = t.d;
    let e = t.e;
    let mut members = Vec::new();
    for a in 0..=d {
        for b in 0..=d {
            if (a, b) != (0, 0) && (a as u128 + e as u128 * b as u128).is_multiple_of(d as u128) {
                members.push((a, b));
            }
        }
    }
    let mut basis: Vec<(u64, u64)> = members
        .iter()
        .filter(|&&(a, b)| {
            !members
                .iter()
                .any(|&(a2, b2)| (a2, b2) != (a, b) && a2 <= a && b2 <= b)
        })
        .copied()
        .collect();
    basis.sort_by_key(|&(a, _)| std::cmp::Reverse(a));
    basis
}

/// A pair of primitive lattice vectors `(e_+, d_+)`, `(e_-, d_-)` with
/// `d_+ > 0 > d_-`, encoding the two rays of a hyperbolic pair supported at
/// one point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticePair {
    pub vplus: (BigInt, BigInt),
    pub vminus: (BigInt, BigInt),
}

impl LatticePair {
    pub fn new(vplus: (BigInt, BigInt), vminus: (BigInt, BigInt)) -> Result<Self, ToricError> {
        let ok = vplus.1.is_positive()
            && vminus.1.is_negative()
            && vplus.0.gcd(&vplus.1).is_one()
            && vminus.0.gcd(&vminus.1).is_one();
        if !ok {
            return Err(ToricError::DependentVectors);
        }
        Ok(LatticePair { vplus, vminus })
    }

    /// The lattice data of the swapped divisor pair `(D_-, D_+)`.
    pub fn swapped(&self) -> LatticePair {
        LatticePair {
            vplus: (self.vminus.0.clone(), -self.vminus.1.clone()),
            vminus: (self.vplus.0.clone(), -self.vplus.1.clone()),
        }
    }

    /// Read the ray data off a negative point: `v_+ = (e_+, m_+)`,
    /// `v_- = (e_-, m_-)`.
    pub fn from_neg_point(n: &NegPointData) -> Result<Self, ToricError> {
        LatticePair::new(
            (n.e_plus.clone(), n.m_plus.clone()),
            (n.e_minus.clone(), n.m_minus.clone()),
        )
    }
}

/// GL_2(Z) normal form of the ordered ray pair: map `v_+` to `(0,1)` by a
/// unimodular matrix; the image `(a, b)` of `v_-` is reduced by the
/// stabilizer to `(|a|, b mod |a|)`. The swapped pair is normalized too and
/// the lexicographically smaller `(d, c)` wins.
pub fn lattice_invariant(l: &LatticePair) -> Result<(BigInt, BigInt), ToricError> {
    let first = half_invariant(l)?;
    let second = half_invariant(&l.swapped())?;
    Ok(first.min(second))
}

fn half_invariant(l: &LatticePair) -> Result<(BigInt, BigInt), ToricError> {
    let (ep, dp) = &l.vplus;
    let (em, dm) = &l.vminus;
    // U = [[d_+, -e_+], [s, t]] with s e_+ + t d_+ = 1 sends v_+ to (0, 1)
    let eg = ep.extended_gcd(dp);
    debug_assert!(eg.gcd.is_one());
    let (s, t) = (eg.x, eg.y);
    let a = dp * em - ep * dm;
    let b = &s * em + &t * dm;
    if a.is_zero() {
        return Err(ToricError::DependentVectors);
    }
    let d = a.abs();
    let c = b.mod_floor(&d);
    Ok((d, c))
}

/// Extract the hyperbolic DPD pair of `V_{d,e}` graded by monomial weights
/// `(w_x, w_y)` with `w_x > 0 > w_y`.
///
/// The grading is made effective by dividing out the gcd `g` of all occurring
/// degrees. `A_0 = C[t]` where `t` is the minimal invariant monomial of
/// degree zero, `u` generates the rescaled degree-one piece, and the floor
/// sequence `floor(i * D_+(0))` is read off the `t`-adic gap between `u^i`
/// and the degree-`i` corner monomial. Since `floor(i*q)/i <= q` with
/// equality whenever `i` is a multiple of the denominator, and the
/// denominators are bounded by `d * max|w|`, the exact rationals `D_+(0)`,
/// `D_-(0)` are the maxima of those ratios, verified against every computed
/// floor up to the cap.
pub fn extract_dpd(
    t: &ToricData,
    w_x: i64,
    w_y: i64,
    degree_cap: u32,
) -> Result<DpdPresentation, ToricError> {
    if w_x <= 0 || w_y >= 0 {
        return Err(ToricError::InvalidWeights(w_x, w_y));
    }
    let d = t.d as i64;
    let e = t.e as i64;

    // effectivity rescaling from the Hilbert basis degrees
    let basis = invariant_basis(t);
    let degree = |a: i64, b: i64| a * w_x + b * w_y;
    let mut g: i64 = 0;
    let (mut any_pos, mut any_neg) = (false, false);
    for &(a, b) in &basis {
        let deg = degree(a as i64, b as i64);
        g = g.gcd(&deg);
        any_pos |= deg > 0;
        any_neg |= deg < 0;
    }
    if !(any_pos && any_neg) {
        return Err(ToricError::NotHyperbolic);
    }
    debug_assert!(g > 0);

    // t = minimal invariant monomial of degree 0
    let g2 = w_x.gcd(&w_y);
    let (p, q) = (-w_y / g2, w_x / g2);
    let k0 = d / d.gcd(&(p + e * q));
    let t_exp = (k0 * p, k0 * q);

    let cap = (2 * d * w_x.abs().max(w_y.abs()))
        .max(degree_cap as i64)
        .max(8);
    let corner = |i: i64| -> Result<(i64, i64), ToricError> {
        let target = i * g;
        let a_start = std::cmp::max(0, Integer::div_ceil(&target, &w_x));
        for a in a_start..=a_start + t_exp.0 {
            let rem = target - a * w_x;
            if rem % w_y != 0 {
                continue;
            }
            let b = rem / w_y;
            if b < 0 {
                continue;
            }
            if (a + e * b) % d == 0 {
                return Ok((a, b));
            }
        }
        Err(ToricError::EmptyComponent(i))
    };

    let u_exp = corner(1)?;
    let mut floor_plus = vec![0i64; (cap + 1) as usize];
    let mut floor_minus = vec![0i64; (cap + 1) as usize];
    for i in 1..=cap {
        let mu = corner(i)?;
        let da = i * u_exp.0 - mu.0;
        let db = i * u_exp.1 - mu.1;
        if da % t_exp.0 != 0 || da / t_exp.0 * t_exp.1 != db || da < 0 {
            return Err(ToricError::FloorMismatch(i));
        }
        floor_plus[i as usize] = da / t_exp.0;

        let mu = corner(-i)?;
        let ma = mu.0 + i * u_exp.0;
        let mb = mu.1 + i * u_exp.1;
        if ma % t_exp.0 != 0 || ma / t_exp.0 * t_exp.1 != mb || ma < 0 {
            return Err(ToricError::FloorMismatch(-i));
        }
        floor_minus[i as usize] = -(ma / t_exp.0);
    }

    // floor(i*q)/i <= q, with equality at denominator multiples
    let ratio_max = |floors: &[i64]| {
        (1..=cap)
            .map(|i| BigRational::new(BigInt::from(floors[i as usize]), BigInt::from(i)))
            .max()
            .expect("cap >= 1")
    };
    let q_plus = ratio_max(&floor_plus);
    let q_minus = ratio_max(&floor_minus);
    for i in 1..=cap {
        let iq = BigRational::from_integer(BigInt::from(i));
        if (&iq * &q_plus).floor().to_integer() != BigInt::from(floor_plus[i as usize]) {
            return Err(ToricError::FloorMismatch(i));
        }
        if (&iq * &q_minus).floor().to_integer() != BigInt::from(floor_minus[i as usize]) {
            return Err(ToricError::FloorMismatch(-i));
        }
    }

    let origin = || pt(BigRational::zero());
    let dplus = QDivisor::single(CurveKind::AffineLine, origin(), q_plus).expect("origin on A^1");
    let dminus = QDivisor::single(CurveKind::AffineLine, origin(), q_minus).expect("origin on A^1");
    let pair = DivisorPair::new(dplus, dminus).map_err(|_| ToricError::NotHyperbolic)?;
    Ok(DpdPresentation::hyperbolic(pair))
}

/// Lazily computed table `c -> class representative` per `d`: run the
/// extraction over every admissible `e` once and record which lattice class
/// each one lands in. Computed once, then read-only.
fn calibration_table(d: u64) -> BTreeMap<BigInt, u64> {
    static TABLES: OnceLock<Mutex<BTreeMap<u64, BTreeMap<BigInt, u64>>>> = OnceLock::new();
    let tables = TABLES.get_or_init(|| Mutex::new(BTreeMap::new()));
    let mut guard = tables.lock().expect("calibration lock");
    if let Some(t) = guard.get(&d) {
        return t.clone();
    }
    let mut table = BTreeMap::new();
    let es: Vec<u64> = if d == 1 {
        vec![0]
    } else {
        (1..d).filter(|e| gcd_u64(*e, d) == 1).collect()
    };
    for e in es {
        let t = ToricData::new(d, e).expect("admissible parameters");
        let pres = extract_dpd(&t, 1, -1, 0).expect("extraction of a model surface");
        let data = negative_points(&pres).expect("hyperbolic over A^1");
        let lp = LatticePair::from_neg_point(&data[0]).expect("primitive ray data");
        let (dd, c) = lattice_invariant(&lp).expect("independent rays");
        assert_eq!(dd, BigInt::from(d), "lattice determinant must reproduce d");
        let rep = t.iso_class_representative();
        if let Some(prev) = table.insert(c.clone(), rep) {
            assert_eq!(
                prev, rep,
                "calibration collision at d = {d}: classes {prev} and {rep} share c = {c}"
            );
        }
    }
    guard.insert(d, table.clone());
    table
}

/// Recognize a hyperbolic presentation over the affine line as a `V_{d,e}`:
/// the sum `D_+ + D_-` must be negative at exactly one point and both
/// fractional parts must be concentrated there (no multiple fibers). The
/// class `(d, e)` is read off the lattice normal form through the
/// calibration table; `e` is reported as the class representative min(e, e^-1 mod d).
pub fn recognize_toric(p: &DpdPresentation) -> Option<ToricData> {
    let pair = p.pair()?;
    if pair.curve() != CurveKind::AffineLine {
        return None;
    }
    let sum = pair.sum();
    let neg: Vec<_> = sum.entries().filter(|(_, c)| c.is_negative()).collect();
    if neg.len() != 1 {
        return None;
    }
    let point = neg[0].0.clone();
    let concentrated = |d: &QDivisor| d.fractional_part().support().all(|q| *q == point);
    if !concentrated(pair.dplus()) || !concentrated(pair.dminus()) {
        return None;
    }
    let data = negative_points(p).ok()?;
    let lp = LatticePair::from_neg_point(&data[0]).ok()?;
    let (d, c) = lattice_invariant(&lp).ok()?;
    let d = u64::try_from(&d).ok()?;
    let e = *calibration_table(d).get(&c)?;
    ToricData::new(d, e).ok()
}
