//! Q-divisors with exact rational coefficients on the marked curves in play
//! (the affine line, the projective line, the punctured line), floor and
//! fractional-part decomposition, and linear-equivalence moves on divisor
//! pairs.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num::{BigInt, BigRational, One, Signed, Zero};
use thiserror::Error;

use crate::exactmath::{rational_string, FactoredRational};

/// The base curve of a presentation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CurveKind {
    /// `A^1 = Spec C[t]`
    AffineLine,
    /// `P^1 = Proj`, for the elliptic case
    ProjectiveLine,
    /// `C^* = Spec C[t, t^-1]`
    PuncturedLine,
}

impl CurveKind {
    pub fn name(self) -> &'static str {
        match self {
            CurveKind::AffineLine => "affine_line",
            CurveKind::ProjectiveLine => "projective_line",
            CurveKind::PuncturedLine => "punctured_line",
        }
    }
}

/// A closed point of the curve: a rational number, or infinity on `P^1`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CurvePoint {
    Finite(BigRational),
    Infinity,
}

impl CurvePoint {
    pub fn finite(&self) -> Option<&BigRational> {
        match self {
            CurvePoint::Finite(q) => Some(q),
            CurvePoint::Infinity => None,
        }
    }

    fn on_curve(&self, curve: CurveKind) -> bool {
        match (self, curve) {
            (CurvePoint::Infinity, CurveKind::ProjectiveLine) => true,
            (CurvePoint::Infinity, _) => false,
            (CurvePoint::Finite(q), CurveKind::PuncturedLine) => !q.is_zero(),
            (CurvePoint::Finite(_), _) => true,
        }
    }
}

impl fmt::Display for CurvePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurvePoint::Finite(q) => write!(f, "{}", rational_string(q)),
            CurvePoint::Infinity => write!(f, "inf"),
        }
    }
}

pub fn pt(q: BigRational) -> CurvePoint {
    CurvePoint::Finite(q)
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DivisorError {
    #[error("point {0} does not lie on the {1} curve")]
    PointOffCurve(String, &'static str),
    #[error("divisors live on different curves")]
    CurveMismatch,
    #[error("D_+ + D_- must be <= 0 everywhere; it is positive at {0}")]
    PositiveSum(String),
}

/// Finite formal sum of curve points with exact rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QDivisor {
    curve: CurveKind,
    entries: BTreeMap<CurvePoint, BigRational>,
}

impl QDivisor {
    pub fn zero(curve: CurveKind) -> Self {
        QDivisor {
            curve,
            entries: BTreeMap::new(),
        }
    }

    pub fn new(
        curve: CurveKind,
        entries: Vec<(CurvePoint, BigRational)>,
    ) -> Result<Self, DivisorError> {
        let mut d = QDivisor::zero(curve);
        for (p, c) in entries {
            if !p.on_curve(curve) {
                return Err(DivisorError::PointOffCurve(p.to_string(), curve.name()));
            }
            d.add_entry(p, c);
        }
        Ok(d)
    }

    /// Single entry `c*[p]`.
    pub fn single(curve: CurveKind, p: CurvePoint, c: BigRational) -> Result<Self, DivisorError> {
        QDivisor::new(curve, vec![(p, c)])
    }

    pub fn curve(&self) -> CurveKind {
        self.curve
    }

    pub fn coeff(&self, p: &CurvePoint) -> BigRational {
        self.entries.get(p).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&CurvePoint, &BigRational)> {
        self.entries.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &CurvePoint> {
        self.entries.keys()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Sum of all coefficients.
    pub fn degree(&self) -> BigRational {
        self.entries.values().sum()
    }

    fn add_entry(&mut self, p: CurvePoint, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.entries.entry(p) {
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

    fn assert_same_curve(&self, other: &QDivisor) {
        assert_eq!(self.curve, other.curve, "divisor curve mismatch");
    }

    pub fn add(&self, other: &QDivisor) -> QDivisor {
        self.assert_same_curve(other);
        let mut out = self.clone();
        for (p, c) in &other.entries {
            out.add_entry(p.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &QDivisor) -> QDivisor {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> QDivisor {
        QDivisor {
            curve: self.curve,
            entries: self
                .entries
                .iter()
                .map(|(p, c)| (p.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> QDivisor {
        if c.is_zero() {
            return QDivisor::zero(self.curve);
        }
        QDivisor {
            curve: self.curve,
            entries: self
                .entries
                .iter()
                .map(|(p, q)| (p.clone(), q * c))
                .collect(),
        }
    }

    /// Pointwise floor: the integral divisor with coefficient `floor(D(p))`.
    pub fn floor_div(&self) -> QDivisor {
        QDivisor {
            curve: self.curve,
            entries: self
                .entries
                .iter()
                .filter_map(|(p, c)| {
                    let f = c.floor();
                    if f.is_zero() {
                        None
                    } else {
                        Some((p.clone(), f))
                    }
                })
                .collect(),
        }
    }

    /// `D - floor(D)`; all coefficients in `[0, 1)`.
    pub fn fractional_part(&self) -> QDivisor {
        self.sub(&self.floor_div())
    }

    pub fn is_integral(&self) -> bool {
        self.entries.values().all(|c| c.denom().is_one())
    }
}

impl fmt::Display for QDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "0");
        }
        for (i, (p, c)) in self.entries.iter().enumerate() {
            let abs = c.abs();
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if abs.is_one() {
                write!(f, "[{p}]")?;
            } else {
                write!(f, "{}[{p}]", rational_string(&abs))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for QDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The divisor of a factored rational function, as a divisor on the given
/// curve: roots off the curve are rejected; on `P^1` the point at infinity
/// picks up minus the total degree.
pub fn divisor_on(f: &FactoredRational, curve: CurveKind) -> Result<QDivisor, DivisorError> {
    let mut entries: Vec<(CurvePoint, BigRational)> = Vec::new();
    for (root, mult) in f.factors() {
        let p = pt(root.clone());
        if !p.on_curve(curve) {
            return Err(DivisorError::PointOffCurve(p.to_string(), curve.name()));
        }
        entries.push((p, BigRational::from_integer(BigInt::from(mult))));
    }
    if curve == CurveKind::ProjectiveLine {
        let deg = f.total_degree();
        entries.push((
            CurvePoint::Infinity,
            BigRational::from_integer(BigInt::from(-deg)),
        ));
    }
    QDivisor::new(curve, entries)
}

/// `div f` on the affine line (the default reading of the operation).
pub fn divisor_of(f: &FactoredRational) -> QDivisor {
    divisor_on(f, CurveKind::AffineLine).expect("all rational points lie on A^1")
}

/// A hyperbolic pair `(D_+, D_-)` with `D_+ + D_- <= 0` everywhere.
#[derive(Clone, PartialEq, Eq)]
pub struct DivisorPair {
    dplus: QDivisor,
    dminus: QDivisor,
}

impl DivisorPair {
    pub fn new(dplus: QDivisor, dminus: QDivisor) -> Result<Self, DivisorError> {
        if dplus.curve() != dminus.curve() {
            return Err(DivisorError::CurveMismatch);
        }
        let sum = dplus.add(&dminus);
        for (p, c) in sum.entries() {
            if c.is_positive() {
                return Err(DivisorError::PositiveSum(p.to_string()));
            }
        }
        Ok(DivisorPair { dplus, dminus })
    }

    pub fn curve(&self) -> CurveKind {
        self.dplus.curve()
    }

    pub fn dplus(&self) -> &QDivisor {
        &self.dplus
    }

    pub fn dminus(&self) -> &QDivisor {
        &self.dminus
    }

    /// `D_+ + D_-`, invariant under every equivalence move.
    pub fn sum(&self) -> QDivisor {
        self.dplus.add(&self.dminus)
    }

    pub fn swap(&self) -> DivisorPair {
        DivisorPair {
            dplus: self.dminus.clone(),
            dminus: self.dplus.clone(),
        }
    }
}

impl fmt::Debug for DivisorPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {:?})", self.dplus, self.dminus)
    }
}

/// `(D_+ + div f, D_- - div f)`; the pointwise sum is unchanged.
pub fn shift_pair(pair: &DivisorPair, f: &FactoredRational) -> Result<DivisorPair, DivisorError> {
    let d = divisor_on(f, pair.curve())?;
    Ok(DivisorPair {
        dplus: pair.dplus.add(&d),
        dminus: pair.dminus.sub(&d),
    })
}

/// An invertible affine reparametrization `t -> a*t + b` of the line
/// (`b = 0` on the punctured line, and infinity is fixed on `P^1`).
#[derive(Clone, PartialEq, Eq)]
pub struct AffineMap {
    pub a: BigRational,
    pub b: BigRational,
}

impl AffineMap {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        assert!(!a.is_zero(), "affine map must have a != 0");
        AffineMap { a, b }
    }

    pub fn identity() -> Self {
        AffineMap::new(BigRational::one(), BigRational::zero())
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn apply(&self, p: &CurvePoint) -> CurvePoint {
        match p {
            CurvePoint::Finite(q) => CurvePoint::Finite(&self.a * q + &self.b),
            CurvePoint::Infinity => CurvePoint::Infinity,
        }
    }

    pub fn inverse(&self) -> AffineMap {
        // t -> (t - b)/a
        AffineMap::new(self.a.recip(), -&self.b / &self.a)
    }

    /// `self . other`: first `other`, then `self`.
    pub fn compose(&self, other: &AffineMap) -> AffineMap {
        AffineMap::new(&self.a * &other.a, &self.a * &other.b + &self.b)
    }

    pub fn preserves(&self, curve: CurveKind) -> bool {
        curve != CurveKind::PuncturedLine || self.b.is_zero()
    }
}

impl fmt::Debug for AffineMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "t -> {}t + {}",
            rational_string(&self.a),
            rational_string(&self.b)
        )
    }
}

/// Pullback `phi^*D`, i.e. `(phi^*D)(q) = D(phi(q))`: each point `p` of `D`
/// moves to `phi^{-1}(p)`.
pub fn pullback(d: &QDivisor, map: &AffineMap) -> QDivisor {
    let inv = map.inverse();
    QDivisor {
        curve: d.curve(),
        entries: d
            .entries
            .iter()
            .map(|(p, c)| (inv.apply(p), c.clone()))
            .collect(),
    }
}

/// Witness that one pair is carried to another: an affine reparametrization,
/// a principal shift, and an optional swap of the two divisors.
#[derive(Clone, Debug)]
pub struct PairEquivalence {
    pub map: AffineMap,
    pub shift: FactoredRational,
    pub swapped: bool,
}

impl PairEquivalence {
    pub fn identity() -> Self {
        PairEquivalence {
            map: AffineMap::identity(),
            shift: FactoredRational::one(),
            swapped: false,
        }
    }

    /// Apply the witness to `other`, producing the pair it is equivalent to.
    pub fn apply(&self, other: &DivisorPair) -> Result<DivisorPair, DivisorError> {
        let e = if self.swapped { other.swap() } else { other.clone() };
        let pulled = DivisorPair {
            dplus: pullback(&e.dplus, &self.map),
            dminus: pullback(&e.dminus, &self.map),
        };
        shift_pair(&pulled, &self.shift)
    }

    /// The inverse witness: if `self` carries `Q` to `P`, the result carries
    /// `P` to `Q`.
    pub fn invert(&self) -> PairEquivalence {
        // P = phi^*(sw Q) + (div f, -div f)  =>
        // sw Q = (phi^{-1})^*(P - (div f, -div f)), and pullback along
        // phi^{-1} of div f is div(f . phi).
        let inv_map = self.map.inverse();
        let moved = self.shift.compose_affine(&inv_map.a, &inv_map.b);
        let shift = moved.inv();
        if self.swapped {
            // sw(P + (div g, -div g)) = sw(P) + (-div g, div g)
            PairEquivalence {
                map: inv_map,
                shift: shift.inv(),
                swapped: true,
            }
        } else {
            PairEquivalence {
                map: inv_map,
                shift,
                swapped: false,
            }
        }
    }

    /// Compose: if `self` carries `Q` to `P` and `other` carries `R` to `Q`,
    /// the result carries `R` to `P`.
    pub fn compose(&self, other: &PairEquivalence) -> PairEquivalence {
        // self.apply(other.apply(R)):
        //   other: R -> psi^*(sw_o R) + E_g
        //   self:  Q -> phi^*(sw_s Q) + E_f
        // combined map: phi . psi after accounting for the swap order; the
        // shift divisor of the inner move gets pulled back through phi and
        // sign-flipped when the outer move swaps.
        let map = other.map.compose(&self.map);
        let g_pulled = other.shift.compose_affine(&self.map.a, &self.map.b);
        let g_signed = if self.swapped { g_pulled.inv() } else { g_pulled };
        PairEquivalence {
            map,
            shift: self.shift.mul(&g_signed),
            swapped: self.swapped != other.swapped,
        }
    }
}

/// Search for a witness carrying `other` to `target`. Complete over affine
/// reparametrizations: candidate maps come from matching the distinguished
/// support (support of `D_+ + D_-` together with the support of `{D_+}`),
/// which every witness must permute.
pub fn pairs_equivalent(
    target: &DivisorPair,
    other: &DivisorPair,
    allow_swap: bool,
    allow_curve_auto: bool,
) -> Option<PairEquivalence> {
    if target.curve() != other.curve() {
        return None;
    }
    let swaps: &[bool] = if allow_swap { &[false, true] } else { &[false] };
    for &swapped in swaps {
        let e = if swapped { other.swap() } else { other.clone() };
        for map in candidate_maps(target, &e, allow_curve_auto) {
            if let Some(shift) = shift_witness(target, &e, &map) {
                return Some(PairEquivalence { map, shift, swapped });
            }
        }
    }
    None
}

/// The distinguished support: points of `D_+ + D_-` and of `{D_+}`.
fn marked_points(p: &DivisorPair) -> BTreeSet<CurvePoint> {
    let mut set: BTreeSet<CurvePoint> = p.sum().support().cloned().collect();
    set.extend(p.dplus().fractional_part().support().cloned());
    set
}

fn candidate_maps(target: &DivisorPair, e: &DivisorPair, allow_curve_auto: bool) -> Vec<AffineMap> {
    if !allow_curve_auto {
        return vec![AffineMap::identity()];
    }
    let curve = target.curve();
    let tp = marked_points(target);
    let te = marked_points(e);
    if tp.len() != te.len() || tp.contains(&CurvePoint::Infinity) != te.contains(&CurvePoint::Infinity)
    {
        return Vec::new();
    }
    let finite_t: Vec<&BigRational> = tp.iter().filter_map(|p| p.finite()).collect();
    let finite_e: Vec<&BigRational> = te.iter().filter_map(|p| p.finite()).collect();
    let mut maps = Vec::new();
    match finite_t.len() {
        0 => maps.push(AffineMap::identity()),
        1 => {
            let q = finite_t[0];
            let p = finite_e[0];
            if curve == CurveKind::PuncturedLine {
                // only t -> a*t fixes the puncture
                maps.push(AffineMap::new(p / q, BigRational::zero()));
            } else {
                // one-parameter family; the translation representative
                maps.push(AffineMap::new(BigRational::one(), p - q));
            }
        }
        _ => {
            // phi is determined by the images of two fixed points
            let q1 = finite_t[0];
            let q2 = finite_t[finite_t.len() - 1];
            for p1 in &finite_e {
                for p2 in &finite_e {
                    if p1 == p2 {
                        continue;
                    }
                    let a = (*p1 - *p2) / (q1 - q2);
                    if a.is_zero() {
                        continue;
                    }
                    let b = *p1 - &a * q1;
                    let map = AffineMap::new(a, b);
                    if map.preserves(curve) && !maps.contains(&map) {
                        maps.push(map);
                    }
                }
            }
        }
    }
    maps.retain(|m| m.preserves(curve));
    maps
}

/// Verify a candidate map and produce the principal shift, if one exists.
fn shift_witness(
    target: &DivisorPair,
    e: &DivisorPair,
    map: &AffineMap,
) -> Option<FactoredRational> {
    let pulled_plus = pullback(e.dplus(), map);
    let pulled_minus = pullback(e.dminus(), map);
    let diff = target.dplus().sub(&pulled_plus);
    if !diff.is_integral() {
        return None;
    }
    if target.dminus().sub(&pulled_minus) != diff.neg() {
        return None;
    }
    // build f with div f = diff
    let mut factors = Vec::new();
    let mut finite_sum: i64 = 0;
    for (p, c) in diff.entries() {
        match p {
            CurvePoint::Finite(q) => {
                let m = c.to_integer();
                let m_i64 = i64::try_from(&m).ok()?;
                finite_sum += m_i64;
                factors.push((q.clone(), m_i64));
            }
            CurvePoint::Infinity => {}
        }
    }
    if target.curve() == CurveKind::ProjectiveLine {
        // principal divisors on P^1 have degree zero
        let at_inf = diff.coeff(&CurvePoint::Infinity).to_integer();
        if at_inf != BigInt::from(-finite_sum) {
            return None;
        }
    }
    Some(FactoredRational::from_factors(BigRational::one(), factors))
}
