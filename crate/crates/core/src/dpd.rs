//! DPD presentations `A_0[D]` and `A_0[D_+, D_-]` of graded normal affine
//! surface rings: graded pieces, Makar-Limanov class, multiple fibers,
//! smoothness, divisor class group and canonical class.

use std::fmt;

use num::{BigInt, BigRational, One, Signed, Zero};
use thiserror::Error;

use crate::divisor::{CurveKind, DivisorPair, QDivisor};
use crate::exactmath::{
    abelian_group_from_relations, numer_denom, row_lattice_membership,
    AbelianGroupPresentation, FactoredRational, IntMatrix,
};

/// Which of the three grading types a presentation realizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GradingCase {
    Elliptic,
    Parabolic,
    Hyperbolic,
}

impl GradingCase {
    pub fn name(self) -> &'static str {
        match self {
            GradingCase::Elliptic => "elliptic",
            GradingCase::Parabolic => "parabolic",
            GradingCase::Hyperbolic => "hyperbolic",
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DpdError {
    #[error("operation requires a {expected} presentation, got {found}")]
    WrongCase {
        expected: &'static str,
        found: &'static str,
    },
    #[error("operation requires the curve {expected}, got {found}")]
    WrongCurve {
        expected: &'static str,
        found: &'static str,
    },
    #[error("the Makar-Limanov criterion needs D_+ + D_- != 0")]
    ZeroSum,
    #[error("class group is not computed in the presence of multiple fibers")]
    MultipleFibersPresent,
    #[error("graded component is undefined for degree {degree} in the {case} case")]
    NegativeDegree { degree: i64, case: &'static str },
    #[error("coefficient denominator at [{0}] exceeds the supported range")]
    OversizedDenominator(String),
}

/// A validated DPD presentation. The elliptic and parabolic cases carry a
/// single divisor, the hyperbolic case a pair.
#[derive(Clone, PartialEq, Eq)]
pub enum DpdPresentation {
    Elliptic { divisor: QDivisor },
    Parabolic { divisor: QDivisor },
    Hyperbolic { pair: DivisorPair },
}

/// One invariant violation found by [`validate_parts`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation(pub String);

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Validation report: the declared case and whatever invariants fail.
#[derive(Clone, Debug)]
pub struct CaseReport {
    pub case: GradingCase,
    pub curve: CurveKind,
    pub violations: Vec<Violation>,
}

impl CaseReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check the case invariants on raw divisor data and report diagnostics
/// instead of failing. `divisors` is `(D,)` for elliptic/parabolic and
/// `(D_+, D_-)` for hyperbolic.
pub fn validate_parts(
    case: GradingCase,
    curve: CurveKind,
    dplus: &QDivisor,
    dminus: Option<&QDivisor>,
) -> CaseReport {
    let mut violations = Vec::new();
    let mut push = |s: String| violations.push(Violation(s));
    match case {
        GradingCase::Elliptic => {
            if curve != CurveKind::ProjectiveLine {
                push(format!(
                    "elliptic presentations live on the projective line, not {}",
                    curve.name()
                ));
            }
            if dminus.is_some() {
                push("elliptic presentations carry a single divisor".into());
            }
            if !dplus.degree().is_positive() {
                push("positive degree required: elliptic D must have deg D > 0".into());
            }
        }
        GradingCase::Parabolic => {
            if curve == CurveKind::ProjectiveLine {
                push("parabolic presentations live on an affine curve (A^1 or C^*)".into());
            }
            if dminus.is_some() {
                push("parabolic presentations carry a single divisor".into());
            }
        }
        GradingCase::Hyperbolic => match dminus {
            None => push("hyperbolic presentations need both D_+ and D_-".into()),
            Some(dm) => {
                if curve == CurveKind::ProjectiveLine {
                    push("hyperbolic presentations live on an affine curve (A^1 or C^*)".into());
                }
                if dplus.curve() != dm.curve() {
                    push("D_+ and D_- live on different curves".into());
                }
                for (p, c) in dplus.add(dm).entries() {
                    if c.is_positive() {
                        push(format!(
                            "violation of D_+ + D_- <= 0: sum at [{p}] is {}",
                            crate::exactmath::rational_string(c)
                        ));
                    }
                }
            }
        },
    }
    CaseReport {
        case,
        curve,
        violations,
    }
}

impl DpdPresentation {
    pub fn elliptic(divisor: QDivisor) -> Result<Self, CaseReport> {
        let report = validate_parts(GradingCase::Elliptic, divisor.curve(), &divisor, None);
        if report.is_valid() {
            Ok(DpdPresentation::Elliptic { divisor })
        } else {
            Err(report)
        }
    }

    pub fn parabolic(divisor: QDivisor) -> Result<Self, CaseReport> {
        let report = validate_parts(GradingCase::Parabolic, divisor.curve(), &divisor, None);
        if report.is_valid() {
            Ok(DpdPresentation::Parabolic { divisor })
        } else {
            Err(report)
        }
    }

    pub fn hyperbolic(pair: DivisorPair) -> Self {
        // the pair type already enforces D_+ + D_- <= 0
        DpdPresentation::Hyperbolic { pair }
    }

    pub fn case(&self) -> GradingCase {
        match self {
            DpdPresentation::Elliptic { .. } => GradingCase::Elliptic,
            DpdPresentation::Parabolic { .. } => GradingCase::Parabolic,
            DpdPresentation::Hyperbolic { .. } => GradingCase::Hyperbolic,
        }
    }

    pub fn curve(&self) -> CurveKind {
        match self {
            DpdPresentation::Elliptic { divisor } | DpdPresentation::Parabolic { divisor } => {
                divisor.curve()
            }
            DpdPresentation::Hyperbolic { pair } => pair.curve(),
        }
    }

    pub fn pair(&self) -> Option<&DivisorPair> {
        match self {
            DpdPresentation::Hyperbolic { pair } => Some(pair),
            _ => None,
        }
    }

    pub fn single_divisor(&self) -> Option<&QDivisor> {
        match self {
            DpdPresentation::Elliptic { divisor } | DpdPresentation::Parabolic { divisor } => {
                Some(divisor)
            }
            DpdPresentation::Hyperbolic { .. } => None,
        }
    }

    /// Re-run the invariant checks (always clean for values built through the
    /// validated constructors).
    pub fn validate(&self) -> CaseReport {
        match self {
            DpdPresentation::Elliptic { divisor } => {
                validate_parts(GradingCase::Elliptic, divisor.curve(), divisor, None)
            }
            DpdPresentation::Parabolic { divisor } => {
                validate_parts(GradingCase::Parabolic, divisor.curve(), divisor, None)
            }
            DpdPresentation::Hyperbolic { pair } => validate_parts(
                GradingCase::Hyperbolic,
                pair.curve(),
                pair.dplus(),
                Some(pair.dminus()),
            ),
        }
    }

    fn require_hyperbolic_affine(&self) -> Result<&DivisorPair, DpdError> {
        let pair = self.pair().ok_or(DpdError::WrongCase {
            expected: "hyperbolic",
            found: self.case().name(),
        })?;
        if pair.curve() != CurveKind::AffineLine {
            return Err(DpdError::WrongCurve {
                expected: CurveKind::AffineLine.name(),
                found: pair.curve().name(),
            });
        }
        Ok(pair)
    }
}

impl fmt::Debug for DpdPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DpdPresentation::Elliptic { divisor } => write!(f, "elliptic D = {divisor:?}"),
            DpdPresentation::Parabolic { divisor } => write!(f, "parabolic D = {divisor:?}"),
            DpdPresentation::Hyperbolic { pair } => write!(f, "hyperbolic {pair:?}"),
        }
    }
}

/// Canonical generator of a graded piece that is free of rank one over `A_0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedGenerator {
    pub degree: i64,
    /// The function part; the actual generator is `function * u^degree`.
    pub function: FactoredRational,
}

/// A graded piece: a free generator over `A_0`, or a C-basis in the elliptic
/// case.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GradedComponent {
    Generator(GradedGenerator),
    Basis(Vec<FactoredRational>),
}

/// The degree-`i` piece of the presentation.
///
/// Over the affine or punctured line the piece is `A_0 * g_i * u^i` with
/// `g_i = prod_p (t-p)^(-floor(i*D(p)))`, reading `D_+` for `i > 0` and `D_-`
/// (scaled by `|i|`) for `i < 0`. Over `P^1` (elliptic) it is a basis of
/// `H^0(O(floor(i*D)))`, of size `max(0, deg floor(iD) + 1)`.
pub fn graded_component(p: &DpdPresentation, i: i64) -> Result<GradedComponent, DpdError> {
    match p {
        DpdPresentation::Elliptic { divisor } => {
            if i < 0 {
                return Err(DpdError::NegativeDegree {
                    degree: i,
                    case: "elliptic",
                });
            }
            let e = divisor.scale(&BigRational::from_integer(BigInt::from(i))).floor_div();
            Ok(GradedComponent::Basis(projective_section_basis(&e)))
        }
        DpdPresentation::Parabolic { divisor } => {
            if i < 0 {
                return Err(DpdError::NegativeDegree {
                    degree: i,
                    case: "parabolic",
                });
            }
            Ok(GradedComponent::Generator(line_generator(divisor, i, i)))
        }
        DpdPresentation::Hyperbolic { pair } => {
            let gen = if i >= 0 {
                line_generator(pair.dplus(), i, i)
            } else {
                line_generator(pair.dminus(), -i, i)
            };
            Ok(GradedComponent::Generator(gen))
        }
    }
}

/// `prod_p (t - p)^(-floor(scale * D(p)))` as the degree-`label` generator.
fn line_generator(d: &QDivisor, scale: i64, label: i64) -> GradedGenerator {
    let scaled = d.scale(&BigRational::from_integer(BigInt::from(scale)));
    let floor = scaled.floor_div();
    let mut factors = Vec::new();
    for (p, c) in floor.entries() {
        let root = p
            .finite()
            .expect("affine-curve divisors have finite support")
            .clone();
        let m = i64::try_from(&c.to_integer()).expect("desk-scale multiplicity");
        factors.push((root, -m));
    }
    GradedGenerator {
        degree: label,
        function: FactoredRational::from_factors(BigRational::one(), factors),
    }
}

/// Monomial-style basis `t^j * prod (t-p)^(-E(p))`, `0 <= j <= deg E`, of
/// `H^0(P^1, O(E))` for an integral divisor `E`.
fn projective_section_basis(e: &QDivisor) -> Vec<FactoredRational> {
    let deg = e.degree().to_integer();
    if deg.is_negative() {
        return Vec::new();
    }
    let dim = i64::try_from(&deg).expect("desk-scale degree") + 1;
    let mut base_factors = Vec::new();
    for (p, c) in e.entries() {
        if let Some(root) = p.finite() {
            let m = i64::try_from(&c.to_integer()).expect("desk-scale multiplicity");
            base_factors.push((root.clone(), -m));
        }
    }
    let base = FactoredRational::from_factors(BigRational::one(), base_factors);
    let t = FactoredRational::linear(BigRational::zero());
    (0..dim).map(|j| base.mul(&t.pow(j))).collect()
}

/// Makar-Limanov class of a hyperbolic surface over the affine line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MlClass {
    /// `ML(A) = C`: both fractional parts concentrated in at most one point.
    Trivial,
    /// `ML(A) = C[x]` for a homogeneous `x`: exactly one side concentrated.
    LinePoly,
    /// `ML(A) = A`: no nonzero locally nilpotent derivations.
    Full,
}

impl MlClass {
    pub fn name(self) -> &'static str {
        match self {
            MlClass::Trivial => "Trivial",
            MlClass::LinePoly => "LinePoly",
            MlClass::Full => "Full",
        }
    }
}

/// Classify `ML(A)` for `A = C[t][D_+, D_-]` with `D_+ + D_- <= 0`, `!= 0`,
/// by the support sizes of the fractional parts of `D_+` and `D_-`.
pub fn ml_class(p: &DpdPresentation) -> Result<MlClass, DpdError> {
    let pair = p.require_hyperbolic_affine()?;
    if pair.sum().is_zero() {
        return Err(DpdError::ZeroSum);
    }
    let plus_ok = pair.dplus().fractional_part().support().count() <= 1;
    let minus_ok = pair.dminus().fractional_part().support().count() <= 1;
    Ok(match (plus_ok, minus_ok) {
        (true, true) => MlClass::Trivial,
        (false, false) => MlClass::Full,
        _ => MlClass::LinePoly,
    })
}

/// Data at a point where `(D_+ + D_-)(p) < 0`:
/// `D_+(p) = -e_plus/m_plus` with `m_plus > 0` and
/// `D_-(p) = e_minus/m_minus` with `m_minus < 0`, both in lowest terms.
/// Integral coefficients are encoded with denominator +-1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NegPointData {
    pub point: BigRational,
    pub e_plus: BigInt,
    pub m_plus: BigInt,
    pub e_minus: BigInt,
    pub m_minus: BigInt,
}

impl NegPointData {
    /// `det | e+ m+ ; e- m- | = e+ m- - e- m+`; equals -1 exactly at smooth
    /// points.
    pub fn determinant(&self) -> BigInt {
        &self.e_plus * &self.m_minus - &self.e_minus * &self.m_plus
    }
}

fn neg_point_data(point: &BigRational, dplus: &BigRational, dminus: &BigRational) -> NegPointData {
    // D_+(p) = -e+/m+, m+ > 0: numer/denom gives the m+ > 0 normal form.
    let (np, dp) = numer_denom(dplus);
    // D_-(p) = e-/m-, m- < 0: flip the sign of the reduced fraction.
    let (nm, dm) = numer_denom(dminus);
    NegPointData {
        point: point.clone(),
        e_plus: -np,
        m_plus: dp,
        e_minus: -nm,
        m_minus: -dm,
    }
}

/// The points with `(D_+ + D_-)(p) < 0` in ascending order, each with its
/// sign-normalized fraction data; `l` is the length of the list.
pub fn negative_points(p: &DpdPresentation) -> Result<Vec<NegPointData>, DpdError> {
    let pair = p.require_hyperbolic_affine()?;
    let sum = pair.sum();
    let mut out = Vec::new();
    for (point, c) in sum.entries() {
        if c.is_negative() {
            let q = point.finite().expect("affine-line divisor").clone();
            out.push(neg_point_data(
                &q,
                &pair.dplus().coeff(point),
                &pair.dminus().coeff(point),
            ));
        }
    }
    Ok(out)
}

/// A multiple fiber of the orbit map: a point where the sum vanishes but
/// `D_+` is fractional; the multiplicity is the reduced denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultipleFiber {
    pub point: BigRational,
    pub multiplicity: u64,
}

pub fn multiple_fibers(p: &DpdPresentation) -> Result<Vec<MultipleFiber>, DpdError> {
    let pair = p.require_hyperbolic_affine()?;
    let sum = pair.sum();
    let mut out = Vec::new();
    for (point, c) in pair.dplus().entries() {
        if !sum.coeff(point).is_zero() {
            continue;
        }
        if c.denom().is_one() {
            continue;
        }
        let q = point.finite().expect("affine-line divisor").clone();
        let m = u64::try_from(c.denom())
            .map_err(|_| DpdError::OversizedDenominator(q.to_string()))?;
        out.push(MultipleFiber {
            point: q,
            multiplicity: m,
        });
    }
    Ok(out)
}

/// Smoothness: every negative point must satisfy `det = -1`; points with
/// vanishing sum impose no condition (a multiple fiber can coexist with a
/// smooth total space).
pub fn is_smooth(p: &DpdPresentation) -> Result<bool, DpdError> {
    let data = negative_points(p)?;
    Ok(data
        .iter()
        .all(|d| d.determinant() == BigInt::from(-1)))
}

fn generator_labels(l: usize) -> Vec<String> {
    let mut labels = Vec::with_capacity(2 * l);
    for i in 1..=l {
        labels.push(format!("O{i}+"));
        labels.push(format!("O{i}-"));
    }
    labels
}

/// Relation matrix on the generators `O_i^+`, `O_i^-`: one row
/// `M_i = m_i^+ [O_i^+] - m_i^- [O_i^-]` per negative point, plus the single
/// row `sum_i E_i` with `E_i = e_i^+ [O_i^+] - e_i^- [O_i^-]`.
fn class_group_relations(data: &[NegPointData]) -> IntMatrix {
    let l = data.len();
    let mut m = IntMatrix::zero(l + 1, 2 * l);
    for (i, d) in data.iter().enumerate() {
        m.set(i, 2 * i, d.m_plus.clone());
        m.set(i, 2 * i + 1, -d.m_minus.clone());
        m.set(l, 2 * i, d.e_plus.clone());
        m.set(l, 2 * i + 1, -d.e_minus.clone());
    }
    m
}

/// Divisor class group, computed from the orbit-closure relations. Errors in
/// the presence of multiple fibers (each contributes torsion not described by
/// these relations).
pub fn class_group(p: &DpdPresentation) -> Result<AbelianGroupPresentation, DpdError> {
    if !multiple_fibers(p)?.is_empty() {
        return Err(DpdError::MultipleFibersPresent);
    }
    let data = negative_points(p)?;
    let rels = class_group_relations(&data);
    Ok(abelian_group_from_relations(
        &generator_labels(data.len()),
        &rels,
    ))
}

/// The canonical class in the orbit-closure basis and its triviality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalClass {
    /// `K_V = sum_i (m_i^+ - 1)[O_i^+] + (-m_i^- - 1)[O_i^-]`, as coordinates
    /// in the `O_1^+, O_1^-, O_2^+, ...` basis.
    pub vector: Vec<BigInt>,
    /// Whether the class vanishes in the quotient group.
    pub trivial: bool,
    /// The per-point formula is quoted for two negative points; for any other
    /// `l` it is the same pattern extended, and flagged here.
    pub extrapolated: bool,
}

pub fn canonical_class(p: &DpdPresentation) -> Result<CanonicalClass, DpdError> {
    if !multiple_fibers(p)?.is_empty() {
        return Err(DpdError::MultipleFibersPresent);
    }
    let data = negative_points(p)?;
    let mut vector = Vec::with_capacity(2 * data.len());
    for d in &data {
        vector.push(&d.m_plus - BigInt::one());
        vector.push(-&d.m_minus - BigInt::one());
    }
    let rels = class_group_relations(&data);
    let membership = row_lattice_membership(&rels, &vector);
    Ok(CanonicalClass {
        trivial: membership.in_lattice,
        vector,
        extrapolated: data.len() != 2,
    })
}

/// The `l = 2` canonical-triviality shortcut `m_1^+ + m_1^- = m_2^+ + m_2^-`,
/// which for smooth presentations matches the lattice-membership test. Kept
/// as an independent code path for cross-checking.
pub fn eq3_holds(data: &[NegPointData]) -> Option<bool> {
    if data.len() != 2 {
        return None;
    }
    Some(&data[0].m_plus + &data[0].m_minus == &data[1].m_plus + &data[1].m_minus)
}
