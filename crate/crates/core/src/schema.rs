//! Stable JSON documents for presentations, reports and witnesses. Rationals
//! travel as strings `"a/b"` so nothing is ever rounded.

use num::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classify::{SurfaceReport, UniquenessOutcome, UniquenessReport};
use crate::divisor::{CurveKind, CurvePoint, DivisorPair, PairEquivalence, QDivisor};
use crate::dpd::{validate_parts, CaseReport, DpdPresentation, GradingCase};
use crate::exactmath::{parse_rational, rational_string, FactoredRational};

#[derive(Debug, Error)]
pub enum DocError {
    /// The document does not follow the schema (exit code 1 territory).
    #[error("malformed document: {0}")]
    Malformed(String),
    /// Schema-conforming data that violates a presentation invariant
    /// (exit code 2 territory).
    #[error("invalid presentation: {}", summarize(.0))]
    Invalid(CaseReport),
}

fn summarize(report: &CaseReport) -> String {
    report
        .violations
        .iter()
        .map(|v| v.0.clone())
        .collect::<Vec<_>>()
        .join("; ")
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DivisorEntryDoc {
    /// `"p/q"` or `"inf"`.
    pub point: String,
    /// `"a/b"`.
    pub coeff: String,
}

/// The presentation document: `case`, `curve`, and either `divisor`
/// (elliptic/parabolic) or `dplus` + `dminus` (hyperbolic).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PresentationDoc {
    pub case: String,
    pub curve: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub divisor: Option<Vec<DivisorEntryDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dplus: Option<Vec<DivisorEntryDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dminus: Option<Vec<DivisorEntryDoc>>,
}

fn parse_case(s: &str) -> Result<GradingCase, DocError> {
    match s {
        "elliptic" => Ok(GradingCase::Elliptic),
        "parabolic" => Ok(GradingCase::Parabolic),
        "hyperbolic" => Ok(GradingCase::Hyperbolic),
        other => Err(DocError::Malformed(format!("unknown case {other:?}"))),
    }
}

fn parse_curve(s: &str) -> Result<CurveKind, DocError> {
    match s {
        "affine_line" => Ok(CurveKind::AffineLine),
        "projective_line" => Ok(CurveKind::ProjectiveLine),
        "punctured_line" => Ok(CurveKind::PuncturedLine),
        other => Err(DocError::Malformed(format!("unknown curve {other:?}"))),
    }
}

fn parse_point(s: &str) -> Result<CurvePoint, DocError> {
    if s.trim() == "inf" {
        return Ok(CurvePoint::Infinity);
    }
    parse_rational(s)
        .map(CurvePoint::Finite)
        .map_err(DocError::Malformed)
}

fn divisor_from_entries(
    entries: &[DivisorEntryDoc],
    curve: CurveKind,
    case: GradingCase,
) -> Result<QDivisor, DocError> {
    let mut parsed = Vec::with_capacity(entries.len());
    for e in entries {
        let p = parse_point(&e.point)?;
        let c = parse_rational(&e.coeff).map_err(DocError::Malformed)?;
        if c.denom().bits() > 64 || c.numer().bits() > 256 {
            return Err(DocError::Malformed(format!(
                "coefficient {} at [{}] is outside the supported range",
                e.coeff, e.point
            )));
        }
        parsed.push((p, c));
    }
    QDivisor::new(curve, parsed).map_err(|e| {
        DocError::Invalid(CaseReport {
            case,
            curve,
            violations: vec![crate::dpd::Violation(e.to_string())],
        })
    })
}

fn divisor_to_entries(d: &QDivisor) -> Vec<DivisorEntryDoc> {
    d.entries()
        .map(|(p, c)| DivisorEntryDoc {
            point: p.to_string(),
            coeff: rational_string(c),
        })
        .collect()
}

impl PresentationDoc {
    pub fn from_json(s: &str) -> Result<Self, DocError> {
        serde_json::from_str(s).map_err(|e| DocError::Malformed(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serialization")
    }

    /// Validate and build the typed presentation.
    pub fn to_presentation(&self) -> Result<DpdPresentation, DocError> {
        let case = parse_case(&self.case)?;
        let curve = parse_curve(&self.curve)?;
        match case {
            GradingCase::Elliptic | GradingCase::Parabolic => {
                if self.dplus.is_some() || self.dminus.is_some() {
                    return Err(DocError::Malformed(
                        "elliptic/parabolic documents use the \"divisor\" field".into(),
                    ));
                }
                let entries = self.divisor.as_deref().ok_or_else(|| {
                    DocError::Malformed("missing \"divisor\" field".into())
                })?;
                let d = divisor_from_entries(entries, curve, case)?;
                let report = validate_parts(case, curve, &d, None);
                if !report.is_valid() {
                    return Err(DocError::Invalid(report));
                }
                Ok(match case {
                    GradingCase::Elliptic => DpdPresentation::elliptic(d),
                    _ => DpdPresentation::parabolic(d),
                }
                .expect("validated above"))
            }
            GradingCase::Hyperbolic => {
                if self.divisor.is_some() {
                    return Err(DocError::Malformed(
                        "hyperbolic documents use \"dplus\" and \"dminus\"".into(),
                    ));
                }
                let dp = self.dplus.as_deref().ok_or_else(|| {
                    DocError::Malformed("missing \"dplus\" field".into())
                })?;
                let dm = self.dminus.as_deref().ok_or_else(|| {
                    DocError::Malformed("missing \"dminus\" field".into())
                })?;
                let dp = divisor_from_entries(dp, curve, case)?;
                let dm = divisor_from_entries(dm, curve, case)?;
                let report = validate_parts(case, curve, &dp, Some(&dm));
                if !report.is_valid() {
                    return Err(DocError::Invalid(report));
                }
                let pair = DivisorPair::new(dp, dm).expect("validated above");
                Ok(DpdPresentation::hyperbolic(pair))
            }
        }
    }

    pub fn from_presentation(p: &DpdPresentation) -> Self {
        let case = p.case().name().to_string();
        let curve = p.curve().name().to_string();
        match p {
            DpdPresentation::Hyperbolic { pair } => PresentationDoc {
                case,
                curve,
                divisor: None,
                dplus: Some(divisor_to_entries(pair.dplus())),
                dminus: Some(divisor_to_entries(pair.dminus())),
            },
            _ => PresentationDoc {
                case,
                curve,
                divisor: Some(divisor_to_entries(
                    p.single_divisor().expect("single-divisor case"),
                )),
                dplus: None,
                dminus: None,
            },
        }
    }
}

/// Validation outcome as a document (printed on exit code 2).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ValidationDoc {
    pub valid: bool,
    pub case: String,
    pub curve: String,
    pub violations: Vec<String>,
}

impl ValidationDoc {
    pub fn from_report(report: &CaseReport) -> Self {
        ValidationDoc {
            valid: report.is_valid(),
            case: report.case.name().into(),
            curve: report.curve.name().into(),
            violations: report.violations.iter().map(|v| v.0.clone()).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FactorDoc {
    pub root: String,
    pub multiplicity: i64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WitnessDoc {
    /// The affine reparametrization `t -> a t + b`.
    pub map_a: String,
    pub map_b: String,
    pub swapped: bool,
    pub shift_scalar: String,
    pub shift_factors: Vec<FactorDoc>,
}

impl WitnessDoc {
    pub fn from_witness(w: &PairEquivalence) -> Self {
        WitnessDoc {
            map_a: rational_string(&w.map.a),
            map_b: rational_string(&w.map.b),
            swapped: w.swapped,
            shift_scalar: rational_string(w.shift.scalar()),
            shift_factors: w
                .shift
                .factors()
                .map(|(r, m)| FactorDoc {
                    root: rational_string(r),
                    multiplicity: m,
                })
                .collect(),
        }
    }
}

pub fn factored_rational_from_doc(
    scalar: &str,
    factors: &[FactorDoc],
) -> Result<FactoredRational, DocError> {
    let s: BigRational = parse_rational(scalar).map_err(DocError::Malformed)?;
    let mut fs = Vec::with_capacity(factors.len());
    for f in factors {
        fs.push((
            parse_rational(&f.root).map_err(DocError::Malformed)?,
            f.multiplicity,
        ));
    }
    Ok(FactoredRational::from_factors(s, fs))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NegPointDoc {
    pub point: String,
    pub e_plus: String,
    pub m_plus: String,
    pub e_minus: String,
    pub m_minus: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FiberDoc {
    pub point: String,
    pub multiplicity: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassGroupDoc {
    pub generators: Vec<String>,
    pub free_rank: usize,
    pub torsion: Vec<String>,
    pub display: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CanonicalDoc {
    pub vector: Vec<String>,
    pub trivial: bool,
    pub extrapolated: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ToricDoc {
    pub d: u64,
    pub e: u64,
}

/// The full classification report document.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SurfaceReportDoc {
    pub verdict: String,
    pub case: String,
    pub curve: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ml_class: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub negative_point_count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub negative_points: Option<Vec<NegPointDoc>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub multiple_fibers: Option<Vec<FiberDoc>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub smooth: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub class_group: Option<ClassGroupDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub class_group_unavailable: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub canonical_class: Option<CanonicalDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub canonical_unavailable: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub toric: Option<ToricDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub canonical_form: Option<PresentationDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessDoc>,
}

impl SurfaceReportDoc {
    pub fn from_report(r: &SurfaceReport) -> Self {
        SurfaceReportDoc {
            verdict: r.verdict.to_string(),
            case: r.case.name().into(),
            curve: r.curve.name().into(),
            ml_class: r.ml.map(|m| m.name().into()),
            negative_point_count: r.l(),
            negative_points: r.negative_points.as_ref().map(|v| {
                v.iter()
                    .map(|n| NegPointDoc {
                        point: rational_string(&n.point),
                        e_plus: n.e_plus.to_string(),
                        m_plus: n.m_plus.to_string(),
                        e_minus: n.e_minus.to_string(),
                        m_minus: n.m_minus.to_string(),
                    })
                    .collect()
            }),
            multiple_fibers: r.multiple_fibers.as_ref().map(|v| {
                v.iter()
                    .map(|f| FiberDoc {
                        point: rational_string(&f.point),
                        multiplicity: f.multiplicity,
                    })
                    .collect()
            }),
            smooth: r.smooth,
            class_group: r.class_group.as_ref().map(|g| ClassGroupDoc {
                generators: g.generators.clone(),
                free_rank: g.free_rank,
                torsion: g.torsion.iter().map(|t| t.to_string()).collect(),
                display: g.to_string(),
            }),
            class_group_unavailable: r.class_group_unavailable.clone(),
            canonical_class: r.canonical.as_ref().map(|k| CanonicalDoc {
                vector: k.vector.iter().map(|v| v.to_string()).collect(),
                trivial: k.trivial,
                extrapolated: k.extrapolated,
            }),
            canonical_unavailable: r.canonical_unavailable.clone(),
            toric: r.toric.map(|t| ToricDoc { d: t.d(), e: t.e() }),
            canonical_form: r
                .canonical_form
                .as_ref()
                .map(PresentationDoc::from_presentation),
            witness: r.witness.as_ref().map(WitnessDoc::from_witness),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }
}

/// Uniqueness-check document.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct UniquenessDoc {
    /// "equivalent" | "toric" | "not_equivalent" | "counterexample_candidate"
    pub outcome: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub isomorphic: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub left: SurfaceReportDoc,
    pub right: SurfaceReportDoc,
}

impl UniquenessDoc {
    pub fn from_report(r: &UniquenessReport) -> Self {
        let (outcome, witness, isomorphic, note) = match &r.outcome {
            UniquenessOutcome::Equivalent(w) => (
                "equivalent",
                Some(WitnessDoc::from_witness(w)),
                None,
                None,
            ),
            UniquenessOutcome::ToricIsomorphism { isomorphic, .. } => {
                ("toric", None, Some(*isomorphic), None)
            }
            UniquenessOutcome::NotEquivalent { note } => {
                ("not_equivalent", None, None, Some(note.clone()))
            }
            UniquenessOutcome::CounterexampleCandidate { note } => {
                ("counterexample_candidate", None, None, Some(note.clone()))
            }
        };
        UniquenessDoc {
            outcome: outcome.into(),
            witness,
            isomorphic,
            note,
            left: SurfaceReportDoc::from_report(&r.left),
            right: SurfaceReportDoc::from_report(&r.right),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }
}
