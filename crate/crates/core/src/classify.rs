//! Recognition pipeline: identify a presentation as `C* x C*`, `A^1 x C*`,
//! `V_{d,e}`, `P^1 x P^1` minus the diagonal, `P^2` minus a quadric, or
//! other, with a full invariant report and the equivalence witness used.

use std::fmt;

use num::BigRational;
use thiserror::Error;

use crate::divisor::{
    pairs_equivalent, pt, CurveKind, DivisorPair, PairEquivalence, QDivisor,
};
use crate::dpd::{
    canonical_class, class_group, is_smooth, ml_class, multiple_fibers, negative_points,
    CanonicalClass, DpdError, DpdPresentation, GradingCase, MlClass, MultipleFiber, NegPointData,
};
use crate::exactmath::AbelianGroupPresentation;
use crate::toric::{recognize_toric, vde_isomorphic, ToricData};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("uniqueness check precondition violated: {0}")]
    Precondition(String),
}

/// Final classification verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// `C* x C*` (hyperbolic over the punctured line, sum zero, integral).
    CStarSquare,
    /// `A^1 x C*`.
    LineTimesCStar,
    /// The toric model `V_{d,e}`.
    Vde(ToricData),
    /// `P^1 x P^1` minus the diagonal.
    P1xP1MinusDiagonal,
    /// `P^2` minus a nonsingular quadric.
    P2MinusQuadric,
    Other,
}

impl Verdict {
    pub fn tag(&self) -> &'static str {
        match self {
            Verdict::CStarSquare => "CStarSquare",
            Verdict::LineTimesCStar => "LineTimesCStar",
            Verdict::Vde(_) => "Vde",
            Verdict::P1xP1MinusDiagonal => "P1xP1MinusDiagonal",
            Verdict::P2MinusQuadric => "P2MinusQuadric",
            Verdict::Other => "Other",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Vde(t) => write!(f, "{t}"),
            other => f.write_str(other.tag()),
        }
    }
}

/// Everything the pipeline computes for one presentation. Fields are `None`
/// when the corresponding invariant does not apply to the case/curve at hand
/// (the `*_unavailable` fields say why when the reason is interesting).
#[derive(Clone, Debug)]
pub struct SurfaceReport {
    pub case: GradingCase,
    pub curve: CurveKind,
    pub verdict: Verdict,
    pub ml: Option<MlClass>,
    pub negative_points: Option<Vec<NegPointData>>,
    pub multiple_fibers: Option<Vec<MultipleFiber>>,
    pub smooth: Option<bool>,
    pub class_group: Option<AbelianGroupPresentation>,
    pub class_group_unavailable: Option<String>,
    pub canonical: Option<CanonicalClass>,
    pub canonical_unavailable: Option<String>,
    pub toric: Option<ToricData>,
    /// The model presentation behind the verdict, when there is one.
    pub canonical_form: Option<DpdPresentation>,
    /// Witness carrying the canonical-form pair to the input, for the two
    /// homogeneous verdicts.
    pub witness: Option<PairEquivalence>,
}

impl SurfaceReport {
    /// `l`: the number of points where `D_+ + D_-` is negative.
    pub fn l(&self) -> Option<usize> {
        self.negative_points.as_ref().map(|v| v.len())
    }
}

fn rat_int(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// The model pair `(0, -[1]-[-1])` presenting `P^1 x P^1` minus the diagonal.
pub fn diagonal_complement_pair() -> DivisorPair {
    let dplus = QDivisor::zero(CurveKind::AffineLine);
    let dminus = QDivisor::new(
        CurveKind::AffineLine,
        vec![(pt(rat_int(1)), rat_int(-1)), (pt(rat_int(-1)), rat_int(-1))],
    )
    .expect("model data");
    DivisorPair::new(dplus, dminus).expect("model pair is valid")
}

/// The model pair `(1/2[0], -1/2[0]-[1])` presenting `P^2` minus a quadric.
pub fn quadric_complement_pair() -> DivisorPair {
    let half = BigRational::new(1.into(), 2.into());
    let dplus = QDivisor::single(CurveKind::AffineLine, pt(rat_int(0)), half.clone())
        .expect("model data");
    let dminus = QDivisor::new(
        CurveKind::AffineLine,
        vec![(pt(rat_int(0)), -half), (pt(rat_int(1)), rat_int(-1))],
    )
    .expect("model data");
    DivisorPair::new(dplus, dminus).expect("model pair is valid")
}

/// Classify a valid presentation. Decision order: (i) a hyperbolic pair with
/// vanishing, integral sum is a surface with a unit of nonzero degree
/// (`A^1 x C*` over the affine line, `C* x C*` over the punctured line);
/// (ii) toric recognition; (iii)/(iv) canonical-form matching against the two
/// homogeneous model pairs (swap allowed); (v) a parabolic divisor linearly
/// equivalent to an integral one over the punctured line is `A^1 x C*`;
/// anything else is reported as `Other` with its full invariant bundle.
pub fn recognize(p: &DpdPresentation) -> SurfaceReport {
    let mut report = SurfaceReport {
        case: p.case(),
        curve: p.curve(),
        verdict: Verdict::Other,
        ml: None,
        negative_points: None,
        multiple_fibers: None,
        smooth: None,
        class_group: None,
        class_group_unavailable: None,
        canonical: None,
        canonical_unavailable: None,
        toric: None,
        canonical_form: None,
        witness: None,
    };

    if let Some(pair) = p.pair() {
        if pair.curve() == CurveKind::AffineLine {
            let reason = |e: DpdError| match e {
                DpdError::MultipleFibersPresent => "multiple fibers".to_string(),
                other => other.to_string(),
            };
            report.ml = ml_class(p).ok();
            report.negative_points = Some(negative_points(p).expect("hyperbolic over A^1"));
            report.multiple_fibers = multiple_fibers(p).ok();
            report.smooth = Some(is_smooth(p).expect("hyperbolic over A^1"));
            match class_group(p) {
                Ok(g) => report.class_group = Some(g),
                Err(e) => report.class_group_unavailable = Some(reason(e)),
            }
            match canonical_class(p) {
                Ok(k) => report.canonical = Some(k),
                Err(e) => report.canonical_unavailable = Some(reason(e)),
            }
            report.toric = recognize_toric(p);
        }

        let sum_zero = pair.sum().is_zero();
        let both_integral = pair.dplus().is_integral() && pair.dminus().is_integral();
        if sum_zero && both_integral {
            report.verdict = match pair.curve() {
                CurveKind::AffineLine => Verdict::LineTimesCStar,
                CurveKind::PuncturedLine => Verdict::CStarSquare,
                CurveKind::ProjectiveLine => Verdict::Other,
            };
            if report.verdict != Verdict::Other {
                let zero = QDivisor::zero(pair.curve());
                report.canonical_form = Some(DpdPresentation::hyperbolic(
                    DivisorPair::new(zero.clone(), zero).expect("zero pair is valid"),
                ));
            }
        } else if let Some(t) = report.toric {
            report.verdict = Verdict::Vde(t);
            report.canonical_form = crate::toric::extract_dpd(&t, 1, -1, 0).ok();
        } else if pair.curve() == CurveKind::AffineLine {
            if let Some(w) = pairs_equivalent(pair, &diagonal_complement_pair(), true, true) {
                report.verdict = Verdict::P1xP1MinusDiagonal;
                report.canonical_form = Some(DpdPresentation::hyperbolic(diagonal_complement_pair()));
                report.witness = Some(w);
            } else if let Some(w) = pairs_equivalent(pair, &quadric_complement_pair(), true, true)
            {
                report.verdict = Verdict::P2MinusQuadric;
                report.canonical_form = Some(DpdPresentation::hyperbolic(quadric_complement_pair()));
                report.witness = Some(w);
            }
        }
    } else if p.case() == GradingCase::Parabolic
        && p.curve() == CurveKind::PuncturedLine
        && p.single_divisor().expect("parabolic carries one divisor").is_integral()
    {
        // integral D is principal on C*, so A = C[t, t^-1][u]
        report.verdict = Verdict::LineTimesCStar;
        report.canonical_form = DpdPresentation::parabolic(QDivisor::zero(p.curve())).ok();
    }

    report
}

/// Outcome of comparing two presentations of (conjecturally) one surface.
#[derive(Clone, Debug)]
pub enum UniquenessOutcome {
    /// An explicit witness (swap + linear equivalence + line automorphism)
    /// carrying the right presentation to the left one.
    Equivalent(PairEquivalence),
    /// Both sides are toric models; uniqueness is governed by the
    /// `e = e'` or `e e' = 1 (mod d)` criterion instead.
    ToricIsomorphism {
        left: ToricData,
        right: ToricData,
        isomorphic: bool,
    },
    /// Inequivalent, with an invariant that separates them.
    NotEquivalent { note: String },
    /// Inequivalent although both sides have nontrivial Makar-Limanov
    /// invariant, where a witness must exist; flagged for review.
    CounterexampleCandidate { note: String },
}

#[derive(Clone, Debug)]
pub struct UniquenessReport {
    pub outcome: UniquenessOutcome,
    pub left: SurfaceReport,
    pub right: SurfaceReport,
}

fn invariant_difference(a: &SurfaceReport, b: &SurfaceReport) -> String {
    if a.l() != b.l() {
        return format!("l differs: {:?} vs {:?}", a.l(), b.l());
    }
    if a.class_group != b.class_group {
        return format!(
            "class groups differ: {} vs {}",
            a.class_group.as_ref().map_or("unavailable".into(), |g| g.to_string()),
            b.class_group.as_ref().map_or("unavailable".into(), |g| g.to_string()),
        );
    }
    if a.ml != b.ml {
        return format!("ML classes differ: {:?} vs {:?}", a.ml, b.ml);
    }
    if a.smooth != b.smooth {
        return format!("smoothness differs: {:?} vs {:?}", a.smooth, b.smooth);
    }
    "no witness found by the complete affine search".into()
}

/// Compare two presentations. Toric inputs are compared through the
/// `(d, e)` criterion; hyperbolic pairs through the complete equivalence
/// search, flagging a missing witness as a counterexample candidate whenever
/// the Makar-Limanov invariant says one must exist.
pub fn uniqueness_check(
    p: &DpdPresentation,
    q: &DpdPresentation,
) -> Result<UniquenessReport, ClassifyError> {
    let left = recognize(p);
    let right = recognize(q);
    if let (Some(ta), Some(tb)) = (left.toric, right.toric) {
        return Ok(UniquenessReport {
            outcome: UniquenessOutcome::ToricIsomorphism {
                left: ta,
                right: tb,
                isomorphic: vde_isomorphic(&ta, &tb),
            },
            left,
            right,
        });
    }
    let (Some(pa), Some(pb)) = (p.pair(), q.pair()) else {
        return Err(ClassifyError::Precondition(
            "both presentations must be hyperbolic (or both recognized toric)".into(),
        ));
    };
    let outcome = match pairs_equivalent(pa, pb, true, true) {
        Some(w) => UniquenessOutcome::Equivalent(w),
        None => {
            let note = invariant_difference(&left, &right);
            let ml_nontrivial = |r: &SurfaceReport| {
                matches!(r.ml, Some(MlClass::LinePoly) | Some(MlClass::Full))
            };
            if ml_nontrivial(&left) && ml_nontrivial(&right) {
                UniquenessOutcome::CounterexampleCandidate { note }
            } else {
                UniquenessOutcome::NotEquivalent { note }
            }
        }
    };
    Ok(UniquenessReport {
        outcome,
        left,
        right,
    })
}
