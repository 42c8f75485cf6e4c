//! Acceptance suite: one test per exit criterion, each asserting exact
//! equality (no tolerances anywhere; every quantity is a rational or an
//! integer) and printing a single PASS line. Run with `-- --nocapture` to
//! see the lines.

use std::time::{Duration, Instant};

use num::{BigInt, BigRational, Integer, One, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use cstar_core::classify::{
    diagonal_complement_pair, quadric_complement_pair, recognize, Verdict,
};
use cstar_core::deriv::{
    bracket, conjugate, is_lnd, jordan_chevalley, normalize_semisimple, LndVerdict,
    PolyDerivation, WeightGrading,
};
use cstar_core::divisor::{pt, pullback, shift_pair, AffineMap, CurveKind, DivisorPair, QDivisor};
use cstar_core::dpd::{
    canonical_class, class_group, is_smooth, ml_class, multiple_fibers, negative_points,
    DpdPresentation, MlClass,
};
use cstar_core::exactmath::{FactoredRational, Poly2, RingKind};
use cstar_core::toric::{
    extract_dpd, lattice_invariant, recognize_toric, vde_isomorphic, LatticePair, ToricData,
};

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn rat_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn pass(n: u32, label: &str, elapsed: Duration) {
    println!("acceptance {n} ({label}): PASS in {:.3}s", elapsed.as_secs_f64());
}

fn budget(n: u32, label: &str, elapsed: Duration, limit: Duration) {
    assert!(
        elapsed <= limit,
        "criterion {n} ({label}) exceeded its time budget: {elapsed:?} > {limit:?}"
    );
}

/// Criterion 1: The pair (0, -[1]-[-1]): smooth with determinant -1 at each point,
/// class group Z, trivial canonical class, trivial Makar-Limanov
/// invariant, verdict P1xP1MinusDiagonal.
#[test]
fn criterion_1_diagonal_complement_classification() {
    let start = Instant::now();
    let p = DpdPresentation::hyperbolic(diagonal_complement_pair());

    for d in negative_points(&p).unwrap() {
        assert_eq!(d.determinant(), BigInt::from(-1));
    }
    assert!(is_smooth(&p).unwrap());
    let g = class_group(&p).unwrap();
    assert_eq!(g.free_rank, 1);
    assert!(g.torsion.is_empty());
    assert!(canonical_class(&p).unwrap().trivial);
    assert_eq!(ml_class(&p).unwrap(), MlClass::Trivial);
    let report = recognize(&p);
    assert_eq!(report.verdict, Verdict::P1xP1MinusDiagonal);

    let elapsed = start.elapsed();
    budget(1, "diagonal complement", elapsed, Duration::from_secs(1));
    pass(1, "diagonal complement classification", elapsed);
}

/// Criterion 2: The pair (1/2[0], -1/2[0]-[1]): smooth, trivial ML, exactly one
/// multiple fiber of multiplicity 2 over the origin, verdict P2MinusQuadric.
#[test]
fn criterion_2_quadric_complement_classification() {
    let start = Instant::now();
    let p = DpdPresentation::hyperbolic(quadric_complement_pair());

    assert!(is_smooth(&p).unwrap());
    assert_eq!(ml_class(&p).unwrap(), MlClass::Trivial);
    assert_eq!(negative_points(&p).unwrap().len(), 1);
    let fibers = multiple_fibers(&p).unwrap();
    assert_eq!(fibers.len(), 1);
    assert_eq!(fibers[0].point, rat_int(0));
    assert_eq!(fibers[0].multiplicity, 2);
    let report = recognize(&p);
    assert_eq!(report.verdict, Verdict::P2MinusQuadric);

    let elapsed = start.elapsed();
    budget(2, "quadric complement", elapsed, Duration::from_secs(1));
    pass(2, "quadric complement classification", elapsed);
}

/// `(e_plus, m_plus, e_minus, m_minus)` at one point.
type PointData = (i64, i64, i64, i64);

/// Random smooth point data: m+ > 0 > m-, gcds 1, determinant exactly -1.
/// With the determinant pinned, the sum at the point is 1/(m+ m-) < 0
/// automatically.
fn random_smooth_point(rng: &mut StdRng) -> PointData {
    loop {
        let m_plus = rng.random_range(1i64..=5);
        let e_plus = rng.random_range(-5i64..=5);
        if e_plus.gcd(&m_plus) != 1 {
            continue;
        }
        // solve e+ * X - m+ * Y = -1 for (X, Y) = (m-, e-)
        let eg = BigInt::from(e_plus).extended_gcd(&BigInt::from(m_plus));
        let (s, t) = (
            i64::try_from(&eg.x).unwrap(),
            i64::try_from(&eg.y).unwrap(),
        );
        // e+ * (-s) - m+ * t = -(s e+ + t m+) = -1
        let (x0, y0) = (-s, t);
        let k = -((x0 + m_plus * 100) / m_plus) - rng.random_range(0i64..=3);
        let m_minus = x0 + k * m_plus;
        let e_minus = y0 + k * e_plus;
        if m_minus >= 0 {
            continue;
        }
        debug_assert_eq!(e_plus * m_minus - e_minus * m_plus, -1);
        return (e_plus, m_plus, e_minus, m_minus);
    }
}

/// Smooth point data with the negative denominator forced to a given value
/// (used to hit the canonical-triviality locus on purpose).
fn random_smooth_point_with_m(
    rng: &mut StdRng,
    m_plus: i64,
    m_minus: i64,
) -> Option<PointData> {
    if m_plus <= 0 || m_minus >= 0 || m_plus.gcd(&m_minus) != 1 {
        return None;
    }
    // solve m- * X - m+ * Y = -1 for (X, Y) = (e+, e-):
    // with s*m- + t*m+ = 1, take (X, Y) = (-s, t)
    let eg = BigInt::from(m_minus).extended_gcd(&BigInt::from(m_plus));
    let (s, t) = (
        i64::try_from(&eg.x).unwrap(),
        i64::try_from(&eg.y).unwrap(),
    );
    let (x0, y0) = (-s, t);
    debug_assert_eq!(x0 * m_minus - y0 * m_plus, -1);
    let k = rng.random_range(-3i64..=3);
    let e_plus = x0 + k * m_plus;
    let e_minus = y0 + k * m_minus;
    debug_assert_eq!(e_plus * m_minus - e_minus * m_plus, -1);
    Some((e_plus, m_plus, e_minus, m_minus))
}

fn pair_from_point_data(data: &[(BigRational, PointData)]) -> DivisorPair {
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    for (p, (e_plus, m_plus, e_minus, m_minus)) in data {
        plus.push((pt(p.clone()), rat(-e_plus, *m_plus)));
        minus.push((pt(p.clone()), rat(*e_minus, *m_minus)));
    }
    DivisorPair::new(
        QDivisor::new(CurveKind::AffineLine, plus).unwrap(),
        QDivisor::new(CurveKind::AffineLine, minus).unwrap(),
    )
    .expect("determinant -1 forces a negative sum")
}

/// Criterion 3: On 200 random two-point smooth presentations, triviality of the
/// canonical class (decided by lattice membership through the Smith form)
/// coincides with the integer identity m1+ + m1- = m2+ + m2-, computed
/// straight from the generated data. Zero discrepancies.
#[test]
fn criterion_3_canonical_triviality_cross_check() {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(0xd1ca);
    let mut trivial_seen = 0;
    for sample in 0..200 {
        let p1 = rat(rng.random_range(-6i64..=6), rng.random_range(1i64..=3));
        let p2 = loop {
            let q = rat(rng.random_range(-6i64..=6), rng.random_range(1i64..=3));
            if q != p1 {
                break q;
            }
        };
        let d1 = random_smooth_point(&mut rng);
        // half the corpus is steered onto the m1+ + m1- = m2+ + m2- locus
        let d2 = if sample % 2 == 0 {
            loop {
                let m2p = rng.random_range(1i64..=6);
                let m2m = (d1.1 + d1.3) - m2p;
                if let Some(d) = random_smooth_point_with_m(&mut rng, m2p, m2m) {
                    break d;
                }
            }
        } else {
            random_smooth_point(&mut rng)
        };
        let pres = DpdPresentation::hyperbolic(pair_from_point_data(&[
            (p1.clone(), d1),
            (p2.clone(), d2),
        ]));
        assert!(is_smooth(&pres).unwrap(), "generator must produce smooth data");
        assert_eq!(negative_points(&pres).unwrap().len(), 2);

        // path A: lattice membership of the canonical vector
        let trivial_by_membership = canonical_class(&pres).unwrap().trivial;
        // path B: the integer identity on the raw generated data
        let trivial_by_sums = d1.1 + d1.3 == d2.1 + d2.3;
        assert_eq!(
            trivial_by_membership, trivial_by_sums,
            "discrepancy at sample {sample}: data {d1:?} {d2:?}"
        );
        if trivial_by_membership {
            trivial_seen += 1;
        }
    }
    assert!(trivial_seen >= 50, "the steered half must actually hit the locus");
    pass(3, "canonical-triviality cross-check", start.elapsed());
}

/// Criterion 4: 100 random (diagonal delta, homogeneous LND) pairs with the
/// double-bracket guard verified first: exact conjugation agrees with
/// delta + [delta, d] on the nose. Zero failures, under 10 seconds.
#[test]
fn criterion_4_conjugation_identity_suite() {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(0xb0cc);
    let nonzero = |rng: &mut StdRng| loop {
        let q = rat(rng.random_range(-6i64..=6), rng.random_range(1i64..=3));
        if !q.is_zero() {
            break q;
        }
    };
    for sample in 0..100 {
        let (ring, lnd) = match sample % 3 {
            0 => {
                let k = rng.random_range(0u32..=4);
                let c = nonzero(&mut rng);
                (
                    RingKind::Xy,
                    PolyDerivation::new(
                        RingKind::Xy,
                        Poly2::zero(RingKind::Xy),
                        Poly2::monomial(RingKind::Xy, k, 0, c),
                    ),
                )
            }
            1 => {
                let k = rng.random_range(0u32..=4) as i64;
                let c = nonzero(&mut rng);
                (
                    RingKind::Xy,
                    PolyDerivation::new(
                        RingKind::Xy,
                        Poly2::monomial(RingKind::Xy, 0, k, c),
                        Poly2::zero(RingKind::Xy),
                    ),
                )
            }
            _ => {
                let k = rng.random_range(-3i64..=3);
                let c = nonzero(&mut rng);
                (
                    RingKind::Laurent,
                    PolyDerivation::new(
                        RingKind::Laurent,
                        Poly2::monomial(RingKind::Laurent, 0, k, c),
                        Poly2::zero(RingKind::Laurent),
                    ),
                )
            }
        };
        let delta = PolyDerivation::diagonal(ring, nonzero(&mut rng), nonzero(&mut rng));
        assert!(is_lnd(&lnd, 16).is_nilpotent());
        let inner = bracket(&delta, &lnd).unwrap();
        let guard = bracket(&inner, &lnd).unwrap();
        assert!(guard.is_zero(), "double-bracket guard failed at sample {sample}");
        let conj = conjugate(&delta, &lnd, 16).unwrap();
        assert_eq!(
            conj,
            delta.add(&inner),
            "conjugation identity failed at sample {sample}"
        );
    }
    let elapsed = start.elapsed();
    budget(4, "conjugation identity", elapsed, Duration::from_secs(10));
    pass(4, "conjugation identity suite", elapsed);
}

/// Criterion 5: 100 random chains of 1-3 positive-degree homogeneous LND conjugations
/// applied to the grading derivation of (1, -1): the normalization loop
/// recovers the residual and scale exactly. Zero failures, under 30 seconds.
#[test]
fn criterion_5_normalization_round_trip() {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(0x0616);
    let w = WeightGrading::new(1, -1);
    let delta = PolyDerivation::grading(RingKind::Xy, (1, -1));
    for sample in 0..100 {
        let mut tilde = delta.clone();
        let chain_len = rng.random_range(1usize..=3);
        for _ in 0..chain_len {
            let k = rng.random_range(0u32..=4);
            let c = loop {
                let q = rat(rng.random_range(-4i64..=4), rng.random_range(1i64..=3));
                if !q.is_zero() {
                    break q;
                }
            };
            let eta = PolyDerivation::new(
                RingKind::Xy,
                Poly2::zero(RingKind::Xy),
                Poly2::monomial(RingKind::Xy, k, 0, c),
            );
            tilde = conjugate(&tilde, &eta, 32).unwrap();
        }
        let n = normalize_semisimple(&tilde, w, 32, 64)
            .unwrap_or_else(|e| panic!("normalization failed at sample {sample}: {e}"));
        assert_eq!(n.residual, delta, "wrong residual at sample {sample}");
        assert_eq!(n.scale, Some(rat_int(1)), "wrong scale at sample {sample}");
        for c in &n.conjugators {
            assert!(!c.is_zero());
            assert!(is_lnd(c, 32).is_nilpotent(), "chain element must be a nonzero LND");
        }
    }
    let elapsed = start.elapsed();
    budget(5, "normalization round trip", elapsed, Duration::from_secs(30));
    pass(5, "normalization round trip", elapsed);
}

/// Criterion 6: Linearization demo: 50 diagonal actions (weights a > 0 > b) conjugated
/// by random triangular automorphisms exp(p(x) d/dy) with deg p <= 4 are
/// re-linearized exactly by the normalization loop. 50 out of 50.
#[test]
fn criterion_6_triangular_relinearization() {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(0x6064);
    let mut successes = 0;
    for _ in 0..50 {
        let a = rng.random_range(1i64..=3);
        let b = rng.random_range(-3i64..=-1);
        let delta = PolyDerivation::grading(RingKind::Xy, (a, b));
        let mut poly = Poly2::zero(RingKind::Xy);
        for k in 0..=4u32 {
            if rng.random_bool(0.6) {
                let c = rat(rng.random_range(-5i64..=5), rng.random_range(1i64..=3));
                poly = &poly + &Poly2::monomial(RingKind::Xy, k, 0, c);
            }
        }
        let triangular = PolyDerivation::new(RingKind::Xy, Poly2::zero(RingKind::Xy), poly);
        let tilde = conjugate(&delta, &triangular, 32).unwrap();
        let n = normalize_semisimple(&tilde, WeightGrading::new(a, b), 32, 64)
            .expect("triangular conjugates are in the accessible family");
        if n.residual == delta && n.scale == Some(rat_int(1)) {
            successes += 1;
        }
    }
    assert_eq!(successes, 50, "every triangular conjugate must re-linearize");
    pass(6, "triangular relinearization", start.elapsed());
}

/// Criterion 7: Toric coherence: for every (d, e) with d <= 10 and three weight
/// vectors, recognition inverts extraction up to the (d, e) isomorphism
/// criterion; the lattice normal form is weight-independent; smoothness
/// holds exactly for d = 1; and for d <= 12 the calibration map
/// (d, c) -> class is well-defined and injective. Under 60 seconds.
#[test]
fn criterion_7_toric_coherence() {
    let start = Instant::now();
    let weights = [(1i64, -1i64), (2, -1), (1, -2), (3, -2)];
    for d in 1u64..=10 {
        for e in 0..d.max(1) {
            let Ok(t) = ToricData::new(d, e) else { continue };
            let mut invariants = Vec::new();
            for &(wx, wy) in &weights[..3] {
                let p = extract_dpd(&t, wx, wy, 0).unwrap();
                let r = recognize_toric(&p).expect("model surfaces are recognized");
                assert!(
                    vde_isomorphic(&t, &r),
                    "round trip failed: {t} with weights ({wx},{wy}) gave {r}"
                );
                let data = negative_points(&p).unwrap();
                let lp = LatticePair::from_neg_point(&data[0]).unwrap();
                invariants.push(lattice_invariant(&lp).unwrap());
                assert_eq!(
                    is_smooth(&p).unwrap(),
                    d == 1,
                    "smoothness must characterize d = 1"
                );
            }
            invariants.dedup();
            assert_eq!(
                invariants.len(),
                1,
                "lattice invariant of {t} depends on the weights"
            );
        }
    }
    // calibration injectivity for d <= 12: distinct classes get distinct c
    for d in 1u64..=12 {
        let mut seen: std::collections::BTreeMap<BigInt, u64> = std::collections::BTreeMap::new();
        for e in 0..d.max(1) {
            let Ok(t) = ToricData::new(d, e) else { continue };
            for &(wx, wy) in &weights {
                let p = extract_dpd(&t, wx, wy, 0).unwrap();
                let data = negative_points(&p).unwrap();
                let lp = LatticePair::from_neg_point(&data[0]).unwrap();
                let (dd, c) = lattice_invariant(&lp).unwrap();
                assert_eq!(dd, BigInt::from(d));
                let class = t.iso_class_representative();
                if let Some(prev) = seen.insert(c.clone(), class) {
                    assert_eq!(
                        prev, class,
                        "calibration not well-defined/injective at d = {d}, c = {c}"
                    );
                }
            }
        }
        // injectivity: number of distinct c values = number of classes
        let classes: std::collections::BTreeSet<u64> = seen.values().copied().collect();
        assert_eq!(seen.len(), classes.len(), "calibration collision at d = {d}");
    }
    let elapsed = start.elapsed();
    budget(7, "toric coherence", elapsed, Duration::from_secs(60));
    pass(7, "toric coherence", elapsed);
}

/// Random invertible rational 2x2 change of basis.
fn random_basis(rng: &mut StdRng) -> [[BigRational; 2]; 2] {
    loop {
        let entry = |rng: &mut StdRng| rat(rng.random_range(-4i64..=4), rng.random_range(1i64..=2));
        let p = [
            [entry(rng), entry(rng)],
            [entry(rng), entry(rng)],
        ];
        let det = &p[0][0] * &p[1][1] - &p[0][1] * &p[1][0];
        if !det.is_zero() {
            return p;
        }
    }
}

fn mat_mul(a: &[[BigRational; 2]; 2], b: &[[BigRational; 2]; 2]) -> [[BigRational; 2]; 2] {
    let mut out = [
        [BigRational::zero(), BigRational::zero()],
        [BigRational::zero(), BigRational::zero()],
    ];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = &a[i][0] * &b[0][j] + &a[i][1] * &b[1][j];
        }
    }
    out
}

fn mat_inv(a: &[[BigRational; 2]; 2]) -> [[BigRational; 2]; 2] {
    let det = &a[0][0] * &a[1][1] - &a[0][1] * &a[1][0];
    [
        [&a[1][1] / &det, -&a[0][1] / &det],
        [-&a[1][0] / &det, &a[0][0] / &det],
    ]
}

/// Criterion 8: Jordan decomposition suite on a 200-sample corpus of rational-
/// eigenvalue linear derivations: parts sum to the input, commute, satisfy
/// Leibniz, the nilpotent part dies in at most two steps, and products of
/// semisimple eigenvectors grade correctly. Zero failures.
#[test]
fn criterion_8_jordan_decomposition_suite() {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(0x10bd);
    let ring = RingKind::Xy;
    for sample in 0..200 {
        let l1 = rat(rng.random_range(-5i64..=5), rng.random_range(1i64..=3));
        let defective = sample % 2 == 1;
        let l2 = if defective {
            l1.clone()
        } else {
            rat(rng.random_range(-5i64..=5), rng.random_range(1i64..=3))
        };
        let p = random_basis(&mut rng);
        let j = if defective {
            [
                [l1.clone(), BigRational::one()],
                [BigRational::zero(), l1.clone()],
            ]
        } else {
            [
                [l1.clone(), BigRational::zero()],
                [BigRational::zero(), l2.clone()],
            ]
        };
        let m = mat_mul(&mat_mul(&p, &j), &mat_inv(&p));
        // d(x) = m00 x + m01 y, d(y) = m10 x + m11 y
        let mk = |c0: &BigRational, c1: &BigRational| {
            &Poly2::monomial(ring, 1, 0, c0.clone()) + &Poly2::monomial(ring, 0, 1, c1.clone())
        };
        let delta = PolyDerivation::new(ring, mk(&m[0][0], &m[0][1]), mk(&m[1][0], &m[1][1]));
        let parts = jordan_chevalley(&delta).unwrap_or_else(|e| {
            panic!("rational-eigenvalue input must decompose (sample {sample}): {e}")
        });
        assert_eq!(parts.semisimple.add(&parts.nilpotent), delta);
        assert!(bracket(&parts.semisimple, &parts.nilpotent).unwrap().is_zero());
        // Leibniz residuals on a random product
        let f = &Poly2::monomial(ring, rng.random_range(0..3), rng.random_range(0..3) as i64, rat_int(1))
            + &Poly2::one(ring);
        let g = &Poly2::monomial(ring, rng.random_range(0..3), 1, rat(1, 2)) + &Poly2::gen1(ring);
        for part in [&parts.semisimple, &parts.nilpotent] {
            let lhs = part.apply(&(&f * &g));
            let rhs = &(&part.apply(&f) * &g) + &(&f * &part.apply(&g));
            assert_eq!(lhs, rhs, "Leibniz residual at sample {sample}");
        }
        // nilpotent part vanishes within two steps on the generators
        match is_lnd(&parts.nilpotent, 4) {
            LndVerdict::Nilpotent(k) => assert!(k <= 2, "order {k} > 2 at sample {sample}"),
            LndVerdict::NotNilpotentWithinBound => panic!("nilpotent part not nilpotent"),
        }
        // grading closure: products of eigenvectors are eigenvectors with
        // summed eigenvalues
        let eigenvectors: Vec<(BigRational, Poly2)> = if defective {
            vec![
                (l1.clone(), Poly2::gen1(ring)),
                (l1.clone(), Poly2::gen2(ring)),
            ]
        } else {
            // (alpha, beta) with M^T (alpha, beta) = lambda (alpha, beta)
            let mut vs = Vec::new();
            for lambda in [&parts.eigenvalues.0, &parts.eigenvalues.1] {
                let a = [
                    [&m[0][0] - lambda, m[1][0].clone()],
                    [m[0][1].clone(), &m[1][1] - lambda],
                ];
                let (alpha, beta) = if !a[0][0].is_zero() || !a[0][1].is_zero() {
                    (a[0][1].clone(), -a[0][0].clone())
                } else if !a[1][0].is_zero() || !a[1][1].is_zero() {
                    (a[1][1].clone(), -a[1][0].clone())
                } else {
                    (BigRational::one(), BigRational::zero())
                };
                let v = &Poly2::monomial(ring, 1, 0, alpha) + &Poly2::monomial(ring, 0, 1, beta);
                assert!(!v.is_zero());
                assert_eq!(
                    parts.semisimple.apply(&v),
                    v.scale(lambda),
                    "eigenvector check at sample {sample}"
                );
                vs.push((lambda.clone(), v));
            }
            vs
        };
        let (la, va) = &eigenvectors[0];
        let (lb, vb) = &eigenvectors[1];
        for (i, j) in [(1u32, 1u32), (2, 1), (1, 2), (2, 2), (3, 0)] {
            let mono = &va.pow(i) * &vb.pow(j);
            let weight = la * BigRational::from_integer(i.into())
                + lb * BigRational::from_integer(j.into());
            assert_eq!(
                parts.semisimple.apply(&mono),
                mono.scale(&weight),
                "grading closure at sample {sample}"
            );
        }
    }
    pass(8, "jordan decomposition suite", start.elapsed());
}

/// The invariant bundle that must not move under equivalence moves.
#[derive(Debug, PartialEq, Eq)]
struct InvariantBundle {
    verdict_tag: String,
    ml: Option<MlClass>,
    l: Option<usize>,
    fiber_multiplicities: Vec<u64>,
    smooth: Option<bool>,
    class_group: Option<(usize, Vec<BigInt>)>,
    canonical_trivial: Option<bool>,
}

fn bundle(p: &DpdPresentation) -> InvariantBundle {
    let r = recognize(p);
    let mut fibers: Vec<u64> = r
        .multiple_fibers
        .as_ref()
        .map(|v| v.iter().map(|f| f.multiplicity).collect())
        .unwrap_or_default();
    fibers.sort_unstable();
    InvariantBundle {
        verdict_tag: r.verdict.to_string(),
        ml: r.ml,
        l: r.l(),
        fiber_multiplicities: fibers,
        smooth: r.smooth,
        class_group: r
            .class_group
            .as_ref()
            .map(|g| (g.free_rank, g.torsion.clone())),
        canonical_trivial: r.canonical.as_ref().map(|k| k.trivial),
    }
}

/// Criterion 9: Verdicts and invariants are unchanged by 20 random equivalence moves
/// (principal shift, swap, affine reparametrization) on each golden input.
#[test]
fn criterion_9_move_invariance() {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(0x90b1);
    let goldens: Vec<DivisorPair> = vec![
        diagonal_complement_pair(),
        quadric_complement_pair(),
        // the affine plane and the order-2 and order-3 cones
        pair_from_point_data(&[(rat_int(0), (0, 1, 1, -1))]),
        pair_from_point_data(&[(rat_int(0), (0, 1, 2, -1))]),
        pair_from_point_data(&[(rat_int(0), (-1, 3, 2, -3))]),
    ];
    for golden in goldens {
        let reference = bundle(&DpdPresentation::hyperbolic(golden.clone()));
        let mut current = golden.clone();
        for step in 0..20 {
            // a random principal shift
            let mut factors = Vec::new();
            for _ in 0..rng.random_range(0usize..=2) {
                factors.push((
                    rat(rng.random_range(-3i64..=3), rng.random_range(1i64..=2)),
                    rng.random_range(-2i64..=2),
                ));
            }
            let f = FactoredRational::from_factors(rat_int(1), factors);
            current = shift_pair(&current, &f).unwrap();
            // a random affine reparametrization
            let a = loop {
                let q = rat(rng.random_range(-3i64..=3), rng.random_range(1i64..=2));
                if !q.is_zero() {
                    break q;
                }
            };
            let b = rat(rng.random_range(-3i64..=3), rng.random_range(1i64..=2));
            let map = AffineMap::new(a, b);
            current = DivisorPair::new(
                pullback(current.dplus(), &map),
                pullback(current.dminus(), &map),
            )
            .unwrap();
            // an occasional swap
            if rng.random_bool(0.5) {
                current = current.swap();
            }
            let moved = bundle(&DpdPresentation::hyperbolic(current.clone()));
            assert_eq!(
                moved, reference,
                "invariants moved at step {step} of golden {golden:?}"
            );
        }
    }
    pass(9, "move invariance", start.elapsed());
}
