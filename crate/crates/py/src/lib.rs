//! Python bindings: presentations, toric surfaces, derivations and integer
//! normal forms, mirroring the `cstar` CLI surface. Complex values cross the
//! boundary as JSON or display strings; rationals stay exact as `"a/b"`.

use num::BigInt;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use cstar_core::classify::{recognize, uniqueness_check};
use cstar_core::deriv::{
    self, parse_derivation, LndVerdict, PolyDerivation, WeightGrading,
};
use cstar_core::divisor::pairs_equivalent;
use cstar_core::dpd::{self, DpdPresentation, GradedComponent};
use cstar_core::exactmath::{smith_normal_form, IntMatrix};
use cstar_core::schema::{PresentationDoc, SurfaceReportDoc, UniquenessDoc, WitnessDoc};
use cstar_core::toric;

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A validated DPD presentation.
#[pyclass(name = "Presentation", skip_from_py_object)]
#[derive(Clone)]
struct PyPresentation {
    inner: DpdPresentation,
}

#[pymethods]
impl PyPresentation {
    /// Parse and validate a presentation JSON document.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let doc = PresentationDoc::from_json(text).map_err(value_err)?;
        let inner = doc.to_presentation().map_err(value_err)?;
        Ok(PyPresentation { inner })
    }

    fn to_json(&self) -> String {
        PresentationDoc::from_presentation(&self.inner).to_json()
    }

    #[getter]
    fn case(&self) -> &'static str {
        self.inner.case().name()
    }

    #[getter]
    fn curve(&self) -> &'static str {
        self.inner.curve().name()
    }

    /// Full classification report as JSON.
    fn classify_json(&self) -> String {
        SurfaceReportDoc::from_report(&recognize(&self.inner)).to_json()
    }

    /// Classification verdict tag alone.
    fn verdict(&self) -> String {
        recognize(&self.inner).verdict.to_string()
    }

    /// "Trivial" | "LinePoly" | "Full", or None when the criterion does not
    /// apply (non-hyperbolic case or vanishing sum).
    fn ml_class(&self) -> Option<&'static str> {
        dpd::ml_class(&self.inner).ok().map(|m| m.name())
    }

    fn negative_point_count(&self) -> PyResult<usize> {
        Ok(dpd::negative_points(&self.inner).map_err(value_err)?.len())
    }

    /// `[(point, multiplicity), ...]` with points as exact strings.
    fn multiple_fibers(&self) -> PyResult<Vec<(String, u64)>> {
        Ok(dpd::multiple_fibers(&self.inner)
            .map_err(value_err)?
            .into_iter()
            .map(|f| (cstar_core::rational_string(&f.point), f.multiplicity))
            .collect())
    }

    fn is_smooth(&self) -> PyResult<bool> {
        dpd::is_smooth(&self.inner).map_err(value_err)
    }

    /// `(free_rank, [torsion, ...])` with torsion as Python ints.
    fn class_group(&self) -> PyResult<(usize, Vec<BigInt>)> {
        let g = dpd::class_group(&self.inner).map_err(value_err)?;
        Ok((g.free_rank, g.torsion))
    }

    fn canonical_trivial(&self) -> PyResult<bool> {
        Ok(dpd::canonical_class(&self.inner).map_err(value_err)?.trivial)
    }

    /// The degree-`i` piece: a single generator string, or the basis list in
    /// the elliptic case.
    fn graded_component(&self, i: i64) -> PyResult<Vec<String>> {
        match dpd::graded_component(&self.inner, i).map_err(value_err)? {
            GradedComponent::Generator(g) => Ok(vec![g.function.to_string()]),
            GradedComponent::Basis(b) => Ok(b.iter().map(|f| f.to_string()).collect()),
        }
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.inner)
    }
}

/// The toric model `V_{d,e}`.
#[pyclass(name = "ToricSurface", skip_from_py_object)]
#[derive(Clone)]
struct PyToricSurface {
    inner: toric::ToricData,
}

#[pymethods]
impl PyToricSurface {
    #[new]
    fn new(d: u64, e: u64) -> PyResult<Self> {
        Ok(PyToricSurface {
            inner: toric::ToricData::new(d, e).map_err(value_err)?,
        })
    }

    /// Parse the CLI syntax "Vd,e".
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(PyToricSurface {
            inner: toric::ToricData::parse(text).map_err(value_err)?,
        })
    }

    #[getter]
    fn d(&self) -> u64 {
        self.inner.d()
    }

    #[getter]
    fn e(&self) -> u64 {
        self.inner.e()
    }

    fn is_isomorphic(&self, other: &PyToricSurface) -> bool {
        toric::vde_isomorphic(&self.inner, &other.inner)
    }

    /// Hilbert basis of the invariant-monomial semigroup.
    fn invariant_basis(&self) -> Vec<(u64, u64)> {
        toric::invariant_basis(&self.inner)
    }

    /// Hyperbolic divisor pair of the grading by weights `(wx, wy)`.
    #[pyo3(signature = (wx, wy, degree_cap = 32))]
    fn extract_dpd(&self, wx: i64, wy: i64, degree_cap: u32) -> PyResult<PyPresentation> {
        Ok(PyPresentation {
            inner: toric::extract_dpd(&self.inner, wx, wy, degree_cap).map_err(value_err)?,
        })
    }

    fn __repr__(&self) -> String {
        self.inner.to_string()
    }

    fn __eq__(&self, other: &PyToricSurface) -> bool {
        self.inner == other.inner
    }
}

/// A derivation of `Q[x,y]` or `Q[t,u,u^-1]`.
#[pyclass(name = "Derivation", skip_from_py_object)]
#[derive(Clone)]
struct PyDerivation {
    inner: PolyDerivation,
}

#[pymethods]
impl PyDerivation {
    /// Parse the text syntax, e.g. `"x dx - y dy"` or `"u^-2 dt"`.
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(PyDerivation {
            inner: parse_derivation(text).map_err(value_err)?,
        })
    }

    fn bracket(&self, other: &PyDerivation) -> PyResult<PyDerivation> {
        Ok(PyDerivation {
            inner: deriv::bracket(&self.inner, &other.inner).map_err(value_err)?,
        })
    }

    /// Nilpotence order if certified within the bound, else None.
    #[pyo3(signature = (bound = 64))]
    fn is_lnd(&self, bound: u32) -> Option<u32> {
        match deriv::is_lnd(&self.inner, bound) {
            LndVerdict::Nilpotent(k) => Some(k),
            LndVerdict::NotNilpotentWithinBound => None,
        }
    }

    /// The exponential automorphism, as `"x -> ..., y -> ..."`.
    #[pyo3(signature = (bound = 64))]
    fn exp(&self, bound: u32) -> PyResult<String> {
        Ok(deriv::exp_auto(&self.inner, bound).map_err(value_err)?.to_string())
    }

    #[pyo3(signature = (other, bound = 64))]
    fn conjugate(&self, other: &PyDerivation, bound: u32) -> PyResult<PyDerivation> {
        Ok(PyDerivation {
            inner: deriv::conjugate(&self.inner, &other.inner, bound).map_err(value_err)?,
        })
    }

    /// `(semisimple, nilpotent)` parts of a linear derivation.
    fn jordan(&self) -> PyResult<(PyDerivation, PyDerivation)> {
        let parts = deriv::jordan_chevalley(&self.inner).map_err(value_err)?;
        Ok((
            PyDerivation {
                inner: parts.semisimple,
            },
            PyDerivation {
                inner: parts.nilpotent,
            },
        ))
    }

    /// Normalization against reference weights: returns
    /// `(c, conjugators, residual, iterations)` with `c` as an exact string
    /// or None.
    #[pyo3(signature = (w1, w2, bound = 64))]
    fn normalize(
        &self,
        w1: i64,
        w2: i64,
        bound: u32,
    ) -> PyResult<(Option<String>, Vec<String>, String, u32)> {
        if w1 == 0 && w2 == 0 {
            return Err(value_err("weights must not both vanish"));
        }
        let n = deriv::normalize_semisimple(&self.inner, WeightGrading::new(w1, w2), bound, 256)
            .map_err(value_err)?;
        Ok((
            n.scale.as_ref().map(cstar_core::rational_string),
            n.conjugators.iter().map(|c| c.to_string()).collect(),
            n.residual.to_string(),
            n.iterations,
        ))
    }

    fn __repr__(&self) -> String {
        self.inner.to_string()
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __eq__(&self, other: &PyDerivation) -> bool {
        self.inner == other.inner
    }
}

/// Smith normal form of an integer matrix: `(s, u, v)` with
/// `u * m * v = s` and `u`, `v` unimodular.
type Rows = Vec<Vec<BigInt>>;

#[pyfunction]
#[pyo3(name = "smith_normal_form")]
fn py_smith_normal_form(rows: Rows) -> PyResult<(Rows, Rows, Rows)> {
    let r = rows.len();
    let c = rows.first().map_or(0, |row| row.len());
    if rows.iter().any(|row| row.len() != c) {
        return Err(value_err("ragged matrix"));
    }
    let m = IntMatrix::new(r, c, rows.into_iter().flatten().collect());
    let snf = smith_normal_form(&m);
    let dump = |m: &IntMatrix| {
        (0..m.rows())
            .map(|i| (0..m.cols()).map(|j| m.get(i, j).clone()).collect())
            .collect()
    };
    Ok((dump(&snf.s), dump(&snf.u), dump(&snf.v)))
}

/// Witness JSON carrying `other` to `target`, or None.
#[pyfunction]
#[pyo3(signature = (target, other, allow_swap = true))]
fn pairs_equivalent_json(
    target: &PyPresentation,
    other: &PyPresentation,
    allow_swap: bool,
) -> PyResult<Option<String>> {
    let (Some(a), Some(b)) = (target.inner.pair(), other.inner.pair()) else {
        return Err(value_err("equivalence search needs two hyperbolic presentations"));
    };
    Ok(pairs_equivalent(a, b, allow_swap, true).map(|w| {
        serde_json::to_string_pretty(&WitnessDoc::from_witness(&w)).expect("witness document")
    }))
}

/// Uniqueness comparison report as JSON.
#[pyfunction]
fn uniqueness_json(a: &PyPresentation, b: &PyPresentation) -> PyResult<String> {
    let report = uniqueness_check(&a.inner, &b.inner).map_err(value_err)?;
    Ok(UniquenessDoc::from_report(&report).to_json())
}

/// Recognize a hyperbolic presentation as a toric model, or None.
#[pyfunction]
fn recognize_toric(p: &PyPresentation) -> Option<PyToricSurface> {
    toric::recognize_toric(&p.inner).map(|inner| PyToricSurface { inner })
}

#[pymodule]
fn cstar_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPresentation>()?;
    m.add_class::<PyToricSurface>()?;
    m.add_class::<PyDerivation>()?;
    m.add_function(wrap_pyfunction!(py_smith_normal_form, m)?)?;
    m.add_function(wrap_pyfunction!(pairs_equivalent_json, m)?)?;
    m.add_function(wrap_pyfunction!(uniqueness_json, m)?)?;
    m.add_function(wrap_pyfunction!(recognize_toric, m)?)?;
    Ok(())
}
