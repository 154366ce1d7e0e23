//! Python bindings. Weights are tuples of ints in fundamental-weight
//! coordinates, coroot elements tuples in simple-coroot coordinates and
//! torus coordinates `fractions.Fraction`.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_rational::Rational64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyComplex, PyDict, PyList, PyTuple};

use alcove_core::affine_weyl::{affine_fold, finite_fold, FoldOutcome};
use alcove_core::characters::FormalCharacter;
use alcove_core::lattice_cocycle::{GroupElem, Phase, TorusElem, TwistedLatticeGroup, Variant};
use alcove_core::twisted_group_algebra as tga;
use alcove_core::verify::{self, Suite, VerifyConfig};
use alcove_core::{fht_map, verlinde, CorootElem, LieType, Weight};

fn err(e: alcove_core::Error) -> PyErr {
    use alcove_core::Error as E;
    match e {
        E::Internal(_) | E::FoldGuard { .. } | E::NotAlternating { .. } | E::OracleDisagreement { .. } => {
            PyRuntimeError::new_err(e.to_string())
        }
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn tuple<'py>(py: Python<'py>, v: &[i64]) -> PyResult<Bound<'py, PyTuple>> {
    PyTuple::new(py, v)
}

fn json_to_py<'py, T: serde::Serialize>(py: Python<'py>, v: &T) -> PyResult<Bound<'py, PyAny>> {
    let s = serde_json::to_string(v).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (s,))
}

fn character_dict<'py>(py: Python<'py>, fc: &FormalCharacter) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    for (w, m) in fc.terms() {
        d.set_item(tuple(py, &w.0)?, m)?;
    }
    Ok(d)
}

fn fraction<'py>(py: Python<'py>, q: Rational64) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?
        .getattr("Fraction")?
        .call1((*q.numer(), *q.denom()))
}

fn rational(x: &Bound<'_, PyAny>) -> PyResult<Rational64> {
    let s = x.str()?.to_string();
    Rational64::from_str(s.trim()).map_err(|_| PyValueError::new_err(format!("not a rational number: {s}")))
}

#[pyclass(name = "RootSystem", module = "alcove", skip_from_py_object)]
#[derive(Clone)]
pub struct PyRootSystem {
    inner: alcove_core::RootSystem,
}

#[pymethods]
impl PyRootSystem {
    #[new]
    fn new(lie_type: &str) -> PyResult<Self> {
        let t = LieType::from_str(lie_type).map_err(err)?;
        Ok(PyRootSystem {
            inner: alcove_core::RootSystem::new(t).map_err(err)?,
        })
    }

    #[getter]
    fn lie_type(&self) -> String {
        self.inner.lie_type.to_string()
    }

    #[getter]
    fn rank(&self) -> usize {
        self.inner.rank()
    }

    #[getter]
    fn h_dual(&self) -> i64 {
        self.inner.h_dual
    }

    #[getter]
    fn rho<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyTuple>> {
        tuple(py, &self.inner.rho.0)
    }

    #[getter]
    fn theta<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyTuple>> {
        tuple(py, &self.inner.theta.0)
    }

    #[getter]
    fn theta_coroot<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyTuple>> {
        tuple(py, &self.inner.theta_coroot.0)
    }

    #[getter]
    fn cartan(&self) -> Vec<Vec<i64>> {
        self.inner.cartan.clone()
    }

    #[getter]
    fn gram_coroot(&self) -> Vec<Vec<i64>> {
        self.inner.gram_coroot.clone()
    }

    #[getter]
    fn positive_roots<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyTuple>>> {
        self.inner.positive_roots.iter().map(|r| tuple(py, &r.0)).collect()
    }

    #[getter]
    fn positive_coroots<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyTuple>>> {
        self.inner.positive_coroots.iter().map(|r| tuple(py, &r.0)).collect()
    }

    #[getter]
    fn weyl_group_order(&self) -> usize {
        self.inner.weyl_group_order()
    }

    fn dimension(&self, weight: Vec<i64>) -> PyResult<i64> {
        let w = self.weight(weight)?;
        if !self.inner.is_dominant(&w) {
            return Err(err(alcove_core::Error::NotDominant(w)));
        }
        Ok(self.inner.weyl_dimension(&w))
    }

    fn level_weights<'py>(&self, py: Python<'py>, k: i64) -> PyResult<Vec<Bound<'py, PyTuple>>> {
        verlinde::level_weights(&self.inner, k)
            .weights
            .iter()
            .map(|w| tuple(py, &w.0))
            .collect()
    }

    /// `(weight, sign)`, or `None` on a wall.
    fn fold<'py>(&self, py: Python<'py>, weight: Vec<i64>, level: i64) -> PyResult<Option<(Bound<'py, PyTuple>, i64)>> {
        let w = self.weight(weight)?;
        outcome(py, affine_fold(&self.inner, &w, level).map_err(err)?)
    }

    fn finite_fold<'py>(&self, py: Python<'py>, weight: Vec<i64>) -> PyResult<Option<(Bound<'py, PyTuple>, i64)>> {
        let w = self.weight(weight)?;
        outcome(py, finite_fold(&self.inner, &w))
    }

    /// Weight multiplicities of the irreducible module.
    fn weights<'py>(&self, py: Python<'py>, highest: Vec<i64>) -> PyResult<Bound<'py, PyDict>> {
        let w = self.weight(highest)?;
        let ws = verlinde::freudenthal_weights(&self.inner, &w).map_err(err)?;
        character_dict(py, &ws.character())
    }

    fn tensor<'py>(&self, py: Python<'py>, lam: Vec<i64>, mu: Vec<i64>) -> PyResult<Bound<'py, PyDict>> {
        let (a, b) = (self.weight(lam)?, self.weight(mu)?);
        let dec = verlinde::tensor_decompose(&self.inner, &a, &b).map_err(err)?;
        let d = PyDict::new(py);
        for (w, m) in dec {
            d.set_item(tuple(py, &w.0)?, m)?;
        }
        Ok(d)
    }

    fn fusion(&self, lam: Vec<i64>, mu: Vec<i64>, k: i64) -> PyResult<FusionElement> {
        let (a, b) = (self.weight(lam)?, self.weight(mu)?);
        let inner = verlinde::fusion(&self.inner, &a, &b, k).map_err(err)?;
        Ok(self.fusion_element(inner))
    }

    /// `{(lam, mu): FusionElement}` over all level-k pairs.
    fn fusion_table<'py>(&self, py: Python<'py>, k: i64) -> PyResult<Bound<'py, PyDict>> {
        let table = verlinde::fusion_table(&self.inner, k).map_err(err)?;
        let d = PyDict::new(py);
        for (a, b, f) in table {
            let key = (tuple(py, &a.0)?, tuple(py, &b.0)?);
            d.set_item(key, Py::new(py, self.fusion_element(f))?)?;
        }
        Ok(d)
    }

    fn fusion_basis(&self, lam: Vec<i64>, k: i64) -> PyResult<FusionElement> {
        let w = self.weight(lam)?;
        if !verlinde::is_level_weight(&self.inner, &w, k) {
            return Err(err(alcove_core::Error::NotLevelWeight { weight: w, k }));
        }
        Ok(self.fusion_element(verlinde::FusionElement::basis(k, w)))
    }

    fn s_matrix(&self, k: i64) -> PyResult<SMatrix> {
        Ok(SMatrix {
            rs: self.inner.clone(),
            inner: verlinde::s_matrix(&self.inner, k).map_err(err)?,
        })
    }

    /// Truncated formal character of the FHT generator for `lam` at level k.
    #[pyo3(signature = (lam, k, window = 10))]
    fn fht_image<'py>(&self, py: Python<'py>, lam: Vec<i64>, k: i64, window: i64) -> PyResult<Bound<'py, PyDict>> {
        let w = self.weight(lam)?;
        character_dict(py, &fht_map::fht_image(&self.inner, &w, k, window).map_err(err)?)
    }

    /// Recover the fusion-ring element from a windowed alternating character.
    #[pyo3(signature = (character, k, window = 10))]
    fn inverse_fht(&self, character: BTreeMap<Vec<i64>, i64>, k: i64, window: i64) -> PyResult<FusionElement> {
        let fc = FormalCharacter::from_terms(character.into_iter().map(|(w, m)| (Weight(w), m)));
        let level = k + self.inner.h_dual;
        let ac = alcove_core::characters::restrict_to_alcove(&self.inner, &fc, level, window).map_err(err)?;
        Ok(self.fusion_element(fht_map::inverse_fht(&self.inner, &ac).map_err(err)?))
    }

    /// Product in the basic (`"bas"`) or trivial (`"triv"`) group law.
    /// Elements are `(t, eta, z)` with rational `t` and `z`.
    #[pyo3(signature = (g1, g2, level, variant = "bas"))]
    fn group_multiply<'py>(
        &self,
        py: Python<'py>,
        g1: &Bound<'py, PyAny>,
        g2: &Bound<'py, PyAny>,
        level: i64,
        variant: &str,
    ) -> PyResult<Bound<'py, PyTuple>> {
        let v = match variant {
            "bas" => Variant::Bas,
            "triv" => Variant::Triv,
            other => return Err(PyValueError::new_err(format!("unknown variant {other:?}"))),
        };
        let (a, b) = (self.group_elem(g1, level)?, self.group_elem(g2, level)?);
        let g = TwistedLatticeGroup::new(&self.inner);
        group_elem_py(py, &g.multiply(&a, &b, v).map_err(err)?)
    }

    /// The isomorphism from the trivial law to the basic one.
    fn psi<'py>(&self, py: Python<'py>, g: &Bound<'py, PyAny>, level: i64) -> PyResult<Bound<'py, PyTuple>> {
        let x = self.group_elem(g, level)?;
        group_elem_py(py, &TwistedLatticeGroup::new(&self.inner).psi(&x))
    }

    fn theta_element(&self, level: i64, terms: Vec<(Vec<i64>, Vec<i64>, i64)>) -> PyResult<ThetaElement> {
        let mut inner = tga::ThetaElement::zero(level);
        for (eta, mu, c) in terms {
            let eta = CorootElem(eta);
            self.inner.check_coroot(&eta).map_err(err)?;
            inner.add_term(eta, self.weight(mu)?, c);
        }
        Ok(ThetaElement {
            rs: self.inner.clone(),
            inner,
        })
    }

    fn __repr__(&self) -> String {
        format!("RootSystem('{}')", self.inner.lie_type)
    }
}

impl PyRootSystem {
    fn weight(&self, v: Vec<i64>) -> PyResult<Weight> {
        let w = Weight(v);
        self.inner.check_weight(&w).map_err(err)?;
        Ok(w)
    }

    fn fusion_element(&self, inner: verlinde::FusionElement) -> FusionElement {
        FusionElement {
            rs: self.inner.clone(),
            inner,
        }
    }

    fn group_elem(&self, g: &Bound<'_, PyAny>, level: i64) -> PyResult<GroupElem> {
        let (t, eta, z): (Vec<Bound<'_, PyAny>>, Vec<i64>, Bound<'_, PyAny>) = g.extract()?;
        let t: Vec<Rational64> = t.iter().map(rational).collect::<PyResult<_>>()?;
        self.inner.check_dim(t.len()).map_err(err)?;
        let eta = CorootElem(eta);
        self.inner.check_coroot(&eta).map_err(err)?;
        Ok(GroupElem::new(TorusElem::new(t), eta, Phase::new(rational(&z)?), level))
    }
}

fn outcome(py: Python<'_>, o: FoldOutcome) -> PyResult<Option<(Bound<'_, PyTuple>, i64)>> {
    Ok(match o {
        FoldOutcome::Boundary => None,
        FoldOutcome::Interior { weight, sign } => Some((tuple(py, &weight.0)?, sign)),
    })
}

fn group_elem_py<'py>(py: Python<'py>, g: &GroupElem) -> PyResult<Bound<'py, PyTuple>> {
    let t = PyList::empty(py);
    for &x in g.t.coords() {
        t.append(fraction(py, x)?)?;
    }
    PyTuple::new(
        py,
        [t.into_any(), tuple(py, &g.eta.0)?.into_any(), fraction(py, g.z.value())?],
    )
}

/// Element of the level-k fusion ring.
#[pyclass(module = "alcove", skip_from_py_object)]
#[derive(Clone)]
pub struct FusionElement {
    rs: alcove_core::RootSystem,
    inner: verlinde::FusionElement,
}

#[pymethods]
impl FusionElement {
    #[getter]
    fn k(&self) -> i64 {
        self.inner.k
    }

    #[getter]
    fn coeffs<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let d = PyDict::new(py);
        for (w, c) in &self.inner.coeffs {
            d.set_item(tuple(py, &w.0)?, c)?;
        }
        Ok(d)
    }

    fn __getitem__(&self, weight: Vec<i64>) -> i64 {
        self.inner.get(&Weight(weight))
    }

    fn __add__(&self, other: &FusionElement) -> PyResult<FusionElement> {
        if self.inner.k != other.inner.k {
            return Err(err(alcove_core::Error::LevelMismatch(self.inner.k, other.inner.k)));
        }
        Ok(self.with(self.inner.add(&other.inner)))
    }

    fn __mul__(&self, other: &FusionElement) -> PyResult<FusionElement> {
        Ok(self.with(self.inner.multiply(&self.rs, &other.inner).map_err(err)?))
    }

    fn __eq__(&self, other: &FusionElement) -> bool {
        self.inner == other.inner
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner).map_err(|e| PyRuntimeError::new_err(e.to_string()))
    }

    fn __repr__(&self) -> String {
        let parts: Vec<String> = self
            .inner
            .coeffs
            .iter()
            .map(|(w, c)| format!("{c}*x{w}"))
            .collect();
        if parts.is_empty() {
            format!("FusionElement(k={}, 0)", self.inner.k)
        } else {
            format!("FusionElement(k={}, {})", self.inner.k, parts.join(" + "))
        }
    }
}

impl FusionElement {
    fn with(&self, inner: verlinde::FusionElement) -> FusionElement {
        FusionElement {
            rs: self.rs.clone(),
            inner,
        }
    }
}

/// Normalised modular S-matrix; rows and columns follow `labels`.
#[pyclass(module = "alcove")]
pub struct SMatrix {
    rs: alcove_core::RootSystem,
    inner: verlinde::SMatrix,
}

#[pymethods]
impl SMatrix {
    #[getter]
    fn k(&self) -> i64 {
        self.inner.k
    }

    #[getter]
    fn labels<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyTuple>>> {
        self.inner.labels.iter().map(|w| tuple(py, &w.0)).collect()
    }

    #[getter]
    fn entries<'py>(&self, py: Python<'py>) -> Vec<Vec<Bound<'py, PyComplex>>> {
        self.inner
            .entries
            .iter()
            .map(|row| row.iter().map(|z| PyComplex::from_doubles(py, z.re, z.im)).collect())
            .collect()
    }

    fn __len__(&self) -> usize {
        self.inner.dim()
    }

    fn max_asymmetry(&self) -> f64 {
        self.inner.max_asymmetry()
    }

    fn unitarity_defect(&self) -> f64 {
        self.inner.unitarity_defect()
    }

    /// Fusion product by the Verlinde formula; returns `(product, deviation)`.
    #[pyo3(signature = (lam, mu, tol = verlinde::VERLINDE_ROUNDING_TOL))]
    fn verlinde_fusion(&self, lam: Vec<i64>, mu: Vec<i64>, tol: f64) -> PyResult<(FusionElement, f64)> {
        let (f, dev) = self
            .inner
            .verlinde_fusion(&Weight(lam), &Weight(mu), tol)
            .map_err(err)?;
        Ok((
            FusionElement {
                rs: self.rs.clone(),
                inner: f,
            },
            dev,
        ))
    }
}

/// Finite combination of theta basis elements `theta_{eta, mu}`.
#[pyclass(module = "alcove", skip_from_py_object)]
#[derive(Clone)]
pub struct ThetaElement {
    rs: alcove_core::RootSystem,
    inner: tga::ThetaElement,
}

#[pymethods]
impl ThetaElement {
    #[getter]
    fn level(&self) -> i64 {
        self.inner.level
    }

    /// `[(eta, mu, coeff)]` in canonical order.
    #[getter]
    fn terms<'py>(&self, py: Python<'py>) -> PyResult<Vec<(Bound<'py, PyTuple>, Bound<'py, PyTuple>, i64)>> {
        self.inner
            .terms
            .iter()
            .map(|((eta, mu), &c)| Ok((tuple(py, &eta.0)?, tuple(py, &mu.0)?, c)))
            .collect()
    }

    fn __mul__(&self, other: &ThetaElement) -> PyResult<ThetaElement> {
        Ok(self.with(tga::theta_multiply(&self.rs, &self.inner, &other.inner).map_err(err)?))
    }

    fn __add__(&self, other: &ThetaElement) -> PyResult<ThetaElement> {
        Ok(self.with(self.inner.add(&other.inner).map_err(err)?))
    }

    fn __eq__(&self, other: &ThetaElement) -> bool {
        self.inner == other.inner
    }

    fn star(&self) -> ThetaElement {
        self.with(tga::theta_star(&self.rs, &self.inner))
    }

    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    /// Dense blocks of the windowed matrix model, keyed by coset representative.
    #[pyo3(signature = (window = 2))]
    fn matrix_model<'py>(&self, py: Python<'py>, window: i64) -> PyResult<Bound<'py, PyDict>> {
        let m = tga::matrix_model(&self.rs, &self.inner, window).map_err(err)?;
        let d = PyDict::new(py);
        for (rep, block) in m.reps.iter().zip(&m.blocks) {
            d.set_item(tuple(py, &rep.0)?, block.clone())?;
        }
        Ok(d)
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner).map_err(|e| PyRuntimeError::new_err(e.to_string()))
    }

    fn __repr__(&self) -> String {
        format!("ThetaElement(level={}, terms={})", self.inner.level, self.inner.terms.len())
    }
}

impl ThetaElement {
    fn with(&self, inner: tga::ThetaElement) -> ThetaElement {
        ThetaElement {
            rs: self.rs.clone(),
            inner,
        }
    }
}

/// Run invariant suites and return the reports as plain dicts.
#[pyfunction]
#[pyo3(signature = (suites = None, lie_type = None, k = None, level = None, seed = 0, cases = None))]
fn run_verify<'py>(
    py: Python<'py>,
    suites: Option<Vec<String>>,
    lie_type: Option<&str>,
    k: Option<i64>,
    level: Option<i64>,
    seed: u64,
    cases: Option<usize>,
) -> PyResult<Bound<'py, PyAny>> {
    let suites: Vec<Suite> = match suites {
        None => Suite::ALL.to_vec(),
        Some(names) => names
            .iter()
            .map(|s| Suite::from_str(s).map_err(|e| PyValueError::new_err(e.to_string())))
            .collect::<PyResult<_>>()?,
    };
    let cfg = VerifyConfig {
        lie_type: lie_type.map(LieType::from_str).transpose().map_err(err)?,
        k,
        level,
        seed,
        cases,
        ..VerifyConfig::default()
    };
    let reports = verify::run_suites(&suites, &cfg).map_err(err)?;
    json_to_py(py, &reports)
}

/// Persist weight systems under `path`; only the first call has an effect.
#[pyfunction]
fn set_cache_dir(path: std::path::PathBuf) -> bool {
    verlinde::set_global_cache_dir(path)
}

#[pymodule]
fn alcove(m: &Bound<'_, PyModule>) -> PyResult<()> {
    register(m)
}

/// Add the classes and functions to `m`; also used to embed the module.
pub fn register(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PyRootSystem>()?;
    m.add_class::<FusionElement>()?;
    m.add_class::<SMatrix>()?;
    m.add_class::<ThetaElement>()?;
    m.add_function(wrap_pyfunction!(run_verify, m)?)?;
    m.add_function(wrap_pyfunction!(set_cache_dir, m)?)?;
    Ok(())
}
