//! Python bindings: `import ybe`.

use std::collections::HashMap;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use ybe_core::brace::{self, AsymmetricParams};
use ybe_core::census::{self as core_census, CensusSpec, Constraint};
use ybe_core::families::{self, RectangularFamilyParams, SquareFamilyParams};
use ybe_core::quotients::{self, QuotientError};
use ybe_core::solution::{self, Witness};
use ybe_core::{LeftBrace, Perm};

fn err(e: impl ToString) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn witness(w: Option<Witness>) -> Option<Vec<usize>> {
    w.map(|w| match w {
        Witness::Row(x) => vec![x],
        Witness::Pair(x, y) => vec![x, y],
        Witness::Triple(x, y, z) => vec![x, y, z],
    })
}

/// An involutive non-degenerate solution, stored as σ-tables on `0..n`.
#[pyclass(name = "Solution", module = "ybe", eq, frozen, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PySolution(solution::Solution);

#[pymethods]
impl PySolution {
    #[new]
    fn new(sigma: Vec<Vec<usize>>) -> PyResult<Self> {
        solution::Solution::from_table(sigma).map(PySolution).map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        solution::Solution::from_json(text).map(PySolution).map_err(err)
    }

    #[staticmethod]
    fn from_cycle_set(dot: Vec<Vec<usize>>) -> PyResult<Self> {
        solution::Solution::from_cycle_set(dot).map(PySolution).map_err(err)
    }

    #[staticmethod]
    fn fixture(name: &str) -> PyResult<Self> {
        families::fixture(name).map(PySolution).map_err(err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    fn table(&self) -> Vec<Vec<usize>> {
        self.0.table()
    }

    fn cycle_set(&self) -> Vec<Vec<usize>> {
        self.0.to_cycle_set()
    }

    fn to_json(&self) -> String {
        self.0.to_json()
    }

    fn apply_r(&self, x: usize, y: usize) -> PyResult<(usize, usize)> {
        if x >= self.0.n() || y >= self.0.n() {
            return Err(err("point out of range"));
        }
        Ok(self.0.apply_r(x, y))
    }

    /// Each σ_x in 1-based cycle notation.
    fn sigma_cycles(&self) -> Vec<String> {
        self.0.sigmas().iter().map(|p| p.to_string()).collect()
    }

    fn group_order(&self) -> PyResult<usize> {
        Ok(self.0.permutation_group().map_err(err)?.order())
    }

    fn is_indecomposable(&self) -> bool {
        self.0.is_indecomposable()
    }

    fn is_irretractable(&self) -> bool {
        self.0.is_irretractable()
    }

    fn is_primitive(&self) -> bool {
        self.0.is_primitive()
    }

    fn is_square_free(&self) -> bool {
        self.0.is_square_free()
    }

    /// False for a single point.
    fn is_simple(&self) -> PyResult<bool> {
        match quotients::is_simple(&self.0) {
            Ok((v, _)) => Ok(v),
            Err(QuotientError::TooSmall) => Ok(false),
            Err(e) => Err(err(e)),
        }
    }

    /// A proper congruence as a list of classes, or None if simple.
    fn congruence_witness(&self) -> PyResult<Option<Vec<Vec<usize>>>> {
        let (_, w) = quotients::is_simple(&self.0).map_err(err)?;
        Ok(w.map(|c| c.classes()))
    }

    fn block_systems(&self) -> Vec<Vec<Vec<usize>>> {
        self.0.block_systems()
    }

    fn multipermutation_level(&self) -> Option<usize> {
        self.0.multipermutation_level()
    }

    fn retract(&self) -> (PySolution, Vec<usize>) {
        let (r, classes) = self.0.retract();
        (PySolution(r), classes)
    }

    fn canonical_form(&self) -> Vec<Vec<usize>> {
        quotients::canonical_form(&self.0)
    }

    /// The solution transported along `x ↦ pi[x]`.
    fn relabel(&self, pi: Vec<usize>) -> PyResult<Self> {
        let p = Perm::new(pi).map_err(err)?;
        if p.degree() != self.0.n() {
            return Err(err("relabeling has the wrong degree"));
        }
        Ok(PySolution(self.0.relabel(&p)))
    }

    fn __len__(&self) -> usize {
        self.0.n()
    }

    fn __repr__(&self) -> String {
        format!("Solution(n={})", self.0.n())
    }
}

/// A finite left brace on `0..order`.
#[pyclass(name = "LeftBrace", module = "ybe", eq, frozen, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyLeftBrace(LeftBrace);

#[pymethods]
impl PyLeftBrace {
    #[new]
    fn new(add: Vec<Vec<usize>>, mul: Vec<Vec<usize>>) -> PyResult<Self> {
        brace::validate_brace(add, mul).map(PyLeftBrace).map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        LeftBrace::from_json(text).map(PyLeftBrace).map_err(err)
    }

    fn to_json(&self) -> String {
        self.0.to_json()
    }

    #[getter]
    fn order(&self) -> usize {
        self.0.order()
    }

    #[getter]
    fn zero(&self) -> usize {
        self.0.zero()
    }

    fn add(&self, a: usize, b: usize) -> usize {
        self.0.add(a, b)
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        self.0.mul(a, b)
    }

    /// `λ_a(b) = −a + a∘b`.
    fn lam(&self, a: usize, b: usize) -> usize {
        self.0.lambda(a, b)
    }

    fn socle(&self) -> Vec<usize> {
        self.0.socle()
    }

    fn star_ideal(&self) -> PyResult<Vec<usize>> {
        self.0.star_ideal().map_err(err)
    }

    fn is_trivial(&self) -> bool {
        self.0.is_trivial()
    }

    fn associated_solution(&self) -> PyResult<PySolution> {
        self.0.associated_solution().map(PySolution).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("LeftBrace(order={})", self.0.order())
    }
}

/// Axiom report for a σ-table: keys valid, involutive, nondegenerate, ybe, witness.
#[pyfunction]
fn validate(py: Python<'_>, table: Vec<Vec<usize>>) -> PyResult<Py<PyAny>> {
    let r = solution::validate(&table).map_err(err)?;
    let d = pyo3::types::PyDict::new(py);
    d.set_item("valid", r.is_valid())?;
    d.set_item("involutive", r.involutive)?;
    d.set_item("nondegenerate", r.nondegenerate)?;
    d.set_item("ybe", r.ybe)?;
    d.set_item("witness", witness(r.failing_witness))?;
    Ok(d.into_any().unbind())
}

#[pyfunction]
fn find_isomorphism(a: PyRef<'_, PySolution>, b: PyRef<'_, PySolution>) -> Option<Vec<usize>> {
    quotients::find_isomorphism(&a.0, &b.0)
}

#[pyfunction]
fn square_solution(n: usize, t: usize, j: Vec<usize>) -> PyResult<PySolution> {
    let (s, _) = families::square_solution(&SquareFamilyParams::new(n, t, j)).map_err(err)?;
    Ok(PySolution(s))
}

#[pyfunction]
fn p2_solution(p: usize, t: usize, j: Vec<usize>) -> PyResult<PySolution> {
    families::p2_solution(p, t, &j).map(PySolution).map_err(err)
}

#[pyfunction]
fn rectangular_solution(m: usize, n: usize) -> PyResult<PySolution> {
    families::rectangular_solution(&RectangularFamilyParams { m, n }).map(PySolution).map_err(err)
}

/// `σ_x = σ` for all `x`, with `σ` given by its image list.
#[pyfunction]
fn permutation_solution(image: Vec<usize>) -> PyResult<PySolution> {
    Ok(PySolution(families::permutation_solution(&Perm::new(image).map_err(err)?)))
}

#[pyfunction]
fn asymmetric_product(n: usize, j: Vec<usize>) -> PyResult<PyLeftBrace> {
    let p = AsymmetricParams::new(n, j).map_err(err)?;
    Ok(PyLeftBrace(brace::asymmetric_product(&p).map_err(err)?.brace))
}

#[pyfunction]
fn permutation_brace(s: PyRef<'_, PySolution>) -> PyResult<PyLeftBrace> {
    Ok(PyLeftBrace(brace::permutation_brace(&s.0).map_err(err)?.brace))
}

type Record = (Vec<Vec<usize>>, HashMap<&'static str, bool>, usize);

fn records(r: Vec<core_census::CensusRecord>) -> Vec<Record> {
    r.into_iter()
        .map(|r| {
            let f = r.flags;
            let flags = HashMap::from([
                ("indecomposable", f.indecomposable),
                ("irretractable", f.irretractable),
                ("square_free", f.square_free),
                ("simple", f.simple),
            ]);
            (r.key, flags, r.count)
        })
        .collect()
}

/// Isomorphism classes of order `n` as `(key, flags, count)` triples.
#[pyfunction]
#[pyo3(signature = (n, require = Vec::new(), jobs = 0))]
fn census(py: Python<'_>, n: usize, require: Vec<String>, jobs: usize) -> PyResult<Vec<Record>> {
    let constraints = require
        .iter()
        .map(|s| s.parse::<Constraint>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(err)?;
    let mut spec = CensusSpec::new(n).with_constraints(&constraints);
    spec.jobs = jobs;
    let out = py.detach(|| core_census::enumerate(&spec)).map_err(err)?;
    Ok(records(out))
}

#[pyfunction]
fn enumerate_block_form(py: Python<'_>, p: usize) -> PyResult<Vec<Record>> {
    Ok(records(py.detach(|| core_census::enumerate_block_form(p)).map_err(err)?))
}

#[pymodule]
fn ybe(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySolution>()?;
    m.add_class::<PyLeftBrace>()?;
    m.add("FIXTURES", families::FIXTURE_NAMES.to_vec())?;
    m.add_function(wrap_pyfunction!(validate, m)?)?;
    m.add_function(wrap_pyfunction!(find_isomorphism, m)?)?;
    m.add_function(wrap_pyfunction!(square_solution, m)?)?;
    m.add_function(wrap_pyfunction!(p2_solution, m)?)?;
    m.add_function(wrap_pyfunction!(rectangular_solution, m)?)?;
    m.add_function(wrap_pyfunction!(permutation_solution, m)?)?;
    m.add_function(wrap_pyfunction!(asymmetric_product, m)?)?;
    m.add_function(wrap_pyfunction!(permutation_brace, m)?)?;
    m.add_function(wrap_pyfunction!(census, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_block_form, m)?)?;
    Ok(())
}
