//! Python bindings: terms and types as opaque values, plus the cellular and
//! model operations. Constants may be given either as a `Signature` or as a
//! comma separated string such as `"a,b"`.

use std::time::Duration;

use lamcell::cellular::{self, CellError};
use lamcell::kernel::{self, KernelError, Signature as CoreSignature, SimpleType, Term as CoreTerm};
use lamcell::model::{self as core_model, ModelConfig, ModelError, Strategy};
use lamcell::oracle::{self, OracleError};
use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;

create_exception!(lamcell_py, LamcellError, PyException, "Base class of all lamcell errors.");
create_exception!(lamcell_py, InputError, LamcellError, "Malformed, ill-typed or unsuitable input.");
create_exception!(lamcell_py, BudgetError, LamcellError, "A resource limit was exceeded.");

fn kernel_err(e: KernelError) -> PyErr {
    InputError::new_err(e.to_string())
}

fn cell_err(e: CellError) -> PyErr {
    match e {
        CellError::Internal(_) => LamcellError::new_err(e.to_string()),
        _ => InputError::new_err(e.to_string()),
    }
}

fn model_err(e: ModelError) -> PyErr {
    match e {
        ModelError::Budget { .. } | ModelError::Timeout => BudgetError::new_err(e.to_string()),
        ModelError::Internal(_) => LamcellError::new_err(e.to_string()),
        _ => InputError::new_err(e.to_string()),
    }
}

fn oracle_err(e: OracleError) -> PyErr {
    match e {
        OracleError::Budget { .. } => BudgetError::new_err(e.to_string()),
        _ => InputError::new_err(e.to_string()),
    }
}

#[pyclass(name = "Signature", module = "lamcell_py", frozen, eq, hash, from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PySignature(CoreSignature);

#[pymethods]
impl PySignature {
    #[new]
    fn new(constants: &str) -> PyResult<Self> {
        CoreSignature::parse(constants).map(PySignature).map_err(kernel_err)
    }

    fn names(&self) -> Vec<String> {
        self.0.names().iter().map(|n| n.to_string()).collect()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Signature('{}')", self.0)
    }
}

#[derive(FromPyObject)]
enum Constants {
    Sig(PySignature),
    Text(String),
}

impl Constants {
    fn get(self) -> PyResult<CoreSignature> {
        match self {
            Constants::Sig(s) => Ok(s.0),
            Constants::Text(t) => CoreSignature::parse(&t).map_err(kernel_err),
        }
    }
}

#[pyclass(name = "Type", module = "lamcell_py", frozen, eq, hash, from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PyType(SimpleType);

#[pymethods]
impl PyType {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        kernel::parse_type(text).map(PyType).map_err(kernel_err)
    }

    #[getter]
    fn arity(&self) -> usize {
        self.0.arity()
    }

    #[getter]
    fn order(&self) -> usize {
        self.0.order()
    }

    fn args(&self) -> Vec<PyType> {
        self.0.args().into_iter().map(PyType).collect()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Type('{}')", self.0)
    }
}

/// A closed or open term in β-normal η-long form. Equality is α-equivalence.
#[pyclass(name = "Term", module = "lamcell_py", frozen, eq, hash, from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PyTerm(CoreTerm);

#[pymethods]
impl PyTerm {
    #[new]
    fn new(text: &str, constants: Constants) -> PyResult<Self> {
        parse_term(text, constants)
    }

    #[getter]
    fn ty(&self) -> PyType {
        PyType(self.0.ty())
    }

    #[getter]
    fn size(&self) -> usize {
        self.0.size()
    }

    fn is_closed(&self) -> bool {
        self.0.is_closed()
    }

    fn constants(&self) -> Vec<String> {
        self.0.constants().iter().map(|c| c.to_string()).collect()
    }

    fn __str__(&self) -> String {
        kernel::print_term(&self.0)
    }

    fn __repr__(&self) -> String {
        format!("Term('{}')", kernel::print_term(&self.0))
    }
}

/// Outcome of an equivalence query. Truthy when the terms are equivalent.
#[pyclass(name = "Verdict", module = "lamcell_py", frozen)]
pub struct PyVerdict(core_model::Verdict);

#[pymethods]
impl PyVerdict {
    #[getter]
    fn equivalent(&self) -> bool {
        self.0.is_equivalent()
    }

    #[getter]
    fn witness(&self) -> Vec<PyTerm> {
        match &self.0 {
            core_model::Verdict::Inequivalent { witness, .. } => witness.iter().cloned().map(PyTerm).collect(),
            core_model::Verdict::Equivalent => Vec::new(),
        }
    }

    /// The constants the two sides reduce to on the witness.
    #[getter]
    fn results(&self) -> Option<(String, String)> {
        match &self.0 {
            core_model::Verdict::Inequivalent { left, right, .. } => Some((left.to_string(), right.to_string())),
            core_model::Verdict::Equivalent => None,
        }
    }

    fn to_json(&self) -> String {
        self.0.to_json().to_string()
    }

    fn __bool__(&self) -> bool {
        self.0.is_equivalent()
    }

    fn __repr__(&self) -> String {
        format!("Verdict({})", self.0.to_json())
    }
}

/// Resource limits plus a cache of representative tables.
#[pyclass(name = "Model", module = "lamcell_py", frozen)]
pub struct PyModel(core_model::Model);

fn parse_strategy(s: &str) -> PyResult<Strategy> {
    match s {
        "exact" => Ok(Strategy::Exact),
        "by-class" | "by_class" => Ok(Strategy::ByClass),
        "auto" => Ok(Strategy::Auto),
        _ => Err(InputError::new_err(format!("unknown strategy `{s}`"))),
    }
}

#[pymethods]
impl PyModel {
    #[new]
    #[pyo3(signature = (strategy = "auto", max_fresh = None, max_entries = None, max_tuples = None, time_limit = None))]
    fn new(
        strategy: &str,
        max_fresh: Option<usize>,
        max_entries: Option<usize>,
        max_tuples: Option<usize>,
        time_limit: Option<f64>,
    ) -> PyResult<Self> {
        let d = ModelConfig::default();
        let time_limit = time_limit
            .map(|s| Duration::try_from_secs_f64(s).map_err(|e| InputError::new_err(e.to_string())))
            .transpose()?;
        Ok(PyModel(core_model::Model::new(ModelConfig {
            strategy: parse_strategy(strategy)?,
            max_fresh: max_fresh.unwrap_or(d.max_fresh),
            max_entries: max_entries.unwrap_or(d.max_entries),
            max_tuples: max_tuples.unwrap_or(d.max_tuples),
            time_limit,
            ..d
        })))
    }

    fn decide_equiv(&self, t: &PyTerm, u: &PyTerm, constants: Constants) -> PyResult<PyVerdict> {
        let sig = constants.get()?;
        self.0.decide_equiv(&t.0, &u.0, &sig).map(PyVerdict).map_err(model_err)
    }

    fn count_classes(&self, ty: &PyType, constants: Constants) -> PyResult<usize> {
        self.0.count_classes(&ty.0, &constants.get()?).map_err(model_err)
    }

    fn canonical_rep(&self, t: &PyTerm, constants: Constants) -> PyResult<PyTerm> {
        self.0.canonical_rep(&t.0, &constants.get()?).map(PyTerm).map_err(model_err)
    }

    /// One representative per class.
    fn class_reps(&self, ty: &PyType, constants: Constants) -> PyResult<Vec<PyTerm>> {
        let reps = self.0.class_reps(&ty.0, &constants.get()?).map_err(model_err)?;
        Ok(reps.into_iter().map(PyTerm).collect())
    }

    /// The full representative table as a JSON document.
    fn representatives(&self, ty: &PyType, constants: Constants) -> PyResult<String> {
        let table = self.0.representatives(&ty.0, &constants.get()?).map_err(model_err)?;
        serde_json::to_string(&table.to_json()).map_err(|e| LamcellError::new_err(e.to_string()))
    }
}

#[pyfunction]
fn parse_type(text: &str) -> PyResult<PyType> {
    PyType::new(text)
}

#[pyfunction]
fn parse_term(text: &str, constants: Constants) -> PyResult<PyTerm> {
    kernel::parse_term(text, &constants.get()?).map(PyTerm).map_err(kernel_err)
}

#[pyfunction]
fn print_term(t: &PyTerm) -> String {
    kernel::print_term(&t.0)
}

#[pyfunction]
fn identity(ty: &PyType) -> PyTerm {
    PyTerm(CoreTerm::identity(&ty.0))
}

/// `t` applied to `args`, normalized.
#[pyfunction]
fn apply(t: &PyTerm, args: Vec<PyTerm>) -> PyResult<PyTerm> {
    let args: Vec<CoreTerm> = args.into_iter().map(|a| a.0).collect();
    kernel::apply(&t.0, &args).map(PyTerm).map_err(kernel_err)
}

#[pyfunction]
fn is_cellular(t: &PyTerm) -> PyResult<bool> {
    cellular::is_cellular(&t.0).map_err(cell_err)
}

#[pyfunction]
fn is_semi_cellular(t: &PyTerm) -> PyResult<bool> {
    cellular::is_semi_cellular(&t.0).map_err(cell_err)
}

#[pyfunction]
fn is_hereditary_cellular(t: &PyTerm) -> PyResult<bool> {
    cellular::is_hereditary_cellular(&t.0).map_err(cell_err)
}

#[pyfunction]
fn cellularize(t: &PyTerm) -> PyResult<PyTerm> {
    cellular::cellularize(&t.0).map(PyTerm).map_err(cell_err)
}

#[pyfunction]
fn cellularize_semi(t: &PyTerm) -> PyResult<PyTerm> {
    cellular::cellularize_semi(&t.0).map(PyTerm).map_err(cell_err)
}

#[pyfunction]
fn stretch(t: &PyTerm, path: Vec<usize>) -> PyResult<PyTerm> {
    cellular::stretch(&t.0, &path).map(PyTerm).map_err(cell_err)
}

#[pyfunction]
fn shrink(t: &PyTerm, outer: Vec<usize>, inner: Vec<usize>, k: usize) -> PyResult<PyTerm> {
    cellular::shrink(&t.0, &outer, &inner, k).map(PyTerm).map_err(cell_err)
}

/// `(outer, inner, k)` for every place where `shrink` applies.
#[pyfunction]
fn shrink_sites(t: &PyTerm) -> Vec<(Vec<usize>, Vec<usize>, usize)> {
    cellular::shrink_sites(&t.0)
        .into_iter()
        .map(|s| (s.outer, s.inner, s.k))
        .collect()
}

#[pyfunction]
fn decide_equiv(t: &PyTerm, u: &PyTerm, constants: Constants) -> PyResult<PyVerdict> {
    core_model::decide_equiv(&t.0, &u.0, &constants.get()?).map(PyVerdict).map_err(model_err)
}

#[pyfunction]
fn count_classes(ty: &PyType, constants: Constants) -> PyResult<usize> {
    core_model::count_classes(&ty.0, &constants.get()?).map_err(model_err)
}

#[pyfunction]
fn canonical_rep(t: &PyTerm, constants: Constants) -> PyResult<PyTerm> {
    core_model::canonical_rep(&t.0, &constants.get()?).map(PyTerm).map_err(model_err)
}

#[pyfunction]
fn enumerate_terms(ty: &PyType, constants: Constants, max_size: usize) -> PyResult<Vec<PyTerm>> {
    let sig = constants.get()?;
    Ok(oracle::enumerate_terms(&ty.0, &sig, max_size).into_iter().map(PyTerm).collect())
}

/// The constant `t w1 .. wn` reduces to, computed by plain β-reduction.
#[pyfunction]
fn eval_ground(t: &PyTerm, args: Vec<PyTerm>) -> PyResult<String> {
    let args: Vec<CoreTerm> = args.into_iter().map(|a| a.0).collect();
    oracle::eval_ground(&t.0, &args).map(|n| n.to_string()).map_err(oracle_err)
}

#[pymodule]
fn lamcell_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add("LamcellError", py.get_type::<LamcellError>())?;
    m.add("InputError", py.get_type::<InputError>())?;
    m.add("BudgetError", py.get_type::<BudgetError>())?;
    m.add_class::<PySignature>()?;
    m.add_class::<PyType>()?;
    m.add_class::<PyTerm>()?;
    m.add_class::<PyVerdict>()?;
    m.add_class::<PyModel>()?;
    m.add_function(wrap_pyfunction!(parse_type, m)?)?;
    m.add_function(wrap_pyfunction!(parse_term, m)?)?;
    m.add_function(wrap_pyfunction!(print_term, m)?)?;
    m.add_function(wrap_pyfunction!(identity, m)?)?;
    m.add_function(wrap_pyfunction!(apply, m)?)?;
    m.add_function(wrap_pyfunction!(is_cellular, m)?)?;
    m.add_function(wrap_pyfunction!(is_semi_cellular, m)?)?;
    m.add_function(wrap_pyfunction!(is_hereditary_cellular, m)?)?;
    m.add_function(wrap_pyfunction!(cellularize, m)?)?;
    m.add_function(wrap_pyfunction!(cellularize_semi, m)?)?;
    m.add_function(wrap_pyfunction!(stretch, m)?)?;
    m.add_function(wrap_pyfunction!(shrink, m)?)?;
    m.add_function(wrap_pyfunction!(shrink_sites, m)?)?;
    m.add_function(wrap_pyfunction!(decide_equiv, m)?)?;
    m.add_function(wrap_pyfunction!(count_classes, m)?)?;
    m.add_function(wrap_pyfunction!(canonical_rep, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_terms, m)?)?;
    m.add_function(wrap_pyfunction!(eval_ground, m)?)?;
    Ok(())
}
