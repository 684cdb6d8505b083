//! Python bindings: parse a presentation, compute resolutions and
//! certificates, and hand the results to Python as JSON-friendly values.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use koszul::bimodule::{
    build_bimodule_resolution, check_linear_over_enveloping, tensor_down_left, tensor_down_right,
    verify_delta_squared,
};
use koszul::comult::{build_left_resolution, comult_table, verify_h_identity};
use koszul::presentation::parse_with_field;
use koszul::quotient::QuotientAlgebra;
use koszul::report;
use koszul::resolution::{certify_koszul_up_to, compute_resolution};
use koszul::{Error, FieldSpec, Presentation, DEFAULT_SIZE_LIMIT};

fn to_py_err(e: Error) -> PyErr {
    match e {
        Error::Parse { .. } | Error::Validation(_) | Error::NonPrimeCharacteristic(_) => {
            PyValueError::new_err(e.to_string())
        }
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

fn parse_field(field: Option<&str>) -> PyResult<Option<FieldSpec>> {
    match field {
        None => Ok(None),
        Some("Q") => Ok(Some(FieldSpec::Rationals)),
        Some(s) => {
            let inner = s
                .strip_prefix("GF(")
                .and_then(|t| t.strip_suffix(')'))
                .ok_or_else(|| PyValueError::new_err(format!("invalid field `{s}`")))?;
            let p: u64 = inner
                .trim()
                .parse()
                .map_err(|_| PyValueError::new_err(format!("invalid field `{s}`")))?;
            let spec = FieldSpec::PrimeField(p);
            spec.validate().map_err(to_py_err)?;
            Ok(Some(spec))
        }
    }
}

/// A parsed algebra presentation kQ/I.
#[pyclass]
struct Algebra {
    presentation: Presentation,
}

#[pymethods]
impl Algebra {
    /// Parse a presentation from text, optionally overriding the ground
    /// field with "Q" or "GF(p)".
    #[new]
    #[pyo3(signature = (text, field=None))]
    fn new(text: &str, field: Option<&str>) -> PyResult<Self> {
        let presentation = parse_with_field(text, parse_field(field)?).map_err(to_py_err)?;
        Ok(Algebra { presentation })
    }

    #[staticmethod]
    #[pyo3(signature = (path, field=None))]
    fn from_file(path: &str, field: Option<&str>) -> PyResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| PyValueError::new_err(format!("cannot read {path}: {e}")))?;
        Algebra::new(&text, field)
    }

    fn field(&self) -> String {
        self.presentation.field().to_string()
    }

    fn vertices(&self) -> Vec<String> {
        self.presentation.quiver().vertex_names().to_vec()
    }

    fn arrows(&self) -> Vec<(String, String, String)> {
        let q = self.presentation.quiver();
        q.arrows()
            .iter()
            .map(|a| {
                (
                    a.name.clone(),
                    q.vertex_name(a.origin).to_string(),
                    q.vertex_name(a.terminus).to_string(),
                )
            })
            .collect()
    }

    fn is_quadratic(&self) -> bool {
        self.presentation.is_quadratic()
    }

    /// Canonical textual form of the presentation.
    fn canonical_text(&self) -> String {
        self.presentation.to_text()
    }

    /// dim Λ_d for d = 0..=max_degree.
    fn dimensions(&self, max_degree: usize) -> PyResult<Vec<usize>> {
        let alg = QuotientAlgebra::new(&self.presentation, max_degree, DEFAULT_SIZE_LIMIT)
            .map_err(to_py_err)?;
        Ok((0..=max_degree).map(|d| alg.lambda_dim(d)).collect())
    }

    /// Ranks of the minimal resolution terms for levels 0..=levels.
    fn betti(&self, levels: usize) -> PyResult<Vec<usize>> {
        let data = compute_resolution(&self.presentation, levels, DEFAULT_SIZE_LIMIT)
            .map_err(to_py_err)?;
        Ok(data.betti())
    }

    /// Resolution data (generators and differential) as a JSON string.
    fn resolution_json(&self, levels: usize) -> PyResult<String> {
        let data = compute_resolution(&self.presentation, levels, DEFAULT_SIZE_LIMIT)
            .map_err(to_py_err)?;
        Ok(report::to_json_string(&report::resolution_value(&data)))
    }

    /// Comultiplicative constants as a JSON string.
    fn comult_json(&self, levels: usize) -> PyResult<String> {
        let data = compute_resolution(&self.presentation, levels, DEFAULT_SIZE_LIMIT)
            .map_err(to_py_err)?;
        let table = comult_table(&data, levels).map_err(to_py_err)?;
        Ok(report::to_json_string(&report::comult_value(&table)))
    }

    /// Koszulity verdict up to the bounds, as a JSON string.
    fn check_koszul(&self, levels: usize, degree: usize) -> PyResult<String> {
        let verdict = certify_koszul_up_to(&self.presentation, levels, degree, DEFAULT_SIZE_LIMIT)
            .map_err(to_py_err)?;
        Ok(report::to_json_string(&report::verdict_value(&verdict)))
    }

    /// Runs the bimodule pipeline and returns the verdict booleans.
    fn bimodule_checks(&self, levels: usize, degree: usize) -> PyResult<Vec<(String, bool)>> {
        let data = compute_resolution(&self.presentation, levels, DEFAULT_SIZE_LIMIT)
            .map_err(to_py_err)?;
        let table = comult_table(&data, levels).map_err(to_py_err)?;
        let res = build_bimodule_resolution(&table, &data).map_err(to_py_err)?;
        let alg = QuotientAlgebra::new(&self.presentation, degree, DEFAULT_SIZE_LIMIT)
            .map_err(to_py_err)?;
        let left = build_left_resolution(&table, &data);
        Ok(vec![
            (
                "differential_identity".into(),
                verify_h_identity(&table, &data).ok,
            ),
            ("delta_squared".into(), verify_delta_squared(&res, &alg).ok),
            (
                "tensor_down_right".into(),
                tensor_down_right(&res, &table, &data).ok,
            ),
            ("tensor_down_left".into(), tensor_down_left(&res, &left).ok),
            (
                "linear_over_enveloping".into(),
                check_linear_over_enveloping(&res),
            ),
        ])
    }
}

#[pymodule]
fn koszul_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Algebra>()?;
    Ok(())
}
