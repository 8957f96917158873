//! Python bindings: a `KernelSpec` class plus module-level helpers.
//! Rationals cross the boundary as `"p/q"` strings and structured results
//! as JSON strings, matching the CLI wire format.

use pyo3::exceptions::{PyValueError, PyZeroDivisionError};
use pyo3::prelude::*;

use cnpd::classify as cls;
use cnpd::dirichlet;
use cnpd::exact::parse_rational;
use cnpd::hp::{to_f64, Complex, Ctx, DEFAULT_PRECISION_BITS};
use cnpd::jsonio;
use cnpd::kernelspec as ks;
use cnpd::variety as var;

fn value_err(err: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(err.to_string())
}

#[pyclass(frozen)]
struct KernelSpec {
    inner: ks::KernelSpec,
}

impl KernelSpec {
    fn build(raw: ks::RawSpec) -> PyResult<Self> {
        Ok(KernelSpec {
            inner: ks::KernelSpec::validate(raw).map_err(value_err)?,
        })
    }
}

#[pymethods]
impl KernelSpec {
    /// KernelSpec(b, n): weights as "p/q" strings, frequencies as integers.
    #[new]
    fn new(b: Vec<String>, n: Vec<u64>) -> PyResult<Self> {
        let weights = b
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>, _>>()
            .map_err(value_err)?;
        KernelSpec::build(ks::RawSpec::new(weights, n))
    }

    /// Parse the JSON spec format {"b": [...], "n": [...]}.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let value: serde_json::Value = serde_json::from_str(text).map_err(value_err)?;
        KernelSpec::build(jsonio::raw_spec_from_value(&value).map_err(value_err)?)
    }

    fn dimension(&self) -> usize {
        self.inner.dimension()
    }

    fn weights(&self) -> Vec<String> {
        self.inner
            .weights()
            .iter()
            .map(cnpd::exact::format_rational)
            .collect()
    }

    fn frequencies(&self) -> Vec<u64> {
        self.inner.frequencies().to_vec()
    }

    fn to_json(&self) -> String {
        jsonio::spec_value(&self.inner).to_string()
    }

    /// Normalization root of the raw data (0 for validated specs).
    #[pyo3(signature = (tol=1e-10, bits=DEFAULT_PRECISION_BITS))]
    fn rho(&self, tol: f64, bits: usize) -> PyResult<f64> {
        let rho = ks::solve_rho(&self.inner.as_raw(), tol, bits).map_err(value_err)?;
        Ok(to_f64(&rho))
    }

    /// Kernel weight expansion as JSON {"limit": N, "coeffs": {...}}.
    fn weight_expansion(&self, limit: u64) -> PyResult<String> {
        if limit == 0 {
            return Err(PyValueError::new_err("limit must be at least 1"));
        }
        Ok(jsonio::coefficients_value(&ks::weight_expansion(&self.inner, limit)).to_string())
    }

    /// Circuits of the frequency data as a JSON list.
    fn circuits(&self) -> PyResult<String> {
        let circuits =
            cnpd::circuits::enumerate_circuits(self.inner.frequencies()).map_err(value_err)?;
        let values: Vec<_> = circuits.iter().map(jsonio::circuit_value).collect();
        Ok(serde_json::Value::Array(values).to_string())
    }

    /// Multiplier variety presentation as JSON.
    fn variety(&self) -> PyResult<String> {
        let v = var::build_variety(&self.inner).map_err(value_err)?;
        Ok(jsonio::variety_value(&v).to_string())
    }

    /// Membership of a point given in CLI syntax ("1/2,1/2,3/16").
    #[pyo3(signature = (point, exact=true, tol=1e-10, bits=DEFAULT_PRECISION_BITS))]
    fn member(&self, point: &str, exact: bool, tol: f64, bits: usize) -> PyResult<bool> {
        let parsed = jsonio::parse_point(point).map_err(value_err)?;
        if parsed.coords.len() != self.inner.dimension() {
            return Err(PyValueError::new_err("point dimension mismatch"));
        }
        let v = var::build_variety(&self.inner).map_err(value_err)?;
        if exact {
            Ok(var::member_exact(&v, &parsed))
        } else {
            let mut ctx = Ctx::new(bits);
            let z = jsonio::gaussian_point_to_complex(&parsed, &mut ctx);
            var::member_numeric(&v, &z, tol, bits).map_err(value_err)
        }
    }

    /// Feature map at s = re + im*i as a list of (re, im) pairs.
    #[pyo3(signature = (re, im=0.0, bits=DEFAULT_PRECISION_BITS))]
    fn feature_map(&self, re: f64, im: f64, bits: usize) -> PyResult<Vec<(f64, f64)>> {
        let ctx = Ctx::new(bits);
        let p = ks::HalfPlanePoint::from_f64(re, im, &ctx);
        let f = ks::feature_map(&self.inner, &p, bits).map_err(value_err)?;
        Ok(f.iter().map(|z| (to_f64(&z.re), to_f64(&z.im))).collect())
    }

    /// Kernel value K(s, u) for s, u given as (re, im) pairs.
    #[pyo3(signature = (s, u, bits=DEFAULT_PRECISION_BITS))]
    fn kernel(&self, s: (f64, f64), u: (f64, f64), bits: usize) -> PyResult<(f64, f64)> {
        let ctx = Ctx::new(bits);
        let sp = ks::HalfPlanePoint::from_f64(s.0, s.1, &ctx);
        let up = ks::HalfPlanePoint::from_f64(u.0, u.1, &ctx);
        let k = ks::kernel_value(&self.inner, &sp, &up, bits).map_err(value_err)?;
        Ok((to_f64(&k.re), to_f64(&k.im)))
    }

    /// Recover the half-plane parameter of an orbit point, or None.
    #[pyo3(signature = (point, tol=1e-10, bits=DEFAULT_PRECISION_BITS))]
    fn invert_point(
        &self,
        point: Vec<(f64, f64)>,
        tol: f64,
        bits: usize,
    ) -> PyResult<Option<(f64, f64)>> {
        let ctx = Ctx::new(bits);
        let z: Vec<Complex> = point
            .iter()
            .map(|&(re, im)| Complex::from_f64(re, im, &ctx))
            .collect();
        let s = var::invert_point(&self.inner, &z, tol, bits).map_err(value_err)?;
        Ok(s.map(|c| (to_f64(&c.re), to_f64(&c.im))))
    }

    fn __repr__(&self) -> String {
        format!(
            "KernelSpec(d={}, n={:?})",
            self.inner.dimension(),
            self.inner.frequencies()
        )
    }
}

/// Similar-pattern test between two validated specs.
#[pyfunction]
fn similar(a: &KernelSpec, b: &KernelSpec) -> PyResult<bool> {
    cls::similar_pattern(&a.inner, &b.inner)
        .map(|r| r.is_some())
        .map_err(value_err)
}

/// Full classification decision; returns the JSON report.
#[pyfunction]
fn classify(a: &KernelSpec, b: &KernelSpec) -> PyResult<String> {
    let report = cls::classify(&a.inner, &b.inner).map_err(value_err)?;
    Ok(jsonio::report_value(&report).to_string())
}

/// Ordered factorization count d_m(n).
#[pyfunction]
fn ordered_factorization_count(m: u32, n: u64) -> PyResult<u128> {
    if m < 1 || n < 1 {
        return Err(PyValueError::new_err("requires m >= 1 and n >= 1"));
    }
    Ok(dirichlet::ordered_factorization_count(m, n))
}

/// CNP sign test on a coefficient file in the JSON wire format; returns
/// (is_cnp_up_to_limit, witness).
#[pyfunction]
fn cnp_check(coefficients_json: &str, limit: u64) -> PyResult<(bool, Option<u64>)> {
    let value: serde_json::Value = serde_json::from_str(coefficients_json).map_err(value_err)?;
    let coeffs = jsonio::coefficients_from_value(&value).map_err(value_err)?;
    let verdict = dirichlet::cnp_check(&coeffs, limit)
        .map_err(|e| PyZeroDivisionError::new_err(e.to_string()))?;
    Ok((verdict.is_cnp_up_to_limit, verdict.witness))
}

/// Normalization root for raw (unnormalized) weight data.
#[pyfunction]
#[pyo3(signature = (b, n, tol=1e-10, bits=DEFAULT_PRECISION_BITS))]
fn rho(b: Vec<String>, n: Vec<u64>, tol: f64, bits: usize) -> PyResult<f64> {
    let weights = b
        .iter()
        .map(|s| parse_rational(s))
        .collect::<Result<Vec<_>, _>>()
        .map_err(value_err)?;
    let raw = ks::RawSpec::new(weights, n);
    raw.check_basic().map_err(value_err)?;
    let root = ks::solve_rho(&raw, tol, bits).map_err(value_err)?;
    Ok(to_f64(&root))
}

#[pymodule]
fn cnpd_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<KernelSpec>()?;
    m.add_function(wrap_pyfunction!(similar, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(ordered_factorization_count, m)?)?;
    m.add_function(wrap_pyfunction!(cnp_check, m)?)?;
    m.add_function(wrap_pyfunction!(rho, m)?)?;
    Ok(())
}
