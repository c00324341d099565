//! Python bindings. Rationals cross the boundary as `p/q` strings and
//! polynomials as infix text in the variable names of a [`Ring`].

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use flagpush::approx::{self, AuditOptions, WeightShape, WeightVector};
use flagpush::certify::{self, FiltrationCertificate, LimitStatus};
use flagpush::gysin::{coefficient_formula, FormulaVariant, ReducedWord, Ring, RootContext};
use flagpush::polyring::{fmt_rat, parse_poly, parse_rat, BigRational, Homogeneity, MultiPoly};

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn rational(s: &str) -> PyResult<BigRational> {
    parse_rat(s).ok_or_else(|| err(format!("'{s}' is not a rational p/q")))
}

fn ring(name: &str) -> PyResult<Ring> {
    match name {
        "xi" => Ok(Ring::Xi),
        "tower" => Ok(Ring::Tower),
        "roots" => Ok(Ring::Roots),
        "base" => Ok(Ring::Base),
        _ => Err(err(format!("unknown ring '{name}': use xi, tower, roots or base"))),
    }
}

fn variant(name: &str) -> PyResult<FormulaVariant> {
    FormulaVariant::from_name(name).ok_or_else(|| err(format!("unknown formula variant '{name}'")))
}

/// An exact polynomial together with the names of its variables.
#[pyclass(name = "Poly", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyPoly {
    inner: MultiPoly,
    names: Vec<String>,
}

impl PyPoly {
    fn same_ring(&self, other: &PyPoly) -> PyResult<()> {
        if self.names != other.names {
            return Err(err("polynomials live in different rings"));
        }
        Ok(())
    }

    fn wrap(&self, inner: MultiPoly) -> PyPoly {
        PyPoly {
            inner,
            names: self.names.clone(),
        }
    }
}

#[pymethods]
impl PyPoly {
    #[new]
    fn new(src: &str, names: Vec<String>) -> PyResult<Self> {
        let inner = parse_poly(src, names.len(), |n| names.iter().position(|x| x == n)).map_err(err)?;
        Ok(PyPoly { inner, names })
    }

    #[getter]
    fn names(&self) -> Vec<String> {
        self.names.clone()
    }

    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    /// Total degree, or `None` for zero and inhomogeneous polynomials.
    fn degree(&self) -> Option<u32> {
        match self.inner.homogeneous_degree() {
            Homogeneity::Degree(d) => Some(d),
            _ => None,
        }
    }

    fn coefficient(&self, exponents: Vec<u32>) -> PyResult<String> {
        Ok(fmt_rat(&self.inner.coefficient_of(&exponents).map_err(err)?))
    }

    fn swap(&self, i: usize, j: usize) -> PyResult<PyPoly> {
        Ok(self.wrap(self.inner.apply_transposition(i, j).map_err(err)?))
    }

    fn __add__(&self, other: &PyPoly) -> PyResult<PyPoly> {
        self.same_ring(other)?;
        Ok(self.wrap(&self.inner + &other.inner))
    }

    fn __sub__(&self, other: &PyPoly) -> PyResult<PyPoly> {
        self.same_ring(other)?;
        Ok(self.wrap(&self.inner - &other.inner))
    }

    fn __mul__(&self, other: &PyPoly) -> PyResult<PyPoly> {
        self.same_ring(other)?;
        Ok(self.wrap(&self.inner * &other.inner))
    }

    fn __pow__(&self, k: u32, _modulo: Option<Py<PyAny>>) -> PyPoly {
        self.wrap(self.inner.pow(k))
    }

    fn __str__(&self) -> String {
        self.inner.to_text(&self.names)
    }

    fn __repr__(&self) -> String {
        format!("Poly('{}')", self.__str__())
    }
}

/// Variable dictionaries and push-forwards for one rank.
#[pyclass(name = "RootContext", frozen)]
struct PyRootContext {
    inner: RootContext,
}

#[pymethods]
impl PyRootContext {
    #[new]
    fn new(r: usize) -> PyResult<Self> {
        Ok(PyRootContext {
            inner: RootContext::new(r).map_err(err)?,
        })
    }

    #[getter]
    fn rank(&self) -> usize {
        self.inner.rank()
    }

    #[getter]
    fn flag_dim(&self) -> u32 {
        self.inner.flag_dim()
    }

    fn var_names(&self, ring_name: &str) -> PyResult<Vec<String>> {
        Ok(self.inner.var_names(ring(ring_name)?))
    }

    /// Parses `src` in the named ring.
    fn poly(&self, src: &str, ring_name: &str) -> PyResult<PyPoly> {
        let ring = ring(ring_name)?;
        Ok(PyPoly {
            inner: self.inner.parse(src, ring).map_err(err)?,
            names: self.inner.var_names(ring),
        })
    }

    /// Tower push-forward of a polynomial in `t`/`xi`, `e` and `a`.
    #[pyo3(signature = (src, zero_c1 = false))]
    fn tower_pushforward(&self, src: &str, zero_c1: bool) -> PyResult<String> {
        let f = self.inner.parse(src, Ring::Xi).map_err(err)?;
        let mut out = self.inner.tower_pushforward_xi(&f).map_err(err)?;
        if zero_c1 {
            out.value = out.at_e1_zero();
        }
        Ok(out.to_text())
    }

    /// Divided-difference push-forward; `word` overrides the reduced word
    /// of the longest permutation.
    #[pyo3(signature = (src, zero_c1 = false, word = None))]
    fn dd_pushforward(&self, src: &str, zero_c1: bool, word: Option<Vec<usize>>) -> PyResult<String> {
        let f = self.inner.parse(src, Ring::Xi).map_err(err)?;
        let roots = self.inner.xi_to_roots(&f).map_err(err)?;
        let word = word.map(ReducedWord).unwrap_or_else(|| self.inner.w0_word().clone());
        let mut out = self.inner.dd_pushforward_with_word(&roots, &word).map_err(err)?;
        if zero_c1 {
            out.value = out.at_e1_zero();
        }
        Ok(out.to_text())
    }

    /// Push-forward along `Gr(s, E)` of a polynomial in `y`, `e` and `a`.
    fn gr_pushforward(&self, src: &str, s: usize) -> PyResult<String> {
        let f = self.inner.parse(src, Ring::Roots).map_err(err)?;
        Ok(self.inner.gr_pushforward(&f, s).map_err(err)?.to_text())
    }

    /// `(alpha, betas)` from the tower oracle.
    fn constants(&self) -> PyResult<(String, Vec<String>)> {
        let rec = approx::constants(&self.inner).map_err(err)?;
        Ok((fmt_rat(&rec.alpha_oracle), rec.beta_oracle.iter().map(fmt_rat).collect()))
    }
}

/// `(value, verdict)` of a closed coefficient formula on a polynomial in
/// `t1..t(r-1)`.
#[pyfunction]
fn formula(src: &str, r: usize, variant_name: &str) -> PyResult<(String, String)> {
    let names: Vec<String> = (1..r).map(|i| format!("t{i}")).collect();
    let f = parse_poly(src, names.len(), |n| names.iter().position(|x| x == n)).map_err(err)?;
    let out = coefficient_formula(&f, r, variant(variant_name)?).map_err(err)?;
    let verdict = serde_json::to_value(out.verdict).map_err(err)?;
    Ok((fmt_rat(&out.value), verdict.as_str().unwrap_or_default().to_string()))
}

fn weights(r: usize, shape: &str) -> PyResult<Vec<u32>> {
    shape.parse::<WeightShape>().and_then(|s| s.weights(r)).map_err(err)
}

#[pyfunction]
fn weighted_degree(r: usize, shape: &str) -> PyResult<String> {
    let w = WeightVector::new(r, weights(r, shape)?, 1, 1).map_err(err)?;
    Ok(fmt_rat(&approx::weighted_degree(&w).map_err(err)?))
}

#[pyfunction]
fn quotient_coefficients(r: usize, shape: &str) -> PyResult<Vec<String>> {
    let w = WeightVector::new(r, weights(r, shape)?, 1, 1).map_err(err)?;
    Ok(approx::quotient_coefficients(&w).map_err(err)?.iter().map(fmt_rat).collect())
}

#[pyfunction]
fn am_value(r: usize, alpha: &str, beta: &str, m: u32) -> PyResult<String> {
    Ok(fmt_rat(&approx::am_value(r, &rational(alpha)?, &rational(beta)?, m).map_err(err)?))
}

#[pyfunction]
fn deg_fm_value(r: usize, alpha: &str, m: u32, n: u32) -> PyResult<String> {
    Ok(fmt_rat(&approx::deg_fm_value(r, &rational(alpha)?, m, n)))
}

#[pyfunction]
fn grassmann_ratio(r: usize, s: usize, m: u32, n: u32) -> PyResult<String> {
    Ok(fmt_rat(&approx::grassmann_ratio(r, s, m, n).map_err(err)?))
}

/// Audit report as JSON.
#[pyfunction]
#[pyo3(signature = (ranks, seed = 42, samples = 8))]
fn audit(py: Python<'_>, ranks: Vec<usize>, seed: u64, samples: usize) -> PyResult<String> {
    let report = py
        .detach(|| approx::audit(&ranks, AuditOptions { seed, samples }))
        .map_err(err)?;
    Ok(report.to_json())
}

#[pyfunction]
fn table_csv(py: Python<'_>, r: usize, shape: &str, ms: Vec<u32>, ns: Vec<u32>) -> PyResult<String> {
    let shape: WeightShape = shape.parse().map_err(err)?;
    let rows = py.detach(|| approx::table(r, &shape, &ms, &ns)).map_err(err)?;
    approx::rows_to_csv(&rows).map_err(err)
}

/// Certificate JSON built from table rows with a single `n`.
#[pyfunction]
#[pyo3(signature = (r, shape, ms, n, d = 2, mu = "0", ah = "1"))]
fn certificate_from_table(r: usize, shape: &str, ms: Vec<u32>, n: u32, d: usize, mu: &str, ah: &str) -> PyResult<String> {
    let shape: WeightShape = shape.parse().map_err(err)?;
    let rows = approx::table(r, &shape, &ms, &[n]).map_err(err)?;
    let cert = approx::certificate_from_rows(&rows, d, &rational(mu)?, &rational(ah)?).map_err(err)?;
    Ok(cert.to_json())
}

/// `(status, gaps, constant)` of the limit check.
#[pyfunction]
fn check_certificate(json: &str) -> PyResult<(String, Vec<String>, Option<String>)> {
    let cert = FiltrationCertificate::from_json(json).map_err(err)?;
    let rep = certify::check_limit_hypothesis(&cert).map_err(err)?;
    let status = match rep.status {
        LimitStatus::Holds => "HOLDS",
        LimitStatus::Fails => "FAILS",
    };
    Ok((
        status.to_string(),
        rep.gaps.iter().map(fmt_rat).collect(),
        rep.constant.as_ref().map(fmt_rat),
    ))
}

/// `(threshold, accepted)`.
#[pyfunction]
fn gap_check(epsilon: &str, r: usize) -> PyResult<(String, bool)> {
    let v = certify::gap_check(&rational(epsilon)?, r).map_err(err)?;
    Ok((fmt_rat(&v.threshold), v.accepted))
}

/// `(c1A, c1E)` coefficients.
#[pyfunction]
fn compose_cover(a: &str, s: usize, r: usize) -> PyResult<(String, String)> {
    let c = certify::compose_cover(&rational(a)?, s, r).map_err(err)?;
    Ok((fmt_rat(&c.c1a), fmt_rat(&c.c1e)))
}

#[pyfunction]
fn frobenius_scale(json: &str, p: u64, n: u32) -> PyResult<String> {
    let cert = FiltrationCertificate::from_json(json).map_err(err)?;
    Ok(certify::frobenius_scale(&cert, p, n).map_err(err)?.to_json())
}

/// `(c2, delta, numerically_flat, violations)` for `L + L^{-1}`.
#[pyfunction]
fn example_surface_invariants(l_sq: &str, l_dot_h: &str) -> PyResult<(String, String, bool, Vec<String>)> {
    let inv = certify::example_surface_invariants(&rational(l_sq)?, &rational(l_dot_h)?);
    Ok((fmt_rat(&inv.c2), fmt_rat(&inv.delta), inv.numerically_flat, inv.violations))
}

#[pymodule]
mod flagpush_py {
    #[pymodule_export]
    use super::{
        am_value, audit, certificate_from_table, check_certificate, compose_cover, deg_fm_value,
        example_surface_invariants, formula, frobenius_scale, gap_check, grassmann_ratio,
        quotient_coefficients, table_csv, weighted_degree, PyPoly, PyRootContext,
    };
}
