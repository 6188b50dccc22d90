//! Python bindings: the circular family, its spherical generalization,
//! sampling, fitting, and the self-check suite.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use ewc::sampling::{McmcConfig, SampleBatch};
use ewc::shape::Modality;
use ewc::sphere::{SphereParams, UnitVector};
use ewc::{CircAngle, EwcParams, WcParams};

fn err(e: ewc::EwcError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn batch_to_py(py: Python<'_>, batch: &SampleBatch) -> PyResult<Py<PyDict>> {
    let d = PyDict::new(py);
    let angles: Vec<f64> = batch.angles.iter().map(|a| a.radians()).collect();
    d.set_item("angles", angles)?;
    d.set_item("seed", batch.seed)?;
    d.set_item("method", format!("{:?}", batch.method))?;
    d.set_item("acceptance_rate", batch.diagnostics.acceptance_rate)?;
    d.set_item(
        "effective_sample_size",
        batch.diagnostics.effective_sample_size,
    )?;
    Ok(d.into())
}

/// Wrapped Cauchy distribution with location `mu` and concentration `rho`.
#[pyclass(name = "WrappedCauchy")]
struct PyWrappedCauchy {
    inner: WcParams,
}

#[pymethods]
impl PyWrappedCauchy {
    #[new]
    fn new(mu: f64, rho: f64) -> PyResult<Self> {
        Ok(Self {
            inner: WcParams::new(mu, rho).map_err(err)?,
        })
    }

    #[getter]
    fn mu(&self) -> f64 {
        self.inner.mu.radians()
    }

    #[getter]
    fn rho(&self) -> f64 {
        self.inner.rho()
    }

    fn pdf(&self, theta: f64) -> f64 {
        ewc::density::wc_density(CircAngle::new(theta), &self.inner)
    }

    #[pyo3(signature = (n, seed = 0))]
    fn sample(&self, py: Python<'_>, n: usize, seed: u64) -> PyResult<Py<PyDict>> {
        batch_to_py(py, &ewc::sampling::sample_wc(&self.inner, n, seed))
    }

    fn __repr__(&self) -> String {
        format!(
            "WrappedCauchy(mu={}, rho={})",
            self.inner.mu.radians(),
            self.inner.rho()
        )
    }
}

/// The four-parameter extended family: two disc parameters
/// `phi_j = rho_j exp(i mu_j)`.
#[pyclass(name = "Ewc")]
struct PyEwc {
    inner: EwcParams,
}

#[pymethods]
impl PyEwc {
    #[new]
    fn new(mu1: f64, mu2: f64, rho1: f64, rho2: f64) -> PyResult<Self> {
        Ok(Self {
            inner: EwcParams::new(mu1, mu2, rho1, rho2).map_err(err)?,
        })
    }

    #[getter]
    fn mu1(&self) -> f64 {
        self.inner.mu1.radians()
    }

    #[getter]
    fn mu2(&self) -> f64 {
        self.inner.mu2.radians()
    }

    #[getter]
    fn rho1(&self) -> f64 {
        self.inner.rho1()
    }

    #[getter]
    fn rho2(&self) -> f64 {
        self.inner.rho2()
    }

    /// Parameter-order canonical form: larger concentration first.
    fn canonical(&self) -> Self {
        Self {
            inner: self.inner.canonical(),
        }
    }

    fn pdf(&self, theta: f64) -> f64 {
        ewc::density::ewc_density(CircAngle::new(theta), &self.inner)
    }

    /// CDF with reference point `-pi`.
    fn cdf(&self, theta: f64) -> f64 {
        ewc::interval::cdf(CircAngle::new(theta), &self.inner)
    }

    /// `P(a < Theta <= b)` in closed form.
    fn prob(&self, a: f64, b: f64) -> PyResult<f64> {
        ewc::interval::interval_probability(CircAngle::new(a), CircAngle::new(b), &self.inner)
            .map_err(err)
    }

    /// `E(exp(i n Theta))` as a Python complex number.
    fn trig_moment(&self, n: u32) -> Complex64 {
        ewc::moments::trig_moment(n, &self.inner).value
    }

    /// Mean direction, mean resultant length, and skewness. The direction
    /// and skewness are None when the first moment vanishes.
    fn summary(&self, py: Python<'_>) -> PyResult<Py<PyDict>> {
        let s = ewc::moments::circular_summary(&self.inner);
        let d = PyDict::new(py);
        d.set_item("mean_direction", s.mean_direction.map(|a| a.radians()))?;
        d.set_item("mean_resultant_length", s.mean_resultant_length)?;
        d.set_item("skewness", s.skewness)?;
        Ok(d.into())
    }

    fn skewness(&self) -> PyResult<f64> {
        ewc::moments::skewness(&self.inner).map_err(err)
    }

    /// Symmetry axis in radians, or None when the density is asymmetric.
    fn symmetry_axis(&self) -> Option<f64> {
        ewc::shape::is_symmetric(&self.inner).map(|a| a.radians())
    }

    /// Modality classification from the quartic discriminant, plus the
    /// located modes and antimodes.
    fn modality(&self, py: Python<'_>) -> PyResult<Py<PyDict>> {
        let r = ewc::shape::modality(&self.inner).map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("discriminant", r.discriminant)?;
        d.set_item(
            "classification",
            match r.classification {
                Modality::Unimodal => "unimodal",
                Modality::Bimodal => "bimodal",
                Modality::Boundary => "boundary",
            },
        )?;
        let modes: Vec<(f64, f64)> = r.modes.iter().map(|&(a, v)| (a.radians(), v)).collect();
        let anti: Vec<(f64, f64)> = r.antimodes.iter().map(|&(a, v)| (a.radians(), v)).collect();
        d.set_item("modes", modes)?;
        d.set_item("antimodes", anti)?;
        Ok(d.into())
    }

    /// Draw `n` angles. Methods: "rejection", "inverse-cdf", "mcmc".
    #[pyo3(signature = (n, seed = 0, method = "rejection"))]
    fn sample(&self, py: Python<'_>, n: usize, seed: u64, method: &str) -> PyResult<Py<PyDict>> {
        let batch = match method {
            "rejection" => ewc::sampling::sample_ewc_rejection(&self.inner, n, seed),
            "inverse-cdf" => {
                ewc::sampling::sample_ewc_invcdf(&self.inner, n, seed, 1e-12).map_err(err)?
            }
            "mcmc" => {
                ewc::sampling::sample_ewc_mcmc(&self.inner, n, &McmcConfig::default(), seed)
            }
            other => {
                return Err(PyValueError::new_err(format!(
                    "unknown sampling method {other:?}"
                )))
            }
        };
        batch_to_py(py, &batch)
    }

    fn loglik(&self, data: Vec<f64>) -> PyResult<f64> {
        let ds = ewc::fit::Dataset::from_radians(&data).map_err(err)?;
        Ok(ewc::fit::loglik(&ds, &self.inner))
    }

    fn __repr__(&self) -> String {
        format!(
            "Ewc(mu1={}, mu2={}, rho1={}, rho2={})",
            self.inner.mu1.radians(),
            self.inner.mu2.radians(),
            self.inner.rho1(),
            self.inner.rho2()
        )
    }
}

/// Two-pole exit distribution on the unit sphere in `R^d`.
#[pyclass(name = "Sphere")]
struct PySphere {
    inner: SphereParams,
}

#[pymethods]
impl PySphere {
    #[new]
    fn new(rho1: f64, eta1: Vec<f64>, rho2: f64, eta2: Vec<f64>) -> PyResult<Self> {
        let e1 = UnitVector::new(eta1).map_err(err)?;
        let e2 = UnitVector::new(eta2).map_err(err)?;
        Ok(Self {
            inner: SphereParams::new(rho1, e1, rho2, e2).map_err(err)?,
        })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.eta1.dim()
    }

    fn pdf(&self, x: Vec<f64>) -> PyResult<f64> {
        let u = UnitVector::new(x).map_err(err)?;
        ewc::sphere::sphere_density(&u, &self.inner).map_err(err)
    }

    /// Draw `n` points; each is a list of coordinates on the unit sphere.
    #[pyo3(signature = (n, seed = 0))]
    fn sample(&self, n: usize, seed: u64) -> PyResult<Vec<Vec<f64>>> {
        let pts = if self.inner.rho1 == 0.0 {
            ewc::sphere::sample_exit(self.inner.rho2, &self.inner.eta2, n, seed).map_err(err)?
        } else if self.inner.rho2 == 0.0 {
            ewc::sphere::sample_exit(self.inner.rho1, &self.inner.eta1, n, seed).map_err(err)?
        } else {
            ewc::sphere::sample_sphere_mcmc(&self.inner, n, &McmcConfig::default(), seed)
                .map_err(err)?
        };
        Ok(pts.into_iter().map(|u| u.coords().to_vec()).collect())
    }
}

/// Maximum-likelihood fit of the four-parameter family.
#[pyfunction]
#[pyo3(signature = (data, init = None))]
fn fit_ewc(py: Python<'_>, data: Vec<f64>, init: Option<(f64, f64, f64, f64)>) -> PyResult<Py<PyDict>> {
    let ds = ewc::fit::Dataset::from_radians(&data).map_err(err)?;
    let init = match init {
        Some((m1, m2, r1, r2)) => Some(EwcParams::new(m1, m2, r1, r2).map_err(err)?),
        None => None,
    };
    let fit = ewc::fit::fit_ewc(&ds, init).map_err(err)?;
    let d = PyDict::new(py);
    let p = &fit.params;
    d.set_item("mu1", p.mu1.radians())?;
    d.set_item("mu2", p.mu2.radians())?;
    d.set_item("rho1", p.rho1())?;
    d.set_item("rho2", p.rho2())?;
    d.set_item("loglik", fit.loglik)?;
    d.set_item("converged", fit.converged)?;
    d.set_item("iterations", fit.iterations)?;
    d.set_item("stderr", fit.stderr.map(|s| s.to_vec()))?;
    Ok(d.into())
}

/// Moment fit of the plain wrapped Cauchy; returns `(mu, rho)`.
#[pyfunction]
fn fit_wc(data: Vec<f64>) -> PyResult<(f64, f64)> {
    let ds = ewc::fit::Dataset::from_radians(&data).map_err(err)?;
    let p = ewc::fit::fit_wc(&ds).map_err(err)?;
    Ok((p.mu.radians(), p.rho()))
}

/// Run the internal consistency suite; returns one dict per check.
#[pyfunction]
#[pyo3(signature = (seed = 42))]
fn verify(py: Python<'_>, seed: u64) -> PyResult<Vec<Py<PyDict>>> {
    ewc::verify::run_all(seed)
        .into_iter()
        .map(|c| {
            let d = PyDict::new(py);
            d.set_item("name", c.name)?;
            d.set_item("passed", c.passed)?;
            d.set_item("worst", c.worst)?;
            d.set_item("tolerance", c.tolerance)?;
            d.set_item("cases", c.cases)?;
            Ok(d.into())
        })
        .collect()
}

#[pymodule]
fn ewc_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyWrappedCauchy>()?;
    m.add_class::<PyEwc>()?;
    m.add_class::<PySphere>()?;
    m.add_function(wrap_pyfunction!(fit_ewc, m)?)?;
    m.add_function(wrap_pyfunction!(fit_wc, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
