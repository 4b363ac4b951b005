//! Python module `pyinfobound`.

use infobound::bounds::{self, FiniteParamSpec, GibbsSpec, MiubInputs, MutualInfoInputs};
use infobound::casestudy::{
    self, GaussianMixtureSpec, MeanClassifier, RiskMode, RotationStackConfig,
};
use infobound::experiment::{self, ExperimentConfig, OutputFormat, Value};
use infobound::network::RegularizationDescriptor;
use infobound::numerics::q_function as q_fn;
use infobound::sdpi::{self, FiniteChannel};
use infobound::{Error, MatrixR, SeededRng};
use pyo3::exceptions::{PyIOError, PyNotImplementedError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Io(io) => PyIOError::new_err(io.to_string()),
        Error::UnsupportedRegularization(m) => PyNotImplementedError::new_err(m),
        other => PyValueError::new_err(other.to_string()),
    }
}

trait IntoPy<T> {
    fn py_err(self) -> PyResult<T>;
}

impl<T> IntoPy<T> for infobound::Result<T> {
    fn py_err(self) -> PyResult<T> {
        self.map_err(to_py)
    }
}

fn matrix(rows: Vec<Vec<f64>>) -> PyResult<MatrixR> {
    MatrixR::from_rows(&rows).py_err()
}

fn descriptor(
    kind: &str,
    delta: f64,
    eps: f64,
    act_sup: f64,
) -> PyResult<RegularizationDescriptor> {
    Ok(match kind {
        "dropout" => RegularizationDescriptor::Dropout { delta },
        "dropconnect" => RegularizationDescriptor::DropConnect { delta },
        "noise" => RegularizationDescriptor::Noise { eps, act_sup },
        "none" => RegularizationDescriptor::None,
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown regularization `{other}` (expected dropout, dropconnect, noise or none)"
            )))
        }
    })
}

/// Layer widths with one regularization applied at every site.
#[pyclass(name = "NetworkSpec", frozen)]
struct PyNetworkSpec {
    inner: infobound::NetworkSpec,
}

#[pymethods]
impl PyNetworkSpec {
    #[new]
    #[pyo3(signature = (dims, label_count=2, regularization="dropout", delta=0.5, eps=1.0, act_sup=1.0))]
    fn new(
        dims: Vec<usize>,
        label_count: usize,
        regularization: &str,
        delta: f64,
        eps: f64,
        act_sup: f64,
    ) -> PyResult<Self> {
        let desc = descriptor(regularization, delta, eps, act_sup)?;
        let inner = infobound::NetworkSpec::uniform(dims, label_count, desc).py_err()?;
        Ok(Self { inner })
    }

    #[getter]
    fn dims(&self) -> Vec<usize> {
        self.inner.dims().to_vec()
    }

    #[getter]
    fn label_count(&self) -> usize {
        self.inner.label_count()
    }

    fn eta_product(&self) -> PyResult<f64> {
        sdpi::network_eta_product(&self.inner).py_err()
    }

    /// List of `(eta, tightness)` per site.
    fn site_coefficients(&self) -> PyResult<Vec<(f64, &'static str)>> {
        Ok(sdpi::site_coefficients(&self.inner)
            .py_err()?
            .into_iter()
            .map(|c| (c.value, c.tightness.as_str()))
            .collect())
    }

    fn __repr__(&self) -> String {
        format!(
            "NetworkSpec(dims={:?}, label_count={})",
            self.inner.dims(),
            self.inner.label_count()
        )
    }
}

/// Finite channel given by its row-stochastic transition matrix.
#[pyclass(name = "FiniteChannel", frozen)]
struct PyFiniteChannel {
    inner: FiniteChannel,
}

#[pymethods]
impl PyFiniteChannel {
    #[new]
    fn new(rows: Vec<Vec<f64>>) -> PyResult<Self> {
        Ok(Self {
            inner: FiniteChannel::from_rows(&rows).py_err()?,
        })
    }

    #[staticmethod]
    fn dropout(delta: f64, width: usize) -> PyResult<Self> {
        Ok(Self {
            inner: FiniteChannel::dropout_product(delta, width).py_err()?,
        })
    }

    #[staticmethod]
    fn dropconnect(deltas: Vec<Vec<f64>>) -> PyResult<Self> {
        Ok(Self {
            inner: FiniteChannel::dropconnect(&matrix(deltas)?).py_err()?,
        })
    }

    #[getter]
    fn shape(&self) -> (usize, usize) {
        (self.inner.inputs(), self.inner.outputs())
    }

    fn product(&self, other: &PyFiniteChannel) -> Self {
        Self {
            inner: self.inner.product(&other.inner),
        }
    }

    #[pyo3(signature = (grid=1000))]
    fn eta_kl_bruteforce(&self, py: Python<'_>, grid: usize) -> PyResult<f64> {
        py.detach(|| sdpi::eta_kl_bruteforce(&self.inner, grid))
            .py_err()
    }

    fn hellinger_lower_bound(&self) -> f64 {
        sdpi::hellinger_eta_lower_bound(&self.inner)
    }

    fn dobrushin(&self) -> f64 {
        sdpi::dobrushin_coefficient(&self.inner)
    }
}

/// Binary Gaussian mixture `Y ~ ±1`, `X | Y ~ N(Y mu0, sigma0² I)` with `n` samples.
#[pyclass(name = "GaussianMixture", frozen)]
struct PyGaussianMixture {
    inner: GaussianMixtureSpec,
}

#[pymethods]
impl PyGaussianMixture {
    #[new]
    #[pyo3(signature = (mu0, sigma0=1.0, n=100))]
    fn new(mu0: Vec<f64>, sigma0: f64, n: usize) -> PyResult<Self> {
        Ok(Self {
            inner: GaussianMixtureSpec::new(mu0, sigma0, n).py_err()?,
        })
    }

    /// `(features, labels)` as nested lists.
    #[pyo3(signature = (seed, stream=0))]
    fn sample(&self, seed: u64, stream: u64) -> (Vec<Vec<f64>>, Vec<i8>) {
        let data = casestudy::sample_dataset(&self.inner, &mut SeededRng::new(seed, stream));
        let rows = (0..data.len())
            .map(|i| data.features().row(i).to_vec())
            .collect();
        (rows, data.labels().to_vec())
    }

    /// Mean classifier fitted on a fresh draw.
    #[pyo3(signature = (seed, stream=0))]
    fn fit_mean(&self, seed: u64, stream: u64) -> Vec<f64> {
        let data = casestudy::sample_dataset(&self.inner, &mut SeededRng::new(seed, stream));
        casestudy::fit_mean_classifier(&data)
    }

    fn kl_bound(&self, mean_rank: f64) -> PyResult<f64> {
        casestudy::kl_bound_value(self.inner.d0(), self.inner.n(), mean_rank).py_err()
    }

    fn wasserstein_coefficient(&self) -> f64 {
        casestudy::wasserstein_coefficient(&self.inner)
    }

    /// Funnel-layer experiment with rotation stacks; returns a dict.
    #[pyo3(signature = (depth, funnel_index, seed, funnel_fraction=0.2, datasets=100, stacks_per_dataset=100))]
    #[allow(clippy::too_many_arguments)]
    fn funnel_layer<'py>(
        &self,
        py: Python<'py>,
        depth: usize,
        funnel_index: usize,
        seed: u64,
        funnel_fraction: f64,
        datasets: usize,
        stacks_per_dataset: usize,
    ) -> PyResult<Bound<'py, PyDict>> {
        let cfg = RotationStackConfig::new(depth, funnel_index, funnel_fraction).py_err()?;
        let res = py
            .detach(|| {
                casestudy::funnel_layer(
                    &self.inner,
                    &cfg,
                    datasets,
                    stacks_per_dataset,
                    &SeededRng::new(seed, 0),
                )
            })
            .py_err()?;
        let out = PyDict::new(py);
        out.set_item("l_star", res.l_star)?;
        out.set_item("weighted_l_star", res.weighted_l_star)?;
        out.set_item("sample_means", res.sample_means)?;
        out.set_item("weighted_means", res.weighted_means)?;
        out.set_item("tail_violation_rate", res.tail_violation_rate)?;
        out.set_item("models", res.models)?;
        Ok(out)
    }

    /// `(estimate, std_error)` of the mean classifier's generalization error.
    #[pyo3(signature = (datasets, seed, mc_samples=None))]
    fn gen_error(
        &self,
        py: Python<'_>,
        datasets: usize,
        seed: u64,
        mc_samples: Option<usize>,
    ) -> PyResult<(f64, f64)> {
        let mode = mc_samples.map_or(RiskMode::Quadrature, RiskMode::MonteCarlo);
        let est = py
            .detach(|| {
                casestudy::empirical_gen_error(
                    &self.inner,
                    &MeanClassifier,
                    datasets,
                    &SeededRng::new(seed, 0),
                    mode,
                )
            })
            .py_err()?;
        Ok((est.estimate, est.std_error))
    }
}

#[pyfunction]
fn q_function(x: f64) -> f64 {
    q_fn(x)
}

#[pyfunction]
fn dropout_eta(delta: f64, width: usize) -> PyResult<f64> {
    Ok(sdpi::dropout_eta(delta, width).py_err()?.value)
}

#[pyfunction]
fn dropconnect_eta_ub(deltas: Vec<Vec<f64>>) -> PyResult<f64> {
    Ok(sdpi::dropconnect_eta_ub(&matrix(deltas)?).py_err()?.value)
}

#[pyfunction]
fn noise_eta_ub(eps: f64, act_sup: f64, width: usize) -> PyResult<f64> {
    Ok(sdpi::noise_eta_ub(eps, act_sup, width).py_err()?.value)
}

#[pyfunction]
fn tv_shifted_gaussians(shift_norm: f64, eps: f64) -> PyResult<f64> {
    sdpi::tv_shifted_gaussians(shift_norm, eps).py_err()
}

/// `samples` is a list of `(I(X_i;W|Y_i), I(Y_i;W))` pairs.
#[pyfunction]
fn contraction_bound(
    samples: Vec<(f64, f64)>,
    sigma: f64,
    label_count: usize,
    eta_product: f64,
) -> PyResult<f64> {
    let mi = MutualInfoInputs::new(samples, sigma, label_count).py_err()?;
    bounds::contraction_bound(&mi, eta_product).py_err()
}

#[pyfunction]
fn miub_dropout(i_k: Vec<f64>, delta0: f64) -> PyResult<f64> {
    bounds::miub_dropout(&MiubInputs::new(i_k).py_err()?, delta0).py_err()
}

#[pyfunction]
fn gibbs_bound(alpha: f64, gamma: f64, n: usize, eta_product: f64) -> PyResult<f64> {
    Ok(bounds::gibbs_bound(
        &GibbsSpec::new(alpha, gamma, n, eta_product).py_err()?,
    ))
}

#[pyfunction]
fn finite_param_mi_ub(dims: Vec<usize>, b: usize) -> PyResult<f64> {
    Ok(bounds::finite_param_mi_ub(
        &FiniteParamSpec::new(dims, b).py_err()?,
    ))
}

/// Runs an experiment from a JSON config string and returns its rows as dicts.
#[pyfunction]
fn run_experiment<'py>(py: Python<'py>, config_json: &str) -> PyResult<Bound<'py, PyList>> {
    let cfg = ExperimentConfig::from_json_str(config_json).py_err()?;
    let report = py.detach(|| experiment::run(&cfg)).py_err()?;
    let rows = PyList::empty(py);
    for row in report.rows() {
        let d = PyDict::new(py);
        for (k, v) in row.cells() {
            match v {
                Value::Int(i) => d.set_item(k, i)?,
                Value::Real(x) => d.set_item(k, x)?,
                Value::Bool(b) => d.set_item(k, b)?,
                Value::Text(s) => d.set_item(k, s)?,
            }
        }
        rows.append(d)?;
    }
    Ok(rows)
}

/// Same as `run_experiment` but returns the CSV text.
#[pyfunction]
fn run_experiment_csv(py: Python<'_>, config_json: &str) -> PyResult<String> {
    let cfg = ExperimentConfig::from_json_str(config_json).py_err()?;
    let report = py.detach(|| experiment::run(&cfg)).py_err()?;
    let mut buf = Vec::new();
    experiment::write_report(&report, OutputFormat::Csv, &mut buf).py_err()?;
    String::from_utf8(buf).map_err(|e| PyValueError::new_err(e.to_string()))
}

#[pymodule]
fn pyinfobound(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyNetworkSpec>()?;
    m.add_class::<PyFiniteChannel>()?;
    m.add_class::<PyGaussianMixture>()?;
    m.add_function(wrap_pyfunction!(q_function, m)?)?;
    m.add_function(wrap_pyfunction!(dropout_eta, m)?)?;
    m.add_function(wrap_pyfunction!(dropconnect_eta_ub, m)?)?;
    m.add_function(wrap_pyfunction!(noise_eta_ub, m)?)?;
    m.add_function(wrap_pyfunction!(tv_shifted_gaussians, m)?)?;
    m.add_function(wrap_pyfunction!(contraction_bound, m)?)?;
    m.add_function(wrap_pyfunction!(miub_dropout, m)?)?;
    m.add_function(wrap_pyfunction!(gibbs_bound, m)?)?;
    m.add_function(wrap_pyfunction!(finite_param_mi_ub, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment_csv, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
