use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::casestudy::{RiskMode, ScaleMode};
use crate::network::RegularizationDescriptor;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Table1,
    Genbound,
    AddLayerSweep,
    SplitLayerSweep,
    BoundProfile,
    SdpiTable,
}

impl ExperimentKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ExperimentKind::Table1 => "table1",
            ExperimentKind::Genbound => "genbound",
            ExperimentKind::AddLayerSweep => "add_layer_sweep",
            ExperimentKind::SplitLayerSweep => "split_layer_sweep",
            ExperimentKind::BoundProfile => "bound_profile",
            ExperimentKind::SdpiTable => "sdpi_table",
        }
    }

    /// Kinds that draw random numbers and therefore need a seed.
    pub fn is_random(&self) -> bool {
        matches!(
            self,
            ExperimentKind::Table1 | ExperimentKind::Genbound | ExperimentKind::BoundProfile
        )
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

/// Experiment settings as read from a JSON config file.
///
/// Every field is optional; unset fields fall back to per-kind defaults
/// through the accessor methods. `validate` checks the fields the chosen
/// kind reads and reports the first offending field by name.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: Option<ExperimentKind>,
    pub dims: Option<Vec<usize>>,
    pub regularization: Option<RegularizationDescriptor>,
    pub label_count: Option<usize>,
    pub b: Option<usize>,
    pub d_star_range: Option<[usize; 2]>,
    pub n: Option<usize>,
    pub n_values: Option<Vec<usize>>,
    pub mu0: Option<Vec<f64>>,
    pub sigma0: Option<f64>,
    pub depth: Option<usize>,
    pub funnel_fraction: Option<f64>,
    pub l_primes: Option<Vec<usize>>,
    pub scale_mode: Option<ScaleMode>,
    pub datasets: Option<usize>,
    pub stacks_per_dataset: Option<usize>,
    pub risk_mode: Option<RiskMode>,
    pub seed: Option<u64>,
    pub format: Option<OutputFormat>,
}

fn field(name: &str, message: impl Into<String>) -> Error {
    Error::config(name, message)
}

impl ExperimentConfig {
    pub fn new(kind: ExperimentKind) -> Self {
        Self {
            kind: Some(kind),
            ..Self::default()
        }
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| {
            // serde_json names unknown fields in its message; keep it whole.
            field("config", e.to_string())
        })
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| field("config", format!("cannot read {}: {e}", path.display())))?;
        Self::from_json_str(&text)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn kind(&self) -> Result<ExperimentKind> {
        self.kind
            .ok_or_else(|| field("kind", "experiment kind is not set"))
    }

    pub fn dims(&self) -> Vec<usize> {
        self.dims.clone().unwrap_or_else(|| match self.kind {
            Some(ExperimentKind::SplitLayerSweep) => vec![10, 30, 2],
            _ => vec![10, 20, 2],
        })
    }

    pub fn regularization(&self) -> RegularizationDescriptor {
        self.regularization
            .unwrap_or(RegularizationDescriptor::Dropout { delta: 0.5 })
    }

    pub fn label_count(&self) -> usize {
        self.label_count.unwrap_or(2)
    }

    pub fn b(&self) -> usize {
        self.b.unwrap_or(2)
    }

    pub fn d_star_range(&self) -> [usize; 2] {
        self.d_star_range.unwrap_or([1, 30])
    }

    pub fn n(&self) -> usize {
        self.n.unwrap_or(100)
    }

    pub fn n_values(&self) -> Vec<usize> {
        self.n_values.clone().unwrap_or_else(|| vec![20, 100, 500])
    }

    pub fn mu0(&self) -> Vec<f64> {
        self.mu0.clone().unwrap_or_else(|| vec![0.5, 0.0])
    }

    pub fn sigma0(&self) -> f64 {
        self.sigma0.unwrap_or(1.0)
    }

    pub fn depth(&self) -> usize {
        self.depth.unwrap_or(10)
    }

    pub fn funnel_fraction(&self) -> f64 {
        self.funnel_fraction.unwrap_or(0.2)
    }

    pub fn l_primes(&self) -> Vec<usize> {
        self.l_primes.clone().unwrap_or_else(|| vec![3, 5, 7])
    }

    pub fn scale_mode(&self) -> ScaleMode {
        self.scale_mode.unwrap_or_default()
    }

    pub fn datasets(&self) -> usize {
        self.datasets.unwrap_or(match self.kind {
            Some(ExperimentKind::Genbound) => 500,
            Some(ExperimentKind::BoundProfile) => 20,
            _ => 100,
        })
    }

    pub fn stacks_per_dataset(&self) -> usize {
        self.stacks_per_dataset.unwrap_or(match self.kind {
            Some(ExperimentKind::BoundProfile) => 50,
            _ => 100,
        })
    }

    pub fn risk_mode(&self) -> RiskMode {
        self.risk_mode.unwrap_or_default()
    }

    pub fn format(&self) -> OutputFormat {
        self.format.unwrap_or_default()
    }

    pub fn seed(&self) -> Result<u64> {
        self.seed
            .ok_or_else(|| field("seed", "a seed is required for randomized experiments"))
    }

    /// Checks every field `kind` reads against the preconditions of the
    /// module that consumes it.
    pub fn validate(&self) -> Result<ExperimentKind> {
        let kind = self.kind()?;
        if kind.is_random() {
            self.seed()?;
        }
        match kind {
            ExperimentKind::Table1 | ExperimentKind::BoundProfile => {
                self.check_mixture(&[self.n()], "n")?;
                self.check_stack_shape()?;
                self.check_trials()?;
            }
            ExperimentKind::Genbound => {
                self.check_mixture(&self.n_values(), "n_values")?;
                if self.datasets() < 2 {
                    return Err(field("datasets", "need at least 2 dataset draws"));
                }
                if let RiskMode::MonteCarlo(0) = self.risk_mode() {
                    return Err(field(
                        "risk_mode",
                        "Monte-Carlo risk needs at least one sample",
                    ));
                }
            }
            ExperimentKind::AddLayerSweep | ExperimentKind::SplitLayerSweep => {
                self.check_network(kind)?;
                let dims = self.dims();
                if kind == ExperimentKind::AddLayerSweep {
                    let [lo, hi] = self.d_star_range();
                    if lo == 0 || lo > hi {
                        return Err(field(
                            "d_star_range",
                            format!("need 1 <= low <= high, got [{lo}, {hi}]"),
                        ));
                    }
                } else if dims[1] < 2 {
                    return Err(field(
                        "dims",
                        "the split layer dims[1] must have width at least 2",
                    ));
                }
            }
            ExperimentKind::SdpiTable => self.check_network(kind)?,
        }
        Ok(kind)
    }

    fn check_mixture(&self, ns: &[usize], n_field: &str) -> Result<()> {
        let mu0 = self.mu0();
        if mu0.is_empty() || mu0.iter().any(|v| !v.is_finite()) {
            return Err(field("mu0", "must be a nonempty vector of finite reals"));
        }
        if !(self.sigma0() > 0.0 && self.sigma0().is_finite()) {
            return Err(field("sigma0", "must be positive and finite"));
        }
        if ns.is_empty() {
            return Err(field(n_field, "must list at least one sample size"));
        }
        if let Some(&bad) = ns.iter().find(|&&n| n < 2) {
            return Err(field(
                n_field,
                format!("sample size must be >= 2, got {bad}"),
            ));
        }
        Ok(())
    }

    fn check_stack_shape(&self) -> Result<()> {
        if self.mu0().len() != 2 {
            return Err(field("mu0", "rotation stacks need 2-dimensional inputs"));
        }
        let depth = self.depth();
        if depth < 2 {
            return Err(field("depth", format!("must be at least 2, got {depth}")));
        }
        let f = self.funnel_fraction();
        if !(f > 0.0 && f <= 1.0) {
            return Err(field(
                "funnel_fraction",
                format!("must lie in (0, 1], got {f}"),
            ));
        }
        let lp = self.l_primes();
        if lp.is_empty() {
            return Err(field("l_primes", "must list at least one funnel index"));
        }
        if let Some(&bad) = lp.iter().find(|&&l| l < 1 || l >= depth) {
            return Err(field(
                "l_primes",
                format!("funnel index {bad} outside [1, {}]", depth - 1),
            ));
        }
        Ok(())
    }

    fn check_trials(&self) -> Result<()> {
        if self.datasets() == 0 {
            return Err(field("datasets", "must be at least 1"));
        }
        if self.stacks_per_dataset() == 0 {
            return Err(field("stacks_per_dataset", "must be at least 1"));
        }
        Ok(())
    }

    fn check_network(&self, kind: ExperimentKind) -> Result<()> {
        let dims = self.dims();
        let min_len = if kind == ExperimentKind::SdpiTable {
            2
        } else {
            3
        };
        if dims.len() < min_len || dims.contains(&0) {
            return Err(field(
                "dims",
                format!("need at least {min_len} positive widths, got {dims:?}"),
            ));
        }
        if self.label_count() < 1 {
            return Err(field("label_count", "must be at least 1"));
        }
        if self.b() < 2 {
            return Err(field("b", format!("must be at least 2, got {}", self.b())));
        }
        match self.regularization() {
            RegularizationDescriptor::Dropout { delta }
            | RegularizationDescriptor::DropConnect { delta }
                if !(delta > 0.0 && delta < 1.0) =>
            {
                Err(field(
                    "regularization",
                    format!("delta must lie in (0, 1), got {delta}"),
                ))
            }
            RegularizationDescriptor::Noise { eps, act_sup }
                if !(eps > 0.0 && act_sup > 0.0 && eps.is_finite() && act_sup.is_finite()) =>
            {
                Err(field("regularization", "eps and act_sup must be positive"))
            }
            _ => Ok(()),
        }
    }
}
