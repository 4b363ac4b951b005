//! Network architecture description: layer widths, label count and the
//! regularization applied at each layer transition.

use serde::{Deserialize, Serialize};

use crate::numerics::MatrixR;
use crate::{Error, Result};

/// Stochastic regularization attached to one layer transition.
///
/// Site `l` (1-based) of a network sits between layers `l-1` and `l`.
/// Dropout acts on the source layer (`width = d_{l-1}`), DropConnect on the
/// `d_l x d_{l-1}` weight matrix, and Gaussian noise on the destination
/// layer (`width = d_l`).
#[derive(Clone, Debug, PartialEq)]
pub enum LayerRegularization {
    Dropout {
        delta: f64,
        width: usize,
    },
    DropConnect {
        deltas: MatrixR,
    },
    GaussianNoise {
        eps: f64,
        act_sup: f64,
        width: usize,
    },
    None,
}

impl LayerRegularization {
    pub fn name(&self) -> &'static str {
        match self {
            LayerRegularization::Dropout { .. } => "dropout",
            LayerRegularization::DropConnect { .. } => "dropconnect",
            LayerRegularization::GaussianNoise { .. } => "noise",
            LayerRegularization::None => "none",
        }
    }

    pub(crate) fn validate(&self) -> Result<()> {
        match self {
            LayerRegularization::Dropout { delta, width } => {
                check_open_prob(*delta, "dropout delta")?;
                check_width(*width)
            }
            LayerRegularization::DropConnect { deltas } => deltas
                .as_slice()
                .iter()
                .try_for_each(|d| check_open_prob(*d, "dropconnect delta")),
            LayerRegularization::GaussianNoise {
                eps,
                act_sup,
                width,
            } => {
                check_positive(*eps, "noise eps")?;
                check_positive(*act_sup, "activation sup-norm")?;
                check_width(*width)
            }
            LayerRegularization::None => Ok(()),
        }
    }
}

/// Width-free regularization descriptor applied uniformly to every site of
/// a network. Used by configs and sweeps.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum RegularizationDescriptor {
    Dropout { delta: f64 },
    DropConnect { delta: f64 },
    Noise { eps: f64, act_sup: f64 },
    None,
}

impl RegularizationDescriptor {
    /// The site-`l` regularization for the given layer widths.
    pub fn at_site(&self, dims: &[usize], l: usize) -> Result<LayerRegularization> {
        let (src, dst) = (dims[l - 1], dims[l]);
        Ok(match *self {
            RegularizationDescriptor::Dropout { delta } => {
                LayerRegularization::Dropout { delta, width: src }
            }
            RegularizationDescriptor::DropConnect { delta } => LayerRegularization::DropConnect {
                deltas: MatrixR::new(dst, src, vec![delta; dst * src])?,
            },
            RegularizationDescriptor::Noise { eps, act_sup } => {
                LayerRegularization::GaussianNoise {
                    eps,
                    act_sup,
                    width: dst,
                }
            }
            RegularizationDescriptor::None => LayerRegularization::None,
        })
    }
}

/// Layer widths `d_0..d_L`, label count `K` and per-site regularization.
#[derive(Clone, Debug, PartialEq)]
pub struct NetworkSpec {
    dims: Vec<usize>,
    label_count: usize,
    sites: Vec<LayerRegularization>,
}

impl NetworkSpec {
    /// `sites[l-1]` is the regularization of site `l`.
    pub fn new(
        dims: Vec<usize>,
        label_count: usize,
        sites: Vec<LayerRegularization>,
    ) -> Result<Self> {
        if dims.len() < 2 {
            return Err(Error::ShapeMismatch(format!(
                "network needs at least d_0 and d_1, got {} widths",
                dims.len()
            )));
        }
        if let Some(pos) = dims.iter().position(|&d| d == 0) {
            return Err(Error::ShapeMismatch(format!("width d_{pos} is zero")));
        }
        if label_count == 0 {
            return Err(Error::domain("label count must be at least 1"));
        }
        let depth = dims.len() - 1;
        if sites.len() != depth {
            return Err(Error::ShapeMismatch(format!(
                "{depth}-layer network needs {depth} regularization sites, got {}",
                sites.len()
            )));
        }
        for (i, site) in sites.iter().enumerate() {
            let l = i + 1;
            site.validate()?;
            let ok = match site {
                LayerRegularization::Dropout { width, .. } => *width == dims[l - 1],
                LayerRegularization::DropConnect { deltas } => {
                    deltas.rows() == dims[l] && deltas.cols() == dims[l - 1]
                }
                LayerRegularization::GaussianNoise { width, .. } => *width == dims[l],
                LayerRegularization::None => true,
            };
            if !ok {
                return Err(Error::ShapeMismatch(format!(
                    "{} at site {l} does not match widths d_{} = {}, d_{l} = {}",
                    site.name(),
                    l - 1,
                    dims[l - 1],
                    dims[l]
                )));
            }
        }
        Ok(Self {
            dims,
            label_count,
            sites,
        })
    }

    /// Applies one descriptor at every site.
    pub fn uniform(
        dims: Vec<usize>,
        label_count: usize,
        reg: RegularizationDescriptor,
    ) -> Result<Self> {
        if dims.len() < 2 {
            return Err(Error::ShapeMismatch(
                "network needs at least two widths".into(),
            ));
        }
        let sites = (1..dims.len())
            .map(|l| reg.at_site(&dims, l))
            .collect::<Result<Vec<_>>>()?;
        Self::new(dims, label_count, sites)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn depth(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn label_count(&self) -> usize {
        self.label_count
    }

    pub fn sites(&self) -> &[LayerRegularization] {
        &self.sites
    }
}

pub(crate) fn check_open_prob(p: f64, what: &str) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("{what} must lie in (0, 1), got {p}")))
    }
}

pub(crate) fn check_positive(x: f64, what: &str) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "{what} must be positive and finite, got {x}"
        )))
    }
}

fn check_width(w: usize) -> Result<()> {
    if w >= 1 {
        Ok(())
    } else {
        Err(Error::domain("width must be at least 1"))
    }
}
