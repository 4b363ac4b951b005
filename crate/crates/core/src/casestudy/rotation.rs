use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::numerics::{MatrixR, SeededRng, WeightStack};
use crate::{Error, Result};

/// How the per-layer scales `C_1..C_L` are drawn.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ScaleMode {
    /// Uniform draws rescaled in two groups so that
    /// `∏_{j<=l'} C_j = fraction·‖target‖` and `∏_j C_j = ‖target‖`.
    #[default]
    RandomGrouped,
    /// Every `C_l = ‖target‖^{1/L}`; no randomness.
    Equal,
}

/// Rotation-stack learner on 2-D inputs: `L - 1` scaled 2x2 rotations by a
/// common angle followed by the row `(0, C_L)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RotationStackConfig {
    depth: usize,
    funnel_index: usize,
    funnel_fraction: f64,
    scale_mode: ScaleMode,
}

impl RotationStackConfig {
    pub fn new(depth: usize, funnel_index: usize, funnel_fraction: f64) -> Result<Self> {
        Self::with_mode(
            depth,
            funnel_index,
            funnel_fraction,
            ScaleMode::RandomGrouped,
        )
    }

    pub fn with_mode(
        depth: usize,
        funnel_index: usize,
        funnel_fraction: f64,
        scale_mode: ScaleMode,
    ) -> Result<Self> {
        if depth < 2 {
            return Err(Error::domain(format!(
                "depth must be at least 2, got {depth}"
            )));
        }
        if funnel_index < 1 || funnel_index > depth - 1 {
            return Err(Error::domain(format!(
                "funnel index must lie in [1, {}], got {funnel_index}",
                depth - 1
            )));
        }
        if !(funnel_fraction > 0.0 && funnel_fraction <= 1.0) {
            return Err(Error::domain(format!(
                "funnel fraction must lie in (0, 1], got {funnel_fraction}"
            )));
        }
        Ok(Self {
            depth,
            funnel_index,
            funnel_fraction,
            scale_mode,
        })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn funnel_index(&self) -> usize {
        self.funnel_index
    }

    pub fn funnel_fraction(&self) -> f64 {
        self.funnel_fraction
    }

    pub fn scale_mode(&self) -> ScaleMode {
        self.scale_mode
    }

    fn draw_scales(&self, norm: f64, rng: &mut SeededRng) -> Vec<f64> {
        let depth = self.depth;
        match self.scale_mode {
            ScaleMode::Equal => vec![norm.powf(1.0 / depth as f64); depth],
            ScaleMode::RandomGrouped => {
                // (0, 1]: keeps logs finite
                let log_u: Vec<f64> = (0..depth)
                    .map(|_| (1.0 - rng.random::<f64>()).ln())
                    .collect();
                let split = self.funnel_index;
                let head_target = (self.funnel_fraction * norm).ln();
                let tail_target = -self.funnel_fraction.ln();
                let head_shift = (head_target - log_u[..split].iter().sum::<f64>()) / split as f64;
                let tail_shift =
                    (tail_target - log_u[split..].iter().sum::<f64>()) / (depth - split) as f64;
                log_u
                    .iter()
                    .enumerate()
                    .map(|(i, lu)| (lu + if i < split { head_shift } else { tail_shift }).exp())
                    .collect()
            }
        }
    }
}

/// Builds `W_1..W_L` with `W⊗L = targetᵀ` for a 2-D target.
///
/// The common angle is `φ / (L - 1)`, where `|φ|` is the angle between
/// `(0, 1)` and the target direction; its sign follows the first target
/// coordinate so that the product points along the target.
pub fn build_rotation_stack(
    cfg: &RotationStackConfig,
    target: &[f64],
    rng: &mut SeededRng,
) -> Result<WeightStack> {
    if target.len() != 2 {
        return Err(Error::ShapeMismatch(format!(
            "rotation stacks need a 2-D target, got {} entries",
            target.len()
        )));
    }
    let norm = target[0].hypot(target[1]);
    if !(norm >= 1e-12) {
        return Err(Error::DegenerateTarget(norm));
    }
    let cos_phi = (target[1] / norm).clamp(-1.0, 1.0);
    let phi_abs = cos_phi.acos();
    let phi = if target[0] > 0.0 { -phi_abs } else { phi_abs };
    let theta = phi / (cfg.depth - 1) as f64;
    let (s, c) = theta.sin_cos();

    let scales = cfg.draw_scales(norm, rng);
    let mut layers = Vec::with_capacity(cfg.depth);
    for &cl in &scales[..cfg.depth - 1] {
        layers.push(MatrixR::new(2, 2, vec![cl * c, cl * s, -cl * s, cl * c])?);
    }
    layers.push(MatrixR::row_vector(&[0.0, scales[cfg.depth - 1]])?);
    WeightStack::new(layers)
}
