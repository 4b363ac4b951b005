use serde::Serialize;

use crate::network::{check_open_prob, check_positive, LayerRegularization, NetworkSpec};
use crate::numerics::{q_function, MatrixR};
use crate::{Error, Result};

/// Whether a coefficient is the exact `η_KL` or only an upper bound on it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Tightness {
    Exact,
    UpperBound,
}

impl Tightness {
    pub fn as_str(&self) -> &'static str {
        match self {
            Tightness::Exact => "exact",
            Tightness::UpperBound => "upper_bound",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Coefficient {
    pub value: f64,
    pub tightness: Tightness,
}

impl Coefficient {
    fn exact(value: f64) -> Self {
        Self {
            value,
            tightness: Tightness::Exact,
        }
    }

    fn upper(value: f64) -> Self {
        Self {
            value,
            tightness: Tightness::UpperBound,
        }
    }
}

/// KL contraction coefficient `1 - δ^d` of `d` parallel Dropout Z-channels.
pub fn dropout_eta(delta: f64, width: usize) -> Result<Coefficient> {
    check_open_prob(delta, "dropout delta")?;
    if width == 0 {
        return Err(Error::domain("dropout width must be at least 1"));
    }
    Ok(Coefficient::exact(1.0 - delta.powi(width as i32)))
}

/// Upper bound `1 - ∏ δ_ij` on the DropConnect channel coefficient.
pub fn dropconnect_eta_ub(deltas: &MatrixR) -> Result<Coefficient> {
    let mut prod = 1.0;
    for &d in deltas.as_slice() {
        check_open_prob(d, "dropconnect delta")?;
        prod *= d;
    }
    Ok(Coefficient::upper(1.0 - prod))
}

/// Dobrushin bound `1 - 2Q(√(2d)·‖φ‖_∞ / (2ε))` for a bounded map followed by
/// isotropic Gaussian noise of scale `ε` in `d` dimensions.
pub fn noise_eta_ub(eps: f64, act_sup: f64, width: usize) -> Result<Coefficient> {
    check_positive(eps, "noise eps")?;
    check_positive(act_sup, "activation sup-norm")?;
    if width == 0 {
        return Err(Error::domain("noise width must be at least 1"));
    }
    let arg = (2.0 * width as f64).sqrt() * act_sup / (2.0 * eps);
    Ok(Coefficient::upper(1.0 - 2.0 * q_function(arg)))
}

fn site_coefficient(site: &LayerRegularization) -> Result<Coefficient> {
    match site {
        LayerRegularization::Dropout { delta, width } => dropout_eta(*delta, *width),
        LayerRegularization::DropConnect { deltas } => dropconnect_eta_ub(deltas),
        LayerRegularization::GaussianNoise {
            eps,
            act_sup,
            width,
        } => noise_eta_ub(*eps, *act_sup, *width),
        // deterministic layer
        LayerRegularization::None => Ok(Coefficient::exact(1.0)),
    }
}

/// Per-site coefficients, site 1 first.
pub fn site_coefficients(spec: &NetworkSpec) -> Result<Vec<Coefficient>> {
    spec.sites().iter().map(site_coefficient).collect()
}

/// Product of all per-site contraction coefficients.
pub fn network_eta_product(spec: &NetworkSpec) -> Result<f64> {
    Ok(site_coefficients(spec)?.iter().map(|c| c.value).product())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EtaApprox {
    pub exact: f64,
    pub approx: f64,
    /// `|approx - exact| / exact`.
    pub rel_gap: f64,
}

/// First-order approximation `exp(-Σ δ_l^{d_l})` of a Dropout-only product.
pub fn eta_product_approx(spec: &NetworkSpec) -> Result<EtaApprox> {
    let mut exact = 1.0;
    let mut exponent = 0.0;
    for site in spec.sites() {
        match site {
            LayerRegularization::Dropout { delta, width } => {
                let c = dropout_eta(*delta, *width)?;
                exact *= c.value;
                exponent += delta.powi(*width as i32);
            }
            LayerRegularization::None => {}
            other => {
                return Err(Error::UnsupportedRegularization(format!(
                    "exponential approximation is defined for dropout only, found {}",
                    other.name()
                )))
            }
        }
    }
    let approx = (-exponent).exp();
    Ok(EtaApprox {
        exact,
        approx,
        rel_gap: (approx - exact).abs() / exact,
    })
}

/// Total variation between `N(a, ε²I)` and `N(b, ε²I)` with `‖a - b‖ = shift_norm`.
pub fn tv_shifted_gaussians(shift_norm: f64, eps: f64) -> Result<f64> {
    check_positive(eps, "noise eps")?;
    if !(shift_norm >= 0.0) {
        return Err(Error::domain(format!(
            "shift norm must be nonnegative, got {shift_norm}"
        )));
    }
    Ok(1.0 - 2.0 * q_function(shift_norm / (2.0 * eps)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::RegularizationDescriptor;

    #[test]
    fn dropout_limits_and_value() {
        assert!((dropout_eta(1e-12, 3).unwrap().value - 1.0).abs() < 1e-15);
        assert!(dropout_eta(1.0 - 1e-12, 1).unwrap().value < 1e-11);
        assert_eq!(dropout_eta(0.5, 2).unwrap().value, 0.75);
        assert_eq!(dropout_eta(0.5, 2).unwrap().tightness, Tightness::Exact);
        assert!(matches!(dropout_eta(0.0, 2), Err(Error::Domain(_))));
        assert!(matches!(dropout_eta(1.0, 2), Err(Error::Domain(_))));
    }

    #[test]
    fn dropconnect_values() {
        let m = MatrixR::new(2, 2, vec![0.5; 4]).unwrap();
        let c = dropconnect_eta_ub(&m).unwrap();
        assert_eq!(c.value, 0.9375);
        assert_eq!(c.tightness, Tightness::UpperBound);
        let single = MatrixR::new(1, 1, vec![0.3]).unwrap();
        assert_eq!(
            dropconnect_eta_ub(&single).unwrap().value,
            dropout_eta(0.3, 1).unwrap().value
        );
        let near_one = MatrixR::new(1, 2, vec![1.0 - 1e-12; 2]).unwrap();
        assert!(dropconnect_eta_ub(&near_one).unwrap().value < 1e-11);
        let bad = MatrixR::new(1, 2, vec![0.5, 1.2]).unwrap();
        assert!(dropconnect_eta_ub(&bad).is_err());
    }

    #[test]
    fn noise_limits() {
        assert!(noise_eta_ub(1e12, 1.0, 4).unwrap().value < 1e-11);
        assert!(noise_eta_ub(-1.0, 1.0, 4).is_err());
        assert!(noise_eta_ub(1.0, 0.0, 4).is_err());
        let small = noise_eta_ub(1.0, 1.0, 1).unwrap().value;
        let wide = noise_eta_ub(1.0, 1.0, 20).unwrap().value;
        assert!(small < wide && wide < 1.0);
    }

    #[test]
    fn all_none_network_is_one() {
        let spec = NetworkSpec::uniform(vec![3, 5, 2], 2, RegularizationDescriptor::None).unwrap();
        assert_eq!(network_eta_product(&spec).unwrap(), 1.0);
    }

    #[test]
    fn dropout_product_widths() {
        let spec = NetworkSpec::uniform(
            vec![10, 20, 2],
            2,
            RegularizationDescriptor::Dropout { delta: 0.5 },
        )
        .unwrap();
        let expected = (1.0 - 0.5f64.powi(10)) * (1.0 - 0.5f64.powi(20));
        assert_eq!(network_eta_product(&spec).unwrap(), expected);
        assert!((expected - 0.9990).abs() < 1e-4);
    }

    #[test]
    fn approximation_gap() {
        let spec = NetworkSpec::uniform(
            vec![10, 4],
            2,
            RegularizationDescriptor::Dropout { delta: 0.5 },
        )
        .unwrap();
        let a = eta_product_approx(&spec).unwrap();
        assert!((a.approx - (-(0.5f64.powi(10))).exp()).abs() < 1e-16);
        assert!((a.approx - 0.999024).abs() < 1e-6);
        assert!((a.exact - 0.999023).abs() < 1e-6);

        let coarse = NetworkSpec::uniform(
            vec![1, 4],
            2,
            RegularizationDescriptor::Dropout { delta: 0.9 },
        )
        .unwrap();
        let a = eta_product_approx(&coarse).unwrap();
        assert!((a.exact - 0.1).abs() < 1e-15);
        assert!((a.approx - (-0.9f64).exp()).abs() < 1e-15);
        assert!(a.rel_gap > 3.0);

        let noisy = NetworkSpec::uniform(
            vec![1, 4],
            2,
            RegularizationDescriptor::Noise {
                eps: 1.0,
                act_sup: 1.0,
            },
        )
        .unwrap();
        assert!(matches!(
            eta_product_approx(&noisy),
            Err(Error::UnsupportedRegularization(_))
        ));
    }

    #[test]
    fn tv_limits() {
        assert_eq!(tv_shifted_gaussians(0.0, 1.3).unwrap(), 0.0);
        assert!((tv_shifted_gaussians(1e6, 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(tv_shifted_gaussians(1.0, 0.0).is_err());
    }
}
