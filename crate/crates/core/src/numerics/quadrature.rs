use std::f64::consts::{PI, SQRT_2};

/// Gauss-Hermite rule for `∫ e^{-x²} f(x) dx`.
#[derive(Clone, Debug)]
pub struct GaussHermite {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussHermite {
    /// Builds an `n`-point rule by Newton iteration on the orthonormal
    /// Hermite recurrence.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Hermite rule needs at least one node");
        const PI_M4: f64 = 0.751_125_544_464_942_5; // π^{-1/4}
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        let half = n.div_ceil(2);
        let mut z = 0.0_f64;
        for i in 0..half {
            z = match i {
                0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-0.16667),
                1 => z - 1.14 * nf.powf(0.426) / z,
                2 => 1.86 * z - 0.86 * nodes[0],
                3 => 1.91 * z - 0.91 * nodes[1],
                _ => 2.0 * z - nodes[i - 2],
            };
            let mut deriv = 0.0;
            for _ in 0..200 {
                let (mut p1, mut p2) = (PI_M4, 0.0);
                for j in 0..n {
                    let p3 = p2;
                    p2 = p1;
                    let jf = j as f64;
                    p1 = z * (2.0 / (jf + 1.0)).sqrt() * p2 - (jf / (jf + 1.0)).sqrt() * p3;
                }
                deriv = (2.0 * nf).sqrt() * p2;
                let step = p1 / deriv;
                z -= step;
                if step.abs() <= 1e-15 * z.abs().max(1.0) {
                    break;
                }
            }
            nodes[i] = z;
            nodes[n - 1 - i] = -z;
            weights[i] = 2.0 / (deriv * deriv);
            weights[n - 1 - i] = weights[i];
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `E[f(mean + sd·Z)]` for `Z ~ N(0, 1)`.
    pub fn normal_expectation(&self, mean: f64, sd: f64, f: impl Fn(f64) -> f64) -> f64 {
        let scale = SQRT_2 * sd;
        let acc: f64 = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(mean + scale * x))
            .sum();
        acc / PI.sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_sqrt_pi() {
        for n in [1, 2, 5, 20, 64] {
            let gh = GaussHermite::new(n);
            let s: f64 = gh.weights().iter().sum();
            assert!((s - PI.sqrt()).abs() < 1e-12, "n = {n}: {s}");
        }
    }

    #[test]
    fn normal_moments_are_exact() {
        let gh = GaussHermite::new(64);
        let (m, s) = (0.3, 1.7);
        assert!((gh.normal_expectation(m, s, |x| x) - m).abs() < 1e-13);
        assert!((gh.normal_expectation(m, s, |x| (x - m).powi(2)) - s * s).abs() < 1e-12);
        assert!((gh.normal_expectation(m, s, |x| (x - m).powi(4)) - 3.0 * s.powi(4)).abs() < 1e-10);
    }

    #[test]
    fn nodes_are_sorted_descending_and_symmetric() {
        let gh = GaussHermite::new(64);
        for w in gh.nodes().windows(2) {
            assert!(w[0] > w[1]);
        }
        for (a, b) in gh.nodes().iter().zip(gh.nodes().iter().rev()) {
            assert_eq!(*a, -*b);
        }
    }
}
