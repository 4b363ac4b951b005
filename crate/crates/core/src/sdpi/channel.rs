//! Finite discrete channels and brute-force contraction searches.
//!
//! The KL search restricts to pairs of inputs and binary input laws on each
//! pair, which is where the KL contraction coefficient is attained.

use rayon::prelude::*;

use crate::numerics::MatrixR;
use crate::{Error, Result};

/// Largest input or output alphabet accepted by the brute-force searches.
pub const MAX_ALPHABET: usize = 64;

const ROW_SUM_TOL: f64 = 1e-12;

/// Row-stochastic matrix `P(y | x)` with `inputs` rows and `outputs` columns.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteChannel {
    inputs: usize,
    outputs: usize,
    probs: Vec<f64>,
}

impl FiniteChannel {
    pub fn new(inputs: usize, outputs: usize, probs: Vec<f64>) -> Result<Self> {
        if inputs == 0 || outputs == 0 || probs.len() != inputs * outputs {
            return Err(Error::ShapeMismatch(format!(
                "{inputs}x{outputs} channel with {} entries",
                probs.len()
            )));
        }
        if let Some(p) = probs.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(Error::domain(format!("channel entry {p} outside [0, 1]")));
        }
        for (x, row) in probs.chunks(outputs).enumerate() {
            let s: f64 = row.iter().sum();
            if (s - 1.0).abs() > ROW_SUM_TOL {
                return Err(Error::domain(format!("row {x} sums to {s}, not 1")));
            }
        }
        Ok(Self {
            inputs,
            outputs,
            probs,
        })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let m = MatrixR::from_rows(rows)?;
        Self::new(m.rows(), m.cols(), m.as_slice().to_vec())
    }

    pub fn identity(n: usize) -> Self {
        let mut probs = vec![0.0; n * n];
        for i in 0..n {
            probs[i * n + i] = 1.0;
        }
        Self {
            inputs: n,
            outputs: n,
            probs,
        }
    }

    /// Binary erasure channel; output 2 is the erasure symbol.
    pub fn binary_erasure(delta: f64) -> Result<Self> {
        Self::from_rows(&[vec![1.0 - delta, 0.0, delta], vec![0.0, 1.0 - delta, delta]])
    }

    pub fn binary_symmetric(p: f64) -> Result<Self> {
        Self::from_rows(&[vec![1.0 - p, p], vec![p, 1.0 - p]])
    }

    /// Z-channel: input 0 is kept, input 1 is flipped to 0 with probability `delta`.
    pub fn z_channel(delta: f64) -> Result<Self> {
        Self::from_rows(&[vec![1.0, 0.0], vec![delta, 1.0 - delta]])
    }

    /// One Dropout coordinate over the symbols `{0, a, b}` (indices 0, 1, 2):
    /// zero is preserved, a nonzero symbol is zeroed with probability `delta`.
    pub fn dropout_coordinate(delta: f64) -> Result<Self> {
        Self::from_rows(&[
            vec![1.0, 0.0, 0.0],
            vec![delta, 1.0 - delta, 0.0],
            vec![delta, 0.0, 1.0 - delta],
        ])
    }

    /// `width` independent Dropout coordinates, each over `{0, a, b}`.
    pub fn dropout_product(delta: f64, width: usize) -> Result<Self> {
        let coord = Self::dropout_coordinate(delta)?;
        let mut ch = coord.clone();
        for _ in 1..width {
            ch = ch.product(&coord);
        }
        Ok(ch)
    }

    /// DropConnect channel for a `rows x cols` mask: input coordinate `j`
    /// over `{0, a, b}` is copied to every output row `i`, each copy zeroed
    /// independently with probability `deltas(i, j)`.
    pub fn dropconnect(deltas: &MatrixR) -> Result<Self> {
        let mut acc: Option<FiniteChannel> = None;
        for j in 0..deltas.cols() {
            let mut fan: Option<FiniteChannel> = None;
            for i in 0..deltas.rows() {
                let c = Self::dropout_coordinate(deltas.get(i, j))?;
                fan = Some(match fan {
                    None => c,
                    Some(f) => f.fan_out(&c),
                });
            }
            let fan = fan.expect("at least one row");
            acc = Some(match acc {
                None => fan,
                Some(a) => a.product(&fan),
            });
        }
        Ok(acc.expect("at least one column"))
    }

    pub fn inputs(&self) -> usize {
        self.inputs
    }

    pub fn outputs(&self) -> usize {
        self.outputs
    }

    pub fn row(&self, x: usize) -> &[f64] {
        &self.probs[x * self.outputs..(x + 1) * self.outputs]
    }

    /// Parallel product: inputs and outputs are pairs, noise independent.
    pub fn product(&self, other: &FiniteChannel) -> FiniteChannel {
        let inputs = self.inputs * other.inputs;
        let outputs = self.outputs * other.outputs;
        let mut probs = Vec::with_capacity(inputs * outputs);
        for x1 in 0..self.inputs {
            for x2 in 0..other.inputs {
                for &p1 in self.row(x1) {
                    for &p2 in other.row(x2) {
                        probs.push(p1 * p2);
                    }
                }
            }
        }
        FiniteChannel {
            inputs,
            outputs,
            probs,
        }
    }

    /// Same input fed to both channels; output is the pair.
    fn fan_out(&self, other: &FiniteChannel) -> FiniteChannel {
        debug_assert_eq!(self.inputs, other.inputs);
        let outputs = self.outputs * other.outputs;
        let mut probs = Vec::with_capacity(self.inputs * outputs);
        for x in 0..self.inputs {
            for &p1 in self.row(x) {
                for &p2 in other.row(x) {
                    probs.push(p1 * p2);
                }
            }
        }
        FiniteChannel {
            inputs: self.inputs,
            outputs,
            probs,
        }
    }

    fn input_pairs(&self) -> Vec<(usize, usize)> {
        (0..self.inputs)
            .flat_map(|i| (i + 1..self.inputs).map(move |j| (i, j)))
            .collect()
    }
}

fn xlogx(x: f64) -> f64 {
    if x > 0.0 {
        x * x.ln()
    } else {
        0.0
    }
}

/// Largest KL ratio over binary laws `Bern(α)` vs `Bern(β)` supported on the
/// input pair with channel rows `a` and `b`.
fn pair_search(a: &[f64], b: &[f64], grid: usize) -> f64 {
    let support: Vec<(f64, f64)> = a
        .iter()
        .zip(b)
        .filter(|(x, y)| **x > 0.0 || **y > 0.0)
        .map(|(x, y)| (*x, *y))
        .collect();
    if support.iter().all(|(x, y)| x == y) {
        return 0.0;
    }
    let g = grid as f64;
    let lattice: Vec<f64> = (0..=grid).map(|i| i as f64 / g).collect();

    // Σ p ln p of the output law and Σ α ln α of the input law, per α.
    let out_neg_entropy: Vec<f64> = lattice
        .iter()
        .map(|&al| {
            support
                .iter()
                .map(|(x, y)| xlogx(al * x + (1.0 - al) * y))
                .sum()
        })
        .collect();
    let in_neg_entropy: Vec<f64> = lattice
        .iter()
        .map(|&al| xlogx(al) + xlogx(1.0 - al))
        .collect();

    // Cross terms Σ a_y ln q_y and Σ b_y ln q_y per interior β.
    let cross: Vec<(f64, f64)> = lattice
        .iter()
        .map(|&be| {
            if be <= 0.0 || be >= 1.0 {
                return (f64::NAN, f64::NAN);
            }
            support.iter().fold((0.0, 0.0), |(ca, cb), (x, y)| {
                let lq = (be * x + (1.0 - be) * y).ln();
                (
                    ca + if *x > 0.0 { x * lq } else { 0.0 },
                    cb + if *y > 0.0 { y * lq } else { 0.0 },
                )
            })
        })
        .collect();

    let mut best = 0.0_f64;
    for (i, &al) in lattice.iter().enumerate() {
        for j in 1..grid {
            let be = lattice[j];
            if (al - be).abs() < 1e-6 {
                continue;
            }
            let kl_in = in_neg_entropy[i] - al * be.ln() - (1.0 - al) * (1.0 - be).ln();
            if kl_in <= 0.0 {
                continue;
            }
            let (ca, cb) = cross[j];
            let kl_out = out_neg_entropy[i] - al * ca - (1.0 - al) * cb;
            best = best.max(kl_out / kl_in);
        }
        // β → α limit of the ratio (ratio of χ² curvatures).
        if al > 0.0 && al < 1.0 {
            let fisher_out: f64 = support
                .iter()
                .map(|(x, y)| (x - y).powi(2) / (al * x + (1.0 - al) * y))
                .sum();
            best = best.max(al * (1.0 - al) * fisher_out);
        }
    }
    best
}

fn check_alphabet(ch: &FiniteChannel) -> Result<()> {
    let size = ch.inputs.max(ch.outputs);
    if size > MAX_ALPHABET {
        return Err(Error::AlphabetTooLarge {
            size,
            limit: MAX_ALPHABET,
        });
    }
    Ok(())
}

/// Brute-force lower estimate of `η_KL(ch)`.
///
/// Maximizes `D(ch∘P ‖ ch∘Q) / D(P ‖ Q)` over input pairs and binary laws on
/// a `grid`-step lattice; the estimate increases toward `η_KL` as `grid`
/// grows.
pub fn eta_kl_bruteforce(ch: &FiniteChannel, grid: usize) -> Result<f64> {
    check_alphabet(ch)?;
    if grid < 100 {
        return Err(Error::domain(format!(
            "grid must be at least 100, got {grid}"
        )));
    }
    let per_pair: Vec<f64> = ch
        .input_pairs()
        .par_iter()
        .map(|&(i, j)| pair_search(ch.row(i), ch.row(j), grid))
        .collect();
    let best = per_pair.into_iter().fold(0.0_f64, f64::max);
    Ok(best.clamp(0.0, 1.0))
}

/// `½ max_{x,x'} H²(P_x, P_x')` with `H² = Σ (√p - √q)²`, a lower bound on `η_KL`.
pub fn hellinger_eta_lower_bound(ch: &FiniteChannel) -> f64 {
    ch.input_pairs()
        .into_iter()
        .map(|(i, j)| {
            ch.row(i)
                .iter()
                .zip(ch.row(j))
                .map(|(p, q)| (p.sqrt() - q.sqrt()).powi(2))
                .sum::<f64>()
        })
        .fold(0.0, f64::max)
        * 0.5
}

/// Dobrushin coefficient `max_{x,x'} TV(P_x, P_x')`, an upper bound on `η_KL`.
pub fn dobrushin_coefficient(ch: &FiniteChannel) -> f64 {
    ch.input_pairs()
        .into_iter()
        .map(|(i, j)| {
            0.5 * ch
                .row(i)
                .iter()
                .zip(ch.row(j))
                .map(|(p, q)| (p - q).abs())
                .sum::<f64>()
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_stochastic_rows() {
        assert!(FiniteChannel::from_rows(&[vec![0.5, 0.4]]).is_err());
        assert!(FiniteChannel::from_rows(&[vec![1.5, -0.5]]).is_err());
    }

    #[test]
    fn identity_channel_is_not_contracting() {
        let eta = eta_kl_bruteforce(&FiniteChannel::identity(3), 1000).unwrap();
        assert!((0.99..=1.0).contains(&eta));
    }

    #[test]
    fn erasure_channel() {
        let bec = FiniteChannel::binary_erasure(0.3).unwrap();
        let eta = eta_kl_bruteforce(&bec, 1000).unwrap();
        assert!((eta - 0.7).abs() < 2e-3, "{eta}");
    }

    #[test]
    fn hellinger_edge_cases() {
        let same = FiniteChannel::from_rows(&[vec![0.2, 0.8], vec![0.2, 0.8]]).unwrap();
        assert_eq!(hellinger_eta_lower_bound(&same), 0.0);
        let bsc = FiniteChannel::binary_symmetric(0.5).unwrap();
        assert_eq!(hellinger_eta_lower_bound(&bsc), 0.0);
        assert_eq!(eta_kl_bruteforce(&bsc, 100).unwrap(), 0.0);
    }

    #[test]
    fn alphabet_and_grid_limits() {
        let big = FiniteChannel::identity(65);
        assert!(matches!(
            eta_kl_bruteforce(&big, 100),
            Err(Error::AlphabetTooLarge { size: 65, .. })
        ));
        assert!(eta_kl_bruteforce(&FiniteChannel::identity(2), 99).is_err());
    }

    #[test]
    fn dropout_product_shape() {
        let ch = FiniteChannel::dropout_product(0.5, 2).unwrap();
        assert_eq!((ch.inputs(), ch.outputs()), (9, 9));
        let dc = FiniteChannel::dropconnect(&MatrixR::new(2, 1, vec![0.5, 0.5]).unwrap()).unwrap();
        assert_eq!((dc.inputs(), dc.outputs()), (3, 9));
    }
}
