use std::fmt;

use nalgebra::DMatrix;

use crate::{Error, Result};

/// Relative singular-value cutoff used by [`numerical_rank`].
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

/// Dense row-major real matrix with finite entries.
#[derive(Clone, PartialEq)]
pub struct MatrixR {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl MatrixR {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::ShapeMismatch(format!(
                "matrix must be at least 1x1, got {rows}x{cols}"
            )));
        }
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if let Some(bad) = data.iter().find(|v| !v.is_finite()) {
            return Err(Error::domain(format!("matrix entry {bad} is not finite")));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        Self::new(r, c, rows.concat())
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = 1.0;
        }
        Self {
            rows: n,
            cols: n,
            data,
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    /// Single-row matrix.
    pub fn row_vector(v: &[f64]) -> Result<Self> {
        Self::new(1, v.len(), v.to_vec())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * factor).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self.get(r, c));
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    /// `self * rhs`.
    pub fn matmul(&self, rhs: &MatrixR) -> Result<MatrixR> {
        if self.cols != rhs.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = vec![0.0; self.rows * rhs.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                let rrow = rhs.row(k);
                let orow = &mut out[i * rhs.cols..(i + 1) * rhs.cols];
                for (o, b) in orow.iter_mut().zip(rrow) {
                    *o += a * b;
                }
            }
        }
        Ok(MatrixR {
            rows: self.rows,
            cols: rhs.cols,
            data: out,
        })
    }

    /// Singular values in nonincreasing order.
    pub fn singular_values(&self) -> Vec<f64> {
        let m = DMatrix::from_row_slice(self.rows, self.cols, &self.data);
        let mut s: Vec<f64> = m.singular_values().iter().copied().collect();
        s.sort_by(|a, b| b.total_cmp(a));
        s
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn operator_norm(&self) -> f64 {
        self.singular_values().first().copied().unwrap_or(0.0)
    }

    /// Number of singular values above `tol_factor * max(rows, cols) * s_max`.
    pub fn numerical_rank(&self, tol_factor: f64) -> usize {
        let s = self.singular_values();
        let s_max = s.first().copied().unwrap_or(0.0);
        if s_max == 0.0 {
            return 0;
        }
        let cutoff = tol_factor * self.rows.max(self.cols) as f64 * s_max;
        s.iter().filter(|&&v| v > cutoff).count()
    }
}

impl fmt::Debug for MatrixR {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MatrixR({}x{}) [", self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{:?}", self.row(r))?;
        }
        write!(f, "]")
    }
}

pub fn numerical_rank(m: &MatrixR, tol_factor: f64) -> usize {
    m.numerical_rank(tol_factor)
}

pub fn frobenius_norm(m: &MatrixR) -> f64 {
    m.frobenius_norm()
}

pub fn operator_norm(m: &MatrixR) -> f64 {
    m.operator_norm()
}

/// Weight matrices `W_1..W_L` of a feed-forward linear stack together with
/// the cached products `W⊗l = W_l ... W_1` (and `W⊗0 = I`), their numerical
/// ranks and Frobenius norms, and the per-layer operator norms.
#[derive(Clone, Debug)]
pub struct WeightStack {
    layers: Vec<MatrixR>,
    products: Vec<MatrixR>,
    ranks: Vec<usize>,
    product_frobenius: Vec<f64>,
    layer_operator: Vec<f64>,
}

impl WeightStack {
    pub fn new(layers: Vec<MatrixR>) -> Result<Self> {
        let first = layers
            .first()
            .ok_or_else(|| Error::ShapeMismatch("weight stack needs at least one layer".into()))?;
        let d0 = first.cols();
        let mut products = Vec::with_capacity(layers.len() + 1);
        products.push(MatrixR::identity(d0));
        for (i, w) in layers.iter().enumerate() {
            let prev = products.last().expect("nonempty");
            if w.cols() != prev.rows() {
                return Err(Error::ShapeMismatch(format!(
                    "layer {} is {}x{} but its input has dimension {}",
                    i + 1,
                    w.rows(),
                    w.cols(),
                    prev.rows()
                )));
            }
            let next = w.matmul(prev)?;
            products.push(next);
        }
        let ranks = products
            .iter()
            .map(|p| p.numerical_rank(DEFAULT_RANK_TOL))
            .collect();
        let product_frobenius = products.iter().map(MatrixR::frobenius_norm).collect();
        let layer_operator = layers.iter().map(MatrixR::operator_norm).collect();
        Ok(Self {
            layers,
            products,
            ranks,
            product_frobenius,
            layer_operator,
        })
    }

    /// Number of layers `L`.
    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn input_dim(&self) -> usize {
        self.products[0].rows()
    }

    pub fn layers(&self) -> &[MatrixR] {
        &self.layers
    }

    /// `W⊗l` for `l = 0..=L`.
    pub fn product(&self, l: usize) -> &MatrixR {
        &self.products[l]
    }

    pub fn products(&self) -> &[MatrixR] {
        &self.products
    }

    /// Numerical ranks `r_0..r_L` of the cached products.
    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    /// `‖W⊗l‖_F` for `l = 0..=L`.
    pub fn product_frobenius(&self) -> &[f64] {
        &self.product_frobenius
    }

    /// `‖W_l‖_op` for `l = 1..=L` (index 0 holds layer 1).
    pub fn layer_operator_norms(&self) -> &[f64] {
        &self.layer_operator
    }

    /// `∏_{j>l} ‖W_j‖_op²`, equal to 1 for `l = L`.
    pub fn tail_operator_sq(&self, l: usize) -> f64 {
        self.layer_operator[l..].iter().map(|s| s * s).product()
    }
}

/// Builds a [`WeightStack`], caching products, ranks and norms.
pub fn weight_products(layers: Vec<MatrixR>) -> Result<WeightStack> {
    WeightStack::new(layers)
}
