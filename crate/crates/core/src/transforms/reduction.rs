//! The seeded complex Gaussian matrix `ℓ` that compresses `F` to `k`
//! dimensions.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Output dimension that makes `Φ` injective on orbits of signals in `ℂ^N`.
pub fn default_out_dim(n: usize) -> usize {
    2 * n + 1
}

/// A `k × s` complex matrix with i.i.d. entries `(a + ib)/√2`, `a, b ~ N(0, 1)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearReduction {
    seed: u64,
    out_dim: usize,
    in_dim: usize,
    /// Row-major.
    matrix: Vec<Complex64>,
    operator_norm: f64,
}

/// Draws the matrix for `seed`; the same seed always yields the same matrix.
pub fn make_reduction(seed: u64, in_dim: usize, out_dim: usize) -> Result<LinearReduction> {
    if out_dim == 0 || in_dim == 0 {
        return Err(Error::InvalidArgument(format!(
            "reduction dimensions must be positive, got {out_dim}x{in_dim}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let matrix = (0..out_dim * in_dim)
        .map(|_| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            Complex64::new(re * scale, im * scale)
        })
        .collect();
    LinearReduction::from_matrix(seed, out_dim, in_dim, matrix)
}

impl LinearReduction {
    /// Wraps an explicit row-major matrix.
    pub fn from_matrix(seed: u64, out_dim: usize, in_dim: usize, matrix: Vec<Complex64>) -> Result<Self> {
        if matrix.len() != out_dim * in_dim {
            return Err(Error::dims(out_dim * in_dim, matrix.len()));
        }
        let operator_norm = spectral_norm(out_dim, in_dim, &matrix);
        Ok(LinearReduction {
            seed,
            out_dim,
            in_dim,
            matrix,
            operator_norm,
        })
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// `k`.
    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    /// `s`.
    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn matrix(&self) -> &[Complex64] {
        &self.matrix
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[row * self.in_dim + col]
    }

    /// Largest singular value.
    pub fn operator_norm(&self) -> f64 {
        self.operator_norm
    }

    pub fn to_dmatrix(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(self.out_dim, self.in_dim, &self.matrix)
    }

    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.in_dim {
            return Err(Error::dims(self.in_dim, v.len()));
        }
        Ok(self
            .matrix
            .chunks_exact(self.in_dim)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }
}

/// `√λ_max` of the smaller Gram matrix.
fn spectral_norm(rows: usize, cols: usize, data: &[Complex64]) -> f64 {
    let a = DMatrix::from_row_slice(rows, cols, data);
    let gram = if rows <= cols {
        &a * a.adjoint()
    } else {
        a.adjoint() * &a
    };
    gram.symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(0.0_f64, f64::max)
        .sqrt()
}
