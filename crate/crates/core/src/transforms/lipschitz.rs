//! Upper bounds on `‖Φ(x) − Φ(y)‖ / d_G([x], [y])` and the analogue for `Φ_F`.

use serde::{Deserialize, Serialize};

use super::LinearReduction;
use crate::error::{Error, Result};
use crate::exponents::ExponentTable;

/// How the constant `C` in `3‖ℓ‖C + 1` is obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LipschitzModel {
    /// `C = max((Σ_i Σ_j α_ij²)^{1/2}, √s)` from the table's exponents. On the
    /// torus `‖∇F_i‖² = Σ_j α_ij²` and `‖F‖ = √s`.
    Exact,
    /// Closed form for a two-factor group `Z_n × Z_m` acting on `ℂ^N`:
    /// `3√6·nm·N^{3/2}‖ℓ‖ + 1`.
    ProductGroup { n: u64, m: u64 },
    /// Closed form for circular shifts of `n × m` images:
    /// `3√6·(nm)^{5/2}‖ℓ‖ + 1`.
    ImageShift { n: u64, m: u64 },
}

/// `Σ_i Σ_j α_ij²` over all monomials.
fn gradient_energy(table: &ExponentTable) -> f64 {
    table
        .monomials()
        .iter()
        .flat_map(|m| m.exponents().iter())
        .map(|&a| (a as f64) * (a as f64))
        .sum()
}

/// Lipschitz bound for `Φ` built from `table` and `ell`.
pub fn lipschitz_constant(table: &ExponentTable, ell: &LinearReduction, model: LipschitzModel) -> Result<f64> {
    if ell.in_dim() != table.total_dim() {
        return Err(Error::dims(table.total_dim(), ell.in_dim()));
    }
    let norm = ell.operator_norm();
    let root6 = 6f64.sqrt();
    Ok(match model {
        LipschitzModel::Exact => {
            let c = gradient_energy(table).sqrt().max((table.total_dim() as f64).sqrt());
            3.0 * norm * c + 1.0
        }
        LipschitzModel::ProductGroup { n, m } => {
            let n_dim = table.dim() as f64;
            3.0 * root6 * (n * m) as f64 * n_dim.powf(1.5) * norm + 1.0
        }
        LipschitzModel::ImageShift { n, m } => {
            if (n * m) as usize != table.dim() {
                return Err(Error::dims((n * m) as usize, table.dim()));
            }
            3.0 * root6 * ((n * m) as f64).powf(2.5) * norm + 1.0
        }
    })
}

/// Lipschitz bound for `Φ_F`: `2·(Σ_i Σ_j α_ij²)^{1/2} + √s`.
///
/// `F` is `(ΣΣα²)^{1/2}`-Lipschitz on the closed unit ball and bounded by `√s`
/// on the sphere; splitting `‖x‖F(u) − ‖y‖F(v)` at `‖y‖F(u)` and using
/// `‖y‖·‖u − v‖ ≤ 2‖x − y‖` gives the constant.
pub fn phi_f_lipschitz_constant(table: &ExponentTable) -> f64 {
    2.0 * gradient_energy(table).sqrt() + (table.total_dim() as f64).sqrt()
}
