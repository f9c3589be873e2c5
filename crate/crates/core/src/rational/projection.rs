//! Empirical check that a random linear projection `ℓ∘F` of the monomial
//! tensor separates almost every pair of orbits once `k ≥ N + 2`.
//!
//! Independent random pairs almost never collide under any projection, so
//! the check also runs a Gauss–Newton search for `y` with `ℓF(y) = ℓF(x)`.
//! Below the dimension threshold the search finds inequivalent solutions
//! readily; above it the solutions it finds lie in the orbit of `x`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::action::{GroupSpec, Signal};
use crate::error::{Error, Result};
use crate::exponents::ExponentTable;
use crate::orbit::{random_signal, sample_pair_with, OrbitOracle, PairKind};
use crate::transforms::{approx_eq, make_reduction, LinearReduction};

/// Transform equality tolerance.
const EQUAL_TOL: f64 = 1e-9;
/// Orbit distance above which a collision counts as a violation.
const DISTINCT_ORBITS: f64 = 1e-6;
const NEWTON_ITERATIONS: usize = 100;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProjectionReport {
    /// Signal dimension `N`.
    pub n: usize,
    pub in_dim: usize,
    pub out_dim: usize,
    /// `out_dim ≥ N + 2`.
    pub in_contract: bool,
    pub seed: u64,
    pub samples: usize,
    /// Random pairs with equal projections but distinct orbits.
    pub random_violations: usize,
    /// Same-orbit pairs whose projections differ.
    pub same_orbit_mismatches: usize,
    pub search_trials: usize,
    pub search_converged: usize,
    /// Converged searches that landed outside the orbit of `x`.
    pub search_violations: usize,
}

impl ProjectionReport {
    pub fn violations(&self) -> usize {
        self.random_violations + self.search_violations
    }
}

fn project(table: &ExponentTable, ell: &LinearReduction, x: &[Complex64]) -> Vec<Complex64> {
    let f: Vec<Complex64> = table.monomials().iter().map(|m| m.eval(x)).collect();
    ell.apply(&f).expect("reduction sized to the table")
}

/// `ℓ·∂F/∂y`, a `k × N` complex matrix.
fn jacobian(table: &ExponentTable, ell: &DMatrix<Complex64>, y: &[Complex64]) -> DMatrix<Complex64> {
    let n = table.dim();
    let mut df = DMatrix::zeros(table.total_dim(), n);
    for (i, m) in table.monomials().iter().enumerate() {
        for &k in m.indices() {
            df[(i, k)] = m.derivative(y, k);
        }
    }
    ell * df
}

/// Gauss–Newton for `ℓF(y) = target` from `start`; `Some(y)` on convergence.
fn solve_collision(
    table: &ExponentTable,
    ell: &LinearReduction,
    ell_m: &DMatrix<Complex64>,
    target: &[Complex64],
    start: Vec<Complex64>,
) -> Option<Vec<Complex64>> {
    let scale = crate::action::norm(target).max(1.0);
    let mut y = start;
    for _ in 0..NEWTON_ITERATIONS {
        let r: Vec<Complex64> = project(table, ell, &y).iter().zip(target).map(|(a, b)| a - b).collect();
        let rn = crate::action::norm(&r);
        if !rn.is_finite() {
            return None;
        }
        if rn <= 1e-13 * scale {
            return Some(y);
        }
        let pinv = jacobian(table, ell_m, &y).pseudo_inverse(1e-12).ok()?;
        let step = pinv * DVector::from_vec(r);
        for (yk, sk) in y.iter_mut().zip(step.iter()) {
            *yk -= sk;
        }
    }
    None
}

/// Runs `samples` random pairs, `samples` same-orbit pairs and
/// `search_trials` collision searches against a seeded `ℓ` with `out_dim` rows.
pub fn ae_projection_check(
    group: &GroupSpec,
    table: &ExponentTable,
    out_dim: usize,
    seed: u64,
    samples: usize,
    search_trials: usize,
) -> Result<ProjectionReport> {
    if table.dim() != group.dim() {
        return Err(Error::dims(group.dim(), table.dim()));
    }
    let n = group.dim();
    let ell = make_reduction(seed, table.total_dim(), out_dim)?;
    let ell_m = ell.to_dmatrix();
    let oracle = OrbitOracle::new(group)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);

    let mut random_violations = 0;
    let mut same_orbit_mismatches = 0;
    for _ in 0..samples {
        let (x, y) = sample_pair_with(&mut rng, group, PairKind::Random);
        if approx_eq(&project(table, &ell, x.as_slice()), &project(table, &ell, y.as_slice()), EQUAL_TOL)
            && oracle.distance(&x, &y)?.distance > DISTINCT_ORBITS
        {
            random_violations += 1;
        }
        let (x, y) = sample_pair_with(&mut rng, group, PairKind::SameOrbit);
        if !approx_eq(&project(table, &ell, x.as_slice()), &project(table, &ell, y.as_slice()), EQUAL_TOL) {
            same_orbit_mismatches += 1;
        }
    }

    let mut search_converged = 0;
    let mut search_violations = 0;
    for _ in 0..search_trials {
        let x = random_signal(&mut rng, n);
        let target = project(table, &ell, x.as_slice());
        let start = random_signal(&mut rng, n).into_inner();
        let Some(y) = solve_collision(table, &ell, &ell_m, &target, start) else {
            continue;
        };
        let Ok(y) = Signal::new(y) else { continue };
        if !approx_eq(&target, &project(table, &ell, y.as_slice()), EQUAL_TOL) {
            continue;
        }
        search_converged += 1;
        if oracle.distance(&x, &y)?.distance > DISTINCT_ORBITS {
            search_violations += 1;
        }
    }

    Ok(ProjectionReport {
        n,
        in_dim: table.total_dim(),
        out_dim,
        in_contract: out_dim >= n + 2,
        seed,
        samples,
        random_violations,
        same_orbit_mismatches,
        search_trials,
        search_converged,
        search_violations,
    })
}
