//! Collisions of the unsigned map `g(w) = ‖w‖(w/‖w‖)^{V_n}` when some
//! `c_k < 0`.
//!
//! For unit `y` the function `P(λ) = Σ λ^{2c_k}|y_k|² − 1` vanishes at
//! `λ = 1` and, being convex in `ln λ` and unbounded at both ends when `c`
//! has mixed signs, at one other point `λ_y`. Then `ỹ = (λ_y^{c_k} y_k)` is
//! a unit signal and the row monomials of `V_n` satisfy
//! `ỹ^{row} = λ_y·y^{row}`.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{eval_g_norm, eval_q, HermiteData};
use crate::action::Signal;
use crate::error::{Error, Result};
use crate::orbit::{full_support_signal, orbit_distance};

/// Bracket for the second root, `[1e-9, 1e9]`.
const LAMBDA_MIN: f64 = 1e-9;
const LAMBDA_MAX: f64 = 1e9;
/// Roots closer than this to `λ = 1` are the trivial one.
const TRIVIAL_ROOT: f64 = 1e-8;
const GRID_POINTS: usize = 4000;

/// Which quadratic quantity must be preserved by the scaling.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RootForm {
    /// `Σ λ^{2c_k}|y_k|² = ‖y‖²`.
    Norm,
    /// `Σ sign(c_k) λ^{2c_k}|y_k|² = Q(y)`.
    Signed,
}

/// `λ^{c}` on the positive real branch.
fn rpow(lambda: f64, c: f64) -> f64 {
    (c * lambda.ln()).exp()
}

/// A root `λ ≠ 1` of the scaling equation for `form`, or `None`.
pub fn second_root(data: &HermiteData, y: &Signal, form: RootForm) -> Result<Option<f64>> {
    data.group().check_signal(y)?;
    let c = data.c_f64();
    let terms: Vec<(f64, f64)> = y
        .iter()
        .zip(&c)
        .zip(data.signature())
        .map(|((z, &ck), &s)| {
            let w = match form {
                RootForm::Norm => z.norm_sqr(),
                RootForm::Signed => f64::from(s) * z.norm_sqr(),
            };
            (ck, w)
        })
        .collect();
    let target: f64 = terms.iter().map(|t| t.1).sum();
    // In t = ln λ.
    let p = |t: f64| terms.iter().map(|&(ck, w)| w * (2.0 * ck * t).exp()).sum::<f64>() - target;
    let slope: f64 = terms.iter().map(|&(ck, w)| 2.0 * ck * w).sum();
    if slope == 0.0 {
        return Ok(None);
    }
    // P < 0 just past t = 0 on the side opposite the slope.
    let dir = -slope.signum();
    let t_end = if dir > 0.0 { LAMBDA_MAX.ln() } else { LAMBDA_MIN.ln() }.abs();
    let t_start = TRIVIAL_ROOT;
    let grid = |i: usize| dir * t_start * (t_end / t_start).powf(i as f64 / (GRID_POINTS - 1) as f64);
    let mut seen_negative = None;
    for i in 0..GRID_POINTS {
        let t = grid(i);
        let v = p(t);
        match seen_negative {
            None if v < 0.0 => seen_negative = Some(t),
            Some(t_neg) if v > 0.0 => return Ok(Some(bisect(&p, t_neg, t).exp())),
            _ => {}
        }
    }
    Ok(None)
}

/// Bisection on `[a, b]` with `p(a) < 0 < p(b)` until `|Δλ| ≤ 1e-12·λ`.
fn bisect(p: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if p(mid) < 0.0 {
            a = mid;
        } else {
            b = mid;
        }
        if (b - a).abs() <= 1e-12 {
            break;
        }
    }
    0.5 * (a + b)
}

/// A pair of signals with equal `g` value, and the checks on it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Counterexample {
    pub lambda_y: f64,
    pub y: Signal,
    /// `λ_y·y`.
    pub scaled: Signal,
    /// `ỹ = (λ_y^{c_k} y_k)`.
    pub x: Signal,
    /// `‖g(λ_y·y) − g(ỹ)‖`.
    pub g_gap: f64,
    /// `d_G(λ_y·y, ỹ)`.
    pub orbit_distance: f64,
    /// `Q(λ_y·y)` and `Q(ỹ)`, whose signs differ.
    pub q_scaled: f64,
    pub q_x: f64,
}

impl Counterexample {
    pub const GAP_TOLERANCE: f64 = 1e-8;
    pub const MIN_DISTANCE: f64 = 1e-3;

    /// `g` collides while the signals lie in different orbits.
    pub fn holds(&self) -> bool {
        self.g_gap <= Self::GAP_TOLERANCE && self.orbit_distance >= Self::MIN_DISTANCE
    }
}

/// Builds the collision from a unit, full-support `y` with `Q(y) > 0`.
pub fn construct_counterexample(data: &HermiteData, y: &Signal) -> Result<Counterexample> {
    if data.nonnegative() {
        return Err(Error::InvalidArgument(
            "every c_k is nonnegative, so g separates and no counterexample exists".into(),
        ));
    }
    data.group().check_signal(y)?;
    if y.iter().any(|z| z.norm() == 0.0) {
        return Err(Error::Domain("y must have full support".into()));
    }
    if (y.norm() - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!("y must have unit norm, has {}", y.norm())));
    }
    if eval_q(data, y)? <= 0.0 {
        return Err(Error::Domain("Q(y) must be positive".into()));
    }
    let lambda = second_root(data, y, RootForm::Norm)?.ok_or_else(|| {
        Error::Domain(format!("no root λ ≠ 1 of P in [{LAMBDA_MIN:e}, {LAMBDA_MAX:e}]"))
    })?;
    let c = data.c_f64();
    let x = Signal::new(y.iter().zip(&c).map(|(z, &ck)| z * rpow(lambda, ck)).collect())?;
    let scaled = y.scale(lambda);
    let gs = eval_g_norm(data, &scaled)?;
    let gx = eval_g_norm(data, &x)?;
    let g_gap = crate::transforms::distance(&gs, &gx);
    let orbit_distance = orbit_distance(data.group(), &scaled, &x)?.distance;
    Ok(Counterexample {
        lambda_y: lambda,
        y: y.clone(),
        q_scaled: eval_q(data, &scaled)?,
        q_x: eval_q(data, &x)?,
        scaled,
        x,
        g_gap,
        orbit_distance,
    })
}

/// Draws unit, full-support `y` with `Q(y) > 0` from `seed` until the
/// construction succeeds.
pub fn construct_random_counterexample(data: &HermiteData, seed: u64) -> Result<Counterexample> {
    if data.nonnegative() {
        return construct_counterexample(data, &Signal::zeros(data.dim()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last = None;
    for _ in 0..1000 {
        let y = full_support_signal(&mut rng, data.dim());
        let y = Signal::new(y.iter().map(|z| z / y.norm()).collect::<Vec<Complex64>>())?;
        if eval_q(data, &y)? <= 0.0 {
            continue;
        }
        match construct_counterexample(data, &y) {
            Ok(ce) => return Ok(ce),
            Err(e) => last = Some(e),
        }
    }
    Err(last.unwrap_or_else(|| Error::Domain("no sample with Q(y) > 0".into())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbit::random_signal;

    fn unit(y: Signal) -> Signal {
        let r = y.norm();
        y.scale(1.0 / r)
    }

    #[test]
    fn lambda_one_is_always_a_root() {
        let d = HermiteData::cyclic_fixture(4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let y = unit(random_signal(&mut rng, 4));
        let c = d.c_f64();
        let p1: f64 = y.iter().zip(&c).map(|(z, &ck)| rpow(1.0, 2.0 * ck) * z.norm_sqr()).sum::<f64>() - 1.0;
        assert!(p1.abs() < 1e-15);
    }

    #[test]
    fn second_root_preserves_norm() {
        let d = HermiteData::cyclic_fixture(4).unwrap();
        let ce = construct_random_counterexample(&d, 7).unwrap();
        assert!((ce.lambda_y - 1.0).abs() > 1e-6);
        assert!((ce.x.norm() - 1.0).abs() < 1e-9);
        assert!(ce.orbit_distance > 1e-3);
    }

    #[test]
    fn nonnegative_c_is_rejected() {
        let d = HermiteData::cyclic_fixture(3).unwrap();
        assert!(construct_random_counterexample(&d, 1).is_err());
    }

    #[test]
    fn signed_form_only_has_the_trivial_root() {
        let d = HermiteData::cyclic_fixture(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let y = unit(full_support_signal(&mut rng, 5));
            assert_eq!(second_root(&d, &y, RootForm::Signed).unwrap(), None);
        }
    }

    #[test]
    fn preconditions() {
        let d = HermiteData::cyclic_fixture(4).unwrap();
        let y = Signal::from_real(&[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(construct_counterexample(&d, &y).is_err());
        let y = Signal::from_real(&[1.0, 1.0, 1.0, 1.0]).unwrap();
        assert!(construct_counterexample(&d, &y).is_err());
    }
}
