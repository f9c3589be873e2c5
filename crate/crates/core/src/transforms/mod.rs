//! The invariant transforms built on an [`ExponentTable`]:
//!
//! * `F`, the monomial tensor itself;
//! * `Θ`, which keeps only the phases of the monomials and replaces the
//!   moduli by tunable powers `β`;
//! * `Φ_F(x) = ‖x‖·F(x/‖x‖)`, positively homogeneous of degree one;
//! * `Φ(x) = (|x_1|, …, |x_N|, μ(x)·ℓ(v(x)))`, a `3N + 1` dimensional map
//!   where `μ(x)` is the smallest nonzero modulus and `v` is a phase-only
//!   monomial vector.

pub mod lipschitz;
pub mod reduction;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::action::{norm, Signal};
use crate::error::{Error, Result};
use crate::exponents::{pow, ExponentTable, Monomial};

pub use lipschitz::{lipschitz_constant, phi_f_lipschitz_constant, LipschitzModel};
pub use reduction::{default_out_dim, make_reduction, LinearReduction};

/// Relative tolerance used for equality of invariant vectors.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TransformKind {
    F,
    Theta,
    PhiF,
    Phi,
    Rational,
    G,
}

impl TransformKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TransformKind::F => "f",
            TransformKind::Theta => "theta",
            TransformKind::PhiF => "phif",
            TransformKind::Phi => "phi",
            TransformKind::Rational => "rational",
            TransformKind::G => "g",
        }
    }
}

impl fmt::Display for TransformKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TransformKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "f" => Ok(TransformKind::F),
            "theta" => Ok(TransformKind::Theta),
            "phif" | "phi_f" | "phi-f" => Ok(TransformKind::PhiF),
            "phi" => Ok(TransformKind::Phi),
            "rational" => Ok(TransformKind::Rational),
            "g" => Ok(TransformKind::G),
            other => Err(Error::Parse(format!("unknown transform {other:?}"))),
        }
    }
}

/// Which monomial vector `Φ` feeds into `ℓ`.
///
/// `AsWritten` uses support indicators on the diagonal and phase monomials
/// off it. `Repaired` uses `F` of the phase vector everywhere, so diagonal
/// entries are `N(x_k)^{m_k}`. Only `Repaired` separates orbits in general:
/// with `N = 1`, `G = Z_m`, `AsWritten` sees every unit signal as the same.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhiMode {
    AsWritten,
    #[default]
    Repaired,
}

impl PhiMode {
    pub fn as_str(self) -> &'static str {
        match self {
            PhiMode::AsWritten => "as_written",
            PhiMode::Repaired => "repaired",
        }
    }
}

impl fmt::Display for PhiMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PhiMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "as_written" => Ok(PhiMode::AsWritten),
            "repaired" => Ok(PhiMode::Repaired),
            other => Err(Error::Parse(format!("unknown mode {other:?}"))),
        }
    }
}

/// Modulus exponents for `Θ`, one list per monomial of the table, aligned
/// with its indices. Single-index weights are at least 1, all are nonnegative.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BetaWeights {
    weights: Vec<Vec<f64>>,
}

impl BetaWeights {
    /// All weights equal to 1.
    pub fn uniform(table: &ExponentTable) -> Self {
        BetaWeights {
            weights: table.monomials().iter().map(|m| vec![1.0; m.arity()]).collect(),
        }
    }

    pub fn new(table: &ExponentTable, weights: Vec<Vec<f64>>) -> Result<Self> {
        if weights.len() != table.total_dim() {
            return Err(Error::dims(table.total_dim(), weights.len()));
        }
        for (m, w) in table.monomials().iter().zip(&weights) {
            if w.len() != m.arity() {
                return Err(Error::dims(m.arity(), w.len()));
            }
            if w.iter().any(|b| !b.is_finite() || *b < 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "weights for {:?} must be finite and nonnegative",
                    m.indices()
                )));
            }
            if m.arity() == 1 && w[0] < 1.0 {
                return Err(Error::InvalidArgument(format!(
                    "single-index weight for coordinate {} must be at least 1",
                    m.indices()[0]
                )));
            }
        }
        Ok(BetaWeights { weights })
    }

    pub fn weights(&self) -> &[Vec<f64>] {
        &self.weights
    }

    pub fn singles(&self) -> impl Iterator<Item = f64> + '_ {
        self.weights.iter().filter(|w| w.len() == 1).map(|w| w[0])
    }
}

/// Output of a transform, tagged with the transform and the seed of `ℓ` when
/// one was used.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvariantVector {
    pub transform: TransformKind,
    pub seed: Option<u64>,
    pub dim: usize,
    pub values: Vec<Complex64>,
}

impl InvariantVector {
    pub fn new(transform: TransformKind, seed: Option<u64>, values: Vec<Complex64>) -> Self {
        InvariantVector {
            transform,
            seed,
            dim: values.len(),
            values,
        }
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn norm(&self) -> f64 {
        norm(&self.values)
    }

    /// Euclidean distance; panics if the dimensions differ.
    pub fn distance(&self, other: &InvariantVector) -> f64 {
        distance(&self.values, &other.values)
    }

    /// Equality within `tol` relative to `max(1, ‖self‖, ‖other‖)`.
    pub fn approx_eq(&self, other: &InvariantVector, tol: f64) -> bool {
        approx_eq(&self.values, &other.values, tol)
    }
}

pub(crate) fn distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len(), "vector lengths differ");
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
}

/// `‖a − b‖ ≤ tol·max(1, ‖a‖, ‖b‖)`.
pub fn approx_eq(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
    a.len() == b.len() && distance(a, b) <= tol * norm(a).max(norm(b)).max(1.0)
}

fn check_len(table: &ExponentTable, x: &Signal) -> Result<()> {
    if x.len() != table.dim() {
        return Err(Error::dims(table.dim(), x.len()));
    }
    Ok(())
}

/// `z/|z|`, with `0 ↦ 0`.
pub fn phase(z: Complex64) -> Complex64 {
    let r = z.norm();
    if r == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        z / r
    }
}

fn f_values(table: &ExponentTable, x: &[Complex64]) -> Vec<Complex64> {
    table.monomials().iter().map(|m| m.eval(x)).collect()
}

pub fn eval_f(table: &ExponentTable, x: &Signal) -> Result<InvariantVector> {
    check_len(table, x)?;
    Ok(InvariantVector::new(TransformKind::F, None, f_values(table, x.as_slice())))
}

pub fn eval_theta(table: &ExponentTable, beta: &BetaWeights, x: &Signal) -> Result<InvariantVector> {
    check_len(table, x)?;
    if beta.weights.len() != table.total_dim() {
        return Err(Error::dims(table.total_dim(), beta.weights.len()));
    }
    let values = table
        .monomials()
        .iter()
        .zip(&beta.weights)
        .map(|(m, w)| theta_component(m, w, x.as_slice()))
        .collect();
    Ok(InvariantVector::new(TransformKind::Theta, None, values))
}

fn theta_component(m: &Monomial, beta: &[f64], x: &[Complex64]) -> Complex64 {
    if m.arity() == 1 {
        return Complex64::new(x[m.indices()[0]].norm().powf(beta[0]), 0.0);
    }
    let mut acc = Complex64::new(1.0, 0.0);
    for ((k, alpha), b) in m.terms().zip(beta) {
        let r = x[k].norm();
        if r == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        acc *= pow(x[k] / r, alpha) * r.powf(*b);
    }
    acc
}

pub fn eval_phi_f(table: &ExponentTable, x: &Signal) -> Result<InvariantVector> {
    check_len(table, x)?;
    let r = x.norm();
    let values = if r == 0.0 {
        vec![Complex64::new(0.0, 0.0); table.total_dim()]
    } else {
        let unit: Vec<Complex64> = x.iter().map(|z| z / r).collect();
        f_values(table, &unit).into_iter().map(|v| v * r).collect()
    };
    Ok(InvariantVector::new(TransformKind::PhiF, None, values))
}

/// The vector `v(x)` fed into `ℓ` by [`eval_phi`].
pub fn phi_inner(table: &ExponentTable, x: &Signal, mode: PhiMode) -> Result<Vec<Complex64>> {
    check_len(table, x)?;
    let phases: Vec<Complex64> = x.iter().map(|&z| phase(z)).collect();
    Ok(match mode {
        PhiMode::Repaired => f_values(table, &phases),
        PhiMode::AsWritten => table
            .monomials()
            .iter()
            .map(|m| {
                if m.arity() == 1 {
                    let support = x[m.indices()[0]].norm() != 0.0;
                    Complex64::new(if support { 1.0 } else { 0.0 }, 0.0)
                } else {
                    m.eval(&phases)
                }
            })
            .collect(),
    })
}

/// Smallest nonzero modulus, or 0 for the zero signal.
pub fn min_nonzero_modulus(x: &Signal) -> f64 {
    x.iter()
        .map(|z| z.norm())
        .filter(|&r| r != 0.0)
        .reduce(f64::min)
        .unwrap_or(0.0)
}

pub fn eval_phi(
    table: &ExponentTable,
    ell: &LinearReduction,
    x: &Signal,
    mode: PhiMode,
) -> Result<InvariantVector> {
    check_len(table, x)?;
    if ell.in_dim() != table.total_dim() {
        return Err(Error::dims(table.total_dim(), ell.in_dim()));
    }
    let n = table.dim();
    let mut values = Vec::with_capacity(n + ell.out_dim());
    if x.is_zero() {
        values.resize(n + ell.out_dim(), Complex64::new(0.0, 0.0));
    } else {
        values.extend(x.iter().map(|z| Complex64::new(z.norm(), 0.0)));
        let mu = min_nonzero_modulus(x);
        let reduced = ell.apply(&phi_inner(table, x, mode)?)?;
        values.extend(reduced.into_iter().map(|v| v * mu));
    }
    Ok(InvariantVector::new(TransformKind::Phi, Some(ell.seed()), values))
}

/// Whether `F(x) = λ·F(y)` within [`DEFAULT_TOLERANCE`], for unit `x`, `y`
/// and `λ > 0`.
pub fn check_npp(table: &ExponentTable, x: &Signal, y: &Signal, lambda: f64) -> Result<bool> {
    check_len(table, x)?;
    check_len(table, y)?;
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidArgument(format!("λ must be positive, got {lambda}")));
    }
    for (name, s) in [("x", x), ("y", y)] {
        if (s.norm() - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidArgument(format!("{name} must have unit norm, has {}", s.norm())));
        }
    }
    let fx = f_values(table, x.as_slice());
    let fy: Vec<Complex64> = f_values(table, y.as_slice()).into_iter().map(|v| v * lambda).collect();
    Ok(approx_eq(&fx, &fy, DEFAULT_TOLERANCE))
}

/// A configured transform among `F`, `Θ`, `Φ_F` and `Φ`.
#[derive(Clone, Debug)]
pub struct Transform {
    kind: TransformKind,
    table: ExponentTable,
    beta: BetaWeights,
    reduction: Option<LinearReduction>,
    mode: PhiMode,
}

impl Transform {
    /// Uniform `β`; for `Φ` a reduction with `2N + 1` rows drawn from `seed`.
    pub fn new(kind: TransformKind, table: ExponentTable, seed: u64, mode: PhiMode) -> Result<Self> {
        let reduction = match kind {
            TransformKind::Phi => Some(make_reduction(seed, table.total_dim(), default_out_dim(table.dim()))?),
            TransformKind::F | TransformKind::Theta | TransformKind::PhiF => None,
            TransformKind::Rational | TransformKind::G => {
                return Err(Error::InvalidArgument(format!(
                    "{kind} is evaluated through Hermite data, not an exponent table"
                )))
            }
        };
        Ok(Transform {
            kind,
            beta: BetaWeights::uniform(&table),
            table,
            reduction,
            mode,
        })
    }

    pub fn with_beta(mut self, beta: BetaWeights) -> Self {
        self.beta = beta;
        self
    }

    pub fn with_reduction(mut self, reduction: LinearReduction) -> Self {
        self.reduction = Some(reduction);
        self
    }

    pub fn kind(&self) -> TransformKind {
        self.kind
    }

    pub fn table(&self) -> &ExponentTable {
        &self.table
    }

    pub fn reduction(&self) -> Option<&LinearReduction> {
        self.reduction.as_ref()
    }

    pub fn mode(&self) -> PhiMode {
        self.mode
    }

    /// `s` for `F`, `Θ`, `Φ_F`; `N + k` for `Φ`.
    pub fn output_dim(&self) -> usize {
        match &self.reduction {
            Some(ell) if self.kind == TransformKind::Phi => self.table.dim() + ell.out_dim(),
            _ => self.table.total_dim(),
        }
    }

    pub fn eval(&self, x: &Signal) -> Result<InvariantVector> {
        match self.kind {
            TransformKind::F => eval_f(&self.table, x),
            TransformKind::Theta => eval_theta(&self.table, &self.beta, x),
            TransformKind::PhiF => eval_phi_f(&self.table, x),
            TransformKind::Phi => {
                let ell = self.reduction.as_ref().expect("Φ always carries a reduction");
                eval_phi(&self.table, ell, x, self.mode)
            }
            TransformKind::Rational | TransformKind::G => unreachable!("rejected at construction"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::GroupSpec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_signal(rng: &mut ChaCha8Rng, n: usize) -> Signal {
        Signal::new((0..n).map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect()).unwrap()
    }

    fn z2z2() -> (GroupSpec, ExponentTable) {
        let g = GroupSpec::shift(2, 2).unwrap();
        let t = ExponentTable::build(&g);
        (g, t)
    }

    #[test]
    fn f_of_zero_is_zero() {
        let (_, t) = z2z2();
        let v = eval_f(&t, &Signal::zeros(4)).unwrap();
        assert!(v.values().iter().all(|z| *z == c(0.0, 0.0)));
        assert_eq!(v.dim, t.total_dim());
    }

    #[test]
    fn f_singles_at_ones() {
        let g = GroupSpec::cyclic_shift(3).unwrap();
        let t = ExponentTable::build(&g);
        let v = eval_f(&t, &Signal::from_real(&[1.0; 3]).unwrap()).unwrap();
        assert_eq!(&v.values()[..3], &[c(1.0, 0.0); 3]);
    }

    #[test]
    fn transforms_are_invariant() {
        let (g, t) = z2z2();
        let ell = make_reduction(3, t.total_dim(), default_out_dim(4)).unwrap();
        let beta = BetaWeights::uniform(&t);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let x = random_signal(&mut rng, 4);
            for e in g.elements().unwrap() {
                let y = g.act(&e, &x).unwrap();
                for (a, b) in [
                    (eval_f(&t, &x), eval_f(&t, &y)),
                    (eval_theta(&t, &beta, &x), eval_theta(&t, &beta, &y)),
                    (eval_phi_f(&t, &x), eval_phi_f(&t, &y)),
                    (eval_phi(&t, &ell, &x, PhiMode::Repaired), eval_phi(&t, &ell, &y, PhiMode::Repaired)),
                    (eval_phi(&t, &ell, &x, PhiMode::AsWritten), eval_phi(&t, &ell, &y, PhiMode::AsWritten)),
                ] {
                    assert!(a.unwrap().approx_eq(&b.unwrap(), 1e-10));
                }
            }
        }
    }

    #[test]
    fn theta_zero_coordinate_kills_its_subsets() {
        let (_, t) = z2z2();
        let beta = BetaWeights::uniform(&t);
        let x = Signal::new(vec![c(0.0, 0.0), c(0.3, 0.2), c(-1.0, 0.5), c(0.1, -0.7)]).unwrap();
        let v = eval_theta(&t, &beta, &x).unwrap();
        for (m, z) in t.monomials().iter().zip(v.values()) {
            if m.indices().contains(&0) {
                assert_eq!(*z, c(0.0, 0.0));
            }
        }
    }

    #[test]
    fn theta_matches_f_on_torus() {
        let (_, t) = z2z2();
        let beta = BetaWeights::uniform(&t);
        let x = Signal::new([0.3, 1.1, -2.0, 2.9].iter().map(|&a| Complex64::from_polar(1.0, a)).collect()).unwrap();
        let th = eval_theta(&t, &beta, &x).unwrap();
        let f = eval_f(&t, &x).unwrap();
        for ((m, a), b) in t.monomials().iter().zip(th.values()).zip(f.values()) {
            if m.arity() > 1 {
                assert!((a - b).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn theta_singles_ignore_phase() {
        // Singles carry moduli only, so a phase rotation of a coordinate that
        // appears in no nontrivial subset is invisible to Θ.
        let g = GroupSpec::new(vec![2], vec![vec![1]]).unwrap();
        let t = ExponentTable::build(&g);
        let beta = BetaWeights::uniform(&t);
        let a = eval_theta(&t, &beta, &Signal::new(vec![c(1.0, 0.0)]).unwrap()).unwrap();
        let b = eval_theta(&t, &beta, &Signal::new(vec![c(0.0, 1.0)]).unwrap()).unwrap();
        assert!(a.approx_eq(&b, 1e-12));
        assert!(!eval_f(&t, &Signal::new(vec![c(1.0, 0.0)]).unwrap())
            .unwrap()
            .approx_eq(&eval_f(&t, &Signal::new(vec![c(0.0, 1.0)]).unwrap()).unwrap(), 1e-9));
    }

    #[test]
    fn beta_validation() {
        let (_, t) = z2z2();
        let mut w: Vec<Vec<f64>> = BetaWeights::uniform(&t).weights().to_vec();
        w[0][0] = 0.5;
        assert!(BetaWeights::new(&t, w.clone()).is_err());
        w[0][0] = 2.0;
        w[5][1] = -1.0;
        assert!(BetaWeights::new(&t, w.clone()).is_err());
        w[5][1] = 0.0;
        assert!(BetaWeights::new(&t, w).is_ok());
    }

    #[test]
    fn phi_f_homogeneous_and_unit_identity() {
        let (_, t) = z2z2();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let x = random_signal(&mut rng, 4);
        let base = eval_phi_f(&t, &x).unwrap().norm();
        for s in [0.1, 2.0, 17.0] {
            let scaled = eval_phi_f(&t, &x.scale(s)).unwrap().norm();
            assert!((scaled - s * base).abs() <= 1e-12 * scaled.max(1.0));
        }
        let u = x.scale(1.0 / x.norm());
        assert!(eval_phi_f(&t, &u).unwrap().values().iter().zip(eval_f(&t, &u).unwrap().values()).all(|(a, b)| (a - b).norm() < 1e-14));
        assert!(eval_phi_f(&t, &Signal::zeros(4)).unwrap().norm() == 0.0);
    }

    #[test]
    fn phi_shape_and_homogeneity() {
        let (_, t) = z2z2();
        let ell = make_reduction(11, t.total_dim(), default_out_dim(4)).unwrap();
        let zero = eval_phi(&t, &ell, &Signal::zeros(4), PhiMode::Repaired).unwrap();
        assert_eq!(zero.dim, 13);
        assert_eq!(zero.norm(), 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let x = random_signal(&mut rng, 4);
        let a = eval_phi(&t, &ell, &x, PhiMode::Repaired).unwrap();
        let b = eval_phi(&t, &ell, &x.scale(3.0), PhiMode::Repaired).unwrap();
        for (p, q) in a.values().iter().zip(b.values()) {
            assert!((q.norm() - 3.0 * p.norm()).abs() < 1e-12);
        }
    }

    #[test]
    fn as_written_cannot_see_single_phase() {
        let g = GroupSpec::new(vec![4], vec![vec![1]]).unwrap();
        let t = ExponentTable::build(&g);
        let ell = make_reduction(1, 1, 3).unwrap();
        let x = Signal::new(vec![c(1.0, 0.0)]).unwrap();
        let y = Signal::new(vec![Complex64::from_polar(1.0, 0.3)]).unwrap();
        let w = |s: &Signal, m| eval_phi(&t, &ell, s, m).unwrap();
        assert!(w(&x, PhiMode::AsWritten).approx_eq(&w(&y, PhiMode::AsWritten), 1e-12));
        assert!(!w(&x, PhiMode::Repaired).approx_eq(&w(&y, PhiMode::Repaired), 1e-6));
    }

    #[test]
    fn phi_dimension_mismatch() {
        let (_, t) = z2z2();
        let ell = make_reduction(1, 3, 9).unwrap();
        assert!(eval_phi(&t, &ell, &Signal::zeros(4), PhiMode::Repaired).is_err());
        let ell = make_reduction(1, t.total_dim(), 9).unwrap();
        assert!(eval_phi(&t, &ell, &Signal::zeros(3), PhiMode::Repaired).is_err());
    }

    #[test]
    fn npp_cases() {
        let (g, t) = z2z2();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let x = random_signal(&mut rng, 4);
        let x = x.scale(1.0 / x.norm());
        assert!(check_npp(&t, &x, &x, 1.0).unwrap());
        let y = g.act(&g.generator(1), &x).unwrap();
        assert!(check_npp(&t, &x, &y, 1.0).unwrap());
        assert!(!check_npp(&t, &x, &x, 2.0).unwrap());
        assert!(check_npp(&t, &x, &x.scale(2.0), 1.0).is_err());
        assert!(check_npp(&t, &x, &x, -1.0).is_err());
    }

    #[test]
    fn kind_and_mode_parse() {
        for k in ["f", "theta", "phif", "phi", "rational", "g"] {
            assert_eq!(k.parse::<TransformKind>().unwrap().as_str(), k);
        }
        assert!("psi".parse::<TransformKind>().is_err());
        assert_eq!("as-written".parse::<PhiMode>().unwrap(), PhiMode::AsWritten);
        assert_eq!(PhiMode::default(), PhiMode::Repaired);
    }

    #[test]
    fn json_shape() {
        let v = InvariantVector::new(TransformKind::Phi, Some(3), vec![c(1.0, -2.0)]);
        assert_eq!(
            serde_json::to_string(&v).unwrap(),
            r#"{"transform":"phi","seed":3,"dim":1,"values":[[1.0,-2.0]]}"#
        );
    }
}
