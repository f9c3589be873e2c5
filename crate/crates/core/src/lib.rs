//! Orbit-separating invariants for finite Abelian group actions on `ℂ^N`.
//!
//! A group action is described in character form: every generator acts
//! diagonally, multiplying coordinate `k` by a root of unity. On top of that
//! description the crate builds
//!
//! * the minimal invariant monomials on coordinate subsets of size at most
//!   three ([`exponents`]),
//! * the monomial tensor `F`, its phase-only variant `Θ`, the norm-scaled map
//!   `Φ_F` and the low-dimensional map `Φ` ([`transforms`]),
//! * Hermite-normal-form rational invariants and the signed quadratic form
//!   that goes with them ([`rational`]),
//! * a brute-force quotient metric used as ground truth ([`orbit`]).

pub mod action;
pub mod error;
pub mod exponents;
pub mod io;
pub mod orbit;
pub mod rational;
pub mod transforms;

pub use action::fourier::{from_fourier, to_fourier, Image};
pub use action::{GroupElement, GroupSpec, Signal, DEFAULT_ENUMERATION_CAP};
pub use error::{Error, Result};
pub use exponents::{build_exponent_table, ExponentTable, Monomial};
pub use orbit::{equivalent, orbit_distance, OrbitDistance, PairKind};
pub use rational::{hermite_multiplier, HermiteData};
pub use transforms::{
    eval_f, eval_phi, eval_phi_f, eval_theta, make_reduction, BetaWeights, InvariantVector,
    LinearReduction, PhiMode, TransformKind,
};

pub use num_complex::Complex64;

/// Crate version, embedded in CLI reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
