//! Brute-force quotient metric `d_G([x], [y]) = min_g ‖x − g·y‖` and seeded
//! generators of signal pairs for tests and scans.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::action::{GroupElement, GroupSpec, Signal, DEFAULT_ENUMERATION_CAP};
use crate::error::{Error, Result};

/// Pairs closer than this are treated as equivalent by the ratio scan.
pub const DEGENERATE_DISTANCE: f64 = 1e-9;

/// Smallest modulus drawn for [`PairKind::FullSupport`].
pub const FULL_SUPPORT_FLOOR: f64 = 0.05;

/// Minimum of `‖x − g·y‖` and the first element attaining it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitDistance {
    pub distance: f64,
    pub witness: GroupElement,
}

/// Enumerated group with its character table, reusable across many distance
/// queries.
#[derive(Clone, Debug)]
pub struct OrbitOracle {
    elements: Vec<GroupElement>,
    characters: Vec<Vec<Complex64>>,
    dim: usize,
}

impl OrbitOracle {
    pub fn new(group: &GroupSpec) -> Result<Self> {
        Self::with_cap(group, DEFAULT_ENUMERATION_CAP)
    }

    pub fn with_cap(group: &GroupSpec, cap: u64) -> Result<Self> {
        let elements = group.elements_capped(cap)?;
        let characters = elements.iter().map(|g| group.characters(g)).collect();
        Ok(OrbitOracle {
            elements,
            characters,
            dim: group.dim(),
        })
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn distance(&self, x: &Signal, y: &Signal) -> Result<OrbitDistance> {
        for s in [x, y] {
            if s.len() != self.dim {
                return Err(Error::dims(self.dim, s.len()));
            }
        }
        let mut best = (f64::INFINITY, 0);
        for (i, chi) in self.characters.iter().enumerate() {
            let d2: f64 = x
                .iter()
                .zip(y.iter())
                .zip(chi)
                .map(|((a, b), c)| (a - c * b).norm_sqr())
                .sum();
            if d2 < best.0 {
                best = (d2, i);
            }
        }
        Ok(OrbitDistance {
            distance: best.0.sqrt(),
            witness: self.elements[best.1].clone(),
        })
    }
}

/// `d_G([x], [y])` with a witness `g` such that `x ≈ g·y`.
pub fn orbit_distance(group: &GroupSpec, x: &Signal, y: &Signal) -> Result<OrbitDistance> {
    OrbitOracle::new(group)?.distance(x, y)
}

/// `d_G([x], [y]) < tol`.
pub fn equivalent(group: &GroupSpec, x: &Signal, y: &Signal, tol: f64) -> Result<bool> {
    Ok(orbit_distance(group, x, y)?.distance < tol)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairKind {
    /// `y = g·x` for a random `g`.
    SameOrbit,
    /// Independent standard complex Gaussian signals.
    Random,
    /// Gaussian entries on a shared random support, zeros elsewhere.
    MatchedSupport,
    /// Every modulus at least [`FULL_SUPPORT_FLOOR`].
    FullSupport,
    /// `y = g·x + ε` with full-support `x` and a small Gaussian `ε`; probes
    /// the short-distance end of Lipschitz ratios.
    NearOrbit,
}

impl PairKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PairKind::SameOrbit => "same_orbit",
            PairKind::Random => "random",
            PairKind::MatchedSupport => "matched_support",
            PairKind::FullSupport => "full_support",
            PairKind::NearOrbit => "near_orbit",
        }
    }
}

impl fmt::Display for PairKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PairKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "same_orbit" => Ok(PairKind::SameOrbit),
            "random" => Ok(PairKind::Random),
            "matched_support" => Ok(PairKind::MatchedSupport),
            "full_support" => Ok(PairKind::FullSupport),
            "near_orbit" => Ok(PairKind::NearOrbit),
            other => Err(Error::Parse(format!("unknown pair kind {other:?}"))),
        }
    }
}

/// `(a + ib)/√2` with `a, b ~ N(0, 1)`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn random_signal<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Signal {
    Signal::new((0..n).map(|_| complex_gaussian(rng)).collect()).expect("finite draws")
}

/// Gaussian signal with every modulus at least [`FULL_SUPPORT_FLOOR`].
pub fn full_support_signal<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Signal {
    let entries = (0..n)
        .map(|_| loop {
            let z = complex_gaussian(rng);
            if z.norm() >= FULL_SUPPORT_FLOOR {
                break z;
            }
        })
        .collect();
    Signal::new(entries).expect("finite draws")
}

pub fn random_element<R: Rng + ?Sized>(rng: &mut R, group: &GroupSpec) -> GroupElement {
    let powers = group.orders().iter().map(|&p| rng.random_range(0..p)).collect();
    group.element(powers).expect("powers drawn below the orders")
}

/// A pair of the requested kind, deterministic in `seed`.
pub fn sample_pair(group: &GroupSpec, kind: PairKind, seed: u64) -> (Signal, Signal) {
    sample_pair_with(&mut ChaCha8Rng::seed_from_u64(seed), group, kind)
}

pub fn sample_pair_with<R: Rng + ?Sized>(rng: &mut R, group: &GroupSpec, kind: PairKind) -> (Signal, Signal) {
    let n = group.dim();
    match kind {
        PairKind::Random => (random_signal(rng, n), random_signal(rng, n)),
        PairKind::FullSupport => (full_support_signal(rng, n), full_support_signal(rng, n)),
        PairKind::SameOrbit => {
            let x = random_signal(rng, n);
            let g = random_element(rng, group);
            let y = group.act(&g, &x).expect("dimensions match");
            (x, y)
        }
        PairKind::NearOrbit => {
            let x = full_support_signal(rng, n);
            let g = random_element(rng, group);
            let scale = 10f64.powf(rng.random_range(-4.0..-1.0));
            let y = group.act(&g, &x).expect("dimensions match");
            let y = Signal::new(y.iter().map(|z| z + complex_gaussian(rng) * scale).collect()).expect("finite draws");
            (x, y)
        }
        PairKind::MatchedSupport => {
            let mut support: Vec<bool> = (0..n).map(|_| rng.random_bool(0.5)).collect();
            if !support.iter().any(|&s| s) {
                support[rng.random_range(0..n)] = true;
            }
            let draw = |rng: &mut R| {
                let entries = support
                    .iter()
                    .map(|&s| if s { complex_gaussian(rng) } else { Complex64::new(0.0, 0.0) })
                    .collect();
                Signal::new(entries).expect("finite draws")
            };
            let x = draw(rng);
            let y = draw(rng);
            (x, y)
        }
    }
}

/// Outcome of [`lipschitz_ratio_scan`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub max_ratio: f64,
    pub bound: Option<f64>,
    pub seed: u64,
    pub samples: usize,
    /// Pairs with `d_G > 1e-9` that entered the maximum.
    pub evaluated: usize,
    pub kind: PairKind,
    pub argmax: (Signal, Signal),
}

impl ScanReport {
    pub fn within_bound(&self) -> Option<bool> {
        self.bound.map(|b| self.max_ratio <= b)
    }
}

/// Largest `‖T(x) − T(y)‖ / d_G([x], [y])` over `samples` seeded pairs.
pub fn lipschitz_ratio_scan<T>(
    group: &GroupSpec,
    transform: T,
    kind: PairKind,
    samples: usize,
    seed: u64,
) -> Result<ScanReport>
where
    T: Fn(&Signal) -> Result<Vec<Complex64>>,
{
    let oracle = OrbitOracle::new(group)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(f64, Signal, Signal)> = None;
    let mut evaluated = 0;
    for _ in 0..samples {
        let (x, y) = sample_pair_with(&mut rng, group, kind);
        let d = oracle.distance(&x, &y)?.distance;
        if d <= DEGENERATE_DISTANCE {
            continue;
        }
        evaluated += 1;
        let (tx, ty) = (transform(&x)?, transform(&y)?);
        if tx.len() != ty.len() {
            return Err(Error::dims(tx.len(), ty.len()));
        }
        let ratio = crate::transforms::distance(&tx, &ty) / d;
        if best.as_ref().is_none_or(|b| ratio > b.0) {
            best = Some((ratio, x, y));
        }
    }
    let (max_ratio, x, y) = best.ok_or_else(|| {
        Error::InvalidArgument(format!("all {samples} sampled {kind} pairs were equivalent"))
    })?;
    Ok(ScanReport {
        max_ratio,
        bound: None,
        seed,
        samples,
        evaluated,
        kind,
        argmax: (x, y),
    })
}
