//! Finite Abelian group actions in simultaneously diagonalized form.
//!
//! A [`GroupSpec`] is `Z_{p_1} × ⋯ × Z_{p_s}` acting on `ℂ^N`, where
//! generator `i` multiplies coordinate `k` by `exp(2πi·A[i][k]/p_i)`.

pub mod fourier;

use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex64;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest group that [`GroupSpec::elements`] enumerates without an explicit cap.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1_000_000;

/// A finite Abelian group action in character form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GroupSpecRepr", into = "GroupSpecRepr")]
pub struct GroupSpec {
    orders: Vec<u64>,
    exponents: Vec<Vec<u64>>,
    lcm: u64,
}

#[derive(Serialize, Deserialize)]
struct GroupSpecRepr {
    orders: Vec<u64>,
    exponents: Vec<Vec<i64>>,
}

impl TryFrom<GroupSpecRepr> for GroupSpec {
    type Error = Error;

    fn try_from(repr: GroupSpecRepr) -> Result<Self> {
        GroupSpec::new(repr.orders, repr.exponents)
    }
}

impl From<GroupSpec> for GroupSpecRepr {
    fn from(group: GroupSpec) -> Self {
        let exponents = group
            .exponents
            .iter()
            .map(|row| row.iter().map(|&e| e as i64).collect())
            .collect();
        GroupSpecRepr {
            orders: group.orders,
            exponents,
        }
    }
}

impl GroupSpec {
    /// Builds a group from factor orders and an `s × N` character exponent
    /// matrix. Entries are reduced modulo the order of their row, so negative
    /// exponents are accepted.
    pub fn new(orders: Vec<u64>, exponents: Vec<Vec<i64>>) -> Result<Self> {
        if orders.is_empty() {
            return Err(Error::InvalidGroup("at least one factor order is required".into()));
        }
        if let Some(i) = orders.iter().position(|&p| p == 0) {
            return Err(Error::InvalidGroup(format!("order of factor {i} must be positive")));
        }
        if exponents.len() != orders.len() {
            return Err(Error::InvalidGroup(format!(
                "{} orders but {} exponent rows",
                orders.len(),
                exponents.len()
            )));
        }
        let n = exponents[0].len();
        if n == 0 {
            return Err(Error::InvalidGroup("signal dimension must be at least 1".into()));
        }
        if let Some(i) = exponents.iter().position(|row| row.len() != n) {
            return Err(Error::InvalidGroup(format!(
                "ragged exponent matrix: row {i} has {} entries, row 0 has {n}",
                exponents[i].len()
            )));
        }

        let mut lcm: u64 = 1;
        for &p in &orders {
            lcm = checked_lcm(lcm, p).ok_or_else(|| {
                Error::InvalidGroup("lcm of the factor orders overflows u64".into())
            })?;
        }

        let exponents = exponents
            .into_iter()
            .zip(&orders)
            .map(|(row, &p)| row.into_iter().map(|e| e.rem_euclid(p as i64) as u64).collect())
            .collect();

        Ok(GroupSpec {
            orders,
            exponents,
            lcm,
        })
    }

    /// The action of `Z_n × Z_m` on `n × m` images by circular shifts of rows
    /// and columns, written in the Fourier coordinates of [`fourier::to_fourier`].
    ///
    /// Coordinate `(k, l)` (1-based, row-major) carries exponents
    /// `(k mod n, l mod m)`, so the last coordinate is the DC term.
    pub fn shift(n: usize, m: usize) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::InvalidGroup(format!("shift dimensions must be positive, got {n}x{m}")));
        }
        let mut rows = vec![Vec::with_capacity(n * m), Vec::with_capacity(n * m)];
        for k in 1..=n {
            for l in 1..=m {
                rows[0].push((k % n) as i64);
                rows[1].push((l % m) as i64);
            }
        }
        GroupSpec::new(vec![n as u64, m as u64], rows)
    }

    /// Cyclic shifts of `ℂ^n`, i.e. `shift(n, 1)`.
    pub fn cyclic_shift(n: usize) -> Result<Self> {
        GroupSpec::shift(n, 1)
    }

    /// Number of generators `s`.
    pub fn num_generators(&self) -> usize {
        self.orders.len()
    }

    /// Signal dimension `N`.
    pub fn dim(&self) -> usize {
        self.exponents[0].len()
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    /// Reduced exponent matrix, one row per generator.
    pub fn exponents(&self) -> &[Vec<u64>] {
        &self.exponents
    }

    pub fn exponent(&self, generator: usize, coord: usize) -> u64 {
        self.exponents[generator][coord]
    }

    /// Least common multiple of the factor orders.
    pub fn exponent_lcm(&self) -> u64 {
        self.lcm
    }

    /// Group order `Π p_i`.
    pub fn order(&self) -> u128 {
        self.orders.iter().map(|&p| p as u128).product()
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement(vec![0; self.orders.len()])
    }

    /// The `i`-th standard generator.
    pub fn generator(&self, i: usize) -> GroupElement {
        let mut powers = vec![0; self.orders.len()];
        powers[i] = 1 % self.orders[i];
        GroupElement(powers)
    }

    pub fn generators(&self) -> Vec<GroupElement> {
        (0..self.orders.len()).map(|i| self.generator(i)).collect()
    }

    /// Validates an element given by its reduced powers.
    pub fn element(&self, powers: Vec<u64>) -> Result<GroupElement> {
        if powers.len() != self.orders.len() {
            return Err(Error::dims(self.orders.len(), powers.len()));
        }
        if let Some(i) = powers.iter().zip(&self.orders).position(|(&g, &p)| g >= p) {
            return Err(Error::InvalidArgument(format!(
                "power {} of generator {i} is not below its order {}",
                powers[i], self.orders[i]
            )));
        }
        Ok(GroupElement(powers))
    }

    /// Element with arbitrary integer powers, reduced modulo the orders.
    pub fn reduce(&self, powers: &[i64]) -> Result<GroupElement> {
        if powers.len() != self.orders.len() {
            return Err(Error::dims(self.orders.len(), powers.len()));
        }
        Ok(GroupElement(
            powers
                .iter()
                .zip(&self.orders)
                .map(|(&g, &p)| g.rem_euclid(p as i64) as u64)
                .collect(),
        ))
    }

    pub fn compose(&self, g: &GroupElement, h: &GroupElement) -> GroupElement {
        GroupElement(
            g.0.iter()
                .zip(&h.0)
                .zip(&self.orders)
                .map(|((&a, &b), &p)| ((a as u128 + b as u128) % p as u128) as u64)
                .collect(),
        )
    }

    pub fn inverse(&self, g: &GroupElement) -> GroupElement {
        GroupElement(
            g.0.iter()
                .zip(&self.orders)
                .map(|(&a, &p)| (p - a % p) % p)
                .collect(),
        )
    }

    /// Phase of `χ_k(g)` as an integer numerator over [`Self::exponent_lcm`].
    pub fn character_numerator(&self, g: &GroupElement, coord: usize) -> u64 {
        let lcm = self.lcm as u128;
        let mut acc: u128 = 0;
        for ((&power, row), &p) in g.0.iter().zip(&self.exponents).zip(&self.orders) {
            let scale = lcm / p as u128;
            let term = (power as u128 * row[coord] as u128) % p as u128 * scale;
            acc = (acc + term) % lcm;
        }
        acc as u64
    }

    /// The character value `χ_k(g)`.
    pub fn character(&self, g: &GroupElement, coord: usize) -> Complex64 {
        let num = self.character_numerator(g, coord);
        Complex64::from_polar(1.0, TAU * num as f64 / self.lcm as f64)
    }

    /// All character values of `g`, one per coordinate.
    pub fn characters(&self, g: &GroupElement) -> Vec<Complex64> {
        (0..self.dim()).map(|k| self.character(g, k)).collect()
    }

    /// Applies `g` to `x`: coordinate `k` is multiplied by `χ_k(g)`.
    pub fn act(&self, g: &GroupElement, x: &Signal) -> Result<Signal> {
        if g.0.len() != self.orders.len() {
            return Err(Error::dims(self.orders.len(), g.0.len()));
        }
        self.check_signal(x)?;
        let entries = x
            .iter()
            .enumerate()
            .map(|(k, &v)| self.character(g, k) * v)
            .collect();
        Ok(Signal(entries))
    }

    /// Whether the Laurent monomial `Π x_k^{e_k}` over `(coord, exponent)`
    /// pairs is invariant, checked exactly.
    pub fn is_invariant_monomial(&self, terms: &[(usize, i64)]) -> bool {
        self.exponents.iter().zip(&self.orders).all(|(row, &p)| {
            let p = p as i128;
            let sum = terms
                .iter()
                .map(|&(k, e)| (e as i128).rem_euclid(p) * row[k] as i128 % p)
                .sum::<i128>();
            sum % p == 0
        })
    }

    /// Enumerates all elements in lexicographic order, refusing groups larger
    /// than [`DEFAULT_ENUMERATION_CAP`].
    pub fn elements(&self) -> Result<Vec<GroupElement>> {
        self.elements_capped(DEFAULT_ENUMERATION_CAP)
    }

    pub fn elements_capped(&self, cap: u64) -> Result<Vec<GroupElement>> {
        let order = self.order();
        if order > cap as u128 {
            return Err(Error::GroupTooLarge { order, cap });
        }
        Ok(self.iter_elements().collect())
    }

    /// Lazy lexicographic enumeration (last generator varies fastest).
    pub fn iter_elements(&self) -> ElementIter<'_> {
        ElementIter {
            orders: &self.orders,
            next: Some(vec![0; self.orders.len()]),
        }
    }

    pub(crate) fn check_signal(&self, x: &Signal) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::dims(self.dim(), x.len()));
        }
        Ok(())
    }
}

fn checked_lcm(a: u64, b: u64) -> Option<u64> {
    (a / a.gcd(&b)).checked_mul(b)
}

pub struct ElementIter<'a> {
    orders: &'a [u64],
    next: Option<Vec<u64>>,
}

impl Iterator for ElementIter<'_> {
    type Item = GroupElement;

    fn next(&mut self) -> Option<GroupElement> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut i = succ.len();
        let mut carried_out = true;
        while i > 0 {
            i -= 1;
            succ[i] += 1;
            if succ[i] < self.orders[i] {
                carried_out = false;
                break;
            }
            succ[i] = 0;
        }
        if !carried_out {
            self.next = Some(succ);
        }
        Some(GroupElement(current))
    }
}

/// A group element as reduced generator powers `(g_1, …, g_s)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElement(Vec<u64>);

impl GroupElement {
    pub fn powers(&self) -> &[u64] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|&g| g == 0)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, g) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, ")")
    }
}

/// A finite complex vector. Serializes as an array of `[re, im]` pairs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Complex64>", into = "Vec<Complex64>")]
pub struct Signal(Vec<Complex64>);

impl Signal {
    pub fn new(entries: Vec<Complex64>) -> Result<Self> {
        if let Some(k) = entries.iter().position(|z| !z.is_finite()) {
            return Err(Error::InvalidArgument(format!("signal entry {k} is not finite")));
        }
        Ok(Signal(entries))
    }

    pub fn zeros(n: usize) -> Self {
        Signal(vec![Complex64::new(0.0, 0.0); n])
    }

    /// Real-valued signal.
    pub fn from_real(values: &[f64]) -> Result<Self> {
        Signal::new(values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Complex64> {
        self.0.iter()
    }

    pub fn into_inner(self) -> Vec<Complex64> {
        self.0
    }

    pub fn norm(&self) -> f64 {
        norm(&self.0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    pub fn scale(&self, t: f64) -> Signal {
        Signal(self.0.iter().map(|z| z * t).collect())
    }

    /// Euclidean distance; panics if the lengths differ.
    pub fn distance(&self, other: &Signal) -> f64 {
        assert_eq!(self.len(), other.len(), "signal lengths differ");
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

impl TryFrom<Vec<Complex64>> for Signal {
    type Error = Error;

    fn try_from(entries: Vec<Complex64>) -> Result<Self> {
        Signal::new(entries)
    }
}

impl From<Signal> for Vec<Complex64> {
    fn from(signal: Signal) -> Self {
        signal.0
    }
}

impl std::ops::Index<usize> for Signal {
    type Output = Complex64;

    fn index(&self, k: usize) -> &Complex64 {
        &self.0[k]
    }
}

/// Euclidean norm of a complex slice.
pub fn norm(values: &[Complex64]) -> f64 {
    values.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}
