//! Rational invariants from the Hermite multiplier of `[A −P]`.
//!
//! With `P = diag(p_1, …, p_s)`, a unimodular `V` with `[A −P]·V = [H 0]`
//! splits into blocks
//!
//! ```text
//!     V = | V_i  V_n |   V_i: N×s, V_n: N×N
//!         | P_i  P_n |   P_i: s×s, P_n: s×N
//! ```
//!
//! and `A·V_n = P·P_n`, so every column of `V_n` is the exponent vector of an
//! invariant Laurent monomial. The components of `z^{V_n}` generate the field
//! of rational invariants. The vector `c` solves `V_n·c = 1`, and the signs of
//! its entries define the quadratic form `Q(x) = Σ sign(c_k)|x_k|²` used by
//! the map `𝒢`.

pub mod counterexample;
pub mod hnf;
pub mod projection;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

pub use counterexample::{construct_counterexample, construct_random_counterexample, second_root, Counterexample, RootForm};
pub use hnf::{hermite_normal_form, IntMatrix};
pub use projection::{ae_projection_check, ProjectionReport};

use crate::action::{norm, GroupSpec, Signal};
use crate::error::{Error, Result};

/// Hermite multiplier blocks, `c` and the signature of `Q` for a group.
#[derive(Clone, Debug, PartialEq)]
pub struct HermiteData {
    group: GroupSpec,
    /// `(V, H)`; absent for data built from an explicit `V_n`.
    multiplier: Option<(IntMatrix, IntMatrix)>,
    vn: IntMatrix,
    c: Vec<BigRational>,
    signature: Vec<i8>,
}

/// `[A −P]` for `group`.
pub fn group_matrix(group: &GroupSpec) -> IntMatrix {
    let (s, n) = (group.num_generators(), group.dim());
    let mut m = IntMatrix::zeros(s, n + s);
    for i in 0..s {
        for k in 0..n {
            m.set(i, k, BigInt::from(group.exponent(i, k)));
        }
        m.set(i, n + i, -BigInt::from(group.orders()[i]));
    }
    m
}

/// Computes the Hermite multiplier of `[A −P]` and everything derived from it.
pub fn hermite_multiplier(group: &GroupSpec) -> Result<HermiteData> {
    let (s, n) = (group.num_generators(), group.dim());
    let m = group_matrix(group);
    let (h, u) = hermite_normal_form(&m);
    // Reorder to V = [[V_i, V_n], [P_i, P_n]] with the signal coordinates on top.
    let mut v = IntMatrix::zeros(n + s, n + s);
    for r in 0..n + s {
        for c in 0..n + s {
            v.set(r, c, u.get(r, c).clone());
        }
    }
    if !h.block(0, s, s, n + s).is_zero() {
        return Err(Error::Invariant("[A −P] has rank below s".into()));
    }
    let vn = v.block(0, n, s, n + s);
    let hb = h.block(0, s, 0, s);
    let mut data = HermiteData::with_vn(group.clone(), vn)?;
    data.multiplier = Some((v, hb));
    Ok(data)
}

impl HermiteData {
    fn with_vn(group: GroupSpec, vn: IntMatrix) -> Result<Self> {
        let n = group.dim();
        if vn.rows() != n || vn.cols() != n {
            return Err(Error::dims(n, vn.rows().max(vn.cols())));
        }
        let ones = vec![BigInt::one(); n];
        let c = vn
            .solve_rational(&ones)?
            .ok_or_else(|| Error::Invariant("V_n is singular".into()))?;
        let signature = c
            .iter()
            .map(|v| if v.is_positive() { 1 } else if v.is_negative() { -1 } else { 0 })
            .collect();
        Ok(HermiteData {
            group,
            multiplier: None,
            vn,
            c,
            signature,
        })
    }

    /// Data from an explicit `V_n` whose columns must be invariant exponent
    /// vectors for `group`.
    pub fn from_exponent_block(group: &GroupSpec, vn: IntMatrix) -> Result<Self> {
        let data = HermiteData::with_vn(group.clone(), vn)?;
        data.check_column_invariance()?;
        Ok(data)
    }

    /// Cyclic shifts of `ℂ^N` with `V_n` whose first row is
    /// `(N, N−2, N−3, …, 1, 0)` and whose remaining rows are those of the
    /// identity.
    pub fn cyclic_fixture(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!("cyclic fixture needs N ≥ 2, got {n}")));
        }
        let mut vn = IntMatrix::identity(n);
        vn.set(0, 0, BigInt::from(n));
        for j in 1..n {
            vn.set(0, j, BigInt::from(n - 1 - j));
        }
        HermiteData::from_exponent_block(&GroupSpec::cyclic_shift(n)?, vn)
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.group.dim()
    }

    /// Full multiplier `V`, when computed.
    pub fn multiplier(&self) -> Option<&IntMatrix> {
        self.multiplier.as_ref().map(|(v, _)| v)
    }

    /// `H` with `[A −P]·V = [H 0]`, when computed.
    pub fn hnf(&self) -> Option<&IntMatrix> {
        self.multiplier.as_ref().map(|(_, h)| h)
    }

    fn v_block(&self, top: bool, left: bool) -> Option<IntMatrix> {
        let (n, s) = (self.dim(), self.group.num_generators());
        let v = self.multiplier()?;
        let (r0, r1) = if top { (0, n) } else { (n, n + s) };
        let (c0, c1) = if left { (0, s) } else { (s, n + s) };
        Some(v.block(r0, r1, c0, c1))
    }

    pub fn v_i(&self) -> Option<IntMatrix> {
        self.v_block(true, true)
    }

    pub fn p_i(&self) -> Option<IntMatrix> {
        self.v_block(false, true)
    }

    pub fn p_n(&self) -> Option<IntMatrix> {
        self.v_block(false, false)
    }

    pub fn vn(&self) -> &IntMatrix {
        &self.vn
    }

    pub fn c(&self) -> &[BigRational] {
        &self.c
    }

    pub fn c_f64(&self) -> Vec<f64> {
        self.c.iter().map(|v| v.to_f64().unwrap_or(f64::NAN)).collect()
    }

    pub fn signature(&self) -> &[i8] {
        &self.signature
    }

    /// Whether every `c_k ≥ 0`, in which case `𝒢` normalizes by `‖x‖`.
    pub fn nonnegative(&self) -> bool {
        self.signature.iter().all(|&s| s >= 0)
    }

    /// Checks `[A −P]·V = [H 0]`, `|det V| = 1` and `V_n·c = 1` exactly.
    pub fn check_exact(&self) -> Result<()> {
        if let Some((v, h)) = &self.multiplier {
            let s = self.group.num_generators();
            let lhs = group_matrix(&self.group).mul(v)?;
            if lhs.block(0, s, 0, s) != *h || !lhs.block(0, s, s, lhs.cols()).is_zero() {
                return Err(Error::Invariant("[A −P]·V ≠ [H 0]".into()));
            }
            if v.det()?.abs() != BigInt::one() {
                return Err(Error::Invariant("multiplier is not unimodular".into()));
            }
        }
        for r in 0..self.dim() {
            let dot: BigRational = self
                .vn
                .row(r)
                .iter()
                .zip(&self.c)
                .map(|(v, c)| BigRational::from_integer(v.clone()) * c)
                .sum();
            if !dot.is_one() {
                return Err(Error::Invariant(format!("row {r} of V_n·c is {dot}, not 1")));
            }
        }
        Ok(())
    }

    /// Exact invariance of every column of `V_n`.
    pub fn check_column_invariance(&self) -> Result<()> {
        for j in 0..self.dim() {
            let terms = self.column_terms(j)?;
            if !self.group.is_invariant_monomial(&terms) {
                return Err(Error::Invariant(format!("column {j} of V_n is not an invariant exponent vector")));
            }
        }
        Ok(())
    }

    fn column_terms(&self, j: usize) -> Result<Vec<(usize, i64)>> {
        (0..self.dim())
            .map(|k| Ok((k, exponent_i64(self.vn.get(k, j))?)))
            .collect()
    }

    fn exponents_i64(&self, columns: bool) -> Result<Vec<Vec<i64>>> {
        let n = self.dim();
        (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| exponent_i64(if columns { self.vn.get(b, a) } else { self.vn.get(a, b) }))
                    .collect()
            })
            .collect()
    }
}

fn exponent_i64(v: &BigInt) -> Result<i64> {
    v.to_i64()
        .ok_or_else(|| Error::InvalidArgument(format!("exponent {v} does not fit in 64 bits")))
}

fn powi(z: Complex64, e: i64) -> Complex64 {
    match i32::try_from(e) {
        Ok(e) => z.powi(e),
        Err(_) => z.powf(e as f64),
    }
}

/// `Π_k z_k^{e_k}`; `None` when a zero coordinate meets a negative exponent.
fn laurent(z: &[Complex64], exps: &[i64]) -> Option<Complex64> {
    let mut acc = Complex64::new(1.0, 0.0);
    for (&zk, &e) in z.iter().zip(exps) {
        if e == 0 {
            continue;
        }
        if zk.norm() == 0.0 {
            if e < 0 {
                return None;
            }
            return Some(Complex64::new(0.0, 0.0));
        }
        acc *= powi(zk, e);
    }
    Some(acc)
}

/// Components of `z^{V_n}` with the domain flag.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RationalInvariantResult {
    /// Empty when `domain_ok` is false.
    pub values: Vec<Complex64>,
    pub domain_ok: bool,
}

/// Component `j` is `Π_k z_k^{V_n[k][j]}`.
pub fn eval_rational_invariants(data: &HermiteData, z: &Signal) -> Result<RationalInvariantResult> {
    data.group.check_signal(z)?;
    let cols = data.exponents_i64(true)?;
    let values: Option<Vec<Complex64>> = cols.iter().map(|e| laurent(z.as_slice(), e)).collect();
    Ok(match values {
        Some(values) => RationalInvariantResult { values, domain_ok: true },
        None => RationalInvariantResult {
            values: Vec::new(),
            domain_ok: false,
        },
    })
}

/// Row monomials `Π_j z_j^{V_n[k][j]}`; these scale by `λ` under
/// `z_j ↦ λ^{c_j} z_j`.
pub fn eval_row_monomials(data: &HermiteData, z: &Signal) -> Result<Option<Vec<Complex64>>> {
    data.group.check_signal(z)?;
    let rows = data.exponents_i64(false)?;
    Ok(rows.iter().map(|e| laurent(z.as_slice(), e)).collect())
}

/// `Q(x) = Σ sign(c_k)·|x_k|²`.
pub fn eval_q(data: &HermiteData, x: &Signal) -> Result<f64> {
    data.group.check_signal(x)?;
    Ok(x.iter()
        .zip(&data.signature)
        .map(|(z, &s)| f64::from(s) * z.norm_sqr())
        .sum())
}

/// Value of `𝒢`: the sign of `Q` and the scaled invariants.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GValue {
    pub sign: i8,
    pub values: Vec<Complex64>,
}

impl GValue {
    pub fn distance(&self, other: &GValue) -> f64 {
        let d = crate::transforms::distance(&self.values, &other.values);
        if self.sign == other.sign {
            d
        } else {
            d.hypot(2.0)
        }
    }

    pub fn approx_eq(&self, other: &GValue, tol: f64) -> bool {
        self.sign == other.sign && crate::transforms::approx_eq(&self.values, &other.values, tol)
    }
}

/// `r·(x/r)^{V_n}` for `r > 0`.
fn scaled_invariants(data: &HermiteData, x: &Signal, r: f64) -> Result<Vec<Complex64>> {
    let unit = Signal::new(x.iter().map(|z| z / r).collect())?;
    let inv = eval_rational_invariants(data, &unit)?;
    if !inv.domain_ok {
        return Err(Error::Domain("zero coordinate under a negative exponent".into()));
    }
    Ok(inv.values.into_iter().map(|v| v * r).collect())
}

fn require_full_support(x: &Signal) -> Result<()> {
    match x.iter().position(|z| z.norm() == 0.0) {
        Some(k) => Err(Error::Domain(format!("coordinate {k} is zero"))),
        None => Ok(()),
    }
}

/// `𝒢(x)`: `(+1, ‖x‖(x/‖x‖)^{V_n})` when every `c_k ≥ 0`, otherwise
/// `(sign Q(x), √|Q(x)|·(x/√|Q(x)|)^{V_n})`.
pub fn eval_g(data: &HermiteData, x: &Signal) -> Result<GValue> {
    data.group.check_signal(x)?;
    require_full_support(x)?;
    if data.nonnegative() {
        return Ok(GValue {
            sign: 1,
            values: scaled_invariants(data, x, x.norm())?,
        });
    }
    let q = eval_q(data, x)?;
    if q == 0.0 {
        return Err(Error::Domain("Q(x) = 0".into()));
    }
    Ok(GValue {
        sign: if q > 0.0 { 1 } else { -1 },
        values: scaled_invariants(data, x, q.abs().sqrt())?,
    })
}

/// `g(w) = ‖w‖·(w/‖w‖)^{V_n}`, the unsigned map `𝒢` reduces to when `Q` is
/// the squared norm.
pub fn eval_g_norm(data: &HermiteData, w: &Signal) -> Result<Vec<Complex64>> {
    data.group.check_signal(w)?;
    require_full_support(w)?;
    scaled_invariants(data, w, norm(w.as_slice()))
}

fn matrix_strings(m: &IntMatrix) -> Vec<Vec<String>> {
    m.to_rows().iter().map(|r| r.iter().map(ToString::to_string).collect()).collect()
}

impl Serialize for HermiteData {
    /// Integers and rationals as exact decimal strings.
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("HermiteData", 11)?;
        st.serialize_field("orders", self.group.orders())?;
        st.serialize_field("exponents", self.group.exponents())?;
        st.serialize_field("v", &self.multiplier().map(matrix_strings))?;
        st.serialize_field("h", &self.hnf().map(matrix_strings))?;
        st.serialize_field("v_i", &self.v_i().as_ref().map(matrix_strings))?;
        st.serialize_field("v_n", &matrix_strings(&self.vn))?;
        st.serialize_field("p_i", &self.p_i().as_ref().map(matrix_strings))?;
        st.serialize_field("p_n", &self.p_n().as_ref().map(matrix_strings))?;
        st.serialize_field("c", &self.c.iter().map(ToString::to_string).collect::<Vec<_>>())?;
        st.serialize_field("signature", &self.signature)?;
        st.serialize_field("nonnegative", &self.nonnegative())?;
        st.end()
    }
}
