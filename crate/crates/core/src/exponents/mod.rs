//! Minimal invariant monomials on coordinate subsets of size one, two and
//! three, which together form the monomial tensor `F`.
//!
//! For a single coordinate `k` the exponent `m_k` is the least positive power
//! making `x_k^{m_k}` invariant. For a pair `k1 < k2` the leading exponent `a`
//! is the least positive value for which some `b` makes `x_{k1}^a x_{k2}^b`
//! invariant; `b` is then the smallest such value. Triples work the same way
//! with a lexicographically smallest completion `(d, e)`.

mod congruence;
pub mod oracle;

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::de::Error as _;
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use congruence::Congruence;

use crate::action::GroupSpec;
use crate::error::{Error, Result};

/// `m_k`: the least positive `m` with `x_k^m` invariant, i.e.
/// `lcm_i p_i / gcd(A[i][k], p_i)`.
pub fn minimal_single(group: &GroupSpec, k: usize) -> Result<u64> {
    check_index(group, k)?;
    Ok(single_exponent(group, k))
}

/// `(a, b)` for the pair `(k1, k2)`.
pub fn minimal_pair(group: &GroupSpec, k1: usize, k2: usize) -> Result<(u64, u64)> {
    check_index(group, k1)?;
    check_index(group, k2)?;
    if k1 == k2 {
        return Err(Error::InvalidArgument(format!("pair indices must differ, got {k1} twice")));
    }
    let lead_bound = single_exponent(group, k1);
    for a in 1..=lead_bound {
        let partial = partial_sums(group, &[(k1, a)]);
        if let Some(sol) = completion(group, k2, &partial) {
            return Ok((a, sol.residue));
        }
    }
    unreachable!("a = m_k1 with b = 0 is always feasible")
}

/// `(c, d, e)` for the triple `(k1, k2, k3)`.
pub fn minimal_triple(group: &GroupSpec, k1: usize, k2: usize, k3: usize) -> Result<(u64, u64, u64)> {
    for k in [k1, k2, k3] {
        check_index(group, k)?;
    }
    if k1 == k2 || k1 == k3 || k2 == k3 {
        return Err(Error::InvalidArgument(format!(
            "triple indices must be distinct, got ({k1}, {k2}, {k3})"
        )));
    }
    let lead_bound = single_exponent(group, k1);
    let middle_bound = single_exponent(group, k2);
    for c in 1..=lead_bound {
        for d in 0..middle_bound {
            let partial = partial_sums(group, &[(k1, c), (k2, d)]);
            if let Some(sol) = completion(group, k3, &partial) {
                return Ok((c, d, sol.residue));
            }
        }
    }
    unreachable!("c = m_k1 with d = e = 0 is always feasible")
}

/// Builds the full table with tuples up to size three.
pub fn build_exponent_table(group: &GroupSpec) -> ExponentTable {
    ExponentTable::build(group)
}

/// `N + N(N−1)/2 + N(N−1)(N−2)/6`, the number of monomials with tuples up to three.
pub fn tensor_dim(n: usize) -> usize {
    tensor_dim_with(n, 3)
}

fn tensor_dim_with(n: usize, max_tuple_size: usize) -> usize {
    (1..=max_tuple_size.min(n)).map(|t| binomial(n, t)).sum()
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn check_index(group: &GroupSpec, k: usize) -> Result<()> {
    if k >= group.dim() {
        return Err(Error::InvalidArgument(format!(
            "coordinate {k} out of range for dimension {}",
            group.dim()
        )));
    }
    Ok(())
}

fn single_exponent(group: &GroupSpec, k: usize) -> u64 {
    group
        .exponents()
        .iter()
        .zip(group.orders())
        .map(|(row, &p)| Congruence::solve(row[k], 0, p).map_or(p, |c| c.modulus))
        .fold(1, num_integer::lcm)
}

/// `Σ_j e_j·A[i][k_j] mod p_i` for every generator row.
fn partial_sums(group: &GroupSpec, terms: &[(usize, u64)]) -> Vec<u64> {
    group
        .exponents()
        .iter()
        .zip(group.orders())
        .map(|(row, &p)| {
            terms
                .iter()
                .map(|&(k, e)| (e as u128 % p as u128) * row[k] as u128 % p as u128)
                .sum::<u128>() as u64
                % p
        })
        .collect()
}

/// Exponents `t` of coordinate `k` with `partial_i + t·A[i][k] ≡ 0` for all rows.
fn completion(group: &GroupSpec, k: usize, partial: &[u64]) -> Option<Congruence> {
    group
        .exponents()
        .iter()
        .zip(group.orders())
        .zip(partial)
        .try_fold(Congruence::ANY, |acc, ((row, &p), &s)| {
            let rhs = (p - s % p) % p;
            acc.intersect(Congruence::solve(row[k], rhs, p)?)
        })
}

/// One entry of the monomial tensor: `Π_{j∈J} x_j^{α_j}` over a sorted index set `J`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monomial {
    indices: Vec<usize>,
    exponents: Vec<u64>,
}

impl Monomial {
    pub fn new(indices: Vec<usize>, exponents: Vec<u64>) -> Result<Self> {
        if indices.is_empty() || indices.len() != exponents.len() {
            return Err(Error::InvalidArgument("monomial needs matching, non-empty index and exponent lists".into()));
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument("monomial indices must be strictly increasing".into()));
        }
        if exponents[0] == 0 {
            return Err(Error::InvalidArgument("leading exponent must be positive".into()));
        }
        Ok(Monomial { indices, exponents })
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    /// Terms as `(coordinate, exponent)`.
    pub fn terms(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.indices.iter().copied().zip(self.exponents.iter().copied())
    }

    /// Number of coordinates in the index set.
    pub fn arity(&self) -> usize {
        self.indices.len()
    }

    pub fn degree(&self) -> u64 {
        self.exponents.iter().sum()
    }

    pub fn eval(&self, x: &[Complex64]) -> Complex64 {
        self.terms()
            .map(|(k, e)| pow(x[k], e))
            .product()
    }

    /// Partial derivative with respect to `x_k` for `k` in the index set.
    pub fn derivative(&self, x: &[Complex64], k: usize) -> Complex64 {
        let mut acc = Complex64::new(1.0, 0.0);
        let mut found = false;
        for (j, e) in self.terms() {
            if j == k {
                found = true;
                if e == 0 {
                    return Complex64::new(0.0, 0.0);
                }
                acc *= pow(x[j], e - 1) * e as f64;
            } else {
                acc *= pow(x[j], e);
            }
        }
        if found {
            acc
        } else {
            Complex64::new(0.0, 0.0)
        }
    }
}

pub(crate) fn pow(z: Complex64, e: u64) -> Complex64 {
    match u32::try_from(e) {
        Ok(e) => z.powu(e),
        Err(_) => z.powf(e as f64),
    }
}

/// The exponents of `F`, in the fixed order singles (ascending), pairs
/// (lexicographic), triples (lexicographic).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentTable {
    dim: usize,
    max_tuple_size: usize,
    monomials: Vec<Monomial>,
}

impl ExponentTable {
    pub fn build(group: &GroupSpec) -> Self {
        Self::build_with(group, 3).expect("tuple size 3 is supported")
    }

    /// Builds a table containing tuples up to `max_tuple_size` (1, 2 or 3).
    ///
    /// Groups with more than two invariant factors may need larger tuples to
    /// separate orbits; those are not generated.
    pub fn build_with(group: &GroupSpec, max_tuple_size: usize) -> Result<Self> {
        if !(1..=3).contains(&max_tuple_size) {
            return Err(Error::InvalidArgument(format!(
                "max_tuple_size must be 1, 2 or 3, got {max_tuple_size}"
            )));
        }
        let n = group.dim();
        let mut monomials = Vec::with_capacity(tensor_dim_with(n, max_tuple_size));
        for k in 0..n {
            monomials.push(Monomial {
                indices: vec![k],
                exponents: vec![single_exponent(group, k)],
            });
        }
        if max_tuple_size >= 2 {
            for k1 in 0..n {
                for k2 in k1 + 1..n {
                    let (a, b) = minimal_pair(group, k1, k2)?;
                    monomials.push(Monomial {
                        indices: vec![k1, k2],
                        exponents: vec![a, b],
                    });
                }
            }
        }
        if max_tuple_size >= 3 {
            for k1 in 0..n {
                for k2 in k1 + 1..n {
                    for k3 in k2 + 1..n {
                        let (c, d, e) = minimal_triple(group, k1, k2, k3)?;
                        monomials.push(Monomial {
                            indices: vec![k1, k2, k3],
                            exponents: vec![c, d, e],
                        });
                    }
                }
            }
        }
        Ok(ExponentTable {
            dim: n,
            max_tuple_size,
            monomials,
        })
    }

    /// Assembles a table from explicit monomials, checking the layout.
    pub fn from_monomials(dim: usize, monomials: Vec<Monomial>) -> Result<Self> {
        let max_tuple_size = monomials.iter().map(Monomial::arity).max().unwrap_or(1);
        if max_tuple_size > 3 {
            return Err(Error::InvalidArgument("tuples larger than 3 are not supported".into()));
        }
        let expected: Vec<Vec<usize>> = canonical_subsets(dim, max_tuple_size).collect();
        let found: Vec<Vec<usize>> = monomials.iter().map(|m| m.indices.clone()).collect();
        if expected != found {
            return Err(Error::InvalidArgument(
                "monomials must cover every subset of size ≤ max tuple size in canonical order".into(),
            ));
        }
        Ok(ExponentTable {
            dim,
            max_tuple_size,
            monomials,
        })
    }

    /// Signal dimension `N`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of components `s` of `F`.
    pub fn total_dim(&self) -> usize {
        self.monomials.len()
    }

    pub fn max_tuple_size(&self) -> usize {
        self.max_tuple_size
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    /// `m_k` for every coordinate.
    pub fn singles(&self) -> Vec<u64> {
        self.monomials[..self.dim].iter().map(|m| m.exponents[0]).collect()
    }

    pub fn pairs(&self) -> impl Iterator<Item = ((usize, usize), (u64, u64))> + '_ {
        self.monomials.iter().filter(|m| m.arity() == 2).map(|m| {
            ((m.indices[0], m.indices[1]), (m.exponents[0], m.exponents[1]))
        })
    }

    pub fn triples(&self) -> impl Iterator<Item = ((usize, usize, usize), (u64, u64, u64))> + '_ {
        self.monomials.iter().filter(|m| m.arity() == 3).map(|m| {
            (
                (m.indices[0], m.indices[1], m.indices[2]),
                (m.exponents[0], m.exponents[1], m.exponents[2]),
            )
        })
    }

    pub fn pair(&self, k1: usize, k2: usize) -> Option<(u64, u64)> {
        self.pairs().find(|&(key, _)| key == (k1, k2)).map(|(_, v)| v)
    }

    pub fn triple(&self, k1: usize, k2: usize, k3: usize) -> Option<(u64, u64, u64)> {
        self.triples().find(|&(key, _)| key == (k1, k2, k3)).map(|(_, v)| v)
    }

    /// Largest exponent over all monomials.
    pub fn max_exponent(&self) -> u64 {
        self.monomials
            .iter()
            .flat_map(|m| m.exponents.iter().copied())
            .max()
            .unwrap_or(0)
    }

    /// Checks every monomial is invariant under `group`, exactly.
    pub fn check_invariant(&self, group: &GroupSpec) -> Result<()> {
        if group.dim() != self.dim {
            return Err(Error::dims(self.dim, group.dim()));
        }
        for m in &self.monomials {
            let terms: Vec<(usize, i64)> = m.terms().map(|(k, e)| (k, e as i64)).collect();
            if !group.is_invariant_monomial(&terms) {
                return Err(Error::Invariant(format!(
                    "monomial on {:?} with exponents {:?} is not invariant",
                    m.indices, m.exponents
                )));
            }
        }
        Ok(())
    }
}

fn canonical_subsets(n: usize, max_tuple_size: usize) -> impl Iterator<Item = Vec<usize>> {
    let singles = (0..n).map(|k| vec![k]);
    let pairs = (0..n).flat_map(move |a| (a + 1..n).map(move |b| vec![a, b]));
    let triples = (0..n).flat_map(move |a| {
        (a + 1..n).flat_map(move |b| (b + 1..n).map(move |c| vec![a, b, c]))
    });
    singles
        .chain(pairs.take_while(move |_| max_tuple_size >= 2))
        .chain(triples.take_while(move |_| max_tuple_size >= 3))
}

fn key(indices: &[usize]) -> String {
    indices.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

struct OrderedMap<'a>(Vec<(String, &'a [u64])>);

impl Serialize for OrderedMap<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

#[derive(Serialize)]
struct TableJsonOut<'a> {
    dim: usize,
    total_dim: usize,
    max_tuple_size: usize,
    singles: Vec<u64>,
    pairs: OrderedMap<'a>,
    triples: OrderedMap<'a>,
}

#[derive(Deserialize)]
struct TableJsonIn {
    singles: Vec<u64>,
    #[serde(default)]
    pairs: BTreeMap<String, Vec<u64>>,
    #[serde(default)]
    triples: BTreeMap<String, Vec<u64>>,
}

impl Serialize for ExponentTable {
    /// `{dim, total_dim, max_tuple_size, singles: [...], pairs: {"k1,k2": [a, b]},
    /// triples: {"k1,k2,k3": [c, d, e]}}` with 0-based indices.
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let by_arity = |t: usize| {
            OrderedMap(
                self.monomials
                    .iter()
                    .filter(|m| m.arity() == t)
                    .map(|m| (key(&m.indices), m.exponents.as_slice()))
                    .collect(),
            )
        };
        TableJsonOut {
            dim: self.dim,
            total_dim: self.total_dim(),
            max_tuple_size: self.max_tuple_size,
            singles: self.singles(),
            pairs: by_arity(2),
            triples: by_arity(3),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ExponentTable {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = TableJsonIn::deserialize(deserializer)?;
        let dim = raw.singles.len();
        let mut monomials: Vec<Monomial> = Vec::new();
        for (k, &m) in raw.singles.iter().enumerate() {
            monomials.push(Monomial::new(vec![k], vec![m]).map_err(D::Error::custom)?);
        }
        for map in [&raw.pairs, &raw.triples] {
            let mut entries = Vec::with_capacity(map.len());
            for (k, exps) in map {
                let indices = k
                    .split(',')
                    .map(|s| s.trim().parse::<usize>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|e| D::Error::custom(format!("bad key {k:?}: {e}")))?;
                entries.push(Monomial::new(indices, exps.clone()).map_err(D::Error::custom)?);
            }
            entries.sort_by(|a, b| a.indices.cmp(&b.indices));
            monomials.extend(entries);
        }
        ExponentTable::from_monomials(dim, monomials).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(orders: &[u64], rows: &[&[i64]]) -> GroupSpec {
        GroupSpec::new(orders.to_vec(), rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn singles_z4() {
        let g = group(&[4], &[&[1, 2]]);
        assert_eq!(minimal_single(&g, 0).unwrap(), 4);
        assert_eq!(minimal_single(&g, 1).unwrap(), 2);
    }

    #[test]
    fn zero_column_single_is_one() {
        let g = group(&[6, 4], &[&[0, 5], &[0, 1]]);
        assert_eq!(minimal_single(&g, 0).unwrap(), 1);
    }

    #[test]
    fn singles_z3_shift() {
        let g = group(&[3], &[&[1, 2, 0]]);
        assert_eq!(ExponentTable::build(&g).singles(), vec![3, 3, 1]);
    }

    #[test]
    fn pair_z4() {
        // a = 1 needs 2b ≡ 3 (mod 4), which has no solution.
        let g = group(&[4], &[&[1, 2]]);
        assert_eq!(minimal_pair(&g, 0, 1).unwrap(), (2, 1));
    }

    #[test]
    fn pair_z3_shift() {
        let g = group(&[3], &[&[1, 2, 0]]);
        assert_eq!(minimal_pair(&g, 0, 1).unwrap(), (1, 1));
    }

    #[test]
    fn pair_with_zero_second_column() {
        let g = group(&[5, 3], &[&[2, 0], &[1, 0]]);
        let m0 = minimal_single(&g, 0).unwrap();
        assert_eq!(minimal_pair(&g, 0, 1).unwrap(), (m0, 0));
    }

    #[test]
    fn triple_z2xz2() {
        let g = group(&[2, 2], &[&[1, 1, 0], &[1, 0, 1]]);
        assert_eq!(minimal_triple(&g, 0, 1, 2).unwrap(), (1, 1, 1));
    }

    #[test]
    fn triple_zero_leading_column() {
        let g = group(&[4], &[&[0, 1, 3]]);
        assert_eq!(minimal_triple(&g, 0, 1, 2).unwrap(), (1, 0, 0));
    }

    #[test]
    fn triple_z4_lex_min_completion() {
        // 1 + 2d + 3e ≡ 0 (mod 4): (d, e) = (0, 1) is the lexicographic minimum.
        let g = group(&[4], &[&[1, 2, 3]]);
        assert_eq!(minimal_triple(&g, 0, 1, 2).unwrap(), (1, 0, 1));
    }

    #[test]
    fn index_errors() {
        let g = group(&[4], &[&[1, 2, 3]]);
        assert!(minimal_single(&g, 3).is_err());
        assert!(minimal_pair(&g, 1, 1).is_err());
        assert!(minimal_triple(&g, 0, 0, 2).is_err());
    }

    #[test]
    fn table_dimensions() {
        assert_eq!(tensor_dim(1), 1);
        assert_eq!(tensor_dim(3), 7);
        assert_eq!(tensor_dim(4), 14);
        let g = group(&[2], &[&[1]]);
        let t = ExponentTable::build(&g);
        assert_eq!(t.total_dim(), 1);
        assert_eq!(t.pairs().count(), 0);
        let g = group(&[2, 3], &[&[1, 0, 1, 1], &[0, 1, 2, 0]]);
        assert_eq!(ExponentTable::build(&g).total_dim(), 14);
        assert_eq!(ExponentTable::build_with(&g, 2).unwrap().total_dim(), 10);
        assert!(ExponentTable::build_with(&g, 4).is_err());
    }

    #[test]
    fn table_is_invariant() {
        let g = GroupSpec::shift(2, 3).unwrap();
        ExponentTable::build(&g).check_invariant(&g).unwrap();
    }

    #[test]
    fn json_layout_and_round_trip() {
        let g = group(&[4], &[&[1, 2]]);
        let t = ExponentTable::build(&g);
        let s = serde_json::to_string(&t).unwrap();
        assert_eq!(
            s,
            r#"{"dim":2,"total_dim":3,"max_tuple_size":3,"singles":[4,2],"pairs":{"0,1":[2,1]},"triples":{}}"#
        );
        let back: ExponentTable = serde_json::from_str(&s).unwrap();
        // an empty triples map carries no tuple-size information
        assert_eq!(back.monomials(), t.monomials());

        let g = GroupSpec::shift(3, 4).unwrap();
        let t = ExponentTable::build(&g);
        let back: ExponentTable = serde_json::from_str(&serde_json::to_string(&t).unwrap()).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn json_rejects_missing_subsets() {
        let s = r#"{"singles":[2,2,2],"pairs":{"0,1":[1,1]}}"#;
        assert!(serde_json::from_str::<ExponentTable>(s).is_err());
    }

    #[test]
    fn derivative_of_monomial() {
        let m = Monomial::new(vec![0, 2], vec![3, 2]).unwrap();
        let x = [Complex64::new(0.5, 1.0), Complex64::new(2.0, 0.0), Complex64::new(-1.0, 0.3)];
        let h = 1e-6;
        for k in [0usize, 1, 2] {
            let mut xp = x;
            xp[k] += h;
            let fd = (m.eval(&xp) - m.eval(&x)) / h;
            assert!((fd - m.derivative(&x, k)).norm() < 1e-4, "k = {k}");
        }
    }
}
