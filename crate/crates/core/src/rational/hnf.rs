//! Dense arbitrary-precision integer matrices, column Hermite normal form,
//! exact determinants and rational linear solves.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(r) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::dims(cols, r.len()));
        }
        Ok(IntMatrix {
            rows: rows.len(),
            cols,
            data: rows.iter().flat_map(|r| r.iter().cloned().map(Into::into)).collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    /// Rows `r0..r1`, columns `c0..c1`.
    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> IntMatrix {
        let mut out = IntMatrix::zeros(r1 - r0, c1 - c0);
        for r in r0..r1 {
            for c in c0..c1 {
                out.set(r - r0, c - c0, self.get(r, c).clone());
            }
        }
        out
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c).clone());
            }
        }
        out
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::dims(self.cols, other.rows));
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let idx = r * other.cols + c;
                    out.data[idx] += a * other.get(k, c);
                }
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> BigInt {
        self.data.iter().map(|v| v.abs()).max().unwrap_or_default()
    }

    /// `(col_i, col_j) ← (s·col_i + t·col_j, u·col_i + v·col_j)`.
    fn combine_columns(&mut self, i: usize, j: usize, s: &BigInt, t: &BigInt, u: &BigInt, v: &BigInt) {
        for r in 0..self.rows {
            let a = self.get(r, i).clone();
            let b = self.get(r, j).clone();
            self.set(r, i, s * &a + t * &b);
            self.set(r, j, u * &a + v * &b);
        }
    }

    fn negate_column(&mut self, c: usize) {
        for r in 0..self.rows {
            let v = -self.get(r, c);
            self.set(r, c, v);
        }
    }

    /// `col_dst ← col_dst − q·col_src`.
    fn sub_column(&mut self, dst: usize, src: usize, q: &BigInt) {
        for r in 0..self.rows {
            let v = self.get(r, dst) - q * self.get(r, src);
            self.set(r, dst, v);
        }
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<BigInt> {
        if self.rows != self.cols {
            return Err(Error::InvalidArgument(format!(
                "determinant of a non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.to_rows();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        Ok(sign * &a[n - 1][n - 1])
    }

    /// Exact solution of `self·x = b`; `None` when singular.
    pub fn solve_rational(&self, b: &[BigInt]) -> Result<Option<Vec<BigRational>>> {
        if self.rows != self.cols {
            return Err(Error::InvalidArgument("solve needs a square matrix".into()));
        }
        if b.len() != self.rows {
            return Err(Error::dims(self.rows, b.len()));
        }
        let n = self.rows;
        let mut a: Vec<Vec<BigRational>> = (0..n)
            .map(|r| {
                self.row(r)
                    .iter()
                    .chain(std::iter::once(&b[r]))
                    .map(|v| BigRational::from_integer(v.clone()))
                    .collect()
            })
            .collect();
        for k in 0..n {
            let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else {
                return Ok(None);
            };
            a.swap(k, p);
            let pivot = a[k][k].clone();
            for v in a[k][k..].iter_mut() {
                *v = &*v / &pivot;
            }
            for r in 0..n {
                if r == k || a[r][k].is_zero() {
                    continue;
                }
                let f = a[r][k].clone();
                for c in k..=n {
                    let delta = &f * &a[k][c];
                    a[r][c] -= delta;
                }
            }
        }
        Ok(Some(a.into_iter().map(|row| row[n].clone()).collect()))
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries((0..self.rows).map(|r| self.row(r))).finish()
    }
}

/// Column Hermite normal form: returns `(H, U)` with `M·U = H`, `U`
/// unimodular, `H` lower triangular in echelon form with positive pivots and
/// entries left of each pivot reduced into `[0, pivot)`.
pub fn hermite_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.cols);
    let mut pc = 0;
    for r in 0..m.rows {
        if pc >= m.cols {
            break;
        }
        for j in pc + 1..m.cols {
            if h.get(r, j).is_zero() {
                continue;
            }
            let a = h.get(r, pc).clone();
            let b = h.get(r, j).clone();
            let e = a.extended_gcd(&b);
            let (g, s, t) = (e.gcd, e.x, e.y);
            // [[s, -b/g], [t, a/g]] has determinant (s·a + t·b)/g = 1.
            let (nb, na) = (-(&b / &g), &a / &g);
            h.combine_columns(pc, j, &s, &t, &nb, &na);
            u.combine_columns(pc, j, &s, &t, &nb, &na);
        }
        if h.get(r, pc).is_zero() {
            continue;
        }
        if h.get(r, pc).is_negative() {
            h.negate_column(pc);
            u.negate_column(pc);
        }
        let pivot = h.get(r, pc).clone();
        for j in 0..pc {
            let q = h.get(r, j).div_floor(&pivot);
            if !q.is_zero() {
                h.sub_column(j, pc, &q);
                u.sub_column(j, pc, &q);
            }
        }
        pc += 1;
    }
    (h, u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    fn is_column_hnf(h: &IntMatrix) -> bool {
        let mut pc = 0;
        for r in 0..h.rows() {
            if pc < h.cols() && !h.get(r, pc).is_zero() {
                if !h.get(r, pc).is_positive() {
                    return false;
                }
                if (pc + 1..h.cols()).any(|c| !h.get(r, c).is_zero()) {
                    return false;
                }
                if (0..pc).any(|c| h.get(r, c).is_negative() || h.get(r, c) >= h.get(r, pc)) {
                    return false;
                }
                pc += 1;
            } else if (pc..h.cols()).any(|c| !h.get(r, c).is_zero()) {
                return false;
            }
        }
        true
    }

    #[test]
    fn identity_is_fixed() {
        let (h, u) = hermite_normal_form(&IntMatrix::identity(3));
        assert_eq!(h, IntMatrix::identity(3));
        assert_eq!(u, IntMatrix::identity(3));
    }

    #[test]
    fn single_row() {
        let a = m(&[vec![2, 4]]);
        let (h, u) = hermite_normal_form(&a);
        assert_eq!(h, m(&[vec![2, 0]]));
        assert_eq!(a.mul(&u).unwrap(), h);
        assert_eq!(u.det().unwrap().abs(), BigInt::one());
    }

    #[test]
    fn negative_and_zero_leading_entries() {
        let a = m(&[vec![0, -6, 4], vec![3, 1, 1]]);
        let (h, u) = hermite_normal_form(&a);
        assert_eq!(a.mul(&u).unwrap(), h);
        assert!(is_column_hnf(&h));
        assert_eq!(h.get(0, 0), &BigInt::from(2));
    }

    #[test]
    fn determinants() {
        assert_eq!(m(&[vec![2, 1], vec![7, 4]]).det().unwrap(), BigInt::one());
        assert_eq!(m(&[vec![0, 1], vec![1, 0]]).det().unwrap(), BigInt::from(-1));
        assert_eq!(m(&[vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 9]]).det().unwrap(), BigInt::zero());
        assert_eq!(m(&[vec![2, 0, 1], vec![1, 3, 2], vec![1, 1, 2]]).det().unwrap(), BigInt::from(6));
        assert!(m(&[vec![1, 2]]).det().is_err());
    }

    #[test]
    fn rational_solve() {
        let a = m(&[vec![3, 1, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        let x = a.solve_rational(&[BigInt::one(), BigInt::one(), BigInt::one()]).unwrap().unwrap();
        assert_eq!(x, vec![BigRational::zero(), BigRational::one(), BigRational::one()]);
        let singular = m(&[vec![1, 2], vec![2, 4]]);
        assert!(singular.solve_rational(&[BigInt::one(), BigInt::one()]).unwrap().is_none());
    }

    proptest! {
        #[test]
        fn hnf_identity_and_unimodularity(rows in prop::collection::vec(prop::collection::vec(-20i64..20, 5), 3)) {
            let a = m(&rows);
            let (h, u) = hermite_normal_form(&a);
            prop_assert_eq!(a.mul(&u).unwrap(), h.clone());
            prop_assert_eq!(u.det().unwrap().abs(), BigInt::one());
            prop_assert!(is_column_hnf(&h));
        }

        #[test]
        fn det_matches_rational_solve(rows in prop::collection::vec(prop::collection::vec(-9i64..9, 4), 4)) {
            let a = m(&rows);
            let det = a.det().unwrap();
            let b: Vec<BigInt> = (1..=4).map(BigInt::from).collect();
            let x = a.solve_rational(&b).unwrap();
            prop_assert_eq!(det.is_zero(), x.is_none());
            if let Some(x) = x {
                for r in 0..4 {
                    let lhs: BigRational = a.row(r).iter().zip(&x).map(|(v, xi)| BigRational::from_integer(v.clone()) * xi).sum();
                    prop_assert_eq!(lhs, BigRational::from_integer(b[r].clone()));
                }
            }
        }
    }
}
