//! Dense exact-rational matrices.
//!
//! Elimination runs on integer rows: every row is scaled to a primitive
//! integer vector, pivoting combines rows by cross-multiplication, and each
//! updated row is divided by its content. Rationals only reappear when a
//! reduced row is normalised by its pivot.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::rat::{lcm_of_denoms, q, Q};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RatMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self[(r, c)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Index<(usize, usize)> for RatMatrix {
    type Output = Q;
    fn index(&self, (r, c): (usize, usize)) -> &Q {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Q {
        &mut self.data[r * self.cols + c]
    }
}

/// Result of a Gauss-Jordan reduction.
#[derive(Clone, Debug)]
pub struct Rref {
    /// Reduced row echelon form (pivot entries equal one).
    pub matrix: RatMatrix,
    /// Pivot column of each nonzero row, in order.
    pub pivots: Vec<usize>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, data: vec![Q::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Q::one();
        }
        m
    }

    pub fn scalar(n: usize, x: &Q) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = x.clone();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::SizeMismatch { expected: c, got: row.len() });
            }
            data.extend(row);
        }
        Ok(RatMatrix { rows: r, cols: c, data })
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let conv = rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect();
        Self::from_rows(conv).expect("ragged integer matrix")
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Q) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        RatMatrix { rows, cols, data }
    }

    pub fn column(v: &[Q]) -> Self {
        RatMatrix { rows: v.len(), cols: 1, data: v.to_vec() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, r: usize) -> &[Q] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<Q> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Q>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn entries(&self) -> &[Q] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn mul(&self, other: &RatMatrix) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = &other[(k, c)];
                    if !b.is_zero() {
                        out[(r, c)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                let mut acc = Q::zero();
                for (a, b) in self.row(r).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += a * b;
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &RatMatrix) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        RatMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &RatMatrix) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        RatMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, x: &Q) -> Self {
        let data = self.data.iter().map(|a| a * x).collect();
        RatMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self) -> Self {
        let data = self.data.iter().map(|a| -a).collect();
        RatMatrix { rows: self.rows, cols: self.cols, data }
    }

    /// `self - x * I`.
    pub fn shift(&self, x: &Q) -> Self {
        assert!(self.is_square());
        let mut m = self.clone();
        for i in 0..self.rows {
            m[(i, i)] -= x;
        }
        m
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |r, c| self[(rows[r], cols[c])].clone())
    }

    pub fn block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Self {
        Self::from_fn(nr, nc, |r, c| self[(r0 + r, c0 + c)].clone())
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &RatMatrix) {
        for r in 0..b.rows {
            for c in 0..b.cols {
                self[(r0 + r, c0 + c)] = b[(r, c)].clone();
            }
        }
    }

    pub fn hstack(parts: &[RatMatrix]) -> Self {
        let rows = parts.first().map_or(0, |m| m.rows);
        let cols = parts.iter().map(|m| m.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let mut c0 = 0;
        for p in parts {
            assert_eq!(p.rows, rows);
            out.set_block(0, c0, p);
            c0 += p.cols;
        }
        out
    }

    pub fn vstack(parts: &[RatMatrix]) -> Self {
        let cols = parts.first().map_or(0, |m| m.cols);
        let rows = parts.iter().map(|m| m.rows).sum();
        let mut out = Self::zeros(rows, cols);
        let mut r0 = 0;
        for p in parts {
            assert_eq!(p.cols, cols);
            out.set_block(r0, 0, p);
            r0 += p.rows;
        }
        out
    }

    pub fn block_diag(parts: &[RatMatrix]) -> Self {
        let rows = parts.iter().map(|m| m.rows).sum();
        let cols = parts.iter().map(|m| m.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for p in parts {
            out.set_block(r0, c0, p);
            r0 += p.rows;
            c0 += p.cols;
        }
        out
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut out = Self::identity(self.rows);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    pub fn trace(&self) -> Q {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).sum()
    }

    pub fn commutator(&self, other: &RatMatrix) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    /// Gauss-Jordan reduction, fraction-free on primitive integer rows.
    pub fn rref(&self) -> Rref {
        let mut rows: Vec<Vec<BigInt>> = (0..self.rows).map(|r| integer_row(self.row(r))).collect();
        let pivots = integer_gauss_jordan(&mut rows, self.cols);
        let mut m = Self::zeros(pivots.len(), self.cols);
        for (r, &pc) in pivots.iter().enumerate() {
            let p = Q::from_integer(rows[r][pc].clone());
            for c in 0..self.cols {
                if !rows[r][c].is_zero() {
                    m[(r, c)] = Q::from_integer(rows[r][c].clone()) / &p;
                }
            }
        }
        Rref { matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        let mut rows: Vec<Vec<BigInt>> = (0..self.rows).map(|r| integer_row(self.row(r))).collect();
        integer_gauss_jordan(&mut rows, self.cols).len()
    }

    /// Basis of the right null space, as columns of the returned matrix.
    pub fn kernel(&self) -> RatMatrix {
        let Rref { matrix, pivots } = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = Self::zeros(self.cols, free.len());
        for (j, &f) in free.iter().enumerate() {
            k[(f, j)] = Q::one();
            for (r, &pc) in pivots.iter().enumerate() {
                k[(pc, j)] = -matrix[(r, f)].clone();
            }
        }
        k
    }

    /// Basis of the left null space, as rows of the returned matrix.
    pub fn left_kernel(&self) -> RatMatrix {
        self.transpose().kernel().transpose()
    }

    pub fn inverse(&self) -> Option<RatMatrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(self.clone());
        }
        let aug = Self::hstack(&[self.clone(), Self::identity(n)]);
        let Rref { matrix, pivots } = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(matrix.block(0, n, n, n))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn det(&self) -> Q {
        assert!(self.is_square());
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Q::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !m[(r, c)].is_zero()) else {
                return Q::zero();
            };
            if p != c {
                for k in 0..n {
                    m.data.swap(p * n + k, c * n + k);
                }
                det = -det;
            }
            let piv = m[(c, c)].clone();
            det *= &piv;
            for r in c + 1..n {
                if m[(r, c)].is_zero() {
                    continue;
                }
                let f = &m[(r, c)] / &piv;
                for k in c..n {
                    let t = &f * &m[(c, k)];
                    m[(r, k)] -= t;
                }
            }
        }
        det
    }

    /// Solves `self * x = b` for one particular solution, if any.
    pub fn solve(&self, b: &[Q]) -> Option<Vec<Q>> {
        assert_eq!(b.len(), self.rows);
        let aug = Self::hstack(&[self.clone(), Self::column(b)]);
        let Rref { matrix, pivots } = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Q::zero(); self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = matrix[(r, self.cols)].clone();
        }
        Some(x)
    }

    /// Pivot-based basis of the column space: indices of independent columns.
    pub fn independent_columns(&self) -> Vec<usize> {
        self.rref().pivots
    }

    /// Indices of a maximal set of independent rows.
    pub fn independent_rows(&self) -> Vec<usize> {
        self.transpose().rref().pivots
    }
}

fn integer_row(row: &[Q]) -> Vec<BigInt> {
    let l = lcm_of_denoms(row.iter());
    let lq = Q::from_integer(l);
    let mut out: Vec<BigInt> = row.iter().map(|x| (x * &lq).to_integer()).collect();
    make_primitive(&mut out);
    out
}

fn make_primitive(row: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for x in row.iter() {
        if !x.is_zero() {
            g = g.gcd(x);
            if g.is_one() {
                return;
            }
        }
    }
    if g.is_zero() || g.is_one() {
        return;
    }
    for x in row.iter_mut() {
        *x = &*x / &g;
    }
}

/// In-place Gauss-Jordan on integer rows. On return the first `pivots.len()`
/// rows are the nonzero reduced rows, each primitive with a positive pivot.
fn integer_gauss_jordan(rows: &mut Vec<Vec<BigInt>>, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        // Prefer the pivot with the smallest magnitude to limit growth.
        let mut best: Option<usize> = None;
        for i in r..rows.len() {
            if !rows[i][c].is_zero() {
                match best {
                    Some(b) if rows[b][c].abs() <= rows[i][c].abs() => {}
                    _ => best = Some(i),
                }
            }
        }
        let Some(p) = best else { continue };
        rows.swap(r, p);
        if rows[r][c].is_negative() {
            for x in rows[r].iter_mut() {
                *x = -&*x;
            }
        }
        let pivot_row = rows[r].clone();
        let pv = pivot_row[c].clone();
        for i in 0..rows.len() {
            if i == r || rows[i][c].is_zero() {
                continue;
            }
            let g = pv.gcd(&rows[i][c]);
            let a = &pv / &g;
            let b = &rows[i][c] / &g;
            let row = &mut rows[i];
            for k in 0..cols {
                let t = &row[k] * &a - &b * &pivot_row[k];
                row[k] = t;
            }
            make_primitive(row);
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(pivots.len());
    pivots
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::qf;

    #[test]
    fn rank_and_kernel_of_small_matrix() {
        let m = RatMatrix::from_i64(&[vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]]);
        assert_eq!(m.rank(), 2);
        let k = m.kernel();
        assert_eq!(k.cols(), 1);
        assert!(m.mul(&k).is_zero());
    }

    #[test]
    fn inverse_roundtrip() {
        let m =
            RatMatrix::from_rows(vec![vec![qf(1, 2), q(3), q(0)], vec![q(1), q(-1), qf(2, 3)], vec![q(0), q(5), q(7)]])
                .unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), RatMatrix::identity(3));
        assert_eq!(m.det() * inv.det(), Q::one());
    }

    #[test]
    fn singular_has_no_inverse() {
        let m = RatMatrix::from_i64(&[vec![1, 2], vec![2, 4]]);
        assert!(m.inverse().is_none());
        assert_eq!(m.det(), Q::zero());
        assert_eq!(RatMatrix::zeros(0, 0).inverse(), Some(RatMatrix::zeros(0, 0)));
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let m = RatMatrix::from_i64(&[vec![1, 1], vec![1, -1]]);
        let x = m.solve(&[q(3), q(1)]).unwrap();
        assert_eq!(x, vec![q(2), q(1)]);
        let s = RatMatrix::from_i64(&[vec![1, 1], vec![2, 2]]);
        assert!(s.solve(&[q(1), q(3)]).is_none());
    }

    #[test]
    fn left_kernel_annihilates() {
        let m = RatMatrix::from_i64(&[vec![1, 0], vec![0, 1], vec![1, 1]]);
        let l = m.left_kernel();
        assert_eq!(l.rows(), 1);
        assert!(l.mul(&m).is_zero());
    }
}
