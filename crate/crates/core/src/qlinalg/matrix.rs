use std::fmt;
use std::ops::Range;

use super::field::{Elt, FiniteField};
use crate::error::{HallError, Result};

/// Dense matrix over a finite field. The field is passed to each arithmetic
/// operation rather than stored, so matrices stay small and hashable.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Elt>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Elt>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(HallError::DimensionMismatch(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<Elt>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(HallError::DimensionMismatch("ragged rows".into()));
        }
        Ok(Matrix { rows: rows.len(), cols, data: rows.concat() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[Elt] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Elt {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Elt) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Elt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix, f: &FiniteField) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(HallError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(self.mul_unchecked(other, f))
    }

    pub(crate) fn mul_unchecked(&self, other: &Matrix, f: &FiniteField) -> Matrix {
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b != 0 {
                        let idx = i * other.cols + j;
                        out.data[idx] = f.add(out.data[idx], f.mul(a, b));
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix, f: &FiniteField) -> Result<Matrix> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(HallError::DimensionMismatch("shape mismatch in add".into()));
        }
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect();
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn sub(&self, other: &Matrix, f: &FiniteField) -> Result<Matrix> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(HallError::DimensionMismatch("shape mismatch in sub".into()));
        }
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.sub(a, b)).collect();
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn submatrix(&self, rows: Range<usize>, cols: Range<usize>) -> Matrix {
        let mut out = Matrix::zeros(rows.len(), cols.len());
        for (i, r) in rows.clone().enumerate() {
            for (j, c) in cols.clone().enumerate() {
                out.set(i, j, self.get(r, c));
            }
        }
        out
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        let data = idx.iter().flat_map(|&r| self.row(r).iter().copied()).collect();
        Matrix { rows: idx.len(), cols: self.cols, data }
    }

    pub fn block_diag(blocks: &[&Matrix]) -> Matrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for r in 0..b.rows {
                for c in 0..b.cols {
                    out.set(r0 + r, c0 + c, b.get(r, c));
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    pub fn hstack(a: &Matrix, b: &Matrix) -> Result<Matrix> {
        if a.rows != b.rows {
            return Err(HallError::DimensionMismatch("hstack row mismatch".into()));
        }
        let mut out = Matrix::zeros(a.rows, a.cols + b.cols);
        for r in 0..a.rows {
            for c in 0..a.cols {
                out.set(r, c, a.get(r, c));
            }
            for c in 0..b.cols {
                out.set(r, a.cols + c, b.get(r, c));
            }
        }
        Ok(out)
    }

    pub fn vstack(a: &Matrix, b: &Matrix) -> Result<Matrix> {
        if a.cols != b.cols {
            return Err(HallError::DimensionMismatch("vstack column mismatch".into()));
        }
        let mut data = a.data.clone();
        data.extend_from_slice(&b.data);
        Ok(Matrix { rows: a.rows + b.rows, cols: a.cols, data })
    }

    /// Reduced row-echelon form and pivot columns.
    pub fn rref(&self, f: &FiniteField) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..m.cols {
                    m.data.swap(pr * m.cols + j, r * m.cols + j);
                }
            }
            let inv = f.inv(m.get(r, c)).unwrap();
            for j in 0..m.cols {
                let v = f.mul(m.get(r, j), inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                let factor = m.get(i, c);
                if i != r && factor != 0 {
                    for j in 0..m.cols {
                        let v = f.sub(m.get(i, j), f.mul(factor, m.get(r, j)));
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self, f: &FiniteField) -> usize {
        self.rref(f).1.len()
    }

    pub fn inverse(&self, f: &FiniteField) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(Matrix::zeros(0, 0));
        }
        let aug = Matrix::hstack(self, &Matrix::identity(n)).ok()?;
        let (r, piv) = aug.rref(f);
        if piv.len() < n || piv[n - 1] != n - 1 {
            return None;
        }
        Some(r.submatrix(0..n, n..2 * n))
    }

    /// Basis of the right kernel `{x : A x = 0}`, returned as the rows of a
    /// matrix in reduced echelon form.
    pub fn kernel(&self, f: &FiniteField) -> Matrix {
        let (r, piv) = self.rref(f);
        let free: Vec<usize> = (0..self.cols).filter(|c| !piv.contains(c)).collect();
        let mut basis = Matrix::zeros(free.len(), self.cols);
        for (bi, &fc) in free.iter().enumerate() {
            basis.set(bi, fc, 1);
            for (pi, &pc) in piv.iter().enumerate() {
                basis.set(bi, pc, f.neg(r.get(pi, fc)));
            }
        }
        basis.rref(f).0
    }

    /// Matrix-vector product with `v` as a column.
    pub fn apply(&self, v: &[Elt], f: &FiniteField) -> Vec<Elt> {
        (0..self.rows).map(|i| self.row(i).iter().zip(v).fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))).collect()
    }

    /// All `rows x cols` matrices over the field, in lexicographic order of
    /// their row-major entries.
    pub fn all(rows: usize, cols: usize, f: &FiniteField) -> impl Iterator<Item = Matrix> + '_ {
        let n = rows * cols;
        let q = f.order();
        let total = q.checked_pow(n as u32).unwrap_or(usize::MAX);
        (0..total).map(move |mut idx| {
            let mut data = vec![0; n];
            for slot in data.iter_mut().rev() {
                *slot = (idx % q) as Elt;
                idx /= q;
            }
            Matrix { rows, cols, data }
        })
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, ";")?;
            }
            for c in 0..self.cols {
                write!(f, "{}", self.get(r, c))?;
                if c + 1 < self.cols && f.alternate() {
                    write!(f, " ")?;
                }
            }
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlinalg::field::FiniteField;
    use proptest::prelude::*;

    #[test]
    fn inverse_roundtrip() {
        let f = FiniteField::new(3, 1).unwrap();
        let a = Matrix::from_rows(&[vec![1, 2], vec![0, 1]]).unwrap();
        let inv = a.inverse(&f).unwrap();
        assert_eq!(a.mul(&inv, &f).unwrap(), Matrix::identity(2));
        let singular = Matrix::from_rows(&[vec![1, 2], vec![2, 1]]).unwrap();
        assert!(singular.inverse(&f).is_none());
    }

    #[test]
    fn kernel_is_annihilated() {
        let f = FiniteField::new(2, 1).unwrap();
        let a = Matrix::from_rows(&[vec![1, 1, 0], vec![0, 1, 1]]).unwrap();
        let k = a.kernel(&f);
        assert_eq!(k.rows(), 1);
        assert!(a.mul(&k.transpose(), &f).unwrap().is_zero());
    }

    #[test]
    fn mul_rejects_bad_shapes() {
        let f = FiniteField::new(2, 1).unwrap();
        assert!(Matrix::zeros(2, 3).mul(&Matrix::zeros(2, 3), &f).is_err());
    }

    proptest! {
        #[test]
        fn rref_idempotent_and_rank_bounded(entries in proptest::collection::vec(0u8..3, 12)) {
            let f = FiniteField::new(3, 1).unwrap();
            let a = Matrix::from_vec(3, 4, entries).unwrap();
            let (r, piv) = a.rref(&f);
            prop_assert_eq!(r.rref(&f).0, r.clone());
            prop_assert!(piv.len() <= 3);
            prop_assert_eq!(a.kernel(&f).rows() + piv.len(), 4);
        }
    }
}
