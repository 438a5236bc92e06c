use std::fmt;

use super::field::FiniteField;
use super::matrix::Matrix;
use super::qpoly::gaussian_binomial;
use crate::error::{HallError, Result};

/// Largest ambient dimension handled by [`enumerate_subspaces`].
pub const MAX_AMBIENT: usize = 6;
const MAX_ENUMERATION: u64 = 2_000_000;

/// Subspace of `F^n`, stored as the reduced row-echelon basis. Two subspaces
/// are equal iff their stored bases are identical.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    ambient: usize,
    basis: Matrix,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Matrix::zeros(0, ambient) }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace { ambient, basis: Matrix::identity(ambient) }
    }

    /// Row space of `m`.
    pub fn span(m: &Matrix, f: &FiniteField) -> Self {
        let (r, piv) = m.rref(f);
        let basis = r.select_rows(&(0..piv.len()).collect::<Vec<_>>());
        Subspace { ambient: m.cols(), basis }
    }

    /// Column space of `m`, as a subspace of `F^{rows}`.
    pub fn image(m: &Matrix, f: &FiniteField) -> Self {
        Self::span(&m.transpose(), f)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn pivots(&self) -> Vec<usize> {
        (0..self.dim()).map(|r| (0..self.ambient).find(|&c| self.basis.get(r, c) != 0).unwrap()).collect()
    }

    pub fn contains_vector(&self, v: &[u8], f: &FiniteField) -> bool {
        let m = Matrix::vstack(&self.basis, &Matrix::from_vec(1, self.ambient, v.to_vec()).unwrap()).unwrap();
        m.rank(f) == self.dim()
    }

    pub fn contains(&self, other: &Subspace, f: &FiniteField) -> bool {
        other.ambient == self.ambient && Matrix::vstack(&self.basis, &other.basis).unwrap().rank(f) == self.dim()
    }

    pub fn sum(&self, other: &Subspace, f: &FiniteField) -> Subspace {
        Subspace::span(&Matrix::vstack(&self.basis, &other.basis).unwrap(), f)
    }

    /// Image of this subspace under `m` (acting on column vectors).
    pub fn map(&self, m: &Matrix, f: &FiniteField) -> Subspace {
        let img = m.mul_unchecked(&self.basis.transpose(), f);
        Subspace::image(&img, f)
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{:?} in F^{}>", self.basis, self.ambient)
    }
}

/// Every `k`-dimensional subspace of `F^n`, one echelon representative each,
/// in lexicographic order of the echelon matrices.
pub fn enumerate_subspaces(n: usize, k: usize, f: &FiniteField) -> Result<Vec<Subspace>> {
    if k > n {
        return Err(HallError::InvalidArgument(format!("subspace dim {k} > ambient {n}")));
    }
    if n > MAX_AMBIENT {
        return Err(HallError::BoundExceeded(format!("ambient dimension {n} > {MAX_AMBIENT}")));
    }
    let count = gaussian_binomial(n, k)?.eval_u64(f.order() as u64);
    if count.is_none_or(|c| c > MAX_ENUMERATION) {
        return Err(HallError::BoundExceeded(format!("Gr({k},{n}) over F_{} is too large to enumerate", f.order())));
    }
    let mut out = Vec::new();
    let mut pivots = Vec::with_capacity(k);
    choose_pivots(n, k, 0, &mut pivots, &mut |piv| {
        // free slots: row r, column c > piv[r], c not a pivot
        let slots: Vec<(usize, usize)> =
            (0..k).flat_map(|r| ((piv[r] + 1)..n).filter(|c| !piv.contains(c)).map(move |c| (r, c))).collect();
        let q = f.order();
        let total = q.pow(slots.len() as u32);
        for mut idx in 0..total {
            let mut m = Matrix::zeros(k, n);
            for (r, &p) in piv.iter().enumerate() {
                m.set(r, p, 1);
            }
            for &(r, c) in slots.iter().rev() {
                m.set(r, c, (idx % q) as u8);
                idx /= q;
            }
            out.push(Subspace { ambient: n, basis: m });
        }
    });
    out.sort();
    Ok(out)
}

fn choose_pivots(n: usize, k: usize, start: usize, acc: &mut Vec<usize>, emit: &mut dyn FnMut(&[usize])) {
    if acc.len() == k {
        emit(acc);
        return;
    }
    for c in start..n {
        acc.push(c);
        choose_pivots(n, k, c + 1, acc, emit);
        acc.pop();
    }
}

/// Projection `F^n -> F^n / V` as a surjective `(n - dim V) x n` matrix whose
/// kernel is exactly `V`. Coordinates on the quotient are the non-pivot
/// coordinates of `V`'s echelon basis.
pub fn quotient_map(v: &Subspace, f: &FiniteField) -> (usize, Matrix) {
    let n = v.ambient();
    let piv = v.pivots();
    let free: Vec<usize> = (0..n).filter(|c| !piv.contains(c)).collect();
    let mut p = Matrix::zeros(free.len(), n);
    for (j, &fc) in free.iter().enumerate() {
        p.set(j, fc, 1);
        for (i, &pc) in piv.iter().enumerate() {
            p.set(j, pc, f.neg(v.basis().get(i, fc)));
        }
    }
    (free.len(), p)
}
