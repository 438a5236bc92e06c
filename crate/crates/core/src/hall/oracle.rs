//! Structure constants by direct enumeration of subobjects, independent of
//! flags and groupoids.

use crate::error::{HallError, Result};
use crate::fincat::{classify, CategoryKind, CategorySpec, IsoClass};
use crate::qlinalg::{enumerate_subspaces, quotient_map, FiniteField, Matrix, Subspace};

/// Matrix of `m` restricted to `src -> tgt`, in the echelon bases (the
/// coordinates of a vector of `tgt` are its pivot entries).
fn restricted(m: &Matrix, src: &Subspace, tgt: &Subspace, f: &FiniteField) -> Matrix {
    let image = m.mul(&src.basis().transpose(), f).unwrap();
    image.select_rows(&tgt.pivots())
}

/// Section of the quotient map: the standard vectors at the non-pivot coordinates.
fn lift(sub: &Subspace) -> Matrix {
    let piv = sub.pivots();
    let free: Vec<usize> = (0..sub.ambient()).filter(|c| !piv.contains(c)).collect();
    let mut out = Matrix::zeros(sub.ambient(), free.len());
    for (j, &c) in free.iter().enumerate() {
        out.set(c, j, 1);
    }
    out
}

/// Matrix of `m` on the quotients, using the non-pivot coordinates.
fn induced(m: &Matrix, src: &Subspace, tgt: &Subspace, f: &FiniteField) -> Matrix {
    let (_, pt) = quotient_map(tgt, f);
    pt.mul(&m.mul(&lift(src), f).unwrap(), f).unwrap()
}

/// Visits every subrepresentation of `v` with dimension vector `dims`, with
/// the structure maps of the sub and of the quotient (arrows only).
fn subreps(
    spec: &CategorySpec,
    v: &IsoClass,
    dims: &[usize],
    mut visit: impl FnMut(Vec<Matrix>, Vec<Matrix>) -> Result<()>,
) -> Result<()> {
    let f = &spec.field;
    let model = spec.model();
    let choices: Vec<Vec<Subspace>> =
        v.grade.iter().zip(dims).map(|(&n, &k)| enumerate_subspaces(n, k, f)).collect::<Result<_>>()?;
    let mut idx = vec![0usize; choices.len()];
    if choices.iter().any(|c| c.is_empty()) {
        return Ok(());
    }
    loop {
        let pick: Vec<Subspace> = idx.iter().zip(&choices).map(|(&i, c)| c[i].clone()).collect();
        let stable = model.arrows.iter().enumerate().all(|(a, &(s, t))| {
            let img = Subspace::image(&v.rep[a].mul(&pick[s].basis().transpose(), f).unwrap(), f);
            pick[t].contains(&img, f)
        });
        if stable {
            let sub = model
                .arrows
                .iter()
                .enumerate()
                .map(|(a, &(s, t))| restricted(&v.rep[a], &pick[s], &pick[t], f))
                .collect();
            let quo =
                model.arrows.iter().enumerate().map(|(a, &(s, t))| induced(&v.rep[a], &pick[s], &pick[t], f)).collect();
            visit(sub, quo)?;
        }
        let mut k = 0;
        loop {
            if k == idx.len() {
                return Ok(());
            }
            idx[k] += 1;
            if idx[k] < choices[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Number of subobjects `U' ⊆ V` with `U' ≅ U` and `V / U' ≅ W`.
pub fn subobject_count_oracle(spec: &CategorySpec, u: &IsoClass, w: &IsoClass, v: &IsoClass) -> Result<u64> {
    if let CategoryKind::Slice { .. } = spec.kind {
        return Err(HallError::Unsupported("use slice_subobject_count for slice categories".into()));
    }
    let fits = u.grade.iter().zip(&w.grade).map(|(a, b)| a + b).eq(v.grade.iter().copied());
    if !fits {
        return Ok(0);
    }
    let mut count = 0;
    subreps(spec, v, &u.grade, |sub, quo| {
        if classify(spec, &u.grade, &sub)? == *u && classify(spec, &w.grade, &quo)? == *w {
            count += 1;
        }
        Ok(())
    })?;
    Ok(count)
}

/// For `C = Vect` and `Z = (Z -> V)` in `C_{/V}`: the number of subspaces
/// `A' ⊆ Z` killed by the structure map with `A' ≅ A` and
/// `(Z / A' -> V) ≅ B`.
pub fn slice_subobject_count(slice: &CategorySpec, a: &IsoClass, b: &IsoClass, z: &IsoClass) -> Result<u64> {
    let CategoryKind::Slice { .. } = slice.kind else {
        return Err(HallError::InvalidArgument(format!("{} is not a slice category", slice.name())));
    };
    if a.grade[0] + b.grade[0] != z.grade[0] {
        return Ok(0);
    }
    let f = &slice.field;
    let s = &z.rep[0];
    let mut count = 0;
    for sub in enumerate_subspaces(z.grade[0], a.grade[0], f)? {
        if !s.mul(&sub.basis().transpose(), f)?.is_zero() {
            continue;
        }
        let quo = s.mul(&lift(&sub), f)?;
        if classify(slice, &b.grade, &[quo])? == *b {
            count += 1;
        }
    }
    Ok(count)
}
