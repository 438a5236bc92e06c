//! Finitary categories over `F_q`: vector spaces, representations of small
//! acyclic quivers and slices of `Vect` over a fixed space.

pub mod category;
pub mod flags;

use std::sync::Arc;

use serde::Serialize;

pub use category::{CategoryKind, CategorySpec, DimVec, Quiver};
pub use flags::{grade_label, FlagGrade, FlagPiece, ObjKey, Orbit};

use crate::error::{HallError, Result};
use crate::qlinalg::{FiniteField, Matrix, MatrixGroup};

/// An isomorphism class of objects, with its automorphism group.
#[derive(Debug, Clone)]
pub struct IsoClass {
    pub label: String,
    pub grade: DimVec,
    /// Index of the class among those of the same grade.
    pub index: u32,
    pub aut_order: u128,
    /// Explicit automorphism group, when small enough to enumerate.
    pub aut: Option<Arc<MatrixGroup>>,
    /// Structure matrices of the canonical representative: arrows in quiver
    /// order, then the map to the slice target.
    pub rep: Vec<Matrix>,
    pub key: ObjKey,
}

impl PartialEq for IsoClass {
    fn eq(&self, other: &Self) -> bool {
        self.grade == other.grade && self.index == other.index
    }
}

impl Eq for IsoClass {}

impl IsoClass {
    fn from_piece(piece: &FlagPiece, index: u32) -> Self {
        let o = &piece.orbits()[index as usize];
        IsoClass {
            label: o.label.clone(),
            grade: piece.grade().first().cloned().unwrap_or_default(),
            index,
            aut_order: o.stab_order,
            aut: o.stabilizer.clone(),
            rep: piece.matrices(&o.rep),
            key: o.rep.clone(),
        }
    }

    pub fn total_dim(&self) -> usize {
        self.grade.iter().sum()
    }
}

fn check_grade(spec: &CategorySpec, grade: &DimVec) -> Result<()> {
    if grade.len() != spec.vertices() {
        return Err(HallError::DimensionMismatch(format!("dimension vector {grade:?} for {}", spec.name())));
    }
    Ok(())
}

/// Every iso class of total dimension `<= bound`.
pub fn objects_up_to(spec: &CategorySpec, bound: usize) -> Result<Vec<IsoClass>> {
    spec.check_bound(bound)?;
    let model = spec.model();
    let mut out = Vec::new();
    for d in spec.dim_vectors(bound) {
        let piece = FlagPiece::get(&model, &vec![d])?;
        out.extend((0..piece.orbits().len() as u32).map(|i| IsoClass::from_piece(&piece, i)));
    }
    Ok(out)
}

/// Iso classes of a single grade.
pub fn objects_of_grade(spec: &CategorySpec, grade: &DimVec) -> Result<Vec<IsoClass>> {
    check_grade(spec, grade)?;
    let piece = FlagPiece::get(&spec.model(), &vec![grade.clone()])?;
    Ok((0..piece.orbits().len() as u32).map(|i| IsoClass::from_piece(&piece, i)).collect())
}

/// The class of the object with the given structure matrices.
pub fn classify(spec: &CategorySpec, grade: &DimVec, mats: &[Matrix]) -> Result<IsoClass> {
    check_grade(spec, grade)?;
    let model = spec.model();
    let g = vec![grade.clone()];
    let shapes = model.shapes(&g);
    if shapes.len() != mats.len() || shapes.iter().zip(mats).any(|(&(r, c), m)| (m.rows(), m.cols()) != (r, c)) {
        return Err(HallError::DimensionMismatch(format!("structure maps for grade {grade:?}")));
    }
    let piece = FlagPiece::get(&model, &g)?;
    let (orbit, _) = piece.locate(&category::RepModel::join_key(mats))?;
    Ok(IsoClass::from_piece(&piece, orbit))
}

/// A short exact sequence `0 -> U -> V -> W -> 0`, in normal form: `V` has
/// `U` as its first block of coordinates at every vertex.
#[derive(Debug, Clone)]
pub struct ExactSequence {
    pub u: IsoClass,
    pub v: IsoClass,
    pub w: IsoClass,
    /// Per-vertex inclusion `U -> V`.
    pub mono: Vec<Matrix>,
    /// Per-vertex projection `V -> W`.
    pub epi: Vec<Matrix>,
    /// Automorphisms of the whole diagram.
    pub aut_order: u128,
    pub aut: Option<Arc<MatrixGroup>>,
    pub label: String,
}

impl ExactSequence {
    /// The square `U -> V`, `U -> 0`, `V -> W`, `0 -> W`.
    pub fn square(&self) -> Square {
        let uv: Vec<(usize, usize)> = self.u.grade.iter().zip(&self.w.grade).map(|(&a, &b)| (a, b)).collect();
        Square {
            top: self.mono.clone(),
            left: uv.iter().map(|&(a, _)| Matrix::zeros(0, a)).collect(),
            right: self.epi.clone(),
            bottom: uv.iter().map(|&(_, b)| Matrix::zeros(b, 0)).collect(),
        }
    }
}

/// Iso classes of exact sequences with ends `U` and `W`, ordered by middle
/// class.
pub fn exact_sequences(spec: &CategorySpec, u: &IsoClass, w: &IsoClass) -> Result<Vec<ExactSequence>> {
    check_grade(spec, &u.grade)?;
    check_grade(spec, &w.grade)?;
    let model = spec.model();
    let grade = vec![u.grade.clone(), w.grade.clone()];
    let piece = FlagPiece::get(&model, &grade)?;
    let mid_grade: DimVec = u.grade.iter().zip(&w.grade).map(|(a, b)| a + b).collect();
    let pu = FlagPiece::get(&model, &vec![u.grade.clone()])?;
    let pv = FlagPiece::get(&model, &vec![mid_grade.clone()])?;
    let pw = FlagPiece::get(&model, &vec![w.grade.clone()])?;
    let mut out = Vec::new();
    for orbit in piece.orbits() {
        let (ou, _) = pu.locate(&model.restrict_key(&grade, &orbit.rep, &[0, 1]))?;
        let (ow, _) = pw.locate(&model.restrict_key(&grade, &orbit.rep, &[1, 2]))?;
        if ou != u.index || ow != w.index {
            continue;
        }
        let (ov, _) = pv.locate(&model.restrict_key(&grade, &orbit.rep, &[0, 2]))?;
        let (mono, epi) = (0..u.grade.len())
            .map(|v| {
                let (a, b) = (u.grade[v], w.grade[v]);
                let mut i = Matrix::zeros(a + b, a);
                let mut p = Matrix::zeros(b, a + b);
                (0..a).for_each(|r| i.set(r, r, 1));
                (0..b).for_each(|r| p.set(r, a + r, 1));
                (i, p)
            })
            .unzip();
        out.push(ExactSequence {
            u: u.clone(),
            v: IsoClass::from_piece(&pv, ov),
            w: w.clone(),
            mono,
            epi,
            aut_order: orbit.stab_order,
            aut: orbit.stabilizer.clone(),
            label: orbit.label.clone(),
        });
    }
    out.sort_by_key(|s| s.v.index);
    Ok(out)
}

/// `C_{/V}` for `C = Vect`.
pub fn slice_category(spec: &CategorySpec, target: &IsoClass) -> Result<CategorySpec> {
    match spec.kind {
        CategoryKind::Vect => {
            Ok(CategorySpec { field: spec.field.clone(), kind: CategoryKind::Slice { target: target.grade[0] } })
        }
        _ => Err(HallError::Unsupported(format!("slices over {} (only Vect is supported)", spec.name()))),
    }
}

/// The pseudo-zero objects: `0` itself, and in a slice `C_{/V}` the pair
/// `(0 -> V)` and `(V = V)`.
pub fn zero_subcategory(spec: &CategorySpec) -> Result<Vec<IsoClass>> {
    let zero = vec![0; spec.vertices()];
    let mut out = vec![classify(
        spec,
        &zero,
        &spec.model().shapes(&vec![zero.clone()]).iter().map(|&(r, c)| Matrix::zeros(r, c)).collect::<Vec<_>>(),
    )?];
    if let CategoryKind::Slice { target } = spec.kind {
        if target > 0 {
            out.push(classify(spec, &vec![target], &[Matrix::identity(target)])?);
        }
    }
    Ok(out)
}

/// Number of morphisms `x -> y`, by enumeration of vertex maps.
pub fn hom_count(spec: &CategorySpec, x: &IsoClass, y: &IsoClass) -> Result<u64> {
    let model = spec.model();
    let f: &FiniteField = &spec.field;
    let entries: usize = x.grade.iter().zip(&y.grade).map(|(a, b)| a * b).sum();
    let q = f.order() as u64;
    if model.arrows.is_empty() && model.slice_dim.is_none() {
        return q.checked_pow(entries as u32).ok_or_else(|| HallError::BoundExceeded("hom count".into()));
    }
    if q.checked_pow(entries as u32).is_none_or(|n| n > flags::MAX_OBJECTS) {
        return Err(HallError::BoundExceeded(format!("Hom({}, {}) is too large to enumerate", x.label, y.label)));
    }
    let mut count = 0;
    let mut maps: Vec<Matrix> = Vec::new();
    enumerate_vertex_maps(f, &x.grade, &y.grade, &mut maps, &mut |g| {
        let ok_arrows = model
            .arrows
            .iter()
            .enumerate()
            .all(|(ai, &(s, t))| g[t].mul_unchecked(&x.rep[ai], f) == y.rep[ai].mul_unchecked(&g[s], f));
        let ok_slice = model.slice_dim.is_none() || {
            let si = model.arrows.len();
            y.rep[si].mul_unchecked(&g[0], f) == x.rep[si]
        };
        if ok_arrows && ok_slice {
            count += 1;
        }
    });
    Ok(count)
}

fn enumerate_vertex_maps(
    f: &FiniteField,
    src: &[usize],
    dst: &[usize],
    acc: &mut Vec<Matrix>,
    emit: &mut dyn FnMut(&[Matrix]),
) {
    let v = acc.len();
    if v == src.len() {
        emit(acc);
        return;
    }
    for m in Matrix::all(dst[v], src[v], f) {
        acc.push(m);
        enumerate_vertex_maps(f, src, dst, acc, emit);
        acc.pop();
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PseudoZeroSide {
    InitialLike,
    TerminalLike,
    Both,
}

#[derive(Debug, Clone)]
pub struct PseudoZero {
    pub object: IsoClass,
    pub side: PseudoZeroSide,
}

/// Which pseudo-zero side `z` satisfies against every class of total
/// dimension `<= bound`: `#Hom(z, x) <= 1` (initial-like) and/or
/// `#Hom(x, z) <= 1` (terminal-like).
pub fn pseudo_zero_side(spec: &CategorySpec, z: &IsoClass, bound: usize) -> Result<Option<PseudoZeroSide>> {
    let objs = objects_up_to(spec, bound)?;
    let mut initial = true;
    let mut terminal = true;
    for x in &objs {
        initial &= hom_count(spec, z, x)? <= 1;
        terminal &= hom_count(spec, x, z)? <= 1;
    }
    Ok(match (initial, terminal) {
        (true, true) => Some(PseudoZeroSide::Both),
        (true, false) => Some(PseudoZeroSide::InitialLike),
        (false, true) => Some(PseudoZeroSide::TerminalLike),
        (false, false) => None,
    })
}

/// The zero subcategory with the side each member satisfies on the
/// enumerated range.
pub fn pseudo_zeros(spec: &CategorySpec, bound: usize) -> Result<Vec<PseudoZero>> {
    zero_subcategory(spec)?
        .into_iter()
        .map(|z| {
            let side = pseudo_zero_side(spec, &z, bound)?
                .ok_or_else(|| HallError::InvalidArgument(format!("{} is not pseudo-zero", z.label)))?;
            Ok(PseudoZero { object: z, side })
        })
        .collect()
}

/// Commutative square of per-vertex linear maps:
///
/// ```text
///   A --top--> B
///   |          |
///  left      right
///   v          v
///   C --bot--> D
/// ```
#[derive(Debug, Clone)]
pub struct Square {
    pub top: Vec<Matrix>,
    pub left: Vec<Matrix>,
    pub right: Vec<Matrix>,
    pub bottom: Vec<Matrix>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BicartesianReport {
    pub pullback: bool,
    pub pushout: bool,
}

/// Pullback and pushout checks, vertex by vertex (limits and colimits of
/// representations and of slice objects are computed on underlying spaces).
pub fn bicartesian_report(square: &Square, f: &FiniteField) -> Result<BicartesianReport> {
    let n = square.top.len();
    if [square.left.len(), square.right.len(), square.bottom.len()].iter().any(|&l| l != n) {
        return Err(HallError::DimensionMismatch("square with unequal vertex counts".into()));
    }
    let mut report = BicartesianReport { pullback: true, pushout: true };
    for v in 0..n {
        let (t, l, r, b) = (&square.top[v], &square.left[v], &square.right[v], &square.bottom[v]);
        let (da, db, dc) = (t.cols(), t.rows(), l.rows());
        if l.cols() != da || r.cols() != db || b.cols() != dc || r.rows() != b.rows() {
            return Err(HallError::DimensionMismatch(format!("maps do not compose at vertex {v}")));
        }
        let dd = r.rows();
        if r.mul_unchecked(t, f) != b.mul_unchecked(l, f) {
            return Err(HallError::NonCommuting(format!("square at vertex {v}")));
        }
        // B x_D C = ker [right | -bottom]; A -> B (+) C is [top; left]
        let neg_b = Matrix::zeros(dd, dc).sub(b, f)?;
        let fiber_dim = Matrix::hstack(r, &neg_b)?.kernel(f).rows();
        let into = Matrix::vstack(t, l)?;
        let rank_into = into.rank(f);
        report.pullback &= rank_into == da && rank_into == fiber_dim;
        // B (+)_A C = (B (+) C) / im [top; -left]; out of it is [right | bottom]
        let neg_l = Matrix::zeros(dc, da).sub(l, f)?;
        let pushout_dim = db + dc - Matrix::vstack(t, &neg_l)?.rank(f);
        let out = Matrix::hstack(r, b)?;
        let rank_out = out.rank(f);
        report.pushout &= rank_out == dd && pushout_dim == dd;
    }
    Ok(report)
}

pub fn is_bicartesian(square: &Square, f: &FiniteField) -> Result<bool> {
    let r = bicartesian_report(square, f)?;
    Ok(r.pullback && r.pushout)
}

#[cfg(test)]
mod tests;
