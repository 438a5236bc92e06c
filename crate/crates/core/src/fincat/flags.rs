//! Flags of subobjects in normal form and their isomorphism classes.
//!
//! An object of `S_k` is stored with every vertex space split into `k`
//! consecutive blocks (the successive quotients of the flag). Arrow matrices
//! are then block upper-triangular and the structure map of a slice object
//! is supported on the last block. Isomorphisms of flags are exactly the
//! tuples of block upper-triangular matrices, so iso classes are orbits of a
//! product of parabolic groups.

use std::collections::{HashMap, VecDeque};
use std::ops::Range;
use std::sync::{Arc, Mutex, OnceLock};

use super::category::{DimVec, RepModel};
use crate::error::{HallError, Result};
use crate::qlinalg::group::{parabolic_order, MAX_GROUP_ORDER};
use crate::qlinalg::{parabolic, Elem, FiniteField, Matrix, MatrixGroup};

/// Block dimension vectors of a flag, first block first.
pub type FlagGrade = Vec<DimVec>;

/// Concatenated row-major entries of all structure matrices of an object.
pub type ObjKey = Box<[u8]>;

/// Most objects enumerated for a single grade.
pub const MAX_OBJECTS: u64 = 1 << 20;

pub fn grade_label(grade: &FlagGrade) -> String {
    let parts: Vec<String> =
        grade.iter().map(|d| d.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")).collect();
    format!("[{}]", parts.join("|"))
}

fn vertex_dim(grade: &FlagGrade, vertices: usize, v: usize) -> usize {
    if grade.is_empty() {
        return 0;
    }
    debug_assert!(grade.iter().all(|d| d.len() == vertices));
    grade.iter().map(|d| d[v]).sum()
}

/// Start offset of each block at vertex `v`, plus the total.
fn offsets(grade: &FlagGrade, v: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(grade.len() + 1);
    let mut acc = 0;
    out.push(0);
    for d in grade {
        acc += d[v];
        out.push(acc);
    }
    out
}

fn block_of(offs: &[usize], coord: usize) -> usize {
    offs.windows(2).position(|w| w[0] <= coord && coord < w[1]).unwrap()
}

impl RepModel {
    /// `(rows, cols)` of each structure matrix, arrows first then the slice map.
    pub(crate) fn shapes(&self, grade: &FlagGrade) -> Vec<(usize, usize)> {
        let dim = |v| vertex_dim(grade, self.vertices, v);
        let mut out: Vec<(usize, usize)> = self.arrows.iter().map(|&(s, t)| (dim(t), dim(s))).collect();
        if let Some(v) = self.slice_dim {
            out.push((v, dim(0)));
        }
        out
    }

    pub(crate) fn dims(&self, grade: &FlagGrade) -> Vec<usize> {
        (0..self.vertices).map(|v| vertex_dim(grade, self.vertices, v)).collect()
    }

    /// Key positions that may be nonzero in normal form, in key order.
    fn free_positions(&self, grade: &FlagGrade) -> Vec<usize> {
        let mut out = Vec::new();
        let mut base = 0;
        let k = grade.len();
        for (mi, (rows, cols)) in self.shapes(grade).into_iter().enumerate() {
            let allowed: Box<dyn Fn(usize, usize) -> bool> = if mi < self.arrows.len() {
                let (s, t) = self.arrows[mi];
                let (os, ot) = (offsets(grade, s), offsets(grade, t));
                Box::new(move |r, c| block_of(&ot, r) <= block_of(&os, c))
            } else {
                let o0 = offsets(grade, 0);
                Box::new(move |_, c| block_of(&o0, c) + 1 == k)
            };
            for r in 0..rows {
                for c in 0..cols {
                    if allowed(r, c) {
                        out.push(base + r * cols + c);
                    }
                }
            }
            base += rows * cols;
        }
        out
    }

    pub(crate) fn split_key(&self, grade: &FlagGrade, key: &[u8]) -> Vec<Matrix> {
        let mut off = 0;
        self.shapes(grade)
            .into_iter()
            .map(|(r, c)| {
                let m = Matrix::from_vec(r, c, key[off..off + r * c].to_vec()).unwrap();
                off += r * c;
                m
            })
            .collect()
    }

    pub(crate) fn join_key(mats: &[Matrix]) -> ObjKey {
        mats.iter().flat_map(|m| m.data().iter().copied()).collect()
    }

    /// Per-vertex square blocks of a group element.
    pub(crate) fn split_elem(&self, grade: &FlagGrade, g: &[u8]) -> Vec<Matrix> {
        let mut off = 0;
        self.dims(grade)
            .into_iter()
            .map(|n| {
                let m = Matrix::from_vec(n, n, g[off..off + n * n].to_vec()).unwrap();
                off += n * n;
                m
            })
            .collect()
    }

    /// `g . x`: arrows `A -> g_t A g_s^{-1}`, slice map `s -> s g_0^{-1}`.
    pub(crate) fn act(&self, grade: &FlagGrade, g: &[u8], g_inv: &[u8], key: &[u8]) -> ObjKey {
        let f: &FiniteField = &self.field;
        let gs = self.split_elem(grade, g);
        let gi = self.split_elem(grade, g_inv);
        let mats = self.split_key(grade, key);
        let mut out = Vec::with_capacity(mats.len());
        for (mi, m) in mats.iter().enumerate() {
            if mi < self.arrows.len() {
                let (s, t) = self.arrows[mi];
                out.push(gs[t].mul_unchecked(m, f).mul_unchecked(&gi[s], f));
            } else {
                out.push(m.mul_unchecked(&gi[0], f));
            }
        }
        Self::join_key(&out)
    }

    fn coord_range(grade: &FlagGrade, v: usize, positions: &[usize]) -> Range<usize> {
        let offs = offsets(grade, v);
        offs[positions[0]]..offs[*positions.last().unwrap()]
    }

    /// Sub-quotient of a flag at the given positions `0 <= i_0 < ... < i_m <= k`.
    pub(crate) fn restrict_key(&self, grade: &FlagGrade, key: &[u8], positions: &[usize]) -> ObjKey {
        let mats = self.split_key(grade, key);
        let ranges: Vec<Range<usize>> = (0..self.vertices).map(|v| Self::coord_range(grade, v, positions)).collect();
        let mut out = Vec::with_capacity(mats.len());
        for (mi, m) in mats.iter().enumerate() {
            if mi < self.arrows.len() {
                let (s, t) = self.arrows[mi];
                out.push(m.submatrix(ranges[t].clone(), ranges[s].clone()));
            } else {
                out.push(m.submatrix(0..m.rows(), ranges[0].clone()));
            }
        }
        Self::join_key(&out)
    }

    pub(crate) fn restrict_elem(&self, grade: &FlagGrade, g: &[u8], positions: &[usize]) -> Elem {
        let blocks = self.split_elem(grade, g);
        let mut out = Vec::new();
        for (v, b) in blocks.iter().enumerate() {
            let r = Self::coord_range(grade, v, positions);
            out.extend_from_slice(b.submatrix(r.clone(), r).data());
        }
        out.into_boxed_slice()
    }

    /// Flag of `x` followed by the flag of `y` on top of it (direct sum with
    /// the blocks of `x` below those of `y`).
    pub(crate) fn concat_key(&self, ga: &FlagGrade, a: &[u8], gb: &FlagGrade, b: &[u8]) -> Result<ObjKey> {
        let ma = self.split_key(ga, a);
        let mb = self.split_key(gb, b);
        let mut out = Vec::with_capacity(ma.len());
        for (mi, (x, y)) in ma.iter().zip(&mb).enumerate() {
            if mi < self.arrows.len() {
                out.push(Matrix::block_diag(&[x, y]));
            } else {
                if !x.is_zero() {
                    return Err(HallError::Unsupported(
                        "concatenation needs a zero structure map on the lower flag".into(),
                    ));
                }
                out.push(Matrix::hstack(x, y)?);
            }
        }
        Ok(Self::join_key(&out))
    }

    pub(crate) fn concat_elem(&self, ga: &FlagGrade, a: &[u8], gb: &FlagGrade, b: &[u8]) -> Elem {
        let ba = self.split_elem(ga, a);
        let bb = self.split_elem(gb, b);
        let mut out = Vec::new();
        for (x, y) in ba.iter().zip(&bb) {
            out.extend_from_slice(Matrix::block_diag(&[x, y]).data());
        }
        out.into_boxed_slice()
    }

    pub(crate) fn group_order(&self, grade: &FlagGrade) -> u128 {
        let q = self.field.order() as u64;
        (0..self.vertices)
            .map(|v| {
                let blocks: Vec<usize> = grade.iter().map(|d| d[v]).collect();
                parabolic_order(&blocks, q)
            })
            .product()
    }

    fn group(&self, grade: &FlagGrade) -> Result<Arc<MatrixGroup>> {
        let per_vertex: Vec<Arc<MatrixGroup>> = (0..self.vertices)
            .map(|v| parabolic(&self.field, &grade.iter().map(|d| d[v]).collect::<Vec<_>>()))
            .collect::<Result<_>>()?;
        if per_vertex.len() == 1 {
            return Ok(per_vertex[0].clone());
        }
        let refs: Vec<&MatrixGroup> = per_vertex.iter().map(|g| g.as_ref()).collect();
        Ok(Arc::new(MatrixGroup::product(&self.field, &refs)?))
    }
}

pub(crate) fn restrict_grade(grade: &FlagGrade, vertices: usize, positions: &[usize]) -> FlagGrade {
    positions
        .windows(2)
        .map(|w| (0..vertices).map(|v| grade[w[0]..w[1]].iter().map(|d| d[v]).sum()).collect())
        .collect()
}

/// One isomorphism class of flags in a fixed grade.
#[derive(Debug, Clone)]
pub struct Orbit {
    pub rep: ObjKey,
    pub label: String,
    pub stab_order: u128,
    /// Automorphism group of `rep`, when the ambient group was enumerated.
    pub stabilizer: Option<Arc<MatrixGroup>>,
}

/// All iso classes of flags with a fixed grade, with enough bookkeeping to
/// send any object to its class representative.
#[derive(Debug)]
pub struct FlagPiece {
    pub(crate) model: RepModel,
    grade: FlagGrade,
    group_order: u128,
    group: Option<Arc<MatrixGroup>>,
    free: Vec<usize>,
    key_len: usize,
    orbit_of: Vec<u32>,
    /// `to_rep[x]` is a group element `h` with `h . x = rep`.
    to_rep: Vec<u32>,
    orbits: Vec<Orbit>,
}

type PieceKey = (RepModel, FlagGrade);

fn piece_cache() -> &'static Mutex<HashMap<PieceKey, Arc<FlagPiece>>> {
    static CACHE: OnceLock<Mutex<HashMap<PieceKey, Arc<FlagPiece>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

impl FlagPiece {
    pub(crate) fn get(model: &RepModel, grade: &FlagGrade) -> Result<Arc<FlagPiece>> {
        if grade.iter().any(|d| d.len() != model.vertices) {
            return Err(HallError::DimensionMismatch(format!(
                "grade {grade:?} for a model on {} vertices",
                model.vertices
            )));
        }
        let key = (model.clone(), grade.clone());
        if let Some(p) = piece_cache().lock().unwrap().get(&key) {
            return Ok(p.clone());
        }
        let piece = Arc::new(Self::build(model, grade)?);
        piece_cache().lock().unwrap().insert(key, piece.clone());
        Ok(piece)
    }

    fn build(model: &RepModel, grade: &FlagGrade) -> Result<FlagPiece> {
        let q = model.field.order() as u64;
        let free = model.free_positions(grade);
        let key_len = model.shapes(grade).iter().map(|(r, c)| r * c).sum();
        let count = q
            .checked_pow(free.len() as u32)
            .filter(|&c| c <= MAX_OBJECTS)
            .ok_or_else(|| HallError::BoundExceeded(format!("grade {} has too many objects", grade_label(grade))))?
            as usize;
        let group_order = model.group_order(grade);
        let group = if group_order <= MAX_GROUP_ORDER as u128 { Some(model.group(grade)?) } else { None };
        let base = grade_label(grade);

        let Some(g) = group.clone() else {
            if count > 1 {
                return Err(HallError::BoundExceeded(format!(
                    "grade {base}: automorphism group of order {group_order} is too large to enumerate"
                )));
            }
            return Ok(FlagPiece {
                model: model.clone(),
                grade: grade.clone(),
                group_order,
                group: None,
                free,
                key_len,
                orbit_of: vec![0],
                to_rep: vec![0],
                orbits: vec![Orbit {
                    rep: vec![0u8; key_len].into_boxed_slice(),
                    label: base,
                    stab_order: group_order,
                    stabilizer: None,
                }],
            });
        };

        let mut piece = FlagPiece {
            model: model.clone(),
            grade: grade.clone(),
            group_order,
            group: Some(g.clone()),
            free,
            key_len,
            orbit_of: vec![u32::MAX; count],
            to_rep: vec![0; count],
            orbits: vec![],
        };
        let inverses: Vec<Elem> = g.generators().iter().map(|&i| g.inv_elem(g.elem(i))).collect();
        // from_rep[x] = t with t . rep = x
        let mut from_rep = vec![0u32; count];
        let mut reps = Vec::new();
        for start in 0..count {
            if piece.orbit_of[start] != u32::MAX {
                continue;
            }
            let oi = reps.len() as u32;
            reps.push(start);
            piece.orbit_of[start] = oi;
            from_rep[start] = g.identity();
            let mut queue = VecDeque::from([start]);
            while let Some(x) = queue.pop_front() {
                let xk = piece.key_of(x);
                for (gi, &gen) in g.generators().iter().enumerate() {
                    let y = piece.index_of(&model.act(grade, g.elem(gen), &inverses[gi], &xk))?;
                    if piece.orbit_of[y] == u32::MAX {
                        piece.orbit_of[y] = oi;
                        from_rep[y] = g.mul(gen, from_rep[x]);
                        queue.push_back(y);
                    }
                }
            }
        }
        piece.to_rep = from_rep.iter().map(|&e| g.inv(e)).collect();
        let many = reps.len() > 1;
        for (i, &r) in reps.iter().enumerate() {
            let rep = piece.key_of(r);
            let stab = g.subgroup(|e| model.act(grade, e, &g.inv_elem(e), &rep) == rep);
            piece.orbits.push(Orbit {
                label: if many { format!("{base}#{i}") } else { base.clone() },
                stab_order: stab.order() as u128,
                stabilizer: Some(Arc::new(stab)),
                rep,
            });
        }
        Ok(piece)
    }

    fn key_of(&self, index: usize) -> ObjKey {
        let q = self.model.field.order();
        let mut key = vec![0u8; self.key_len];
        let mut idx = index;
        for &p in self.free.iter().rev() {
            key[p] = (idx % q) as u8;
            idx /= q;
        }
        key.into_boxed_slice()
    }

    fn index_of(&self, key: &[u8]) -> Result<usize> {
        if key.len() != self.key_len {
            return Err(HallError::DimensionMismatch(format!(
                "object with {} entries in grade {}",
                key.len(),
                grade_label(&self.grade)
            )));
        }
        let q = self.model.field.order();
        let mut idx = 0usize;
        let mut fi = 0;
        for (p, &x) in key.iter().enumerate() {
            if fi < self.free.len() && self.free[fi] == p {
                idx = idx * q + x as usize;
                fi += 1;
            } else if x != 0 {
                return Err(HallError::Malformed(format!(
                    "object is not in flag normal form for grade {}",
                    grade_label(&self.grade)
                )));
            }
        }
        Ok(idx)
    }

    pub fn grade(&self) -> &FlagGrade {
        &self.grade
    }

    pub fn group_order(&self) -> u128 {
        self.group_order
    }

    pub fn group(&self) -> Option<&Arc<MatrixGroup>> {
        self.group.as_ref()
    }

    pub fn orbits(&self) -> &[Orbit] {
        &self.orbits
    }

    pub fn object_count(&self) -> usize {
        self.orbit_of.len()
    }

    /// All objects of this grade, in index order.
    pub fn objects(&self) -> impl Iterator<Item = ObjKey> + '_ {
        (0..self.object_count()).map(|i| self.key_of(i))
    }

    /// Orbit of `key` and an element of the ambient group carrying `key` to
    /// the orbit representative (`None` when the group is order-only).
    pub fn locate(&self, key: &[u8]) -> Result<(u32, Option<&[u8]>)> {
        let idx = self.index_of(key)?;
        let g = self.group.as_ref().map(|g| &g.elem(self.to_rep[idx])[..]);
        Ok((self.orbit_of[idx], g))
    }

    pub fn matrices(&self, key: &[u8]) -> Vec<Matrix> {
        self.model.split_key(&self.grade, key)
    }
}
