use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{HallError, Result};
use crate::qlinalg::Field;

/// Dimension vector: one entry per (free) vertex. Length 1 for `Vect`.
pub type DimVec = Vec<usize>;

/// Quiver limits for iso-classification by orbit enumeration.
pub const MAX_QUIVER_VERTICES: usize = 3;

/// Acyclic quiver, as read from `{"vertices": n, "arrows": [[src, dst], ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Quiver {
    pub vertices: usize,
    pub arrows: Vec<[usize; 2]>,
}

impl Quiver {
    pub fn new(vertices: usize, arrows: Vec<[usize; 2]>) -> Result<Self> {
        let q = Quiver { vertices, arrows };
        q.validate()?;
        Ok(q)
    }

    /// The `A_2` quiver `0 -> 1`.
    pub fn a2() -> Self {
        Quiver { vertices: 2, arrows: vec![[0, 1]] }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let q: Quiver = serde_json::from_str(text).map_err(|e| HallError::Malformed(format!("quiver: {e}")))?;
        q.validate()?;
        Ok(q)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| HallError::Malformed(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.vertices == 0 || self.vertices > MAX_QUIVER_VERTICES {
            return Err(HallError::Unsupported(format!(
                "quivers need 1..={MAX_QUIVER_VERTICES} vertices, got {}",
                self.vertices
            )));
        }
        if let Some([s, t]) = self.arrows.iter().find(|[s, t]| *s >= self.vertices || *t >= self.vertices) {
            return Err(HallError::Malformed(format!("arrow [{s},{t}] leaves the vertex range")));
        }
        // Kahn's algorithm
        let mut indeg = vec![0usize; self.vertices];
        for [_, t] in &self.arrows {
            indeg[*t] += 1;
        }
        let mut ready: Vec<usize> = (0..self.vertices).filter(|&v| indeg[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = ready.pop() {
            seen += 1;
            for [s, t] in &self.arrows {
                if *s == v {
                    indeg[*t] -= 1;
                    if indeg[*t] == 0 {
                        ready.push(*t);
                    }
                }
            }
        }
        if seen < self.vertices {
            return Err(HallError::Malformed("quiver has an oriented cycle".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CategoryKind {
    Vect,
    Quiver(Quiver),
    /// `C_{/V}` for `C = Vect`; `target` is the dimension of `V`.
    Slice {
        target: usize,
    },
}

#[derive(Clone, PartialEq, Eq)]
pub struct CategorySpec {
    pub field: Field,
    pub kind: CategoryKind,
}

impl fmt::Debug for CategorySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} over {:?}", self.name(), self.field)
    }
}

impl CategorySpec {
    pub fn vect(field: Field) -> Self {
        CategorySpec { field, kind: CategoryKind::Vect }
    }

    pub fn quiver(field: Field, quiver: Quiver) -> Result<Self> {
        quiver.validate()?;
        Ok(CategorySpec { field, kind: CategoryKind::Quiver(quiver) })
    }

    pub fn name(&self) -> String {
        match &self.kind {
            CategoryKind::Vect => "vect".into(),
            CategoryKind::Quiver(q) => format!("quiver{}:{:?}", q.vertices, q.arrows),
            CategoryKind::Slice { target } => format!("vect/[{target}]"),
        }
    }

    /// Number of entries in a dimension vector.
    pub fn vertices(&self) -> usize {
        match &self.kind {
            CategoryKind::Quiver(q) => q.vertices,
            _ => 1,
        }
    }

    /// Total-dimension bound for object enumeration.
    pub fn max_bound(&self) -> usize {
        match self.kind {
            CategoryKind::Vect => 6,
            CategoryKind::Quiver(_) | CategoryKind::Slice { .. } => 4,
        }
    }

    pub fn check_bound(&self, bound: usize) -> Result<()> {
        if bound > self.max_bound() {
            return Err(HallError::BoundExceeded(format!("bound {bound} > {} for {}", self.max_bound(), self.name())));
        }
        Ok(())
    }

    pub(crate) fn model(&self) -> RepModel {
        match &self.kind {
            CategoryKind::Vect => RepModel { field: self.field.clone(), vertices: 1, arrows: vec![], slice_dim: None },
            CategoryKind::Quiver(q) => RepModel {
                field: self.field.clone(),
                vertices: q.vertices,
                arrows: q.arrows.iter().map(|[s, t]| (*s, *t)).collect(),
                slice_dim: None,
            },
            CategoryKind::Slice { target } => {
                RepModel { field: self.field.clone(), vertices: 1, arrows: vec![], slice_dim: Some(*target) }
            }
        }
    }

    /// All dimension vectors with total dimension `<= bound`, ordered by
    /// total then lexicographically.
    pub fn dim_vectors(&self, bound: usize) -> Vec<DimVec> {
        let n = self.vertices();
        let mut out = Vec::new();
        for total in 0..=bound {
            compositions(total, n, &mut vec![], &mut |c| out.push(c.to_vec()));
        }
        out
    }
}

/// Weak compositions of `total` into `parts` parts, in lexicographic order.
pub fn compositions(total: usize, parts: usize, acc: &mut Vec<usize>, emit: &mut dyn FnMut(&[usize])) {
    if parts == 0 {
        if total == 0 {
            emit(acc);
        }
        return;
    }
    if parts == 1 {
        acc.push(total);
        emit(acc);
        acc.pop();
        return;
    }
    for first in 0..=total {
        acc.push(first);
        compositions(total - first, parts - 1, acc, emit);
        acc.pop();
    }
}

/// Concrete linear-algebra model behind a [`CategorySpec`]: representations
/// of a quiver on `vertices` free vertices, optionally with a structure map
/// from vertex 0 to a fixed space of dimension `slice_dim`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) struct RepModel {
    pub field: Field,
    pub vertices: usize,
    pub arrows: Vec<(usize, usize)>,
    pub slice_dim: Option<usize>,
}
