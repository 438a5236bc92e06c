//! Subcomplexes of a standard simplex, monotone maps of finite ordinals and
//! the combinatorial Hall construction on objects, arrows and cubes.
//!
//! A finite ordinal `ord{n}` has augmentation `aug(ord{n})` with `n + 1` cut
//! points `c_0 < ... < c_n`; `c_k` sends the first `k` elements to `0`. All
//! simplicial sets live inside the simplex on the cut points of the initial
//! object of whatever diagram is being built.

mod cube;
mod grid;

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

pub use cube::{assoc_cube, bracketing, verify_assoc_cube_unique, AssocUniqueness, DeltaPlusCube, MAX_UNIQUENESS_N};
pub use grid::{cut_embedding, grid_points, hcomb_grid, CorrGrid};

use crate::error::{HallError, Result};

/// Largest ambient simplex `Δ^N` a subcomplex may live in.
pub const MAX_AMBIENT: usize = 20;

/// Grid coordinate of a cube of correspondences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Coord {
    Zero,
    Mid,
    One,
}

impl Coord {
    pub fn end(one: bool) -> Coord {
        if one {
            Coord::One
        } else {
            Coord::Zero
        }
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Coord::Zero => "0",
            Coord::Mid => "M",
            Coord::One => "1",
        })
    }
}

/// Vertices of a face given as a bitmask.
pub fn face_vertices(face: u32) -> Vec<usize> {
    (0..32).filter(|&v| face & (1 << v) != 0).collect()
}

fn interval(lo: usize, hi: usize) -> u32 {
    (lo..=hi).map(|v| 1u32 << v).sum()
}

/// A downward closed set of nonempty faces of `Δ^N`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SubComplex {
    n: usize,
    faces: BTreeSet<u32>,
}

impl SubComplex {
    /// The vertices of `Δ^n` and nothing else.
    pub fn points(n: usize) -> Result<Self> {
        Self::generated(n, (0..=n).map(|v| 1u32 << v))
    }

    pub fn full(n: usize) -> Result<Self> {
        Self::generated(n, [interval(0, n)])
    }

    /// The smallest subcomplex of `Δ^n` containing the given faces.
    pub fn generated(n: usize, gens: impl IntoIterator<Item = u32>) -> Result<Self> {
        if n > MAX_AMBIENT {
            return Err(HallError::BoundExceeded(format!("ambient simplex Δ^{n} exceeds Δ^{MAX_AMBIENT}")));
        }
        let all = interval(0, n);
        let mut faces = BTreeSet::new();
        for g in gens {
            if g == 0 || g & !all != 0 {
                return Err(HallError::InvalidArgument(format!("{g:#b} is not a face of Δ^{n}")));
            }
            let mut sub = g;
            while sub != 0 {
                faces.insert(sub);
                sub = (sub - 1) & g;
            }
        }
        Ok(SubComplex { n, faces })
    }

    /// Dimension `N` of the ambient simplex.
    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn faces(&self) -> impl Iterator<Item = u32> + '_ {
        self.faces.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn contains(&self, face: u32) -> bool {
        self.faces.contains(&face)
    }

    pub fn is_downward_closed(&self) -> bool {
        self.faces.iter().all(|&f| {
            face_vertices(f).iter().all(|&v| {
                let g = f & !(1 << v);
                g == 0 || self.faces.contains(&g)
            })
        })
    }

    pub fn is_subcomplex_of(&self, other: &SubComplex) -> bool {
        self.n == other.n && self.faces.is_subset(&other.faces)
    }

    /// Faces not contained in a larger face, ordered by their vertex lists.
    pub fn maximal_faces(&self) -> Vec<u32> {
        let mut out: Vec<u32> =
            self.faces.iter().copied().filter(|&f| !self.faces.iter().any(|&g| g != f && g & f == f)).collect();
        out.sort_by_key(|&f| face_vertices(f));
        out
    }

    /// Every face, ordered by dimension and then lexicographically.
    pub fn face_list(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = self.faces.iter().map(|&f| face_vertices(f)).collect();
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }

    /// Any two maximal faces share at most one vertex.
    pub fn is_vertex_glued(&self) -> bool {
        let max = self.maximal_faces();
        max.iter().enumerate().all(|(i, &a)| max[i + 1..].iter().all(|&b| (a & b).count_ones() <= 1))
    }

    /// Image under a vertex map into `Δ^n`; faces whose vertices collide
    /// become smaller faces.
    pub fn pushforward(&self, vertex_map: &[usize], n: usize) -> Result<SubComplex> {
        if vertex_map.len() != self.n + 1 {
            return Err(HallError::DimensionMismatch("vertex map has the wrong length".into()));
        }
        if vertex_map.iter().any(|&v| v > n) {
            return Err(HallError::InvalidArgument(format!("vertex map leaves Δ^{n}")));
        }
        let image = self
            .maximal_faces()
            .into_iter()
            .map(|f| face_vertices(f).into_iter().fold(0u32, |acc, v| acc | 1 << vertex_map[v]));
        SubComplex::generated(n, image)
    }
}

impl fmt::Display for SubComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Δ^{}:", self.n)?;
        for face in self.maximal_faces() {
            let vs: Vec<String> = face_vertices(face).iter().map(|v| v.to_string()).collect();
            write!(f, " {{{}}}", vs.join(","))?;
        }
        Ok(())
    }
}

impl fmt::Debug for SubComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Monotone map `ord{src} -> ord{tgt}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct DeltaPlusMap {
    pub src: usize,
    pub tgt: usize,
    pub map: Vec<usize>,
}

impl DeltaPlusMap {
    pub fn new(tgt: usize, map: Vec<usize>) -> Result<Self> {
        if map.iter().any(|&y| y >= tgt) {
            return Err(HallError::InvalidArgument(format!("value outside ord{{{tgt}}}")));
        }
        if map.windows(2).any(|w| w[0] > w[1]) {
            return Err(HallError::InvalidArgument(format!("{map:?} is not monotone")));
        }
        Ok(DeltaPlusMap { src: map.len(), tgt, map })
    }

    pub fn identity(n: usize) -> Self {
        DeltaPlusMap { src: n, tgt: n, map: (0..n).collect() }
    }

    /// The surjection `ord{m} -> ord{m-1}` identifying elements `gap` and `gap + 1`.
    pub fn collapse(m: usize, gap: usize) -> Result<Self> {
        if gap + 1 >= m {
            return Err(HallError::InvalidArgument(format!("ord{{{m}}} has no gap {gap}")));
        }
        Ok(DeltaPlusMap { src: m, tgt: m - 1, map: (0..m).map(|x| if x <= gap { x } else { x - 1 }).collect() })
    }

    /// `g . self`.
    pub fn then(&self, g: &DeltaPlusMap) -> Result<DeltaPlusMap> {
        if self.tgt != g.src {
            return Err(HallError::DimensionMismatch(format!(
                "ord{{{}}} -> ord{{{}}} does not compose with ord{{{}}} -> ord{{{}}}",
                self.src, self.tgt, g.src, g.tgt
            )));
        }
        Ok(DeltaPlusMap { src: self.src, tgt: g.tgt, map: self.map.iter().map(|&y| g.map[y]).collect() })
    }

    pub fn is_surjective(&self) -> bool {
        (0..self.tgt).all(|y| self.map.contains(&y))
    }

    /// `a_y = |f^{-1}{0, ..., y-1}|` for `y = 0..=tgt`.
    pub fn cuts(&self) -> Vec<usize> {
        (0..=self.tgt).map(|y| self.map.iter().filter(|&&x| x < y).count()).collect()
    }
}

/// The cut points of `ord{n}` as maps to `{0, 1}`.
pub fn augmentation(n: usize) -> Vec<Vec<u8>> {
    (0..=n).map(|k| (0..n).map(|x| u8::from(x >= k)).collect()).collect()
}

/// `H_comb(f)` inside the simplex on the cut points of the source: the full
/// faces on the intervals `[a_{y-1}, a_y]`. An empty fiber contributes the
/// single cut point `a_y`.
pub fn hcomb_of_map(f: &DeltaPlusMap) -> Result<SubComplex> {
    let a = f.cuts();
    if f.tgt == 0 {
        return SubComplex::points(0);
    }
    SubComplex::generated(f.src, a.windows(2).map(|w| interval(w[0], w[1])))
}

/// `H_comb(ord{n})`: the spine of `Δ^n`.
pub fn hcomb_of_object(n: usize) -> Result<SubComplex> {
    hcomb_of_map(&DeltaPlusMap::identity(n))
}
