//! Grids of subcomplexes `{0, M, 1}^d` attached to cubes in `Δ+`.

use std::collections::BTreeMap;

use super::{hcomb_of_map, Coord, DeltaPlusCube, DeltaPlusMap, SubComplex};
use crate::error::{HallError, Result};

/// Entries of the correspondence grid of a cube, all inside the simplex on
/// the cut points of the initial vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrGrid {
    pub dim: usize,
    pub ambient: usize,
    pub entries: BTreeMap<Vec<Coord>, SubComplex>,
}

fn end_mask(v: &[Coord], mid: bool) -> u32 {
    v.iter().enumerate().filter(|(_, &c)| c == Coord::One || (mid && c == Coord::Mid)).map(|(k, _)| 1u32 << k).sum()
}

/// All points of `{0, M, 1}^d` in lexicographic order.
pub fn grid_points(dim: usize) -> Vec<Vec<Coord>> {
    let mut out = vec![vec![]];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|p| {
                [Coord::Zero, Coord::Mid, Coord::One].into_iter().map(move |c| {
                    let mut q = p.clone();
                    q.push(c);
                    q
                })
            })
            .collect();
    }
    out
}

/// `H_comb(a(v) -> b(v))` at every grid point, pushed into `Δ^{|X|}` along
/// the cut embedding of `X -> a(v)`.
pub fn hcomb_grid(cube: &DeltaPlusCube) -> Result<CorrGrid> {
    cube.check_commutes()?;
    let ambient = cube.sizes[0];
    let mut entries = BTreeMap::new();
    for v in grid_points(cube.dim) {
        let (a, b) = (end_mask(&v, false), end_mask(&v, true));
        let local = hcomb_of_map(&cube.composite(a, b)?)?;
        let embed = cube.composite(0, a)?.cuts();
        entries.insert(v, local.pushforward(&embed, ambient)?);
    }
    Ok(CorrGrid { dim: cube.dim, ambient, entries })
}

impl CorrGrid {
    pub fn entry(&self, v: &[Coord]) -> Result<&SubComplex> {
        self.entries
            .get(v)
            .ok_or_else(|| HallError::InvalidArgument(format!("{v:?} is not a point of the {}-grid", self.dim)))
    }

    /// Every grid edge `M -> 0` or `M -> 1` is an inclusion of subcomplexes.
    pub fn check_inclusions(&self) -> Result<()> {
        for (v, mid) in &self.entries {
            for k in (0..self.dim).filter(|&k| v[k] == Coord::Mid) {
                for end in [Coord::Zero, Coord::One] {
                    let mut w = v.clone();
                    w[k] = end;
                    if !self.entry(&w)?.is_subcomplex_of(mid) {
                        return Err(HallError::NonCommuting(format!("entry {w:?} is not inside {v:?}")));
                    }
                }
            }
        }
        Ok(())
    }

    /// The 2-dimensional slice on `axes`, other coordinates fixed to
    /// `base` (which must be `0`/`1` off the slice).
    pub fn sub_grid(&self, base: &[Coord], axes: [usize; 2]) -> Result<CorrGrid> {
        let mut entries = BTreeMap::new();
        for p in grid_points(2) {
            let mut v = base.to_vec();
            v[axes[0]] = p[0];
            v[axes[1]] = p[1];
            entries.insert(p, self.entry(&v)?.clone());
        }
        Ok(CorrGrid { dim: 2, ambient: self.ambient, entries })
    }

    /// Pushes every entry along a vertex embedding into a larger simplex.
    pub fn pushforward(&self, vertex_map: &[usize], ambient: usize) -> Result<CorrGrid> {
        let entries = self
            .entries
            .iter()
            .map(|(v, s)| Ok((v.clone(), s.pushforward(vertex_map, ambient)?)))
            .collect::<Result<_>>()?;
        Ok(CorrGrid { dim: self.dim, ambient, entries })
    }
}

/// Embedding of cut points along `f: X -> Y`: `c_k^Y -> c_{a_k}^X`.
pub fn cut_embedding(f: &DeltaPlusMap) -> Vec<usize> {
    f.cuts()
}
