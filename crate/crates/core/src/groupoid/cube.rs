//! Squares and cubes of groupoids, their pullback conditions, and cubes of
//! correspondences.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use super::fiber::two_fiber_product;
use super::{GroupoidFunctor, NatIso, SkeletalGroupoid};
use crate::error::{HallError, Result};
pub use crate::simpset::Coord;

/// ```text
///   A --top--> B
///   |          |
///  left      right
///   v          v
///   C --bot--> D
/// ```
/// with `witness: right . top => bottom . left`.
#[derive(Debug, Clone)]
pub struct GroupoidSquare {
    pub top: GroupoidFunctor,
    pub left: GroupoidFunctor,
    pub right: GroupoidFunctor,
    pub bottom: GroupoidFunctor,
    pub witness: NatIso,
}

impl GroupoidSquare {
    /// A square whose two composites agree on the nose.
    pub fn strict(
        top: GroupoidFunctor,
        left: GroupoidFunctor,
        right: GroupoidFunctor,
        bottom: GroupoidFunctor,
    ) -> Result<Self> {
        let witness = NatIso::identity(&top.then(&right)?)?;
        Ok(GroupoidSquare { top, left, right, bottom, witness })
    }

    pub fn check_commutes(&self) -> Result<()> {
        let f = self.top.then(&self.right)?;
        let g = self.left.then(&self.bottom)?;
        if f.objects != g.objects {
            return Err(HallError::NonCommuting("square composites differ on components".into()));
        }
        if !self.witness.is_natural(&f, &g)? {
            return Err(HallError::NonCommuting("square witness is not natural".into()));
        }
        Ok(())
    }

    /// The comparison `A -> B x_D C` is an equivalence.
    pub fn is_pullback(&self) -> Result<bool> {
        self.check_commutes()?;
        let fp = two_fiber_product(&self.right, &self.bottom)?;
        fp.universal(&self.top, &self.left, &self.witness)?.functor.is_equivalence()
    }
}

/// A commutative `d`-cube of groupoids. Vertex `S` (a bitmask of axes) maps
/// to `S + i` along axis `i`; the face at `S` spanned by `i < j` carries
/// `e_{S+i,j} e_{S,i} => e_{S+j,i} e_{S,j}`.
#[derive(Debug, Clone)]
pub struct GroupoidCube {
    pub dim: usize,
    pub vertices: Vec<Arc<SkeletalGroupoid>>,
    pub edges: BTreeMap<(u32, usize), GroupoidFunctor>,
    pub faces: BTreeMap<(u32, usize, usize), NatIso>,
}

impl GroupoidCube {
    /// Cube whose faces commute strictly; witnesses are identities.
    pub fn strict(
        dim: usize,
        vertices: Vec<Arc<SkeletalGroupoid>>,
        edges: BTreeMap<(u32, usize), GroupoidFunctor>,
    ) -> Result<Self> {
        let mut cube = GroupoidCube { dim, vertices, edges, faces: BTreeMap::new() };
        for s in 0..(1u32 << dim) {
            for i in 0..dim {
                for j in (i + 1)..dim {
                    if s & (1 << i) == 0 && s & (1 << j) == 0 {
                        let path = cube.edge(s, i)?.then(cube.edge(s | 1 << i, j)?)?;
                        cube.faces.insert((s, i, j), NatIso::identity(&path)?);
                    }
                }
            }
        }
        Ok(cube)
    }

    pub fn edge(&self, s: u32, i: usize) -> Result<&GroupoidFunctor> {
        self.edges
            .get(&(s, i))
            .ok_or_else(|| HallError::Malformed(format!("cube is missing the edge at {s:b} along axis {i}")))
    }

    /// `e_{S+i,j} e_{S,i} => e_{S+j,i} e_{S,j}`, for either order of `i, j`.
    pub fn face(&self, s: u32, i: usize, j: usize) -> Result<NatIso> {
        if i < j {
            return self
                .faces
                .get(&(s, i, j))
                .cloned()
                .ok_or_else(|| HallError::Malformed(format!("cube is missing the face at {s:b} on ({i},{j})")));
        }
        let w = self.face(s, j, i)?;
        let path = self.edge(s, j)?.then(self.edge(s | 1 << j, i)?)?;
        w.inverse(&path.target, &path.objects)
    }

    pub fn check_commutes(&self) -> Result<()> {
        for s in 0..(1u32 << self.dim) {
            for i in 0..self.dim {
                for j in (i + 1)..self.dim {
                    if s & (1 << i) != 0 || s & (1 << j) != 0 {
                        continue;
                    }
                    let f = self.edge(s, i)?.then(self.edge(s | 1 << i, j)?)?;
                    let g = self.edge(s, j)?.then(self.edge(s | 1 << j, i)?)?;
                    if f.objects != g.objects {
                        return Err(HallError::NonCommuting(format!("face at {s:b} on ({i},{j})")));
                    }
                    if !self.face(s, i, j)?.is_natural(&f, &g)? {
                        return Err(HallError::NonCommuting(format!("witness at {s:b} on ({i},{j})")));
                    }
                }
            }
        }
        Ok(())
    }

    /// The `(d-1)`-cube of vertices with coordinate `value` on `axis`.
    pub fn subcube(&self, axis: usize, value: bool) -> Result<GroupoidCube> {
        let dim = self.dim - 1;
        let old_axis = |a: usize| if a < axis { a } else { a + 1 };
        let expand = |m: u32| {
            let mut out = u32::from(value) << axis;
            for a in 0..dim {
                if m & (1 << a) != 0 {
                    out |= 1 << old_axis(a);
                }
            }
            out
        };
        let mut cube = GroupoidCube {
            dim,
            vertices: (0..1u32 << dim).map(|m| self.vertices[expand(m) as usize].clone()).collect(),
            edges: BTreeMap::new(),
            faces: BTreeMap::new(),
        };
        for m in 0..(1u32 << dim) {
            for i in (0..dim).filter(|&i| m & (1 << i) == 0) {
                cube.edges.insert((m, i), self.edge(expand(m), old_axis(i))?.clone());
                for j in ((i + 1)..dim).filter(|&j| m & (1 << j) == 0) {
                    cube.faces.insert((m, i, j), self.face(expand(m), old_axis(i), old_axis(j))?);
                }
            }
        }
        Ok(cube)
    }

    /// Relabel axes: new axis `a` is old axis `perm[a]`.
    pub fn permute_axes(&self, perm: &[usize]) -> Result<GroupoidCube> {
        if perm.len() != self.dim {
            return Err(HallError::DimensionMismatch("axis permutation of the wrong length".into()));
        }
        let expand = |m: u32| (0..self.dim).filter(|&a| m & (1 << a) != 0).map(|a| 1u32 << perm[a]).sum::<u32>();
        let mut cube = GroupoidCube {
            dim: self.dim,
            vertices: (0..1u32 << self.dim).map(|m| self.vertices[expand(m) as usize].clone()).collect(),
            edges: BTreeMap::new(),
            faces: BTreeMap::new(),
        };
        for m in 0..(1u32 << self.dim) {
            for i in (0..self.dim).filter(|&i| m & (1 << i) == 0) {
                cube.edges.insert((m, i), self.edge(expand(m), perm[i])?.clone());
                for j in ((i + 1)..self.dim).filter(|&j| m & (1 << j) == 0) {
                    cube.faces.insert((m, i, j), self.face(expand(m), perm[i], perm[j])?);
                }
            }
        }
        Ok(cube)
    }

    pub fn square(&self) -> Result<GroupoidSquare> {
        if self.dim != 2 {
            return Err(HallError::DimensionMismatch(format!("{}-cube is not a square", self.dim)));
        }
        Ok(GroupoidSquare {
            top: self.edge(0, 0)?.clone(),
            left: self.edge(0, 1)?.clone(),
            right: self.edge(1, 1)?.clone(),
            bottom: self.edge(2, 0)?.clone(),
            witness: self.face(0, 0, 1)?,
        })
    }

    /// Whether vertex `0` is the homotopy limit of the rest. Direct for
    /// `d <= 3`; `d = 4` goes through a pullback 3-dimensional face.
    pub fn is_pullback(&self) -> Result<bool> {
        match self.dim {
            0 => {
                let x = &self.vertices[0];
                Ok(x.len() == 1 && x.aut(0).order() == 1)
            }
            1 => self.edge(0, 0)?.is_equivalence(),
            2 => self.square()?.is_pullback(),
            3 => {
                self.check_commutes()?;
                self.pullback3()
            }
            4 => self.pullback_by_reduction(),
            d => Err(HallError::Unsupported(format!("pullback test for {d}-cubes"))),
        }
    }

    /// `X_0 -> X_1 x_{P_back} P_front` where `P_front = X_{1} x_{X_{12}} X_{2}`
    /// and `P_back = X_{01} x_{X_{012}} X_{02}` (axes numbered from 0).
    fn pullback3(&self) -> Result<bool> {
        let front = two_fiber_product(self.edge(0b010, 2)?, self.edge(0b100, 1)?)?;
        let back = two_fiber_product(self.edge(0b011, 2)?, self.edge(0b101, 1)?)?;
        let m1 = back.universal(self.edge(0b001, 1)?, self.edge(0b001, 2)?, &self.face(0b001, 1, 2)?)?;

        let u2 = front.p1.then(self.edge(0b010, 0)?)?;
        let v2 = front.p2.then(self.edge(0b100, 0)?)?;
        let top = &self.vertices[0b111];
        let w_b = self.face(0b010, 0, 2)?;
        let w_c = self.face(0b100, 0, 1)?;
        let e_top = self.edge(0b110, 0)?;
        let mut psi = Vec::with_capacity(front.groupoid.len());
        for z in 0..front.groupoid.len() as u32 {
            let (b, c) = (front.p1.objects[z as usize], front.p2.objects[z as usize]);
            let d = self.edge(0b010, 2)?.objects[b as usize];
            let g = top.aut(e_top.objects[d as usize]).require("pullback cube")?;
            let phi = e_top.hom(d, front.witness.comps[z as usize])?;
            psi.push(g.mul(g.mul(g.inv(w_c.comps[c as usize]), phi), w_b.comps[b as usize]));
        }
        let m2 = back.universal(&u2, &v2, &NatIso { comps: psi })?;

        let lim = two_fiber_product(&m1.functor, &m2.functor)?;
        let v = front.universal(self.edge(0, 1)?, self.edge(0, 2)?, &self.face(0, 1, 2)?)?;
        let e0 = self.edge(0, 0)?;
        let (w01, w02) = (self.face(0, 0, 1)?, self.face(0, 0, 2)?);
        let (e_b, e_c) = (self.edge(0b010, 0)?, self.edge(0b100, 0)?);
        let mut theta = Vec::with_capacity(self.vertices[0].len());
        for z in 0..self.vertices[0].len() as u32 {
            let y = e0.objects[z as usize];
            let w = v.functor.objects[z as usize];
            let target = m1.functor.objects[y as usize];
            if m2.functor.objects[w as usize] != target {
                return Err(HallError::NonCommuting(format!("cube comparison at component {z}")));
            }
            let x01 = &self.vertices[0b011];
            let x02 = &self.vertices[0b101];
            let t1 = back.p1.objects[target as usize];
            let t2 = back.p2.objects[target as usize];
            let g1 = x01.aut(t1).require("pullback cube")?;
            let g2 = x02.aut(t2).require("pullback cube")?;
            let b = self.edge(0, 1)?.objects[z as usize];
            let c = self.edge(0, 2)?.objects[z as usize];
            let x1 = g1.mul(
                g1.mul(m2.eps1.comps[w as usize], e_b.hom(b, v.eps1.comps[z as usize])?),
                g1.mul(w01.comps[z as usize], g1.inv(m1.eps1.comps[y as usize])),
            );
            let x2 = g2.mul(
                g2.mul(m2.eps2.comps[w as usize], e_c.hom(c, v.eps2.comps[z as usize])?),
                g2.mul(w02.comps[z as usize], g2.inv(m1.eps2.comps[y as usize])),
            );
            let idx = back
                .pair_index(target, x1, x2)?
                .ok_or_else(|| HallError::NonCommuting(format!("cube faces are not coherent at component {z}")))?;
            theta.push(idx);
        }
        lim.universal(e0, &v.functor, &NatIso { comps: theta })?.functor.is_equivalence()
    }

    /// If the face `{axis = 1}` is a pullback cube, the whole cube is one iff
    /// the opposite face `{axis = 0}` is.
    fn pullback_by_reduction(&self) -> Result<bool> {
        self.check_commutes()?;
        for axis in 0..self.dim {
            if self.subcube(axis, true)?.is_pullback()? {
                return self.subcube(axis, false)?.is_pullback();
            }
        }
        Err(HallError::Unsupported(format!(
            "{}-cube has no pullback face opposite the initial vertex to reduce along",
            self.dim
        )))
    }
}

/// Edge key: the source point (with `Mid` on `axis`), the axis, and the end
/// coordinate the functor moves to.
pub type CorrEdge = (Vec<Coord>, usize, Coord);
/// Face key: source point and the two moves `(i, to_i), (j, to_j)` with `i < j`;
/// the witness goes from "move `i` first" to "move `j` first".
pub type CorrFace = (Vec<Coord>, (usize, Coord), (usize, Coord));

/// A `d`-dimensional grid `{0, M, 1}^d` of groupoids with functors pointing
/// from `M` coordinates toward the ends.
#[derive(Debug, Clone)]
pub struct CorrespondenceCube {
    pub dim: usize,
    pub entries: BTreeMap<Vec<Coord>, Arc<SkeletalGroupoid>>,
    pub edges: BTreeMap<CorrEdge, GroupoidFunctor>,
    pub faces: BTreeMap<CorrFace, NatIso>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CornerReport {
    /// Corner `(1, 0, 1, ...)`.
    pub odd: bool,
    /// Corner `(0, 1, 0, ...)`.
    pub even: bool,
}

impl CorrespondenceCube {
    /// The `d`-cube spanned by the center and the end point `v`.
    pub fn corner(&self, v: &[bool]) -> Result<GroupoidCube> {
        let d = self.dim;
        if v.len() != d {
            return Err(HallError::DimensionMismatch("corner of the wrong dimension".into()));
        }
        let point = |m: u32| -> Vec<Coord> {
            (0..d).map(|k| if m & (1 << k) != 0 { Coord::end(v[k]) } else { Coord::Mid }).collect()
        };
        let missing = |what: &str| HallError::Malformed(format!("correspondence cube is missing {what}"));
        let mut cube = GroupoidCube { dim: d, vertices: vec![], edges: BTreeMap::new(), faces: BTreeMap::new() };
        for m in 0..(1u32 << d) {
            let p = point(m);
            cube.vertices.push(self.entries.get(&p).ok_or_else(|| missing("an entry"))?.clone());
            for i in (0..d).filter(|&i| m & (1 << i) == 0) {
                let e = self.edges.get(&(p.clone(), i, Coord::end(v[i]))).ok_or_else(|| missing("an edge"))?;
                cube.edges.insert((m, i), e.clone());
                for j in ((i + 1)..d).filter(|&j| m & (1 << j) == 0) {
                    let key = (p.clone(), (i, Coord::end(v[i])), (j, Coord::end(v[j])));
                    let w = self.faces.get(&key).ok_or_else(|| missing("a face"))?;
                    cube.faces.insert((m, i, j), w.clone());
                }
            }
        }
        Ok(cube)
    }

    pub fn corner_reports(&self) -> Result<CornerReport> {
        if self.dim <= 1 {
            return Ok(CornerReport { odd: true, even: true });
        }
        let odd: Vec<bool> = (0..self.dim).map(|k| k % 2 == 0).collect();
        let even: Vec<bool> = (0..self.dim).map(|k| k % 2 == 1).collect();
        Ok(CornerReport { odd: self.corner(&odd)?.is_pullback()?, even: self.corner(&even)?.is_pullback()? })
    }

    /// Both alternating corners are pullback cubes (vacuous for `d <= 1`).
    pub fn is_commutative(&self) -> Result<bool> {
        let r = self.corner_reports()?;
        Ok(r.odd && r.even)
    }
}

pub fn is_commutative_corr_cube(cube: &CorrespondenceCube) -> Result<bool> {
    cube.is_commutative()
}
