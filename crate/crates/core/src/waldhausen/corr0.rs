//! `S^ext` applied to the correspondence grids of the associativity cubes.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use super::ext::{path_witness, ExtGroupoid, ExtMap};
use super::s_ext;
use super::segal::two_segal_condition;
use crate::error::{HallError, Result};
use crate::fincat::CategorySpec;
use crate::groupoid::{Coord, CorrEdge, CorrFace, CorrespondenceCube, GroupoidCube, NatIso};
use crate::par::Execution;
use crate::simpset::{assoc_cube, grid_points, hcomb_grid, CorrGrid, DeltaPlusCube, SubComplex};

/// A cube of correspondences of truncated groupoids together with the grid
/// of subcomplexes it came from.
#[derive(Debug, Clone)]
pub struct ExtCorrCube {
    pub grid: CorrGrid,
    pub cube: CorrespondenceCube,
    pub entries: BTreeMap<Vec<Coord>, Arc<ExtGroupoid>>,
    pub maps: BTreeMap<CorrEdge, ExtMap>,
}

fn moved(p: &[Coord], axis: usize, to: Coord) -> Vec<Coord> {
    let mut q = p.to_vec();
    q[axis] = to;
    q
}

/// `S^ext` entrywise on `hcomb_grid(cube)`, with restriction functors along
/// the grid inclusions and transporter 2-cells on the faces.
pub fn correspondence_cube(
    spec: &CategorySpec,
    cube: &DeltaPlusCube,
    bound: usize,
    exec: Execution,
) -> Result<ExtCorrCube> {
    let grid = hcomb_grid(cube)?;
    grid.check_inclusions()?;
    let points = grid_points(grid.dim);
    let built: Vec<Result<Arc<ExtGroupoid>>> = exec.map(&points, |p| s_ext(spec, grid.entry(p)?, bound, exec));
    let mut entries = BTreeMap::new();
    for (p, g) in points.iter().zip(built) {
        entries.insert(p.clone(), g?);
    }
    let identity: Vec<usize> = (0..=grid.ambient).collect();
    let mut maps = BTreeMap::new();
    for p in &points {
        for axis in (0..grid.dim).filter(|&k| p[k] == Coord::Mid) {
            for to in [Coord::Zero, Coord::One] {
                let m = ExtMap::restriction(&entries[p], &entries[&moved(p, axis, to)], &identity, exec)?;
                maps.insert((p.clone(), axis, to), m);
            }
        }
    }
    let mut faces = BTreeMap::new();
    for p in &points {
        let mids: Vec<usize> = (0..grid.dim).filter(|&k| p[k] == Coord::Mid).collect();
        for (a, &i) in mids.iter().enumerate() {
            for &j in &mids[a + 1..] {
                for ti in [Coord::Zero, Coord::One] {
                    for tj in [Coord::Zero, Coord::One] {
                        let (pi, pj) = (moved(p, i, ti), moved(p, j, tj));
                        let f = [&maps[&(p.clone(), i, ti)], &maps[&(pi, j, tj)]];
                        let g = [&maps[&(p.clone(), j, tj)], &maps[&(pj, i, ti)]];
                        faces.insert((p.clone(), (i, ti), (j, tj)), path_witness(&f, &g)?);
                    }
                }
            }
        }
    }
    let cube = CorrespondenceCube {
        dim: grid.dim,
        entries: entries.iter().map(|(p, g)| (p.clone(), g.groupoid().clone())).collect(),
        edges: maps.iter().map(|(k, m)| (k.clone(), m.functor.clone())).collect(),
        faces,
    };
    Ok(ExtCorrCube { grid, cube, entries, maps })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FaceReduction {
    pub axis: usize,
    pub value: u8,
    pub pullback: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CornerCheck {
    pub corner: String,
    pub pullback: bool,
    /// Pullback status of the codimension-one faces, for cubes of dimension 3 and 4.
    pub faces: Vec<FaceReduction>,
}

/// A corner cube against the 2-Segal conditions it is claimed to encode.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionMatch {
    pub corner: String,
    pub conditions: Vec<String>,
    pub conditions_pass: bool,
    pub corner_pullback: bool,
    pub matches: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Corr0Report {
    pub n: usize,
    pub category: String,
    pub q: usize,
    pub bound: usize,
    pub commutative: bool,
    pub corners: Vec<CornerCheck>,
    pub conditions: Vec<ConditionMatch>,
}

fn corner_label(v: &[bool]) -> String {
    let parts: Vec<&str> = v.iter().map(|&b| if b { "1" } else { "0" }).collect();
    format!("({})", parts.join(","))
}

fn check_corner(cube: &CorrespondenceCube, v: &[bool]) -> Result<CornerCheck> {
    let corner: GroupoidCube = cube.corner(v)?;
    let pullback = corner.is_pullback()?;
    let mut faces = Vec::new();
    if (3..=4).contains(&corner.dim) {
        for axis in 0..corner.dim {
            for value in [false, true] {
                faces.push(FaceReduction {
                    axis,
                    value: u8::from(value),
                    pullback: corner.subcube(axis, value)?.is_pullback()?,
                });
            }
        }
    }
    Ok(CornerCheck { corner: corner_label(v), pullback, faces })
}

fn report(
    spec: &CategorySpec,
    n: usize,
    bound: usize,
    cube: &CorrespondenceCube,
    exec: Execution,
) -> Result<Corr0Report> {
    let d = cube.dim;
    let odd: Vec<bool> = (0..d).map(|k| k % 2 == 0).collect();
    let even: Vec<bool> = (0..d).map(|k| k % 2 == 1).collect();
    let corners = vec![check_corner(cube, &odd)?, check_corner(cube, &even)?];
    let mut conditions = Vec::new();
    for (c, parity) in corners.iter().zip([1, 0]) {
        let mut names = Vec::new();
        let mut pass = true;
        for i in (parity..=n - 2).step_by(2) {
            names.push(format!("C^{n}_{i}"));
            pass &= two_segal_condition(spec, n, i, bound, exec)?.pass;
        }
        conditions.push(ConditionMatch {
            corner: c.corner.clone(),
            conditions: names,
            conditions_pass: pass,
            corner_pullback: c.pullback,
            matches: pass == c.pullback,
        });
    }
    Ok(Corr0Report {
        n,
        category: spec.name(),
        q: spec.field.order(),
        bound,
        commutative: corners.iter().all(|c| c.pullback),
        corners,
        conditions,
    })
}

fn check_level(n: usize) -> Result<()> {
    if !(3..=5).contains(&n) {
        return Err(HallError::InvalidArgument(format!("associativity cubes are checked for n = 3, 4, 5, not {n}")));
    }
    Ok(())
}

/// `S^ext` on the associativity cube of `ord{n}`: are both alternating
/// corners pullback cubes, and do they agree with the 2-Segal conditions?
pub fn corr0_pipeline(spec: &CategorySpec, n: usize, bound: usize, exec: Execution) -> Result<Corr0Report> {
    check_level(n)?;
    let ext = correspondence_cube(spec, &assoc_cube(n)?, bound, exec)?;
    report(spec, n, bound, &ext.cube, exec)
}

/// The `n = 3` correspondence square with the center `S_3` replaced by
/// `S^ext({0,1,2} ∪ {2,3}) = S_2 x S_1`, mapped in by stacking flags.
pub fn negative_control_cube(spec: &CategorySpec, bound: usize, exec: Execution) -> Result<CorrespondenceCube> {
    let ext = correspondence_cube(spec, &assoc_cube(3)?, bound, exec)?;
    let center = vec![Coord::Mid, Coord::Mid];
    let fake = s_ext(spec, &SubComplex::generated(3, [0b0111, 0b1100])?, bound, exec)?;
    let stack = ExtMap::concat(&fake, &ext.entries[&center], exec)?;
    let mut cube = ext.cube.clone();
    cube.entries.insert(center.clone(), fake.groupoid().clone());
    for (key, e) in cube.edges.iter_mut() {
        if key.0 == center {
            *e = stack.functor.then(e)?;
        }
    }
    let whiskered: Vec<(CorrFace, NatIso)> = cube
        .faces
        .iter()
        .filter(|(k, _)| k.0 == center)
        .map(|(k, w)| {
            let comps = stack.functor.objects.iter().map(|&a| w.comps[a as usize]).collect();
            (k.clone(), NatIso { comps })
        })
        .collect();
    cube.faces.extend(whiskered);
    Ok(cube)
}

/// The `n = 3` pipeline on [`negative_control_cube`].
pub fn corr0_negative_control(spec: &CategorySpec, bound: usize, exec: Execution) -> Result<Corr0Report> {
    report(spec, 3, bound, &negative_control_cube(spec, bound, exec)?, exec)
}
