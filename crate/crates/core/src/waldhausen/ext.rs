//! `S^ext(K)` for subcomplexes `K` of a simplex whose maximal faces meet in
//! at most one vertex: compatible families of flags, one per maximal face.
//! Since `S_0` is a point, such a family is just a tuple, and the groupoid
//! is the product of the `S_{|F|-1}` truncated by total dimension.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{HallError, Result};
use crate::fincat::category::RepModel;
use crate::fincat::flags::restrict_grade;
use crate::fincat::{CategorySpec, DimVec, FlagGrade, FlagPiece, ObjKey};
use crate::groupoid::{AutGroup, Component, GroupoidFunctor, NatIso, SkeletalGroupoid};
use crate::par::Execution;
use crate::qlinalg::group::{identity_elem, invert, multiply};
use crate::qlinalg::{Elem, Matrix, MatrixGroup};
use crate::simpset::{face_vertices, SubComplex};

/// Target component, transporter and hom table of one source component.
type Image = (u32, Vec<Elem>, Option<Vec<u32>>);

#[derive(Clone)]
struct FactorPoint {
    piece: Arc<FlagPiece>,
    orbit: u32,
}

impl FactorPoint {
    fn grade(&self) -> &FlagGrade {
        self.piece.grade()
    }

    fn rep(&self) -> &ObjKey {
        &self.piece.orbits()[self.orbit as usize].rep
    }
}

type PointKey = Vec<(FlagGrade, u32)>;

/// The truncated groupoid `S^ext(K)`.
pub struct ExtGroupoid {
    spec: CategorySpec,
    model: RepModel,
    complex: SubComplex,
    bound: usize,
    faces: Vec<Vec<usize>>,
    points: Vec<Vec<FactorPoint>>,
    index: HashMap<PointKey, u32>,
    groupoid: Arc<SkeletalGroupoid>,
}

impl fmt::Debug for ExtGroupoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S^ext({}) [{} components, total dim <= {}]", self.complex, self.points.len(), self.bound)
    }
}

/// All flag grades with `blocks` blocks and total dimension `<= budget`.
fn flag_grades(spec: &CategorySpec, blocks: usize, budget: usize) -> Vec<FlagGrade> {
    let mut out = vec![vec![]];
    for _ in 0..blocks {
        let mut next = Vec::new();
        for g in out {
            let used: usize = g.iter().map(|d: &DimVec| d.iter().sum::<usize>()).sum();
            for d in spec.dim_vectors(budget - used) {
                let mut h = g.clone();
                h.push(d);
                next.push(h);
            }
        }
        out = next;
    }
    out
}

fn total(grade: &FlagGrade) -> usize {
    grade.iter().flatten().sum()
}

impl ExtGroupoid {
    pub fn new(spec: &CategorySpec, complex: &SubComplex, bound: usize, exec: Execution) -> Result<Self> {
        spec.check_bound(bound)?;
        if !complex.is_vertex_glued() {
            return Err(HallError::Unsupported(format!(
                "S^ext of {complex}: maximal faces sharing an edge are not supported"
            )));
        }
        let model = spec.model();
        let faces: Vec<Vec<usize>> =
            complex.maximal_faces().into_iter().filter(|f| f.count_ones() >= 2).map(face_vertices).collect();

        // every grade tuple within the bound
        let mut tuples: Vec<Vec<FlagGrade>> = vec![vec![]];
        for face in &faces {
            let mut next = Vec::new();
            for t in tuples {
                let used: usize = t.iter().map(total).sum();
                for g in flag_grades(spec, face.len() - 1, bound - used) {
                    let mut u = t.clone();
                    u.push(g);
                    next.push(u);
                }
            }
            tuples = next;
        }
        let pieces: Vec<Result<Vec<Arc<FlagPiece>>>> =
            exec.map(&tuples, |t| t.iter().map(|g| FlagPiece::get(&model, g)).collect());
        let mut points: Vec<Vec<FactorPoint>> = Vec::new();
        for ps in pieces {
            let ps = ps?;
            let mut acc: Vec<Vec<FactorPoint>> = vec![vec![]];
            for p in &ps {
                acc = acc
                    .into_iter()
                    .flat_map(|prefix| {
                        (0..p.orbits().len() as u32).map(move |o| {
                            let mut v = prefix.clone();
                            v.push(FactorPoint { piece: p.clone(), orbit: o });
                            v
                        })
                    })
                    .collect();
            }
            points.extend(acc);
        }
        let components: Vec<Result<Component>> = exec.map(&points, |pt| Self::component(&model, pt));
        let components = components.into_iter().collect::<Result<Vec<_>>>()?;
        let index = points
            .iter()
            .enumerate()
            .map(|(i, pt)| (pt.iter().map(|f| (f.grade().clone(), f.orbit)).collect(), i as u32))
            .collect();
        Ok(ExtGroupoid {
            spec: spec.clone(),
            model,
            complex: complex.clone(),
            bound,
            faces,
            points,
            index,
            groupoid: Arc::new(SkeletalGroupoid::new(components)?),
        })
    }

    fn component(model: &RepModel, pt: &[FactorPoint]) -> Result<Component> {
        let label = if pt.is_empty() {
            "pt".to_string()
        } else {
            pt.iter().map(|f| f.piece.orbits()[f.orbit as usize].label.as_str()).collect::<Vec<_>>().join("×")
        };
        let grade = pt.iter().flat_map(|f| f.grade().iter().flatten().copied()).collect();
        let orbits: Vec<_> = pt.iter().map(|f| &f.piece.orbits()[f.orbit as usize]).collect();
        let order: u128 = orbits.iter().map(|o| o.stab_order).product();
        let aut = match orbits.iter().map(|o| o.stabilizer.as_deref()).collect::<Option<Vec<&MatrixGroup>>>() {
            Some(groups) if order <= crate::qlinalg::group::MAX_GROUP_ORDER as u128 => {
                if groups.len() == 1 {
                    AutGroup::explicit(orbits[0].stabilizer.clone().unwrap())
                } else {
                    AutGroup::explicit(Arc::new(MatrixGroup::product(&model.field, &groups)?))
                }
            }
            _ => AutGroup::order_only(order),
        };
        Ok(Component { label, grade, aut })
    }

    pub fn groupoid(&self) -> &Arc<SkeletalGroupoid> {
        &self.groupoid
    }

    pub fn spec(&self) -> &CategorySpec {
        &self.spec
    }

    pub fn complex(&self) -> &SubComplex {
        &self.complex
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    /// Maximal faces with at least two vertices, as vertex lists.
    pub fn faces(&self) -> &[Vec<usize>] {
        &self.faces
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Flag grade on each face of component `c`.
    pub fn factor_grades(&self, c: u32) -> Vec<FlagGrade> {
        self.points[c as usize].iter().map(|f| f.grade().clone()).collect()
    }

    /// Sum of all block dimension vectors of component `c`.
    pub fn ambient_dims(&self, c: u32) -> DimVec {
        let mut out = vec![0; self.spec.vertices()];
        for f in &self.points[c as usize] {
            for d in f.grade() {
                for (o, x) in out.iter_mut().zip(d) {
                    *o += x;
                }
            }
        }
        out
    }

    /// Structure matrices of the representative flag on each face.
    pub fn rep_matrices(&self, c: u32) -> Vec<Vec<Matrix>> {
        self.points[c as usize].iter().map(|f| f.piece.matrices(f.rep())).collect()
    }

    /// Component of a tuple of flags and, per face, an element carrying each
    /// flag to the representative.
    fn canonicalize(&self, raw: &[(FlagGrade, ObjKey)]) -> Result<(u32, Vec<Elem>)> {
        let mut key = Vec::with_capacity(raw.len());
        let mut trans = Vec::with_capacity(raw.len());
        for (grade, obj) in raw {
            let piece = FlagPiece::get(&self.model, grade)?;
            let (orbit, t) = piece.locate(obj)?;
            trans.push(t.map(|t| t.to_vec().into_boxed_slice()).unwrap_or_else(|| self.identity(grade)));
            key.push((grade.clone(), orbit));
        }
        let c = *self.index.get(&key).ok_or_else(|| {
            HallError::BoundExceeded(format!("flag tuple outside the truncation at total dimension {}", self.bound))
        })?;
        Ok((c, trans))
    }

    fn identity(&self, grade: &FlagGrade) -> Elem {
        identity_elem(&self.model.dims(grade))
    }

    fn split_elem(&self, c: u32, e: &[u8]) -> Vec<Elem> {
        let mut off = 0;
        self.points[c as usize]
            .iter()
            .map(|f| {
                let len: usize = self.model.dims(f.grade()).iter().map(|n| n * n).sum();
                let out = e[off..off + len].to_vec().into_boxed_slice();
                off += len;
                out
            })
            .collect()
    }
}

#[derive(Debug, Clone)]
enum Plan {
    /// For each target face, the source face containing it and the positions.
    Restrict(Vec<(usize, Vec<usize>)>),
    /// Source faces are consecutive intervals; their flags are stacked.
    Concat,
    /// Drops the structure map of a slice object.
    Forget,
}

impl Plan {
    fn keys(&self, model: &RepModel, grades: &[FlagGrade], keys: &[&[u8]]) -> Result<Vec<(FlagGrade, ObjKey)>> {
        match self {
            Plan::Restrict(plan) => Ok(plan
                .iter()
                .map(|(f, pos)| {
                    let g = &grades[*f];
                    (restrict_grade(g, model.vertices, pos), model.restrict_key(g, keys[*f], pos))
                })
                .collect()),
            Plan::Concat => {
                let mut grade = grades[0].clone();
                let mut key: ObjKey = keys[0].into();
                for (g, k) in grades.iter().zip(keys).skip(1) {
                    key = model.concat_key(&grade, &key, g, k)?;
                    grade.extend(g.iter().cloned());
                }
                Ok(vec![(grade, key)])
            }
            Plan::Forget => {
                let v = model.slice_dim.unwrap_or(0);
                Ok(grades
                    .iter()
                    .zip(keys)
                    .map(|(g, k)| (g.clone(), k[..k.len() - v * model.dims(g)[0]].into()))
                    .collect())
            }
        }
    }

    fn elems(&self, model: &RepModel, grades: &[FlagGrade], elems: &[Elem]) -> Vec<Elem> {
        match self {
            Plan::Restrict(plan) => {
                plan.iter().map(|(f, pos)| model.restrict_elem(&grades[*f], &elems[*f], pos)).collect()
            }
            Plan::Concat => {
                let mut grade = grades[0].clone();
                let mut e = elems[0].clone();
                for (g, x) in grades.iter().zip(elems).skip(1) {
                    e = model.concat_elem(&grade, &e, g, x);
                    grade.extend(g.iter().cloned());
                }
                vec![e]
            }
            Plan::Forget => elems.to_vec(),
        }
    }
}

/// A functor between extension groupoids induced by restricting (or
/// stacking) flags, together with the transporters used to land on
/// representatives; these give the 2-cells between parallel composites.
#[derive(Debug, Clone)]
pub struct ExtMap {
    pub functor: GroupoidFunctor,
    source: Arc<ExtGroupoid>,
    target: Arc<ExtGroupoid>,
    plan: Plan,
    /// Per source component, per target face.
    transporters: Vec<Vec<Elem>>,
}

impl ExtMap {
    /// Restriction along an injective monotone vertex map from the target's
    /// ambient simplex into the source's, sending faces of the target into
    /// faces of the source.
    pub fn restriction(
        source: &Arc<ExtGroupoid>,
        target: &Arc<ExtGroupoid>,
        vertex_map: &[usize],
        exec: Execution,
    ) -> Result<ExtMap> {
        if vertex_map.len() != target.complex.ambient() + 1
            || vertex_map.windows(2).any(|w| w[0] >= w[1])
            || vertex_map.last().is_some_and(|&v| v > source.complex.ambient())
        {
            return Err(HallError::InvalidArgument(format!("{vertex_map:?} is not a face embedding")));
        }
        let mut plan = Vec::new();
        for face in &target.faces {
            let image: Vec<usize> = face.iter().map(|&v| vertex_map[v]).collect();
            let (src, sf) =
                source.faces.iter().enumerate().find(|(_, sf)| image.iter().all(|v| sf.contains(v))).ok_or_else(
                    || HallError::InvalidArgument(format!("face {image:?} lies in no face of {}", source.complex)),
                )?;
            plan.push((src, image.iter().map(|v| sf.iter().position(|w| w == v).unwrap()).collect()));
        }
        Self::build(source, target, Plan::Restrict(plan), exec)
    }

    /// Stacks the flags on consecutive intervals `[p_0, p_1], [p_1, p_2], ...`
    /// into one flag on `[p_0, p_k]` (direct sum, lower flags first).
    pub fn concat(source: &Arc<ExtGroupoid>, target: &Arc<ExtGroupoid>, exec: Execution) -> Result<ExtMap> {
        let chained = source.faces.windows(2).all(|w| w[0].last() == w[1].first());
        let ok = !source.faces.is_empty()
            && chained
            && target.faces.len() == 1
            && target.faces[0].len() == source.faces.iter().map(|f| f.len() - 1).sum::<usize>() + 1;
        if !ok {
            return Err(HallError::InvalidArgument("concatenation needs a chain of intervals onto one face".into()));
        }
        Self::build(source, target, Plan::Concat, exec)
    }

    /// `S^ext(K)` of `Vect/V` to `S^ext(K)` of `Vect`, forgetting the map to `V`.
    pub fn forget_slice(source: &Arc<ExtGroupoid>, target: &Arc<ExtGroupoid>, exec: Execution) -> Result<ExtMap> {
        let ok = source.model.slice_dim.is_some()
            && target.model.slice_dim.is_none()
            && target.model.arrows.is_empty()
            && target.model.field == source.model.field
            && source.complex == target.complex;
        if !ok {
            return Err(HallError::InvalidArgument(
                "forgetting the slice needs Vect/V over Vect on one complex".into(),
            ));
        }
        Self::build(source, target, Plan::Forget, exec)
    }

    fn build(source: &Arc<ExtGroupoid>, target: &Arc<ExtGroupoid>, plan: Plan, exec: Execution) -> Result<ExtMap> {
        let model = &source.model;
        let comps: Vec<u32> = (0..source.len() as u32).collect();
        let rows: Vec<Result<Image>> = exec.map(&comps, |&x| {
            let grades = source.factor_grades(x);
            let keys: Vec<&[u8]> = source.points[x as usize].iter().map(|f| &f.rep()[..]).collect();
            let raw = plan.keys(model, &grades, &keys)?;
            let (c, trans) = target.canonicalize(&raw)?;
            let (Some(gx), Some(gc)) = (source.groupoid.aut(x).group(), target.groupoid.aut(c).group()) else {
                return Ok((c, trans, None));
            };
            let tgrades = target.factor_grades(c);
            let tinv: Vec<Elem> =
                trans.iter().zip(&tgrades).map(|(t, g)| invert(&model.field, &model.dims(g), t)).collect();
            let mut row = Vec::with_capacity(gx.order());
            for alpha in gx.elements() {
                let parts = source.split_elem(x, alpha);
                let img = plan.elems(model, &grades, &parts);
                let mut full = Vec::new();
                for ((e, g), (t, ti)) in img.iter().zip(&tgrades).zip(trans.iter().zip(&tinv)) {
                    let dims = model.dims(g);
                    let conj = multiply(&model.field, &dims, &multiply(&model.field, &dims, t, e), ti);
                    full.extend_from_slice(&conj);
                }
                row.push(gc.index_of(&full).ok_or_else(|| {
                    HallError::NonCommuting(format!("automorphism of component {x} does not restrict"))
                })?);
            }
            Ok((c, trans, Some(row)))
        });
        let mut objects = Vec::with_capacity(rows.len());
        let mut transporters = Vec::with_capacity(rows.len());
        let mut homs = Some(Vec::with_capacity(rows.len()));
        for r in rows {
            let (c, t, h) = r?;
            objects.push(c);
            transporters.push(t);
            match (h, homs.as_mut()) {
                (Some(h), Some(hs)) => hs.push(h),
                _ => homs = None,
            }
        }
        let functor =
            GroupoidFunctor { source: source.groupoid.clone(), target: target.groupoid.clone(), objects, homs };
        Ok(ExtMap { functor, source: source.clone(), target: target.clone(), plan, transporters })
    }

    pub fn source(&self) -> &Arc<ExtGroupoid> {
        &self.source
    }

    pub fn target(&self) -> &Arc<ExtGroupoid> {
        &self.target
    }
}

/// Per source component: the final component of a composable path of maps
/// and the accumulated transporter on each of its faces.
fn path_transport(path: &[&ExtMap]) -> Result<Vec<(u32, Vec<Elem>)>> {
    let first = path.first().ok_or_else(|| HallError::InvalidArgument("empty path".into()))?;
    for w in path.windows(2) {
        if !Arc::ptr_eq(&w[0].target, &w[1].source) {
            return Err(HallError::DimensionMismatch("maps in a path do not compose".into()));
        }
    }
    let src = &first.source;
    let model = &src.model;
    (0..src.len() as u32)
        .map(|x| {
            let mut comp = x;
            let mut trans: Vec<Elem> = src.factor_grades(x).iter().map(|g| src.identity(g)).collect();
            for m in path {
                let grades = m.source.factor_grades(comp);
                let moved = m.plan.elems(model, &grades, &trans);
                let next = m.functor.objects[comp as usize];
                let tgrades = m.target.factor_grades(next);
                trans = m.transporters[comp as usize]
                    .iter()
                    .zip(&moved)
                    .zip(&tgrades)
                    .map(|((t, e), g)| multiply(&model.field, &model.dims(g), t, e))
                    .collect();
                comp = next;
            }
            Ok((comp, trans))
        })
        .collect()
}

/// The 2-cell `F => G` between two composites with the same ends, where
/// `F` and `G` are given as paths of maps.
pub fn path_witness(f: &[&ExtMap], g: &[&ExtMap]) -> Result<NatIso> {
    let (tf, tg) = (path_transport(f)?, path_transport(g)?);
    if tf.len() != tg.len() || !Arc::ptr_eq(&f.last().unwrap().target, &g.last().unwrap().target) {
        return Err(HallError::DimensionMismatch("paths have different ends".into()));
    }
    let target = &f.last().unwrap().target;
    let model = &target.model;
    let mut comps = Vec::with_capacity(tf.len());
    for (x, ((cf, af), (cg, ag))) in tf.iter().zip(&tg).enumerate() {
        if cf != cg {
            return Err(HallError::NonCommuting(format!("paths disagree on component {x}")));
        }
        let grades = target.factor_grades(*cf);
        let mut full = Vec::new();
        for ((a, b), gr) in af.iter().zip(ag).zip(&grades) {
            let dims = model.dims(gr);
            full.extend_from_slice(&multiply(&model.field, &dims, b, &invert(&model.field, &dims, a)));
        }
        let grp = target.groupoid.aut(*cf).require("2-cell between restrictions")?;
        comps.push(
            grp.index_of(&full)
                .ok_or_else(|| HallError::NonCommuting(format!("2-cell at component {x} is not an automorphism")))?,
        );
    }
    Ok(NatIso { comps })
}
