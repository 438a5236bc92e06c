//! Homotopy fiber products `B x_D C` in the strict triple model.
//!
//! Objects are triples `(b, c, phi: h(b) -> k(c))`; a morphism
//! `(b, c, phi) -> (b, c, phi')` is a pair `(beta, gamma)` with
//! `k(gamma) phi h(beta)^{-1} = phi'`. For fixed `b, c` the components are the
//! double cosets `k(Aut c) \ Aut(d) / h(Aut b)`.

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use super::{AutGroup, Component, GroupoidFunctor, NatIso, SkeletalGroupoid};
use crate::error::{HallError, Result};
use crate::qlinalg::{Elem, MatrixGroup};

#[derive(Debug, Clone)]
struct FiberComp {
    b: u32,
    c: u32,
    phi0: u32,
    /// `(beta, gamma)` for each element of the stabilizer, in group order.
    stab: Vec<(u32, u32)>,
}

#[derive(Debug, Clone)]
struct PairData {
    first: u32,
    orbit_of: Vec<u32>,
    /// `trans[phi] = (beta, gamma)` carrying `phi0` of its orbit to `phi`.
    trans: Vec<(u32, u32)>,
}

/// `B x_D C` with its projections and the canonical 2-cell `h p1 => k p2`.
#[derive(Debug, Clone)]
pub struct FiberProduct {
    pub groupoid: Arc<SkeletalGroupoid>,
    pub p1: GroupoidFunctor,
    pub p2: GroupoidFunctor,
    pub witness: NatIso,
    pub h: GroupoidFunctor,
    pub k: GroupoidFunctor,
    comps: Vec<FiberComp>,
    pairs: HashMap<(u32, u32), PairData>,
}

/// A functor into a fiber product together with the 2-cells
/// `u => p1 . functor` and `v => p2 . functor`.
#[derive(Debug, Clone)]
pub struct UniversalMap {
    pub functor: GroupoidFunctor,
    pub eps1: NatIso,
    pub eps2: NatIso,
}

fn concat(a: &[u8], b: &[u8]) -> Elem {
    let mut v = a.to_vec();
    v.extend_from_slice(b);
    v.into_boxed_slice()
}

/// The homotopy fiber product of `h: B -> D` and `k: C -> D`.
pub fn two_fiber_product(h: &GroupoidFunctor, k: &GroupoidFunctor) -> Result<FiberProduct> {
    if h.target.len() != k.target.len() {
        return Err(HallError::DimensionMismatch("fiber product over different targets".into()));
    }
    let (bg, cg, dg) = (&h.source, &k.source, &h.target);
    // preimages of k on each Aut(c), built lazily
    let mut k_pre: HashMap<u32, HashMap<u32, Vec<u32>>> = HashMap::new();
    let mut comps = Vec::new();
    let mut pairs = HashMap::new();
    let mut components = Vec::new();
    for b in 0..bg.len() as u32 {
        for c in 0..cg.len() as u32 {
            let d = h.objects[b as usize];
            if k.objects[c as usize] != d {
                continue;
            }
            let gb = bg.aut(b).require("fiber product")?;
            let gc = cg.aut(c).require("fiber product")?;
            let gd = dg.aut(d).require("fiber product")?;
            let n = gd.order();
            let hb: Vec<u32> = (0..gb.order() as u32).map(|x| h.hom(b, x)).collect::<Result<_>>()?;
            let kc: Vec<u32> = (0..gc.order() as u32).map(|x| k.hom(c, x)).collect::<Result<_>>()?;
            let pre = k_pre.entry(c).or_insert_with(|| {
                let mut m: HashMap<u32, Vec<u32>> = HashMap::new();
                for (g, &img) in kc.iter().enumerate() {
                    m.entry(img).or_default().push(g as u32);
                }
                m
            });
            let hinv_gens: Vec<(u32, u32)> = gb.generators().iter().map(|&g| (g, gd.inv(hb[g as usize]))).collect();
            let k_gens: Vec<(u32, u32)> = gc.generators().iter().map(|&g| (g, kc[g as usize])).collect();
            let first = comps.len() as u32;
            let mut orbit_of = vec![u32::MAX; n];
            let mut trans = vec![(0u32, 0u32); n];
            let mut local = 0u32;
            let mut new_comps = Vec::new();
            for start in 0..n as u32 {
                if orbit_of[start as usize] != u32::MAX {
                    continue;
                }
                orbit_of[start as usize] = local;
                trans[start as usize] = (gb.identity(), gc.identity());
                let mut queue = VecDeque::from([start]);
                while let Some(phi) = queue.pop_front() {
                    let (beta, gamma) = trans[phi as usize];
                    for &(g, hg_inv) in &hinv_gens {
                        let next = gd.mul(phi, hg_inv);
                        if orbit_of[next as usize] == u32::MAX {
                            orbit_of[next as usize] = local;
                            trans[next as usize] = (gb.mul(g, beta), gamma);
                            queue.push_back(next);
                        }
                    }
                    for &(g, kg) in &k_gens {
                        let next = gd.mul(kg, phi);
                        if orbit_of[next as usize] == u32::MAX {
                            orbit_of[next as usize] = local;
                            trans[next as usize] = (beta, gc.mul(g, gamma));
                            queue.push_back(next);
                        }
                    }
                }
                // stabilizer: k(gamma) = phi0 h(beta) phi0^{-1}
                let phi_inv = gd.inv(start);
                let mut elems = Vec::new();
                for beta in 0..gb.order() as u32 {
                    let t = gd.mul(gd.mul(start, hb[beta as usize]), phi_inv);
                    if let Some(gs) = pre.get(&t) {
                        for &gamma in gs {
                            elems.push(concat(gb.elem(beta), gc.elem(gamma)));
                        }
                    }
                }
                let mut blocks = gb.blocks().to_vec();
                blocks.extend_from_slice(gc.blocks());
                let stab_group = MatrixGroup::from_elements(gb.field().clone(), blocks, elems);
                let split = gb.elem(0).len();
                let stab: Vec<(u32, u32)> = stab_group
                    .elements()
                    .iter()
                    .map(|e| (gb.index_of(&e[..split]).unwrap(), gc.index_of(&e[split..]).unwrap()))
                    .collect();
                new_comps.push((start, stab, stab_group));
                local += 1;
            }
            let many = new_comps.len() > 1;
            let (lb, lc) = (&bg.components[b as usize], &cg.components[c as usize]);
            for (i, (phi0, stab, group)) in new_comps.into_iter().enumerate() {
                let mut grade = lb.grade.clone();
                grade.extend_from_slice(&lc.grade);
                let label = if many {
                    format!("({},{})#{i}", lb.label, lc.label)
                } else {
                    format!("({},{})", lb.label, lc.label)
                };
                components.push(Component { label, grade, aut: AutGroup::explicit(Arc::new(group)) });
                comps.push(FiberComp { b, c, phi0, stab });
            }
            pairs.insert((b, c), PairData { first, orbit_of, trans });
        }
    }
    let groupoid = Arc::new(SkeletalGroupoid { components });
    let p1 = GroupoidFunctor {
        source: groupoid.clone(),
        target: bg.clone(),
        objects: comps.iter().map(|z| z.b).collect(),
        homs: Some(comps.iter().map(|z| z.stab.iter().map(|p| p.0).collect()).collect()),
    };
    let p2 = GroupoidFunctor {
        source: groupoid.clone(),
        target: cg.clone(),
        objects: comps.iter().map(|z| z.c).collect(),
        homs: Some(comps.iter().map(|z| z.stab.iter().map(|p| p.1).collect()).collect()),
    };
    let witness = NatIso { comps: comps.iter().map(|z| z.phi0).collect() };
    Ok(FiberProduct { groupoid, p1, p2, witness, h: h.clone(), k: k.clone(), comps, pairs })
}

impl FiberProduct {
    /// Component of the triple `(b, c, phi)` and the morphism `(beta, gamma)`
    /// from the component's base triple to it.
    pub fn locate(&self, b: u32, c: u32, phi: u32) -> Result<(u32, (u32, u32))> {
        let pd = self
            .pairs
            .get(&(b, c))
            .ok_or_else(|| HallError::NonCommuting(format!("components {b} and {c} lie over different objects")))?;
        Ok((pd.first + pd.orbit_of[phi as usize], pd.trans[phi as usize]))
    }

    pub fn base_phi(&self, z: u32) -> u32 {
        self.comps[z as usize].phi0
    }

    /// Index in `Aut(z)` of the pair `(beta, gamma)`, if it is an automorphism.
    pub fn pair_index(&self, z: u32, beta: u32, gamma: u32) -> Result<Option<u32>> {
        let fc = &self.comps[z as usize];
        let gb = self.h.source.aut(fc.b).require("fiber product")?;
        let gc = self.k.source.aut(fc.c).require("fiber product")?;
        let gz = self.groupoid.aut(z).require("fiber product")?;
        Ok(gz.index_of(&concat(gb.elem(beta), gc.elem(gamma))))
    }

    /// `<u, v, theta>: A -> B x_D C` for `theta: h u => k v`.
    pub fn universal(&self, u: &GroupoidFunctor, v: &GroupoidFunctor, theta: &NatIso) -> Result<UniversalMap> {
        let a = &u.source;
        if v.source.len() != a.len() || theta.comps.len() != a.len() {
            return Err(HallError::DimensionMismatch("universal map legs disagree on the source".into()));
        }
        let (bg, cg) = (&self.h.source, &self.k.source);
        let mut objects = Vec::with_capacity(a.len());
        let mut homs = Vec::with_capacity(a.len());
        let mut eps1 = Vec::with_capacity(a.len());
        let mut eps2 = Vec::with_capacity(a.len());
        for x in 0..a.len() as u32 {
            let (b, c) = (u.objects[x as usize], v.objects[x as usize]);
            let (z, (beta, gamma)) = self.locate(b, c, theta.comps[x as usize])?;
            let gb = bg.aut(b).require("universal map")?;
            let gc = cg.aut(c).require("universal map")?;
            let (bi, ci) = (gb.inv(beta), gc.inv(gamma));
            let ga = a.aut(x).require("universal map")?;
            let mut row = Vec::with_capacity(ga.order());
            for alpha in 0..ga.order() as u32 {
                let ub = gb.mul(gb.mul(bi, u.hom(x, alpha)?), beta);
                let vc = gc.mul(gc.mul(ci, v.hom(x, alpha)?), gamma);
                let idx = self
                    .pair_index(z, ub, vc)?
                    .ok_or_else(|| HallError::NonCommuting(format!("2-cell at component {x} is not natural")))?;
                row.push(idx);
            }
            objects.push(z);
            homs.push(row);
            eps1.push(bi);
            eps2.push(ci);
        }
        let functor = GroupoidFunctor { source: a.clone(), target: self.groupoid.clone(), objects, homs: Some(homs) };
        Ok(UniversalMap { functor, eps1: NatIso { comps: eps1 }, eps2: NatIso { comps: eps2 } })
    }
}
