//! Finite groupoids in skeletal form: one object per component, each with an
//! explicit automorphism group. Functors carry a homomorphism per component
//! and natural isomorphisms one conjugating element per component.

mod cube;
mod fiber;

use std::fmt;
use std::sync::{Arc, OnceLock};

pub use cube::{
    is_commutative_corr_cube, Coord, CornerReport, CorrEdge, CorrFace, CorrespondenceCube, GroupoidCube, GroupoidSquare,
};
pub use fiber::{two_fiber_product, FiberProduct, UniversalMap};

use crate::error::{HallError, Result};
use crate::qlinalg::{FiniteField, MatrixGroup};

/// Automorphism group of a component: always its order, and the elements
/// when the group is small enough to enumerate.
#[derive(Clone)]
pub struct AutGroup {
    order: u128,
    group: Option<Arc<MatrixGroup>>,
}

impl fmt::Debug for AutGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Aut(order {}{})", self.order, if self.group.is_some() { "" } else { ", order-only" })
    }
}

fn trivial_group() -> Arc<MatrixGroup> {
    static TRIVIAL: OnceLock<Arc<MatrixGroup>> = OnceLock::new();
    TRIVIAL.get_or_init(|| Arc::new(MatrixGroup::trivial(FiniteField::new(2, 1).unwrap()))).clone()
}

impl AutGroup {
    pub fn explicit(group: Arc<MatrixGroup>) -> Self {
        AutGroup { order: group.order() as u128, group: Some(group) }
    }

    pub fn order_only(order: u128) -> Self {
        AutGroup { order, group: None }
    }

    pub fn trivial() -> Self {
        Self::explicit(trivial_group())
    }

    pub fn order(&self) -> u128 {
        self.order
    }

    pub fn group(&self) -> Option<&Arc<MatrixGroup>> {
        self.group.as_ref()
    }

    pub(crate) fn require(&self, what: &str) -> Result<&Arc<MatrixGroup>> {
        self.group.as_ref().ok_or_else(|| {
            HallError::BoundExceeded(format!("{what}: automorphism group of order {} is not enumerated", self.order))
        })
    }
}

#[derive(Debug, Clone)]
pub struct Component {
    pub label: String,
    pub grade: Vec<usize>,
    pub aut: AutGroup,
}

#[derive(Debug, Clone, Default)]
pub struct SkeletalGroupoid {
    pub components: Vec<Component>,
}

impl SkeletalGroupoid {
    pub fn new(components: Vec<Component>) -> Result<Self> {
        let mut labels: Vec<&str> = components.iter().map(|c| c.label.as_str()).collect();
        labels.sort_unstable();
        if labels.windows(2).any(|w| w[0] == w[1]) {
            return Err(HallError::InvalidArgument("duplicate component labels".into()));
        }
        Ok(SkeletalGroupoid { components })
    }

    /// A finite set viewed as a groupoid with trivial automorphisms.
    pub fn discrete<S: ToString>(labels: impl IntoIterator<Item = S>) -> Self {
        SkeletalGroupoid {
            components: labels
                .into_iter()
                .map(|l| Component { label: l.to_string(), grade: vec![], aut: AutGroup::trivial() })
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn aut(&self, c: u32) -> &AutGroup {
        &self.components[c as usize].aut
    }

    pub fn find(&self, label: &str) -> Option<u32> {
        self.components.iter().position(|c| c.label == label).map(|i| i as u32)
    }

    /// `sum 1/|Aut|` over components, as an exact fraction.
    pub fn cardinality(&self) -> num_rational::BigRational {
        use num_bigint::BigInt;
        self.components
            .iter()
            .map(|c| num_rational::BigRational::new(BigInt::from(1), BigInt::from(c.aut.order())))
            .sum()
    }
}

/// Functor between skeletal groupoids: a component map and, when all groups
/// involved are explicit, `homs[a][alpha]` = image of `alpha in Aut(a)`.
#[derive(Clone)]
pub struct GroupoidFunctor {
    pub source: Arc<SkeletalGroupoid>,
    pub target: Arc<SkeletalGroupoid>,
    pub objects: Vec<u32>,
    pub homs: Option<Vec<Vec<u32>>>,
}

impl fmt::Debug for GroupoidFunctor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupoidFunctor({} -> {}, {:?})", self.source.len(), self.target.len(), self.objects)
    }
}

impl GroupoidFunctor {
    pub fn new(
        source: Arc<SkeletalGroupoid>,
        target: Arc<SkeletalGroupoid>,
        objects: Vec<u32>,
        homs: Option<Vec<Vec<u32>>>,
    ) -> Result<Self> {
        let f = GroupoidFunctor { source, target, objects, homs };
        f.validate()?;
        Ok(f)
    }

    /// Map of finite sets, as a functor of discrete groupoids.
    pub fn from_map(source: Arc<SkeletalGroupoid>, target: Arc<SkeletalGroupoid>, map: Vec<u32>) -> Result<Self> {
        let homs = Some(vec![vec![0]; map.len()]);
        Self::new(source, target, map, homs)
    }

    pub fn identity(g: Arc<SkeletalGroupoid>) -> Self {
        let homs = g
            .components
            .iter()
            .map(|c| c.aut.group().map(|grp| (0..grp.order() as u32).collect::<Vec<_>>()))
            .collect::<Option<Vec<_>>>();
        GroupoidFunctor { objects: (0..g.len() as u32).collect(), homs, source: g.clone(), target: g }
    }

    /// Checks shapes and the homomorphism property on generators.
    pub fn validate(&self) -> Result<()> {
        if self.objects.len() != self.source.len() {
            return Err(HallError::DimensionMismatch("functor object map has the wrong length".into()));
        }
        if let Some(&bad) = self.objects.iter().find(|&&b| b as usize >= self.target.len()) {
            return Err(HallError::InvalidArgument(format!("functor sends a component to {bad}")));
        }
        let Some(homs) = &self.homs else { return Ok(()) };
        for (a, hom) in homs.iter().enumerate() {
            let ga = self.source.aut(a as u32).require("functor source")?;
            let gb = self.target.aut(self.objects[a]).require("functor target")?;
            if hom.len() != ga.order() || hom.iter().any(|&x| x as usize >= gb.order()) {
                return Err(HallError::DimensionMismatch(format!("homomorphism table at component {a}")));
            }
            for &g in ga.generators() {
                for x in 0..ga.order() as u32 {
                    if hom[ga.mul(x, g) as usize] != gb.mul(hom[x as usize], hom[g as usize]) {
                        return Err(HallError::InvalidArgument(format!(
                            "map on Aut of component {a} is not a homomorphism"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn hom(&self, a: u32, alpha: u32) -> Result<u32> {
        let homs =
            self.homs.as_ref().ok_or_else(|| HallError::BoundExceeded("functor carries no homomorphisms".into()))?;
        Ok(homs[a as usize][alpha as usize])
    }

    /// `other . self`.
    pub fn then(&self, other: &GroupoidFunctor) -> Result<GroupoidFunctor> {
        if !Arc::ptr_eq(&self.target, &other.source) && self.target.len() != other.source.len() {
            return Err(HallError::DimensionMismatch("functors do not compose".into()));
        }
        let objects = self.objects.iter().map(|&b| other.objects[b as usize]).collect();
        let homs = match (&self.homs, &other.homs) {
            (Some(h1), Some(h2)) => Some(
                h1.iter()
                    .zip(&self.objects)
                    .map(|(row, &b)| row.iter().map(|&x| h2[b as usize][x as usize]).collect())
                    .collect(),
            ),
            _ => None,
        };
        Ok(GroupoidFunctor { source: self.source.clone(), target: other.target.clone(), objects, homs })
    }

    /// Bijective on components and on every automorphism group.
    pub fn is_equivalence(&self) -> Result<bool> {
        let n = self.target.len();
        if self.objects.len() != n {
            return Ok(false);
        }
        let mut hit = vec![false; n];
        for &b in &self.objects {
            if std::mem::replace(&mut hit[b as usize], true) {
                return Ok(false);
            }
        }
        for (a, &b) in self.objects.iter().enumerate() {
            let (ga, gb) = (self.source.aut(a as u32), self.target.aut(b));
            if ga.order() != gb.order() {
                return Ok(false);
            }
            let id = ga.require("equivalence check")?.identity();
            let tid = gb.require("equivalence check")?.identity();
            let kernel = (0..ga.order() as u32).filter(|&x| self.hom(a as u32, x).unwrap() == tid).count();
            debug_assert!(self.hom(a as u32, id)? == tid);
            if kernel != 1 {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Natural isomorphism `F => G` between functors with the same component
/// map: `comps[a] in Aut(F(a))` with `G(alpha) comps[a] = comps[a] F(alpha)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NatIso {
    pub comps: Vec<u32>,
}

impl NatIso {
    pub fn identity(f: &GroupoidFunctor) -> Result<Self> {
        let comps = f
            .objects
            .iter()
            .map(|&b| Ok(f.target.aut(b).require("identity transformation")?.identity()))
            .collect::<Result<_>>()?;
        Ok(NatIso { comps })
    }

    pub fn inverse(&self, target: &SkeletalGroupoid, objects: &[u32]) -> Result<NatIso> {
        let comps = self
            .comps
            .iter()
            .zip(objects)
            .map(|(&t, &b)| Ok(target.aut(b).require("inverse transformation")?.inv(t)))
            .collect::<Result<_>>()?;
        Ok(NatIso { comps })
    }

    /// `F => G` holds with these components.
    pub fn is_natural(&self, f: &GroupoidFunctor, g: &GroupoidFunctor) -> Result<bool> {
        if f.objects != g.objects || self.comps.len() != f.objects.len() {
            return Ok(false);
        }
        for (a, &b) in f.objects.iter().enumerate() {
            let ga = f.source.aut(a as u32).require("naturality")?;
            let gb = f.target.aut(b).require("naturality")?;
            let t = self.comps[a];
            for &alpha in ga.generators() {
                let lhs = gb.mul(g.hom(a as u32, alpha)?, t);
                let rhs = gb.mul(t, f.hom(a as u32, alpha)?);
                if lhs != rhs {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}
