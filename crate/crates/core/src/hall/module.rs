use std::sync::Arc;

use super::algebra::HallAlgebra;
use super::element::{pull, push, HallElement, ModuleElement};
use crate::error::{HallError, Result};
use crate::fincat::{CategoryKind, CategorySpec};
use crate::groupoid::{GroupoidFunctor, SkeletalGroupoid};
use crate::par::Execution;
use crate::waldhausen::{waldhausen_groupoid, ExtGroupoid, ExtMap};

/// Functions on `S_1(Vect/V)` acted on by the Hall algebra of `Vect` through
/// `S_1(C) x S_1(C/V) <- S_2(C/V) -> S_1(C/V)` with legs `(C_01, C_12)` and `C_02`.
pub struct HallModule {
    spec: CategorySpec,
    algebra_space: Arc<SkeletalGroupoid>,
    bound: usize,
    s1: Arc<ExtGroupoid>,
    sub: GroupoidFunctor,
    quotient: ExtMap,
    mid: ExtMap,
}

impl HallModule {
    pub fn new(algebra: &HallAlgebra, target: usize, exec: Execution) -> Result<Self> {
        if algebra.spec().kind != CategoryKind::Vect {
            return Err(HallError::Unsupported(format!("modules over the Hall algebra of {}", algebra.spec().name())));
        }
        if target > algebra.spec().max_bound() {
            return Err(HallError::BoundExceeded(format!(
                "slice target of dimension {target} > {}",
                algebra.spec().max_bound()
            )));
        }
        let spec = CategorySpec { field: algebra.spec().field.clone(), kind: CategoryKind::Slice { target } };
        let bound = algebra.bound();
        let s1 = waldhausen_groupoid(&spec, 1, bound, exec)?;
        let s2 = waldhausen_groupoid(&spec, 2, bound, exec)?;
        let first = ExtMap::restriction(&s2, &s1, &[0, 1], exec)?;
        let forget = ExtMap::forget_slice(&s1, algebra.s1(), exec)?;
        let sub = first.functor.then(&forget.functor)?;
        let quotient = ExtMap::restriction(&s2, &s1, &[1, 2], exec)?;
        let mid = ExtMap::restriction(&s2, &s1, &[0, 2], exec)?;
        Ok(HallModule { spec, algebra_space: algebra.space().clone(), bound, s1, sub, quotient, mid })
    }

    pub fn spec(&self) -> &CategorySpec {
        &self.spec
    }

    pub fn space(&self) -> &Arc<SkeletalGroupoid> {
        self.s1.groupoid()
    }

    pub fn s1(&self) -> &Arc<ExtGroupoid> {
        &self.s1
    }

    /// Rank of the structure map of a class.
    pub fn rank(&self, c: u32) -> usize {
        self.s1.rep_matrices(c).first().map_or(0, |m| m[0].rank(&self.spec.field))
    }

    /// Class by label, or by `dim,zero` / `dim,<rank>`.
    pub fn class(&self, label: &str) -> Result<u32> {
        if let Some(c) = self.space().find(label) {
            return Ok(c);
        }
        let bad = || HallError::InvalidArgument(format!("no class {label} in {}", self.spec.name()));
        let (d, r) = label.split_once(',').ok_or_else(bad)?;
        let dim: usize = d.trim().parse().map_err(|_| bad())?;
        let rank: usize = match r.trim() {
            "zero" => 0,
            r => r.parse().map_err(|_| bad())?,
        };
        (0..self.s1.len() as u32).find(|&c| self.s1.ambient_dims(c)[0] == dim && self.rank(c) == rank).ok_or_else(bad)
    }

    pub fn delta(&self, c: u32) -> Result<ModuleElement> {
        HallElement::delta(self.space().clone(), c)
    }

    /// `f . m = (C_02)_! (C_01, C_12)^* (f ⊠ m)`.
    pub fn act(&self, f: &HallElement, m: &ModuleElement) -> Result<ModuleElement> {
        if !Arc::ptr_eq(f.space(), &self.algebra_space) {
            return Err(HallError::DimensionMismatch("acting element is not in this module's algebra".into()));
        }
        if f.degree() + m.degree() > self.bound {
            return Err(HallError::BoundExceeded(format!(
                "action of degree {} on degree {} exceeds the bound {}",
                f.degree(),
                m.degree(),
                self.bound
            )));
        }
        let pulled = pull(f, &self.sub)?.pointwise(&pull(m, &self.quotient.functor)?)?;
        push(&pulled, &self.mid.functor)
    }
}

pub fn module_action(module: &HallModule, f: &HallElement, m: &ModuleElement) -> Result<ModuleElement> {
    module.act(f, m)
}
