use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::Serialize;

use super::element::{pull, push, sort_key, HallElement};
use crate::error::{HallError, Result};
use crate::fincat::CategorySpec;
use crate::groupoid::SkeletalGroupoid;
use crate::par::Execution;
use crate::qlinalg::{gl_order_poly, parabolic_order_poly, QPolynomial};
use crate::waldhausen::{waldhausen_groupoid, ExtGroupoid, ExtMap};

/// The Hall algebra of a category truncated at total dimension `bound`:
/// functions on `S_1` with the product `mid_! end^*` through `S_2`.
type Row = (u32, u32, u32, String);

pub struct HallAlgebra {
    spec: CategorySpec,
    bound: usize,
    exec: Execution,
    s1: Arc<ExtGroupoid>,
    s2: Arc<ExtGroupoid>,
    sub: ExtMap,
    quotient: ExtMap,
    mid: ExtMap,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableEntry {
    pub u: String,
    pub w: String,
    pub v: String,
    pub coeff: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StructureTable {
    pub category: String,
    pub q: usize,
    pub bound: usize,
    pub entries: Vec<TableEntry>,
}

impl HallAlgebra {
    pub fn new(spec: &CategorySpec, bound: usize, exec: Execution) -> Result<Self> {
        let s1 = waldhausen_groupoid(spec, 1, bound, exec)?;
        let s2 = waldhausen_groupoid(spec, 2, bound, exec)?;
        let sub = ExtMap::restriction(&s2, &s1, &[0, 1], exec)?;
        let quotient = ExtMap::restriction(&s2, &s1, &[1, 2], exec)?;
        let mid = ExtMap::restriction(&s2, &s1, &[0, 2], exec)?;
        Ok(HallAlgebra { spec: spec.clone(), bound, exec, s1, s2, sub, quotient, mid })
    }

    pub fn spec(&self) -> &CategorySpec {
        &self.spec
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn space(&self) -> &Arc<SkeletalGroupoid> {
        self.s1.groupoid()
    }

    pub fn s1(&self) -> &Arc<ExtGroupoid> {
        &self.s1
    }

    pub fn s2(&self) -> &Arc<ExtGroupoid> {
        &self.s2
    }

    /// `S_2 -> S_1` keeping `U`, `W` and `V` of `0 -> U -> V -> W -> 0`.
    pub fn legs(&self) -> (&ExtMap, &ExtMap, &ExtMap) {
        (&self.sub, &self.quotient, &self.mid)
    }

    /// Component with the given label; a bare dimension such as `2` is read as `[2]`.
    pub fn class(&self, label: &str) -> Result<u32> {
        let g = self.space();
        g.find(label).or_else(|| g.find(&format!("[{label}]"))).ok_or_else(|| {
            HallError::InvalidArgument(format!(
                "no class {label} in {} up to dimension {}",
                self.spec.name(),
                self.bound
            ))
        })
    }

    pub fn delta(&self, c: u32) -> Result<HallElement> {
        HallElement::delta(self.space().clone(), c)
    }

    pub fn delta_of(&self, label: &str) -> Result<HallElement> {
        self.delta(self.class(label)?)
    }

    /// `delta` of the zero object.
    pub fn unit(&self) -> HallElement {
        let z = (0..self.s1.len() as u32).find(|&c| self.s1.ambient_dims(c).iter().all(|&d| d == 0)).unwrap();
        HallElement::delta(self.space().clone(), z).unwrap()
    }

    pub fn product(&self, f: &HallElement, g: &HallElement) -> Result<HallElement> {
        if f.degree() + g.degree() > self.bound {
            return Err(HallError::BoundExceeded(format!(
                "product of degrees {} and {} exceeds the bound {}",
                f.degree(),
                g.degree(),
                self.bound
            )));
        }
        let pulled = pull(f, &self.sub.functor)?.pointwise(&pull(g, &self.quotient.functor)?)?;
        push(&pulled, &self.mid.functor)
    }

    /// `delta_u . delta_w` for every pair of classes whose degrees fit.
    pub fn table(&self) -> Result<StructureTable> {
        let g = self.space();
        let n = g.len() as u32;
        let pairs: Vec<(u32, u32)> = (0..n)
            .flat_map(|u| (0..n).map(move |w| (u, w)))
            .filter(|&(u, w)| {
                self.s1.ambient_dims(u).iter().sum::<usize>() + self.s1.ambient_dims(w).iter().sum::<usize>()
                    <= self.bound
            })
            .collect();
        let rows: Vec<Result<Vec<Row>>> = self.exec.map(&pairs, |&(u, w)| {
            let p = self.product(&self.delta(u)?, &self.delta(w)?)?;
            Ok(p.terms().map(|(v, c)| (u, w, v, c.to_string())).collect())
        });
        let mut all = Vec::new();
        for r in rows {
            all.extend(r?);
        }
        all.sort_by_key(|(u, w, v, _)| (sort_key(g, *u), sort_key(g, *w), sort_key(g, *v)));
        let label = |c: u32| g.components[c as usize].label.clone();
        Ok(StructureTable {
            category: self.spec.name(),
            q: self.spec.field.order(),
            bound: self.bound,
            entries: all
                .into_iter()
                .map(|(u, w, v, coeff)| TableEntry { u: label(u), w: label(w), v: label(v), coeff })
                .collect(),
        })
    }
}

pub fn hall_product(algebra: &HallAlgebra, f: &HallElement, g: &HallElement) -> Result<HallElement> {
    algebra.product(f, g)
}

/// Hall algebra of `Vect` with coefficients in `Z[q]`, on the basis
/// `delta_[n]`. The structure constant is `|GL_{n+m}| / |P_{n,m}|`: one
/// flag class per grade, pushed with the parabolic stabilizer weight.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SymbolicVect {
    pub coeffs: BTreeMap<usize, QPolynomial>,
}

impl SymbolicVect {
    pub fn delta(n: usize) -> Self {
        SymbolicVect { coeffs: BTreeMap::from([(n, QPolynomial::one())]) }
    }

    pub fn structure_constant(n: usize, m: usize) -> QPolynomial {
        gl_order_poly(n + m).div_exact(&parabolic_order_poly(&[n, m])).expect("parabolic order divides GL order")
    }

    pub fn product(&self, other: &SymbolicVect) -> SymbolicVect {
        let mut out: BTreeMap<usize, QPolynomial> = BTreeMap::new();
        for (&n, a) in &self.coeffs {
            for (&m, b) in &other.coeffs {
                let term = &(a * b) * &Self::structure_constant(n, m);
                let slot = out.entry(n + m).or_insert_with(QPolynomial::zero);
                *slot = &*slot + &term;
            }
        }
        out.retain(|_, c| !c.is_zero());
        SymbolicVect { coeffs: out }
    }

    pub fn eval(&self, q: u64) -> BTreeMap<usize, BigInt> {
        self.coeffs.iter().map(|(&n, c)| (n, c.eval(&BigInt::from(q)))).collect()
    }
}
