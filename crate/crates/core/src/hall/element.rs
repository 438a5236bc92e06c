use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{HallError, Result};
use crate::groupoid::{GroupoidFunctor, SkeletalGroupoid};

/// A finitely supported function on the components of a groupoid, with
/// exact rational values. Zero values are never stored.
#[derive(Clone)]
pub struct HallElement {
    space: Arc<SkeletalGroupoid>,
    coeffs: BTreeMap<u32, BigRational>,
}

/// Functions on the components of `S_1` of a slice category.
pub type ModuleElement = HallElement;

fn same_space(a: &Arc<SkeletalGroupoid>, b: &Arc<SkeletalGroupoid>) -> bool {
    Arc::ptr_eq(a, b)
}

impl HallElement {
    pub fn zero(space: Arc<SkeletalGroupoid>) -> Self {
        HallElement { space, coeffs: BTreeMap::new() }
    }

    pub fn delta(space: Arc<SkeletalGroupoid>, c: u32) -> Result<Self> {
        Self::from_coeffs(space, [(c, BigRational::one())])
    }

    pub fn from_coeffs(
        space: Arc<SkeletalGroupoid>,
        coeffs: impl IntoIterator<Item = (u32, BigRational)>,
    ) -> Result<Self> {
        let mut out = Self::zero(space);
        for (c, v) in coeffs {
            if c as usize >= out.space.len() {
                return Err(HallError::InvalidArgument(format!("no component {c}")));
            }
            out.add_at(c, v);
        }
        Ok(out)
    }

    fn add_at(&mut self, c: u32, v: BigRational) {
        if v.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(c).or_insert_with(BigRational::zero);
        *slot += v;
        if slot.is_zero() {
            self.coeffs.remove(&c);
        }
    }

    pub fn space(&self) -> &Arc<SkeletalGroupoid> {
        &self.space
    }

    pub fn coeff(&self, c: u32) -> BigRational {
        self.coeffs.get(&c).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &BigRational)> {
        self.coeffs.iter().map(|(&c, v)| (c, v))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    fn check_space(&self, other: &HallElement) -> Result<()> {
        if !same_space(&self.space, &other.space) {
            return Err(HallError::DimensionMismatch("functions live on different groupoids".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &HallElement) -> Result<HallElement> {
        self.check_space(other)?;
        let mut out = self.clone();
        for (c, v) in other.terms() {
            out.add_at(c, v.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &HallElement) -> Result<HallElement> {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn scale(&self, s: &BigRational) -> HallElement {
        let mut out = Self::zero(self.space.clone());
        for (c, v) in self.terms() {
            out.add_at(c, v * s);
        }
        out
    }

    /// Pointwise product of two functions on the same groupoid.
    pub fn pointwise(&self, other: &HallElement) -> Result<HallElement> {
        self.check_space(other)?;
        let mut out = Self::zero(self.space.clone());
        for (c, v) in self.terms() {
            out.add_at(c, v * other.coeff(c));
        }
        Ok(out)
    }

    /// Largest total grade in the support (0 for the zero function).
    pub fn degree(&self) -> usize {
        self.coeffs.keys().map(|&c| self.space.components[c as usize].grade.iter().sum()).max().unwrap_or(0)
    }

    pub fn all_integral(&self) -> bool {
        self.coeffs.values().all(|v| v.is_integer())
    }

    /// `(label, value)` ordered by total grade, grade, then label.
    pub fn labelled(&self) -> Vec<(String, BigRational)> {
        let mut out: Vec<(u32, &BigRational)> = self.terms().collect();
        out.sort_by_key(|&(c, _)| sort_key(&self.space, c));
        out.into_iter().map(|(c, v)| (self.space.components[c as usize].label.clone(), v.clone())).collect()
    }
}

pub(crate) fn sort_key(space: &SkeletalGroupoid, c: u32) -> (usize, Vec<usize>, String) {
    let comp = &space.components[c as usize];
    (comp.grade.iter().sum(), comp.grade.clone(), comp.label.clone())
}

impl PartialEq for HallElement {
    fn eq(&self, other: &Self) -> bool {
        same_space(&self.space, &other.space) && self.coeffs == other.coeffs
    }
}

impl fmt::Display for HallElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> =
            self.labelled().into_iter().map(|(l, v)| if v.is_one() { l } else { format!("{v}·{l}") }).collect();
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Debug for HallElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HallElement({self})")
    }
}

/// `(F^* f)(y) = f(F(y))`.
pub fn pull(f: &HallElement, functor: &GroupoidFunctor) -> Result<HallElement> {
    if !same_space(&f.space, &functor.target) {
        return Err(HallError::DimensionMismatch("pull: function does not live on the functor's target".into()));
    }
    let mut out = HallElement::zero(functor.source.clone());
    if f.is_zero() {
        return Ok(out);
    }
    for (y, &z) in functor.objects.iter().enumerate() {
        out.add_at(y as u32, f.coeff(z));
    }
    Ok(out)
}

/// `(F_! f)(z) = sum over F(y) = z of f(y) |Aut z| / |Aut y|`.
pub fn push(f: &HallElement, functor: &GroupoidFunctor) -> Result<HallElement> {
    if !same_space(&f.space, &functor.source) {
        return Err(HallError::DimensionMismatch("push: function does not live on the functor's source".into()));
    }
    let mut out = HallElement::zero(functor.target.clone());
    for (y, v) in f.terms() {
        let z = functor.objects[y as usize];
        let w = BigRational::new(functor.target.aut(z).order().into(), functor.source.aut(y).order().into());
        out.add_at(z, v * w);
    }
    Ok(out)
}
