//! The Waldhausen construction `S_n` on flags, its extension `S^ext` to
//! subcomplexes of a simplex, the 2-Segal squares, polygonal fiber products
//! and the correspondence cubes of the associativity cubes.
//!
//! Every groupoid is truncated by the total dimension of the underlying
//! object (the sum of all block dimensions). Restriction functors never
//! increase it, so truncated diagrams compute the truncation of the true
//! limits.

mod corr0;
mod ext;
mod segal;

use std::sync::Arc;

pub use corr0::{
    corr0_negative_control, corr0_pipeline, correspondence_cube, negative_control_cube, ConditionMatch, CornerCheck,
    Corr0Report, ExtCorrCube, FaceReduction,
};
pub use ext::{path_witness, ExtGroupoid, ExtMap};
pub use segal::{
    polygonal_fiber_product, segal_square, slice_decomposition, spine_groupoid, two_segal_condition, GradeResult,
    PolygonalProduct, SegalReport, SegalSquare, SliceDecomposition,
};

use crate::error::{HallError, Result};
use crate::fincat::CategorySpec;
use crate::par::Execution;
use crate::simpset::SubComplex;

/// Largest `n` for which `S_n` is built.
pub const MAX_LEVEL: usize = 5;

/// `S_n` truncated at total dimension `bound`; components are iso classes
/// of flags of length `n`, graded by their block dimensions.
pub fn waldhausen_groupoid(spec: &CategorySpec, n: usize, bound: usize, exec: Execution) -> Result<Arc<ExtGroupoid>> {
    if n > MAX_LEVEL {
        return Err(HallError::BoundExceeded(format!("S_{n}: levels above {MAX_LEVEL} are not built")));
    }
    s_ext(spec, &SubComplex::full(n)?, bound, exec)
}

/// `S^ext(K)` truncated at total dimension `bound`.
pub fn s_ext(spec: &CategorySpec, complex: &SubComplex, bound: usize, exec: Execution) -> Result<Arc<ExtGroupoid>> {
    Ok(Arc::new(ExtGroupoid::new(spec, complex, bound, exec)?))
}

/// `S_n -> S_{|I|-1}`, keeping the quotients `V_j / V_{min I}` for `j in I`.
pub fn restriction_functor(
    source: &Arc<ExtGroupoid>,
    target: &Arc<ExtGroupoid>,
    subset: &[usize],
    exec: Execution,
) -> Result<ExtMap> {
    if subset.is_empty() {
        return Err(HallError::InvalidArgument("restriction to the empty vertex set".into()));
    }
    ExtMap::restriction(source, target, subset, exec)
}

#[cfg(test)]
mod tests;
