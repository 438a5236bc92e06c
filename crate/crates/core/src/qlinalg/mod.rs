//! Finite-field linear algebra: the enumeration substrate for everything
//! else in the crate.

pub mod field;
pub mod group;
pub mod matrix;
pub mod qpoly;
pub mod subspace;

pub use field::{Elt, Field, FiniteField};
pub use group::{general_linear, general_linear_order, parabolic, Elem, MatrixGroup};
pub use matrix::Matrix;
pub use qpoly::{gaussian_binomial, gl_order_poly, parabolic_order_poly, QPolynomial};
pub use subspace::{enumerate_subspaces, quotient_map, Subspace};

/// `make_field(p, k)`: the field with `p^k <= 16` elements.
pub fn make_field(p: u32, k: u32) -> crate::Result<Field> {
    FiniteField::new(p, k)
}
