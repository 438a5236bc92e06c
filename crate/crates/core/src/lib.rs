//! Hall algebras of finitary categories over small finite fields, computed
//! through the Waldhausen S-construction on finite groupoids.
//!
//! The crate is layered bottom-up:
//!
//! * [`qlinalg`]: finite fields, matrices, subspaces, q-analogs, matrix groups.
//! * [`fincat`]: vector spaces, quiver representations and slice categories,
//!   modelled as action groupoids of flag data.
//! * [`simpset`]: subcomplexes of simplices, the augmented simplex category
//!   and the combinatorial correspondence grids of associativity cubes.
//! * [`groupoid`]: skeletal finite groupoids, homotopy fiber products and
//!   pullback squares/cubes.
//! * [`waldhausen`]: the groupoids `S_n`, their extension to subcomplexes and
//!   the 2-Segal checks.
//! * [`hall`]: the push/pull transfer to finitely supported functions.

pub mod cli;
pub mod error;
pub mod fincat;
pub mod groupoid;
pub mod hall;
pub mod par;
pub mod qlinalg;
pub mod simpset;
pub mod waldhausen;

pub use error::{HallError, Result};
