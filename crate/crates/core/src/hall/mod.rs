//! Finitely supported functions on groupoids of objects, pull and push
//! along functors, and the Hall algebra and module they produce.
//!
//! Push-forward along `F: Y -> Z` weights a component `y` by
//! `|Aut F(y)| / |Aut y|`, the groupoid cardinality of its homotopy fiber
//! contribution. With this weight the product `delta_U . delta_W` counts
//! subobjects `U' ⊆ V` with `U' ≅ U` and `V / U' ≅ W`.

mod algebra;
mod element;
mod module;
mod oracle;
mod transfer;

pub use algebra::{hall_product, HallAlgebra, StructureTable, SymbolicVect, TableEntry};
pub use element::{pull, push, HallElement, ModuleElement};
pub use module::{module_action, HallModule};
pub use oracle::{slice_subobject_count, subobject_count_oracle};
pub use transfer::{base_change_failures, beck_chevalley_check, BeckChevalleyReport};

#[cfg(test)]
mod tests;
