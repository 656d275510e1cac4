//! Exact homological invariants of bound quiver algebras over prime fields.

pub mod algebra;
pub mod corpus;
pub mod decompose;
pub mod error;
pub mod expr;
pub mod field;
pub mod igusa_todorov;
pub mod matrix;
pub mod module;
pub mod poly;
pub mod sample;
pub mod strat;
pub mod text;

pub use algebra::{Arrow, Path, PathAlgebra, Quiver, Relation};
pub use error::{Error, Result};
pub use field::{PrimeField, DEFAULT_PRIME};
pub use matrix::Matrix;
pub use module::{Module, ModuleMorphism};
