//! Specification AST, runtime values and derivation trees.

pub mod ast;
pub mod derivation;
pub mod types;
pub mod value;

pub use ast::*;
pub use derivation::*;
pub use types::*;
pub use value::*;
