//! Checker and interpreter for a small metalanguage of natural semantics.
//!
//! The pipeline is [`frontend::parse_source`], then
//! [`analysis::check_specification`], then either [`eval`] or [`texgen`].

pub mod analysis;
pub mod diag;
pub mod eval;
pub mod frontend;
pub mod model;
pub mod session;
pub mod span;
pub mod texgen;

pub use analysis::{check_specification, TypedSpecification};
pub use diag::{Code, Diagnostic, Phase, Severity};
pub use eval::{run_evaluations, Derivation, DeriveError, Fuel, Interpreter};
pub use frontend::parse_source;
pub use model::*;
pub use span::SourceSpan;
