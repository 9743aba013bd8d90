//! Expression evaluation and derivation search.

mod derive;
mod expr;
mod matching;
mod render;
mod run;

pub use derive::{derive, Derivation, DeriveError, Fuel};
pub use expr::{apply, eval_expr};
pub use matching::match_pattern;
pub use render::{
    describe_outcome, render_outcome, render_trace, render_tree, RenderOptions, DEFAULT_TRACE_DEPTH,
};
pub use run::{run_evaluations, EvaluationResult, Interpreter, LetFailure};
