use std::fmt;

use super::derive::{derive, Derivation, DeriveError, Fuel};
use super::expr::eval_expr;
use crate::analysis::TypedSpecification;
use crate::model::*;
use crate::span::SourceSpan;

/// A let-binding whose right-hand side failed to evaluate.
#[derive(Debug, Clone, PartialEq)]
pub struct LetFailure {
    pub name: String,
    pub span: SourceSpan,
    pub error: RuntimeError,
}

impl fmt::Display for LetFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: error: in `let {}`: {}", self.span, self.name, self.error)
    }
}

impl std::error::Error for LetFailure {}

/// A checked specification with its let-bindings evaluated.
pub struct Interpreter<'a> {
    tspec: &'a TypedSpecification,
    globals: Env,
}

impl<'a> Interpreter<'a> {
    /// Evaluates the let-bindings once, in declaration order.
    pub fn new(tspec: &'a TypedSpecification) -> Result<Interpreter<'a>, LetFailure> {
        let mut globals = Env::new();
        for l in &tspec.spec.lets {
            let v = eval_expr(&globals, &l.value).map_err(|error| LetFailure {
                name: l.name.clone(),
                span: l.span.clone(),
                error,
            })?;
            globals = globals.extend(l.name.clone(), v);
        }
        Ok(Interpreter { tspec, globals })
    }

    pub fn globals(&self) -> &Env {
        &self.globals
    }

    pub fn eval(&self, e: &Expr) -> Result<Value, RuntimeError> {
        eval_expr(&self.globals, e)
    }

    pub fn derive(
        &self,
        system: &str,
        antecedent: Option<Value>,
        initial: Value,
        fuel: Fuel,
    ) -> Result<Derivation, DeriveError> {
        derive(self.tspec, &self.globals, system, antecedent, initial, fuel)
    }

    /// Runs one (checked) `evaluate` directive.
    pub fn run(&self, ev: &Evaluation, fuel: Fuel) -> Result<Derivation, DeriveError> {
        let inputs = ev
            .antecedent
            .as_ref()
            .map(|a| self.eval(a))
            .transpose()
            .and_then(|a| Ok((a, self.eval(&ev.initial)?)));
        match inputs {
            Ok((a, v)) => self.derive(&ev.system, a, v, fuel),
            Err(error) => Err(DeriveError::Runtime {
                error,
                trace: Vec::new(),
            }),
        }
    }
}

pub struct EvaluationResult {
    pub evaluation: Evaluation,
    pub outcome: Result<Derivation, DeriveError>,
}

/// Evaluates the lets, then every `evaluate` directive independently.
pub fn run_evaluations(
    tspec: &TypedSpecification,
    fuel: Fuel,
) -> Result<Vec<EvaluationResult>, LetFailure> {
    let interp = Interpreter::new(tspec)?;
    Ok(tspec
        .spec
        .evaluations
        .iter()
        .map(|ev| EvaluationResult {
            evaluation: ev.clone(),
            outcome: interp.run(ev, fuel),
        })
        .collect())
}
