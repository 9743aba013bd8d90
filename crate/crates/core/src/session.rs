//! REPL state: an accumulated specification that is re-checked after every
//! definition. Rejected input leaves the state untouched.

use std::collections::HashSet;
use std::path::{Path, PathBuf};

use crate::analysis::{check_specification, TypedSpecification};
use crate::diag::Diagnostic;
use crate::eval::{Derivation, DeriveError, EvaluationResult, Fuel, Interpreter};
use crate::frontend::{parse_repl_input, parse_source, ReplCommand, ReplItem};
use crate::model::*;
use crate::texgen::{emit_latex, TexOptions};

pub const HELP: &str = "\
Enter a definition (domain, syntax, let, system) or `evaluate ... in System`.
Commands:
  :load <file>   merge the definitions of a file and run its evaluations
  :latex <file>  write the current specification as LaTeX to <file>.tex
  :help          show this message
  :quit          leave the REPL";

pub enum Reply {
    Nothing,
    Quit,
    Help,
    /// More input is needed to complete the entry.
    Incomplete,
    Defined {
        name: String,
        warnings: Vec<Diagnostic>,
    },
    Evaluated(Box<Result<Derivation, DeriveError>>),
    Loaded {
        path: PathBuf,
        warnings: Vec<Diagnostic>,
        results: Vec<EvaluationResult>,
    },
    LatexWritten(PathBuf),
    Rejected(Vec<Diagnostic>),
    Failed(String),
}

pub struct Session {
    checked: TypedSpecification,
    pub fuel: Fuel,
}

impl Default for Session {
    fn default() -> Session {
        Session::new()
    }
}

impl Session {
    pub fn new() -> Session {
        let checked = check_specification(&Specification::default())
            .expect("the empty specification is well-formed");
        Session {
            checked,
            fuel: Fuel::default(),
        }
    }

    pub fn specification(&self) -> &TypedSpecification {
        &self.checked
    }

    /// Handles one complete entry of (possibly multi-line) input.
    pub fn feed(&mut self, input: &str) -> Reply {
        let (item, parse_warnings) = match parse_repl_input(input) {
            Ok(x) => x,
            Err(e) if e.incomplete => return Reply::Incomplete,
            Err(e) => return Reply::Rejected(e.diagnostics),
        };
        match item {
            ReplItem::Empty => Reply::Nothing,
            ReplItem::Command(ReplCommand::Quit) => Reply::Quit,
            ReplItem::Command(ReplCommand::Help) => Reply::Help,
            ReplItem::Command(ReplCommand::Load(path)) => self.load(&path),
            ReplItem::Command(ReplCommand::Latex(path)) => {
                let path = path.with_extension("tex");
                let tex = emit_latex(&self.checked, TexOptions::default());
                match std::fs::write(&path, tex) {
                    Ok(()) => Reply::LatexWritten(path),
                    Err(e) => Reply::Failed(format!("cannot write {}: {e}", path.display())),
                }
            }
            ReplItem::Definition(def) => {
                let name = def.name().to_string();
                let mut spec = self.checked.spec.clone();
                spec.push(def);
                match self.commit(spec, parse_warnings) {
                    Ok(warnings) => Reply::Defined { name, warnings },
                    Err(reply) => reply,
                }
            }
            ReplItem::Evaluation(ev) => match self.checked.check_evaluation(ev) {
                Ok(ev) => match Interpreter::new(&self.checked) {
                    Ok(interp) => Reply::Evaluated(Box::new(interp.run(&ev, self.fuel))),
                    Err(e) => Reply::Failed(e.to_string()),
                },
                Err(diags) => Reply::Rejected(diags),
            },
        }
    }

    fn load(&mut self, path: &Path) -> Reply {
        let src = match std::fs::read_to_string(path) {
            Ok(s) => s,
            Err(e) => return Reply::Failed(format!("cannot read {}: {e}", path.display())),
        };
        let parsed = match parse_source(&src, &path.display().to_string()) {
            Ok(p) => p,
            Err(diags) => return Reply::Rejected(diags),
        };
        let mut file_spec = parsed.spec;
        let evaluations = std::mem::take(&mut file_spec.evaluations);
        let mut spec = self.checked.spec.clone();
        spec.extend(file_spec);
        let warnings = match self.commit(spec, parsed.warnings) {
            Ok(w) => w,
            Err(reply) => return reply,
        };
        let mut results = Vec::new();
        let mut rejected = Vec::new();
        for ev in evaluations {
            match self.checked.check_evaluation(ev.clone()) {
                Ok(ev) => results.push(ev),
                Err(diags) => rejected.extend(diags),
            }
        }
        if !rejected.is_empty() {
            return Reply::Rejected(rejected);
        }
        let interp = match Interpreter::new(&self.checked) {
            Ok(i) => i,
            Err(e) => return Reply::Failed(e.to_string()),
        };
        let results = results
            .into_iter()
            .map(|ev| EvaluationResult {
                outcome: interp.run(&ev, self.fuel),
                evaluation: ev,
            })
            .collect();
        Reply::Loaded {
            path: path.to_path_buf(),
            warnings,
            results,
        }
    }

    /// Checks `spec` and makes it current if it is accepted and its
    /// let-bindings evaluate. Returns the warnings that are new.
    fn commit(&mut self, spec: Specification, mut warnings: Vec<Diagnostic>) -> Result<Vec<Diagnostic>, Reply> {
        let checked = check_specification(&spec).map_err(Reply::Rejected)?;
        if let Err(e) = Interpreter::new(&checked) {
            return Err(Reply::Failed(e.to_string()));
        }
        let old: HashSet<String> = self.checked.warnings.iter().map(|d| d.to_string()).collect();
        warnings.extend(
            checked
                .warnings
                .iter()
                .filter(|d| !old.contains(&d.to_string()))
                .cloned(),
        );
        self.checked = checked;
        Ok(warnings)
    }
}
