use std::fmt;

use super::expr::eval_expr;
use super::matching::match_pattern;
use crate::analysis::TypedSpecification;
use crate::model::*;

const RED_ZONE: usize = 128 * 1024;
const STACK_CHUNK: usize = 4 * 1024 * 1024;

/// Maximum number of rule attempts for one evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fuel(pub u64);

impl Default for Fuel {
    fn default() -> Fuel {
        Fuel(10_000)
    }
}

#[derive(Debug, Clone)]
pub struct Derivation {
    pub value: Value,
    pub tree: DerivationTree,
    pub fuel_used: u64,
}

#[derive(Debug, Clone)]
pub enum DeriveError {
    NoRuleApplies {
        system: String,
        trace: Vec<TraceEntry>,
    },
    FuelExhausted {
        limit: Fuel,
        trace: Vec<TraceEntry>,
    },
    Runtime {
        error: RuntimeError,
        trace: Vec<TraceEntry>,
    },
}

impl DeriveError {
    pub fn trace(&self) -> &[TraceEntry] {
        match self {
            DeriveError::NoRuleApplies { trace, .. }
            | DeriveError::FuelExhausted { trace, .. }
            | DeriveError::Runtime { trace, .. } => trace,
        }
    }
}

impl fmt::Display for DeriveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DeriveError::NoRuleApplies { system, .. } => {
                write!(f, "no rule of system `{system}` applies")
            }
            DeriveError::FuelExhausted { limit, .. } => {
                write!(f, "fuel exhausted after {} rule applications", limit.0)
            }
            DeriveError::Runtime { error, .. } => write!(f, "runtime error: {error}"),
        }
    }
}

impl std::error::Error for DeriveError {}

enum Failure {
    NoRuleApplies,
    FuelExhausted,
    Runtime(RuntimeError),
}

struct NodeFailure {
    kind: Failure,
    attempts: Vec<TraceEntry>,
}

enum Attempt {
    Success(DerivationTree),
    Failed(TraceEntry),
    Abort(Failure, TraceEntry),
}

struct Engine<'a> {
    tspec: &'a TypedSpecification,
    globals: &'a Env,
    remaining: u64,
}

/// Builds a derivation for `antecedent |- initial` in `system`, trying rules
/// in declaration order and backtracking on failure.
pub fn derive(
    tspec: &TypedSpecification,
    globals: &Env,
    system: &str,
    antecedent: Option<Value>,
    initial: Value,
    fuel: Fuel,
) -> Result<Derivation, DeriveError> {
    let mut engine = Engine {
        tspec,
        globals,
        remaining: fuel.0,
    };
    match engine.node(system, antecedent, initial) {
        Ok(tree) => Ok(Derivation {
            value: tree.result.clone(),
            tree,
            fuel_used: fuel.0 - engine.remaining,
        }),
        Err(NodeFailure { kind, attempts }) => Err(match kind {
            Failure::NoRuleApplies => DeriveError::NoRuleApplies {
                system: system.to_string(),
                trace: attempts,
            },
            Failure::FuelExhausted => DeriveError::FuelExhausted {
                limit: fuel,
                trace: attempts,
            },
            Failure::Runtime(error) => DeriveError::Runtime {
                error,
                trace: attempts,
            },
        }),
    }
}

impl Engine<'_> {
    fn node(
        &mut self,
        system: &str,
        antecedent: Option<Value>,
        initial: Value,
    ) -> Result<DerivationTree, NodeFailure> {
        stacker::maybe_grow(RED_ZONE, STACK_CHUNK, || {
            self.node_inner(system, antecedent, initial)
        })
    }

    fn node_inner(
        &mut self,
        system: &str,
        antecedent: Option<Value>,
        initial: Value,
    ) -> Result<DerivationTree, NodeFailure> {
        let Some(sys) = self.tspec.spec.system(system) else {
            return Err(NodeFailure {
                kind: Failure::Runtime(RuntimeError::IllTyped(format!(
                    "unknown system `{system}`"
                ))),
                attempts: Vec::new(),
            });
        };
        let mut attempts = Vec::new();
        for rule in &sys.rules {
            if self.remaining == 0 {
                return Err(NodeFailure {
                    kind: Failure::FuelExhausted,
                    attempts,
                });
            }
            self.remaining -= 1;
            match self.try_rule(sys, rule, antecedent.as_ref(), &initial) {
                Attempt::Success(mut tree) => {
                    tree.abandoned = attempts;
                    return Ok(tree);
                }
                Attempt::Failed(entry) => attempts.push(entry),
                Attempt::Abort(kind, entry) => {
                    attempts.push(entry);
                    return Err(NodeFailure { kind, attempts });
                }
            }
        }
        Err(NodeFailure {
            kind: Failure::NoRuleApplies,
            attempts,
        })
    }

    fn try_rule(
        &mut self,
        sys: &TransitionSystem,
        rule: &Rule,
        antecedent: Option<&Value>,
        initial: &Value,
    ) -> Attempt {
        let entry = |outcome: Outcome, premises: Vec<PremiseTrace>| TraceEntry {
            system: sys.name.clone(),
            rule_label: rule.label.clone(),
            span: rule.span.clone(),
            outcome,
            premises,
        };
        let aborted = |e: RuntimeError, premises: Vec<PremiseTrace>| {
            Attempt::Abort(
                Failure::Runtime(e.clone()),
                entry(Outcome::Aborted(e.to_string()), premises),
            )
        };

        let mut bindings = Bindings::new();
        let head = match (&rule.antecedent, antecedent) {
            (Some(p), Some(v)) => match_pattern(p, v, &mut bindings),
            (None, _) => Ok(true),
            (Some(_), None) => Ok(false),
        }
        .and_then(|ok| Ok(ok && match_pattern(&rule.initial, initial, &mut bindings)?));
        match head {
            Ok(true) => {}
            Ok(false) => return Attempt::Failed(entry(Outcome::PatternMismatch, Vec::new())),
            Err(e) => return aborted(e, Vec::new()),
        }

        let mut children: Vec<DerivationChild> = Vec::new();
        // Traces of the premises that succeeded so far, built only when the
        // rule ends up failing.
        let done = |children: &[DerivationChild]| -> Vec<PremiseTrace> {
            children
                .iter()
                .enumerate()
                .filter_map(|(index, c)| match c {
                    DerivationChild::SubTree(t) => Some(PremiseTrace {
                        index,
                        attempts: t.trace(),
                    }),
                    _ => None,
                })
                .collect()
        };
        let premise_failed = |index: usize, cause: PremiseFailure| Outcome::PremiseFailed { index, cause };

        for (index, premise) in rule.premises.iter().enumerate() {
            let env = self.globals.extend_all(&bindings);
            match premise {
                Premise::Transition {
                    target,
                    antecedent,
                    initial,
                    result,
                    ..
                } => {
                    let inputs = antecedent
                        .as_ref()
                        .map(|a| eval_expr(&env, a))
                        .transpose()
                        .and_then(|a| Ok((a, eval_expr(&env, initial)?)));
                    let (a, v) = match inputs {
                        Ok(x) => x,
                        Err(e @ RuntimeError::BottomEvaluated { .. }) => {
                            let outcome =
                                premise_failed(index, PremiseFailure::RuntimeError(e.to_string()));
                            return Attempt::Failed(entry(outcome, done(&children)));
                        }
                        Err(e) => return aborted(e, done(&children)),
                    };
                    match self.node(target, a, v) {
                        Ok(tree) => match match_pattern(result, &tree.result, &mut bindings) {
                            Ok(true) => children.push(DerivationChild::SubTree(tree)),
                            Ok(false) => {
                                let mut premises = done(&children);
                                premises.push(PremiseTrace {
                                    index,
                                    attempts: tree.trace(),
                                });
                                let outcome = premise_failed(index, PremiseFailure::ResultMismatch);
                                return Attempt::Failed(entry(outcome, premises));
                            }
                            Err(e) => return aborted(e, done(&children)),
                        },
                        Err(NodeFailure { kind, attempts }) => {
                            let mut premises = done(&children);
                            premises.push(PremiseTrace { index, attempts });
                            return match kind {
                                Failure::NoRuleApplies => Attempt::Failed(entry(
                                    premise_failed(index, PremiseFailure::NoRuleApplies),
                                    premises,
                                )),
                                Failure::FuelExhausted => Attempt::Abort(
                                    Failure::FuelExhausted,
                                    entry(premise_failed(index, PremiseFailure::FuelExhausted), premises),
                                ),
                                Failure::Runtime(e) => {
                                    let outcome = premise_failed(
                                        index,
                                        PremiseFailure::RuntimeError(e.to_string()),
                                    );
                                    Attempt::Abort(Failure::Runtime(e), entry(outcome, premises))
                                }
                            };
                        }
                    }
                }
                Premise::SideCondition { cond, .. } => match eval_expr(&env, cond) {
                    Ok(Value::Bool(true)) => {
                        children.push(DerivationChild::SideConditionHeld(cond.to_string()))
                    }
                    Ok(Value::Bool(false)) => {
                        return Attempt::Failed(entry(
                            Outcome::SideConditionFalse { index },
                            done(&children),
                        ))
                    }
                    Ok(other) => {
                        let e = RuntimeError::IllTyped(format!("side condition yielded {other}"));
                        return aborted(e, done(&children));
                    }
                    Err(e @ RuntimeError::BottomEvaluated { .. }) => {
                        let outcome = premise_failed(index, PremiseFailure::RuntimeError(e.to_string()));
                        return Attempt::Failed(entry(outcome, done(&children)));
                    }
                    Err(e) => return aborted(e, done(&children)),
                },
                Premise::Local { pattern, value, .. } => {
                    let matched = eval_expr(&env, value)
                        .and_then(|v| Ok(match_pattern(pattern, &v, &mut bindings)?.then_some(v)));
                    match matched {
                        Ok(Some(v)) => children.push(DerivationChild::LocalBound(pattern.to_string(), v)),
                        Ok(None) => {
                            let outcome = premise_failed(index, PremiseFailure::LocalMismatch);
                            return Attempt::Failed(entry(outcome, done(&children)));
                        }
                        Err(e @ RuntimeError::BottomEvaluated { .. }) => {
                            let outcome =
                                premise_failed(index, PremiseFailure::RuntimeError(e.to_string()));
                            return Attempt::Failed(entry(outcome, done(&children)));
                        }
                        Err(e) => return aborted(e, done(&children)),
                    }
                }
            }
        }

        let env = self.globals.extend_all(&bindings);
        match eval_expr(&env, &rule.result) {
            Ok(result) => Attempt::Success(DerivationTree {
                system: sys.name.clone(),
                rule_label: rule.label.clone(),
                rule_span: rule.span.clone(),
                antecedent: antecedent.cloned(),
                initial: initial.clone(),
                result,
                children,
                abandoned: Vec::new(),
            }),
            Err(e) => aborted(e, done(&children)),
        }
    }
}
