use std::fmt::Write;

use super::derive::{Derivation, DeriveError};
use crate::model::*;

/// Default number of nested premise levels shown by [`render_trace`].
pub const DEFAULT_TRACE_DEPTH: usize = 5;

/// One node per line, children indented by two spaces:
/// `[LABEL] antecedent |- initial ==> final`. With `show_abandoned`, rules
/// tried and abandoned at a node are listed right under it.
pub fn render_tree(tree: &DerivationTree, show_abandoned: bool) -> String {
    let mut out = String::new();
    let mut stack = vec![(tree, 0usize)];
    while let Some((node, depth)) = stack.pop() {
        let _ = write!(out, "{:indent$}[{}] ", "", node.rule_label, indent = depth * 2);
        if let Some(a) = &node.antecedent {
            let _ = write!(out, "{a} |- ");
        }
        let _ = writeln!(out, "{} ==> {}", node.initial, node.result);
        if show_abandoned {
            for e in &node.abandoned {
                let _ = writeln!(
                    out,
                    "{:indent$}abandoned [{}]: {}",
                    "",
                    e.rule_label,
                    describe_outcome(&e.outcome),
                    indent = depth * 2 + 2
                );
            }
        }
        let subs: Vec<_> = node.subtrees().collect();
        for s in subs.into_iter().rev() {
            stack.push((s, depth + 1));
        }
    }
    out
}

pub fn describe_outcome(outcome: &Outcome) -> String {
    match outcome {
        Outcome::PatternMismatch => "pattern did not match".to_string(),
        Outcome::SideConditionFalse { index } => format!("premise {} is false", index + 1),
        Outcome::Succeeded => "succeeded".to_string(),
        Outcome::Aborted(msg) => format!("aborted: {msg}"),
        Outcome::PremiseFailed { index, cause } => {
            let why = match cause {
                PremiseFailure::NoRuleApplies => "no rule applies".to_string(),
                PremiseFailure::ResultMismatch => "result did not match".to_string(),
                PremiseFailure::LocalMismatch => "binding did not match".to_string(),
                PremiseFailure::RuntimeError(msg) => msg.clone(),
                PremiseFailure::FuelExhausted => "fuel exhausted".to_string(),
            };
            format!("premise {} failed: {why}", index + 1)
        }
    }
}

/// Renders attempted rule applications, showing at most `max_depth` levels
/// of nested premises.
pub fn render_trace(entries: &[TraceEntry], max_depth: usize) -> String {
    let mut out = String::new();
    write_entries(&mut out, entries, 0, max_depth);
    out
}

fn write_entries(out: &mut String, entries: &[TraceEntry], level: usize, max_depth: usize) {
    let indent = level * 4;
    for e in entries {
        let _ = writeln!(
            out,
            "{:indent$}{}: [{}] {} ({})",
            "",
            e.system,
            e.rule_label,
            describe_outcome(&e.outcome),
            e.span
        );
        for p in &e.premises {
            if p.attempts.is_empty() {
                let _ = writeln!(out, "{:indent$}  premise {}: no rule attempted", "", p.index + 1);
                continue;
            }
            if level + 1 >= max_depth {
                let _ = writeln!(
                    out,
                    "{:indent$}  premise {}: {} attempt(s) not shown",
                    "",
                    p.index + 1,
                    p.attempts.len()
                );
                continue;
            }
            let _ = writeln!(out, "{:indent$}  premise {}:", "", p.index + 1);
            write_entries(out, &p.attempts, level + 1, max_depth);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RenderOptions {
    pub show_tree: bool,
    pub trace_depth: usize,
}

impl Default for RenderOptions {
    fn default() -> RenderOptions {
        RenderOptions {
            show_tree: false,
            trace_depth: DEFAULT_TRACE_DEPTH,
        }
    }
}

/// The printed form of one evaluation: the value (and tree) on success,
/// otherwise the error and the attempted rule applications.
pub fn render_outcome(outcome: &Result<Derivation, DeriveError>, opts: RenderOptions) -> String {
    match outcome {
        Ok(d) => {
            let mut out = format!("{}\n", d.value);
            if opts.show_tree {
                out.push_str(&render_tree(&d.tree, true));
            }
            out
        }
        Err(e) => {
            let mut out = format!("error: {e}\n");
            if !e.trace().is_empty() {
                out.push_str("attempted rules:\n");
                for line in render_trace(e.trace(), opts.trace_depth).lines() {
                    let _ = writeln!(out, "  {line}");
                }
            }
            out
        }
    }
}
