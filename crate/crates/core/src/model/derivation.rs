use super::value::Value;
use crate::span::SourceSpan;

/// A proof object: the conclusion of one successfully applied rule and the
/// evidence for each of its premises, in premise order.
#[derive(Debug, Clone)]
pub struct DerivationTree {
    pub system: String,
    pub rule_label: String,
    pub rule_span: SourceSpan,
    pub antecedent: Option<Value>,
    pub initial: Value,
    pub result: Value,
    pub children: Vec<DerivationChild>,
    /// Rules tried and abandoned at this node before the successful one.
    pub abandoned: Vec<TraceEntry>,
}

#[derive(Debug, Clone)]
pub enum DerivationChild {
    SubTree(DerivationTree),
    SideConditionHeld(String),
    LocalBound(String, Value),
}

impl DerivationTree {
    pub fn subtrees(&self) -> impl Iterator<Item = &DerivationTree> {
        self.children.iter().filter_map(|c| match c {
            DerivationChild::SubTree(t) => Some(t),
            _ => None,
        })
    }

    /// An axiom instance: no transition premises were needed.
    pub fn is_axiom(&self) -> bool {
        self.subtrees().next().is_none()
    }

    pub fn node_count(&self) -> usize {
        1 + self.subtrees().map(DerivationTree::node_count).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.subtrees().map(DerivationTree::depth).max().unwrap_or(0)
    }

    /// Every rule attempt made while building this node, ending with the
    /// successful one.
    pub fn trace(&self) -> Vec<TraceEntry> {
        let mut entries = self.abandoned.clone();
        let premises = self
            .children
            .iter()
            .enumerate()
            .filter_map(|(index, c)| match c {
                DerivationChild::SubTree(t) => Some(PremiseTrace {
                    index,
                    attempts: t.trace(),
                }),
                _ => None,
            })
            .collect();
        entries.push(TraceEntry {
            system: self.system.clone(),
            rule_label: self.rule_label.clone(),
            span: self.rule_span.clone(),
            outcome: Outcome::Succeeded,
            premises,
        });
        entries
    }
}

/// One attempted rule application.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceEntry {
    pub system: String,
    pub rule_label: String,
    pub span: SourceSpan,
    pub outcome: Outcome,
    /// Sub-derivations attempted for transition premises of this rule.
    pub premises: Vec<PremiseTrace>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PremiseTrace {
    /// Zero-based premise position within the rule.
    pub index: usize,
    pub attempts: Vec<TraceEntry>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    PatternMismatch,
    PremiseFailed { index: usize, cause: PremiseFailure },
    SideConditionFalse { index: usize },
    Succeeded,
    /// The conclusion could not be evaluated; the whole evaluation stops.
    Aborted(String),
}

#[derive(Debug, Clone, PartialEq)]
pub enum PremiseFailure {
    NoRuleApplies,
    ResultMismatch,
    LocalMismatch,
    RuntimeError(String),
    FuelExhausted,
}

impl TraceEntry {
    pub fn succeeded(&self) -> bool {
        self.outcome == Outcome::Succeeded
    }
}

// Failed traces can nest as deep as the fuel limit, so drop them without
// recursion.
impl Drop for TraceEntry {
    fn drop(&mut self) {
        let mut pending: Vec<TraceEntry> = Vec::new();
        for p in self.premises.drain(..) {
            pending.extend(p.attempts);
        }
        while let Some(mut e) = pending.pop() {
            for p in e.premises.drain(..) {
                pending.extend(p.attempts);
            }
        }
    }
}

impl Drop for DerivationTree {
    fn drop(&mut self) {
        let mut pending: Vec<DerivationTree> = Vec::new();
        for c in self.children.drain(..) {
            if let DerivationChild::SubTree(t) = c {
                pending.push(t);
            }
        }
        while let Some(mut t) = pending.pop() {
            for c in t.children.drain(..) {
                if let DerivationChild::SubTree(s) = c {
                    pending.push(s);
                }
            }
        }
    }
}
