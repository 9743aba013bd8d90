use std::fmt;

use crate::span::SourceSpan;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phase {
    Parse,
    Domain,
    Type,
    Runtime,
}

/// Machine-readable category of a diagnostic. Tests and tooling match on
/// this rather than on message text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Code {
    LexError,
    ParseError,
    NotAPattern,
    SymbolQuote,
    DuplicateDefinition,
    FreeDomainVariable,
    RecursiveAlias,
    DuplicateConstructor,
    AmbiguousBareProduction,
    EmptySyntax,
    NoSuchProduction,
    TypeMismatch,
    NotAFunction,
    UpdateOnNonBasicParameter,
    UnknownVariable,
    UnknownConstructor,
    UnknownSystem,
    PatternArityMismatch,
    NonLinearPattern,
    AntecedentArityMismatch,
    UnsupportedEquality,
    DuplicateRuleLabel,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Note {
    pub message: String,
    pub span: Option<SourceSpan>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub phase: Phase,
    pub code: Code,
    pub message: String,
    pub span: SourceSpan,
    pub notes: Vec<Note>,
}

impl Diagnostic {
    pub fn error(phase: Phase, code: Code, span: SourceSpan, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Error,
            phase,
            code,
            message: message.into(),
            span,
            notes: Vec::new(),
        }
    }

    pub fn warning(phase: Phase, code: Code, span: SourceSpan, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Warning,
            ..Diagnostic::error(phase, code, span, message)
        }
    }

    pub fn with_note(mut self, message: impl Into<String>, span: Option<SourceSpan>) -> Self {
        self.notes.push(Note {
            message: message.into(),
            span,
        });
        self
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

/// Renders as `file:line:col: error: message`, followed by one indented
/// line per note.
impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{}: {}: {}", self.span, sev, self.message)?;
        for note in &self.notes {
            match &note.span {
                Some(span) => write!(f, "\n  {}: note: {}", span, note.message)?,
                None => write!(f, "\n  note: {}", note.message)?,
            }
        }
        Ok(())
    }
}

pub fn has_errors(diags: &[Diagnostic]) -> bool {
    diags.iter().any(Diagnostic::is_error)
}
