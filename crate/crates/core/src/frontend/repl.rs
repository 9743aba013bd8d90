use std::path::PathBuf;

use super::lexer::{tokenize_file, TokenKind};
use super::parser::{ParseError, Parser};
use crate::diag::{Code, Diagnostic, Phase};
use crate::model::{Definition, Evaluation};
use crate::span::SourceSpan;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReplCommand {
    Quit,
    Help,
    Load(PathBuf),
    Latex(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub enum ReplItem {
    Empty,
    Command(ReplCommand),
    Definition(Definition),
    Evaluation(Evaluation),
}

#[derive(Debug, Clone)]
pub struct ReplParseError {
    pub diagnostics: Vec<Diagnostic>,
    /// The input ended in the middle of an item; more lines may complete it.
    pub incomplete: bool,
}

pub const REPL_FILE: &str = "<repl>";

/// Parses one REPL entry: a `:command`, a single definition or a single
/// `evaluate` directive. The input may span several lines.
pub fn parse_repl_input(input: &str) -> Result<(ReplItem, Vec<Diagnostic>), ReplParseError> {
    let trimmed = input.trim();
    if trimmed.is_empty() {
        return Ok((ReplItem::Empty, Vec::new()));
    }
    if let Some(cmd) = trimmed.strip_prefix(':') {
        return parse_command(cmd).map(|c| (ReplItem::Command(c), Vec::new()));
    }
    let tokens = tokenize_file(input, REPL_FILE).map_err(|e| ReplParseError {
        incomplete: false,
        diagnostics: vec![e.into()],
    })?;
    let mut p = Parser::new(tokens);
    let item = if p.at(&TokenKind::Evaluate) {
        p.evaluation().map(ReplItem::Evaluation)
    } else {
        p.definition().map(ReplItem::Definition)
    };
    let item = item.and_then(|item| {
        if p.at_eof() {
            Ok(item)
        } else {
            Err(ParseError(Diagnostic::error(
                Phase::Parse,
                Code::ParseError,
                p.current_span(),
                "expected a single definition or evaluation per entry",
            )))
        }
    });
    match item {
        Ok(item) if p.errors.is_empty() => Ok((item, p.warnings)),
        Ok(_) => {
            let incomplete = p.errors.iter().any(|d| d.message.ends_with("found end of input"));
            Err(ReplParseError {
                diagnostics: p.errors,
                incomplete,
            })
        }
        Err(ParseError(d)) => {
            let incomplete = d.message.ends_with("found end of input");
            let mut diagnostics = p.errors;
            diagnostics.push(d);
            Err(ReplParseError {
                diagnostics,
                incomplete,
            })
        }
    }
}

fn parse_command(cmd: &str) -> Result<ReplCommand, ReplParseError> {
    let (name, arg) = match cmd.split_once(char::is_whitespace) {
        Some((n, a)) => (n, a.trim()),
        None => (cmd, ""),
    };
    let need_arg = |c: fn(PathBuf) -> ReplCommand| {
        if arg.is_empty() {
            Err(command_error(format!(":{name} expects a file argument")))
        } else {
            Ok(c(PathBuf::from(arg)))
        }
    };
    match name {
        "quit" | "q" => Ok(ReplCommand::Quit),
        "help" | "h" => Ok(ReplCommand::Help),
        "load" | "l" => need_arg(ReplCommand::Load),
        "latex" => need_arg(ReplCommand::Latex),
        _ => Err(command_error(format!("unknown command `:{name}`"))),
    }
}

fn command_error(message: String) -> ReplParseError {
    ReplParseError {
        incomplete: false,
        diagnostics: vec![Diagnostic::error(
            Phase::Parse,
            Code::ParseError,
            SourceSpan::new(REPL_FILE.into(), 1, 1, 1, 1),
            message,
        )],
    }
}
