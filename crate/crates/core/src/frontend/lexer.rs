use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use thiserror::Error;

use crate::diag::{Code, Diagnostic, Phase};
use crate::model::BasicKind;
use crate::span::SourceSpan;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    Domain,
    Syntax,
    Let,
    System,
    End,
    Evaluate,
    In,
    If,
    True,
    False,
    Basic(BasicKind),
    Ident(String),
    Int(BigInt),
    Str(String),
    /// Back-quoted symbol literal.
    SymbolLit(String),
    /// Single-quoted syntax terminal.
    Terminal(String),
    RuleLabel(String),
    LabelOpen,
    LabelClose,
    /// `==>`
    Arrow,
    /// `=Name=>`
    NamedArrow(String),
    Turnstile,
    BottomOpen,
    PremiseSep,
    Backslash,
    FnArrow,
    EqEq,
    Ne,
    Le,
    Lt,
    Eq,
    Plus,
    Minus,
    Star,
    Pipe,
    Dot,
    Comma,
    Semi,
    Colon,
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Underscore,
    Eof,
}

impl TokenKind {
    pub fn describe(&self) -> String {
        match self {
            TokenKind::Ident(s) => format!("identifier `{s}`"),
            TokenKind::Int(n) => format!("integer `{n}`"),
            TokenKind::Str(s) => format!("string {s:?}"),
            TokenKind::SymbolLit(s) => format!("symbol `{s}`"),
            TokenKind::Terminal(s) => format!("terminal '{s}'"),
            TokenKind::RuleLabel(s) => format!("rule label `{s}`"),
            TokenKind::NamedArrow(s) => format!("`={s}=>`"),
            TokenKind::Basic(k) => format!("`{}`", k.name()),
            TokenKind::Eof => "end of input".to_string(),
            other => format!("`{}`", other.fixed_text().unwrap_or("?")),
        }
    }

    fn fixed_text(&self) -> Option<&'static str> {
        Some(match self {
            TokenKind::Domain => "domain",
            TokenKind::Syntax => "syntax",
            TokenKind::Let => "let",
            TokenKind::System => "system",
            TokenKind::End => "end",
            TokenKind::Evaluate => "evaluate",
            TokenKind::In => "in",
            TokenKind::If => "if",
            TokenKind::True => "true",
            TokenKind::False => "false",
            TokenKind::LabelOpen => "[[",
            TokenKind::LabelClose => "]]",
            TokenKind::Arrow => "==>",
            TokenKind::Turnstile => "|-",
            TokenKind::BottomOpen => "-|",
            TokenKind::PremiseSep => "\\\\",
            TokenKind::Backslash => "\\",
            TokenKind::FnArrow => "->",
            TokenKind::EqEq => "==",
            TokenKind::Ne => "!=",
            TokenKind::Le => "<=",
            TokenKind::Lt => "<",
            TokenKind::Eq => "=",
            TokenKind::Plus => "+",
            TokenKind::Minus => "-",
            TokenKind::Star => "*",
            TokenKind::Pipe => "|",
            TokenKind::Dot => ".",
            TokenKind::Comma => ",",
            TokenKind::Semi => ";",
            TokenKind::Colon => ":",
            TokenKind::LParen => "(",
            TokenKind::RParen => ")",
            TokenKind::LBrace => "{",
            TokenKind::RBrace => "}",
            TokenKind::LBracket => "[",
            TokenKind::RBracket => "]",
            TokenKind::Underscore => "_",
            _ => return None,
        })
    }
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub lexeme: String,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{message}")]
pub struct LexError {
    pub message: String,
    pub span: SourceSpan,
}

impl From<LexError> for Diagnostic {
    fn from(e: LexError) -> Diagnostic {
        Diagnostic::error(Phase::Parse, Code::LexError, e.span, e.message)
    }
}

pub fn tokenize(source: &str) -> Result<Vec<Token>, LexError> {
    tokenize_file(source, "<input>")
}

/// Splits `source` into tokens, skipping whitespace and `//` comments. The
/// result always ends with an `Eof` token.
pub fn tokenize_file(source: &str, file: &str) -> Result<Vec<Token>, LexError> {
    Lexer::new(source, Arc::from(file)).run()
}

struct Lexer {
    chars: Vec<char>,
    pos: usize,
    line: u32,
    col: u32,
    last: (u32, u32),
    file: Arc<str>,
    out: Vec<Token>,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

fn is_label_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '-'
}

impl Lexer {
    fn new(source: &str, file: Arc<str>) -> Lexer {
        Lexer {
            chars: source.chars().collect(),
            pos: 0,
            line: 1,
            col: 1,
            last: (1, 1),
            file,
            out: Vec::new(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&self, off: usize) -> Option<char> {
        self.chars.get(self.pos + off).copied()
    }

    fn starts_with(&self, s: &str) -> bool {
        s.chars().enumerate().all(|(i, c)| self.peek_at(i) == Some(c))
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.last = (self.line, self.col);
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn span_from(&self, start: (u32, u32)) -> SourceSpan {
        SourceSpan::new(self.file.clone(), start.0, start.1, self.last.0, self.last.1)
    }

    fn error(&self, start: (u32, u32), message: impl Into<String>) -> LexError {
        let end = if self.last >= start { self.last } else { start };
        LexError {
            message: message.into(),
            span: SourceSpan::new(self.file.clone(), start.0, start.1, end.0, end.1),
        }
    }

    fn push(&mut self, kind: TokenKind, start: (u32, u32), start_pos: usize) {
        let lexeme: String = self.chars[start_pos..self.pos].iter().collect();
        let span = self.span_from(start);
        self.out.push(Token { kind, lexeme, span });
    }

    fn run(mut self) -> Result<Vec<Token>, LexError> {
        loop {
            self.skip_trivia();
            let start = (self.line, self.col);
            let start_pos = self.pos;
            let Some(c) = self.peek() else {
                let span = SourceSpan::new(self.file.clone(), start.0, start.1, start.0, start.1);
                self.out.push(Token {
                    kind: TokenKind::Eof,
                    lexeme: String::new(),
                    span,
                });
                return Ok(self.out);
            };
            let kind = if is_ident_start(c) {
                self.ident()
            } else if c.is_ascii_digit() {
                self.integer()
            } else {
                match c {
                    '"' => self.string(start)?,
                    '`' => TokenKind::SymbolLit(self.quoted('`', start, "symbol")?),
                    '\'' => TokenKind::Terminal(self.quoted('\'', start, "terminal")?),
                    '[' if self.peek_at(1) == Some('[') => {
                        self.label(start, start_pos)?;
                        continue;
                    }
                    _ => self.punct(start)?,
                }
            };
            self.push(kind, start, start_pos);
        }
    }

    fn skip_trivia(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if self.starts_with("//") {
                while let Some(c) = self.peek() {
                    if c == '\n' {
                        break;
                    }
                    self.bump();
                }
            } else {
                break;
            }
        }
    }

    fn ident(&mut self) -> TokenKind {
        let mut s = String::new();
        while let Some(c) = self.peek().filter(|c| is_ident_continue(*c)) {
            s.push(c);
            self.bump();
        }
        // Trailing primes, as in `s'` and `s''`.
        while self.peek() == Some('\'') {
            s.push('\'');
            self.bump();
        }
        match s.as_str() {
            "_" => TokenKind::Underscore,
            "domain" => TokenKind::Domain,
            "syntax" => TokenKind::Syntax,
            "let" => TokenKind::Let,
            "system" => TokenKind::System,
            "end" => TokenKind::End,
            "evaluate" => TokenKind::Evaluate,
            "in" => TokenKind::In,
            "if" => TokenKind::If,
            "true" => TokenKind::True,
            "false" => TokenKind::False,
            other => match BasicKind::from_name(other) {
                Some(k) => TokenKind::Basic(k),
                None => TokenKind::Ident(s),
            },
        }
    }

    fn integer(&mut self) -> TokenKind {
        let mut s = String::new();
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            s.push(c);
            self.bump();
        }
        TokenKind::Int(s.parse().expect("decimal digits"))
    }

    fn string(&mut self, start: (u32, u32)) -> Result<TokenKind, LexError> {
        self.bump();
        let mut s = String::new();
        loop {
            match self.bump() {
                None | Some('\n') => return Err(self.error(start, "unterminated string literal")),
                Some('"') => return Ok(TokenKind::Str(s)),
                Some('\\') => match self.bump() {
                    Some('n') => s.push('\n'),
                    Some('t') => s.push('\t'),
                    Some('"') => s.push('"'),
                    Some('\\') => s.push('\\'),
                    Some(c) => return Err(self.error(start, format!("unknown escape `\\{c}`"))),
                    None => return Err(self.error(start, "unterminated string literal")),
                },
                Some(c) => s.push(c),
            }
        }
    }

    fn quoted(&mut self, quote: char, start: (u32, u32), what: &str) -> Result<String, LexError> {
        self.bump();
        let mut s = String::new();
        loop {
            match self.bump() {
                None | Some('\n') => {
                    return Err(self.error(start, format!("unterminated {what}")));
                }
                Some(c) if c == quote => break,
                Some(c) => s.push(c),
            }
        }
        if s.is_empty() {
            return Err(self.error(start, format!("empty {what}")));
        }
        Ok(s)
    }

    fn label(&mut self, start: (u32, u32), start_pos: usize) -> Result<(), LexError> {
        self.bump();
        self.bump();
        self.push(TokenKind::LabelOpen, start, start_pos);
        while self.peek().is_some_and(|c| c.is_whitespace()) {
            self.bump();
        }
        let text_start = (self.line, self.col);
        let text_pos = self.pos;
        let mut text = String::new();
        while let Some(c) = self.peek().filter(|c| is_label_char(*c)) {
            text.push(c);
            self.bump();
        }
        if text.is_empty() {
            return Err(self.error(start, "expected a rule label inside `[[ ]]`"));
        }
        self.push(TokenKind::RuleLabel(text), text_start, text_pos);
        while self.peek().is_some_and(|c| c.is_whitespace()) {
            self.bump();
        }
        let close = (self.line, self.col);
        let close_pos = self.pos;
        if !self.starts_with("]]") {
            self.bump();
            return Err(self.error(
                close,
                "rule labels may only contain letters, digits, `_` and `-`, and must end with `]]`",
            ));
        }
        self.bump();
        self.bump();
        self.push(TokenKind::LabelClose, close, close_pos);
        Ok(())
    }

    fn punct(&mut self, start: (u32, u32)) -> Result<TokenKind, LexError> {
        const FIXED: &[(&str, TokenKind)] = &[
            ("==>", TokenKind::Arrow),
            ("\\\\", TokenKind::PremiseSep),
            ("]]", TokenKind::LabelClose),
            ("==", TokenKind::EqEq),
            ("!=", TokenKind::Ne),
            ("<=", TokenKind::Le),
            ("|-", TokenKind::Turnstile),
            ("-|", TokenKind::BottomOpen),
            ("->", TokenKind::FnArrow),
            ("<", TokenKind::Lt),
            ("\\", TokenKind::Backslash),
            ("+", TokenKind::Plus),
            ("-", TokenKind::Minus),
            ("*", TokenKind::Star),
            ("|", TokenKind::Pipe),
            (".", TokenKind::Dot),
            (",", TokenKind::Comma),
            (";", TokenKind::Semi),
            (":", TokenKind::Colon),
            ("(", TokenKind::LParen),
            (")", TokenKind::RParen),
            ("{", TokenKind::LBrace),
            ("}", TokenKind::RBrace),
            ("[", TokenKind::LBracket),
            ("]", TokenKind::RBracket),
        ];
        if let Some(name) = self.named_arrow() {
            return Ok(TokenKind::NamedArrow(name));
        }
        for (text, kind) in FIXED {
            if self.starts_with(text) {
                for _ in 0..text.chars().count() {
                    self.bump();
                }
                return Ok(kind.clone());
            }
        }
        if self.peek() == Some('=') {
            self.bump();
            return Ok(TokenKind::Eq);
        }
        let c = self.bump().expect("not at end");
        Err(self.error(start, format!("unexpected character `{c}`")))
    }

    /// `=Name=>` written without interior whitespace.
    fn named_arrow(&mut self) -> Option<String> {
        if self.peek() != Some('=') || !self.peek_at(1).is_some_and(is_ident_start) {
            return None;
        }
        let mut i = 1;
        while self.peek_at(i).is_some_and(is_ident_continue) {
            i += 1;
        }
        while self.peek_at(i) == Some('\'') {
            i += 1;
        }
        if self.peek_at(i) != Some('=') || self.peek_at(i + 1) != Some('>') {
            return None;
        }
        let name: String = self.chars[self.pos + 1..self.pos + i].iter().collect();
        for _ in 0..i + 2 {
            self.bump();
        }
        Some(name)
    }
}
