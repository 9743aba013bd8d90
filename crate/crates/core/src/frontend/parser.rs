use std::sync::Arc;

use super::lexer::{tokenize_file, Token, TokenKind};
use crate::diag::{Code, Diagnostic, Phase};
use crate::model::*;
use crate::span::SourceSpan;

/// A successfully parsed specification together with any warnings.
#[derive(Debug, Clone)]
pub struct ParseOutput {
    pub spec: Specification,
    pub warnings: Vec<Diagnostic>,
}

/// Tokenizes and parses `source`, attributing spans to `file`.
pub fn parse_source(source: &str, file: &str) -> Result<ParseOutput, Vec<Diagnostic>> {
    let tokens = tokenize_file(source, file).map_err(|e| vec![Diagnostic::from(e)])?;
    parse_specification(tokens)
}

pub fn parse_specification(tokens: Vec<Token>) -> Result<ParseOutput, Vec<Diagnostic>> {
    let mut p = Parser::new(tokens);
    let spec = p.specification();
    p.into_result(spec)
}

#[derive(Debug)]
pub(crate) struct ParseError(pub Diagnostic);

type PResult<T> = Result<T, ParseError>;

pub(crate) struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    pub(crate) errors: Vec<Diagnostic>,
    pub(crate) warnings: Vec<Diagnostic>,
}

const DEF_START: &[TokenKind] = &[
    TokenKind::Domain,
    TokenKind::Syntax,
    TokenKind::Let,
    TokenKind::System,
    TokenKind::Evaluate,
];

impl Parser {
    pub(crate) fn new(tokens: Vec<Token>) -> Parser {
        assert!(
            tokens.last().is_some_and(|t| t.kind == TokenKind::Eof),
            "token stream must end with Eof"
        );
        Parser {
            tokens,
            pos: 0,
            errors: Vec::new(),
            warnings: Vec::new(),
        }
    }

    fn into_result(self, spec: Specification) -> Result<ParseOutput, Vec<Diagnostic>> {
        if self.errors.is_empty() {
            Ok(ParseOutput {
                spec,
                warnings: self.warnings,
            })
        } else {
            let mut all = self.errors;
            all.extend(self.warnings);
            Err(all)
        }
    }

    // ---- token helpers ----

    fn peek(&self) -> &TokenKind {
        &self.tokens[self.pos].kind
    }

    fn peek_at(&self, off: usize) -> &TokenKind {
        let i = (self.pos + off).min(self.tokens.len() - 1);
        &self.tokens[i].kind
    }

    fn current(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn span(&self) -> SourceSpan {
        self.current().span.clone()
    }

    fn prev_span(&self) -> SourceSpan {
        self.tokens[self.pos.saturating_sub(1)].span.clone()
    }

    pub(crate) fn at(&self, kind: &TokenKind) -> bool {
        self.peek() == kind
    }

    pub(crate) fn at_eof(&self) -> bool {
        self.at(&TokenKind::Eof)
    }

    fn bump(&mut self) -> Token {
        let tok = self.tokens[self.pos].clone();
        if tok.kind != TokenKind::Eof {
            self.pos += 1;
        }
        tok
    }

    fn eat(&mut self, kind: &TokenKind) -> bool {
        if self.at(kind) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn error_here(&self, expected: &str) -> ParseError {
        let tok = self.current();
        ParseError(Diagnostic::error(
            Phase::Parse,
            Code::ParseError,
            tok.span.clone(),
            format!("expected {expected}, found {}", tok.kind),
        ))
    }

    fn expect(&mut self, kind: &TokenKind) -> PResult<Token> {
        if self.at(kind) {
            Ok(self.bump())
        } else {
            Err(self.error_here(&kind.describe()))
        }
    }

    fn ident(&mut self, what: &str) -> PResult<(String, SourceSpan)> {
        match self.peek().clone() {
            TokenKind::Ident(name) => {
                let span = self.bump().span;
                Ok((name, span))
            }
            _ => Err(self.error_here(what)),
        }
    }

    /// `]` where the lexer may have produced `]]` for two closing brackets.
    fn expect_rbracket(&mut self) -> PResult<()> {
        if self.at(&TokenKind::LabelClose) {
            let tok = &mut self.tokens[self.pos];
            let mut second = tok.clone();
            tok.kind = TokenKind::RBracket;
            tok.lexeme = "]".into();
            tok.span.col_end = tok.span.col_start;
            second.kind = TokenKind::RBracket;
            second.lexeme = "]".into();
            second.span.col_start = second.span.col_end;
            self.tokens.insert(self.pos + 1, second);
        }
        self.expect(&TokenKind::RBracket).map(|_| ())
    }

    /// Skips to just after the next `;` or to the next definition keyword.
    /// Always consumes at least one token unless at end of input.
    fn recover_top(&mut self, start: usize) {
        if self.pos == start {
            self.bump();
        }
        while !self.at_eof() {
            if self.eat(&TokenKind::Semi) {
                return;
            }
            if DEF_START.contains(self.peek()) {
                return;
            }
            self.bump();
        }
    }

    // ---- top level ----

    fn specification(&mut self) -> Specification {
        let mut spec = Specification::default();
        let mut seen_evaluation = false;
        while !self.at_eof() {
            let start = self.pos;
            if self.at(&TokenKind::Evaluate) {
                seen_evaluation = true;
                match self.evaluation() {
                    Ok(ev) => spec.evaluations.push(ev),
                    Err(ParseError(d)) => {
                        self.errors.push(d);
                        self.recover_top(start);
                    }
                }
                continue;
            }
            let def_span = self.span();
            match self.definition() {
                Ok(def) => {
                    if seen_evaluation {
                        self.errors.push(Diagnostic::error(
                            Phase::Parse,
                            Code::ParseError,
                            def_span,
                            format!(
                                "definition of `{}` after an evaluation; definitions must come first",
                                def.name()
                            ),
                        ));
                    }
                    spec.push(def);
                }
                Err(ParseError(d)) => {
                    self.errors.push(d);
                    self.recover_top(start);
                }
            }
        }
        spec
    }

    pub(crate) fn definition(&mut self) -> PResult<Definition> {
        match self.peek() {
            TokenKind::Domain => self.domain_def().map(Definition::Domain),
            TokenKind::Syntax => self.syntax_def().map(Definition::Syntax),
            TokenKind::Let => self.let_def().map(Definition::Let),
            TokenKind::System => self.system_def().map(Definition::System),
            _ => Err(self.error_here("one of `domain`, `syntax`, `let`, `system`, `evaluate`")),
        }
    }

    fn domain_def(&mut self) -> PResult<DomainDef> {
        let start = self.expect(&TokenKind::Domain)?.span;
        let (name, _) = self.ident("a domain name")?;
        self.expect(&TokenKind::Eq)?;
        let body = if self.eat(&TokenKind::LBrace) {
            let mut ctors = vec![self.constructor()?];
            while self.eat(&TokenKind::Plus) {
                ctors.push(self.constructor()?);
            }
            self.expect(&TokenKind::RBrace)?;
            DomainBody::Union(ctors)
        } else {
            DomainBody::Alias(self.type_expr()?)
        };
        self.expect(&TokenKind::Semi)?;
        Ok(DomainDef {
            name,
            body,
            span: start.to(&self.prev_span()),
        })
    }

    fn constructor(&mut self) -> PResult<Constructor> {
        let (name, span) = self.ident("a constructor name")?;
        let payload = if self.eat(&TokenKind::Colon) {
            Some(self.type_expr()?)
        } else {
            None
        };
        Ok(Constructor {
            name,
            payload,
            span: span.to(&self.prev_span()),
        })
    }

    fn syntax_def(&mut self) -> PResult<SyntaxDef> {
        let start = self.expect(&TokenKind::Syntax)?.span;
        let (name, _) = self.ident("a syntax name")?;
        self.expect(&TokenKind::Eq)?;
        let mut productions = vec![self.production()?];
        while self.eat(&TokenKind::Pipe) {
            productions.push(self.production()?);
        }
        self.expect(&TokenKind::Semi)?;
        Ok(SyntaxDef {
            name,
            productions,
            span: start.to(&self.prev_span()),
        })
    }

    fn production(&mut self) -> PResult<Production> {
        let start = self.span();
        let mut items = Vec::new();
        loop {
            match self.peek().clone() {
                TokenKind::Terminal(t) => {
                    self.bump();
                    items.push(ProductionItem::Terminal(t));
                }
                TokenKind::Basic(_) | TokenKind::Ident(_) | TokenKind::LParen => {
                    items.push(ProductionItem::Hole(self.type_atom()?));
                }
                _ => break,
            }
        }
        if items.is_empty() {
            return Err(self.error_here("a terminal or a domain in a production"));
        }
        Ok(Production {
            items,
            span: start.to(&self.prev_span()),
        })
    }

    fn let_def(&mut self) -> PResult<LetDef> {
        let start = self.expect(&TokenKind::Let)?.span;
        let (name, _) = self.ident("a name")?;
        self.expect(&TokenKind::Eq)?;
        let value = self.expr()?;
        self.expect(&TokenKind::Semi)?;
        Ok(LetDef {
            name,
            value,
            span: start.to(&self.prev_span()),
        })
    }

    fn system_def(&mut self) -> PResult<TransitionSystem> {
        let start = self.expect(&TokenKind::System)?.span;
        let (name, _) = self.ident("a system name")?;
        self.expect(&TokenKind::Colon)?;
        let first = self.type_expr()?;
        let (antecedent_type, initial_type) = if self.eat(&TokenKind::Turnstile) {
            (Some(first), self.type_expr()?)
        } else {
            (None, first)
        };
        self.expect(&TokenKind::Arrow)?;
        let final_type = self.type_expr()?;
        self.expect(&TokenKind::Eq)?;
        let mut rules = Vec::new();
        while !self.at(&TokenKind::End) && !self.at_eof() {
            let rule_start = self.pos;
            match self.rule(&name) {
                Ok(rule) => rules.push(rule),
                Err(ParseError(d)) => {
                    self.errors.push(d);
                    self.recover_rule(rule_start);
                }
            }
        }
        self.expect(&TokenKind::End)?;
        self.eat(&TokenKind::Semi);
        Ok(TransitionSystem {
            name,
            antecedent_type,
            initial_type,
            final_type,
            rules,
            span: start.to(&self.prev_span()),
        })
    }

    fn recover_rule(&mut self, start: usize) {
        if self.pos == start {
            self.bump();
        }
        while !self.at_eof() {
            if self.eat(&TokenKind::Semi) {
                return;
            }
            if matches!(self.peek(), TokenKind::End | TokenKind::LabelOpen) {
                return;
            }
            self.bump();
        }
    }

    fn rule(&mut self, system: &str) -> PResult<Rule> {
        let start = self.expect(&TokenKind::LabelOpen)?.span;
        let label = match self.peek().clone() {
            TokenKind::RuleLabel(l) => {
                self.bump();
                l
            }
            _ => return Err(self.error_here("a rule label")),
        };
        self.expect(&TokenKind::LabelClose)?;
        self.expect(&TokenKind::Colon)?;
        let first = self.pattern()?;
        let (antecedent, initial) = if self.eat(&TokenKind::Turnstile) {
            (Some(first), self.pattern()?)
        } else {
            (None, first)
        };
        self.expect(&TokenKind::Arrow)?;
        let result = self.expr()?;
        let mut premises = Vec::new();
        if self.eat(&TokenKind::PremiseSep) {
            premises.push(self.premise(system)?);
            while self.eat(&TokenKind::Comma) {
                premises.push(self.premise(system)?);
            }
        }
        if !self.at(&TokenKind::Semi) {
            let expected = if premises.is_empty() {
                "`\\\\` or `;`"
            } else {
                "`,` or `;`"
            };
            return Err(self.error_here(expected));
        }
        self.bump();
        Ok(Rule {
            label,
            antecedent,
            initial,
            result,
            premises,
            span: start.to(&self.prev_span()),
        })
    }

    fn premise(&mut self, system: &str) -> PResult<Premise> {
        let start = self.span();
        if self.eat(&TokenKind::If) {
            let cond = self.expr()?;
            return Ok(Premise::SideCondition {
                cond,
                span: start.to(&self.prev_span()),
            });
        }
        if self.eat(&TokenKind::Let) {
            let pattern = self.pattern()?;
            self.expect(&TokenKind::Eq)?;
            let value = self.expr()?;
            return Ok(Premise::Local {
                pattern,
                value,
                span: start.to(&self.prev_span()),
            });
        }
        let first = self.expr()?;
        let (antecedent, initial) = if self.eat(&TokenKind::Turnstile) {
            (Some(first), self.expr()?)
        } else {
            (None, first)
        };
        let (target, explicit_target) = match self.peek().clone() {
            TokenKind::Arrow => {
                self.bump();
                (system.to_string(), false)
            }
            TokenKind::NamedArrow(name) => {
                self.bump();
                (name, true)
            }
            _ => return Err(self.error_here("`==>` or `=System=>`")),
        };
        let result = self.pattern()?;
        Ok(Premise::Transition {
            target,
            explicit_target,
            antecedent,
            initial,
            result,
            span: start.to(&self.prev_span()),
        })
    }

    pub(crate) fn evaluation(&mut self) -> PResult<Evaluation> {
        let start = self.expect(&TokenKind::Evaluate)?.span;
        let first = self.expr()?;
        let (antecedent, initial) = if self.eat(&TokenKind::Turnstile) {
            (Some(first), self.expr()?)
        } else {
            (None, first)
        };
        self.expect(&TokenKind::In)?;
        let (system, _) = self.ident("a system name")?;
        self.eat(&TokenKind::Semi);
        Ok(Evaluation {
            antecedent,
            initial,
            system,
            span: start.to(&self.prev_span()),
        })
    }

    // ---- types ----

    pub(crate) fn type_expr(&mut self) -> PResult<TypeExpr> {
        let left = self.product_type()?;
        if self.eat(&TokenKind::FnArrow) {
            let right = self.type_expr()?;
            Ok(TypeExpr::arrow(left, right))
        } else {
            Ok(left)
        }
    }

    fn product_type(&mut self) -> PResult<TypeExpr> {
        let left = self.type_atom()?;
        if self.eat(&TokenKind::Star) {
            let right = self.product_type()?;
            Ok(TypeExpr::product(left, right))
        } else {
            Ok(left)
        }
    }

    fn type_atom(&mut self) -> PResult<TypeExpr> {
        match self.peek().clone() {
            TokenKind::Basic(k) => {
                self.bump();
                Ok(TypeExpr::Basic(k))
            }
            TokenKind::Ident(name) => {
                self.bump();
                Ok(TypeExpr::Named(name))
            }
            TokenKind::LParen => {
                self.bump();
                let t = self.type_expr()?;
                self.expect(&TokenKind::RParen)?;
                Ok(t)
            }
            TokenKind::LBrace => Err(ParseError(Diagnostic::error(
                Phase::Parse,
                Code::ParseError,
                self.span(),
                "union domains may only appear in `domain` definitions, not inline",
            ))),
            _ => Err(self.error_here("a type")),
        }
    }

    // ---- expressions ----

    pub(crate) fn expr(&mut self) -> PResult<Expr> {
        if self.at(&TokenKind::Backslash) {
            let start = self.bump().span;
            let (param, _) = self.ident("a parameter name")?;
            self.expect(&TokenKind::Colon)?;
            let param_type = self.type_expr()?;
            self.expect(&TokenKind::Dot)?;
            let body = self.expr()?;
            let span = start.to(&body.span);
            return Ok(Expr::new(
                ExprKind::Lambda {
                    param,
                    param_type,
                    body: Arc::new(body),
                },
                span,
            ));
        }
        self.comparison()
    }

    fn comparison(&mut self) -> PResult<Expr> {
        let left = self.additive()?;
        let op = match self.peek() {
            TokenKind::EqEq => BinOp::Eq,
            TokenKind::Ne => BinOp::Ne,
            TokenKind::Lt => BinOp::Lt,
            TokenKind::Le => BinOp::Le,
            _ => return Ok(left),
        };
        self.bump();
        let right = self.additive()?;
        Ok(binop(op, left, right))
    }

    fn additive(&mut self) -> PResult<Expr> {
        let mut left = self.multiplicative()?;
        loop {
            let op = match self.peek() {
                TokenKind::Plus => BinOp::Add,
                TokenKind::Minus => BinOp::Sub,
                _ => return Ok(left),
            };
            self.bump();
            let right = self.multiplicative()?;
            left = binop(op, left, right);
        }
    }

    fn multiplicative(&mut self) -> PResult<Expr> {
        let mut left = self.postfix()?;
        while self.eat(&TokenKind::Star) {
            let right = self.postfix()?;
            left = binop(BinOp::Mul, left, right);
        }
        Ok(left)
    }

    fn postfix(&mut self) -> PResult<Expr> {
        self.postfix_with(true)
    }

    /// Inside syntax braces application is disabled, so that adjacent holes
    /// such as `{a (b)}` stay two items; write `{(f(x)) '+' y}` instead.
    fn postfix_with(&mut self, allow_call: bool) -> PResult<Expr> {
        let mut e = self.atom()?;
        loop {
            if allow_call && self.at(&TokenKind::LParen) {
                let arg = self.tuple_expr()?;
                let span = e.span.to(&arg.span);
                e = Expr::new(ExprKind::Apply(Box::new(e), Box::new(arg)), span);
            } else if self.eat(&TokenKind::LBracket) {
                let key = self.expr()?;
                self.expect(&TokenKind::FnArrow)?;
                let value = self.expr()?;
                self.expect_rbracket()?;
                let span = e.span.to(&self.prev_span());
                e = Expr::new(
                    ExprKind::Update {
                        func: Box::new(e),
                        key: Box::new(key),
                        value: Box::new(value),
                    },
                    span,
                );
            } else {
                return Ok(e);
            }
        }
    }

    /// `( e )` or a right-nested tuple `( e1, e2, ... )`.
    fn tuple_expr(&mut self) -> PResult<Expr> {
        let start = self.expect(&TokenKind::LParen)?.span;
        let mut items = vec![self.expr()?];
        while self.eat(&TokenKind::Comma) {
            items.push(self.expr()?);
        }
        self.expect(&TokenKind::RParen)?;
        let span = start.to(&self.prev_span());
        let mut it = items.into_iter().rev();
        let mut acc = it.next().expect("at least one item");
        if it.len() == 0 {
            // Parenthesised expression keeps the parens in its span.
            acc.span = span;
            return Ok(acc);
        }
        for item in it {
            let s = item.span.to(&acc.span);
            acc = Expr::new(ExprKind::Pair(Box::new(item), Box::new(acc)), s);
        }
        acc.span = span;
        Ok(acc)
    }

    fn atom(&mut self) -> PResult<Expr> {
        let span = self.span();
        let kind = match self.peek().clone() {
            TokenKind::Int(n) => {
                self.bump();
                ExprKind::Int(n)
            }
            TokenKind::Minus if matches!(self.peek_at(1), TokenKind::Int(_)) => {
                self.bump();
                let TokenKind::Int(n) = self.bump().kind else {
                    unreachable!()
                };
                ExprKind::Int(-n)
            }
            TokenKind::Str(s) => {
                self.bump();
                ExprKind::Str(s)
            }
            TokenKind::SymbolLit(s) => {
                self.bump();
                ExprKind::Symbol(s)
            }
            TokenKind::Terminal(s) => {
                self.bump();
                self.warn_quote(&span, &s);
                ExprKind::Symbol(s)
            }
            TokenKind::True => {
                self.bump();
                ExprKind::Bool(true)
            }
            TokenKind::False => {
                self.bump();
                ExprKind::Bool(false)
            }
            TokenKind::Ident(name) => {
                self.bump();
                ExprKind::Var(name)
            }
            TokenKind::BottomOpen => {
                self.bump();
                let ty = self.type_expr()?;
                self.expect(&TokenKind::Pipe)?;
                return Ok(Expr::new(ExprKind::Bottom(ty), span.to(&self.prev_span())));
            }
            TokenKind::LParen => return self.tuple_expr(),
            TokenKind::LBrace => {
                self.bump();
                let mut parts = Vec::new();
                while !self.at(&TokenKind::RBrace) {
                    if let TokenKind::Terminal(t) = self.peek().clone() {
                        self.bump();
                        parts.push(SyntaxPart::Terminal(t));
                    } else {
                        if self.at_eof() {
                            return Err(self.error_here("`}`"));
                        }
                        parts.push(SyntaxPart::Sub(self.postfix_with(false)?));
                    }
                }
                self.bump();
                if parts.is_empty() {
                    return Err(ParseError(Diagnostic::error(
                        Phase::Parse,
                        Code::ParseError,
                        span.to(&self.prev_span()),
                        "empty syntax expression",
                    )));
                }
                return Ok(Expr::syntax(parts, span.to(&self.prev_span())));
            }
            TokenKind::Underscore => {
                return Err(ParseError(Diagnostic::error(
                    Phase::Parse,
                    Code::ParseError,
                    span,
                    "`_` is only allowed in patterns",
                )))
            }
            _ => return Err(self.error_here("an expression")),
        };
        Ok(Expr::new(kind, span))
    }

    fn warn_quote(&mut self, span: &SourceSpan, text: &str) {
        self.warnings.push(Diagnostic::warning(
            Phase::Parse,
            Code::SymbolQuote,
            span.clone(),
            format!("single quotes denote syntax terminals; write the symbol as `{text}` with back-ticks"),
        ));
    }

    // ---- patterns ----

    pub(crate) fn pattern(&mut self) -> PResult<Pattern> {
        let p = self.pattern_atom()?;
        let follow = match self.peek() {
            TokenKind::LBracket => Some("a function update"),
            TokenKind::Plus | TokenKind::Minus | TokenKind::Star => Some("an arithmetic expression"),
            TokenKind::EqEq | TokenKind::Ne | TokenKind::Lt | TokenKind::Le => Some("a comparison"),
            _ => None,
        };
        match follow {
            Some(what) => Err(self.not_a_pattern(p.span.to(&self.span()), what)),
            None => Ok(p),
        }
    }

    fn not_a_pattern(&self, span: SourceSpan, what: &str) -> ParseError {
        ParseError(Diagnostic::error(
            Phase::Parse,
            Code::NotAPattern,
            span,
            format!("not a valid pattern: {what} cannot be matched against"),
        ))
    }

    fn pattern_atom(&mut self) -> PResult<Pattern> {
        self.pattern_atom_with(true)
    }

    fn pattern_atom_with(&mut self, allow_call: bool) -> PResult<Pattern> {
        let span = self.span();
        let kind = match self.peek().clone() {
            TokenKind::Ident(name) => {
                self.bump();
                if allow_call && self.at(&TokenKind::LParen) {
                    let arg = self.tuple_pattern()?;
                    let span = span.to(&arg.span);
                    return Ok(Pattern::new(
                        PatternKind::Ctor {
                            name,
                            args: vec![arg],
                        },
                        span,
                    ));
                }
                PatternKind::Var(name)
            }
            TokenKind::Underscore => {
                self.bump();
                PatternKind::Wildcard
            }
            TokenKind::Int(n) => {
                self.bump();
                PatternKind::Int(n)
            }
            TokenKind::Minus if matches!(self.peek_at(1), TokenKind::Int(_)) => {
                self.bump();
                let TokenKind::Int(n) = self.bump().kind else {
                    unreachable!()
                };
                PatternKind::Int(-n)
            }
            TokenKind::Str(s) => {
                self.bump();
                PatternKind::Str(s)
            }
            TokenKind::SymbolLit(s) => {
                self.bump();
                PatternKind::Symbol(s)
            }
            TokenKind::Terminal(s) => {
                self.bump();
                self.warn_quote(&span, &s);
                PatternKind::Symbol(s)
            }
            TokenKind::True => {
                self.bump();
                PatternKind::Bool(true)
            }
            TokenKind::False => {
                self.bump();
                PatternKind::Bool(false)
            }
            TokenKind::LParen => return self.tuple_pattern(),
            TokenKind::LBrace => {
                self.bump();
                let mut parts = Vec::new();
                while !self.at(&TokenKind::RBrace) {
                    if let TokenKind::Terminal(t) = self.peek().clone() {
                        self.bump();
                        parts.push(SyntaxPart::Terminal(t));
                    } else if self.at_eof() {
                        return Err(self.error_here("`}`"));
                    } else {
                        parts.push(SyntaxPart::Sub(self.pattern_atom_with(false)?));
                    }
                }
                self.bump();
                if parts.is_empty() {
                    return Err(ParseError(Diagnostic::error(
                        Phase::Parse,
                        Code::ParseError,
                        span.to(&self.prev_span()),
                        "empty syntax pattern",
                    )));
                }
                return Ok(Pattern::syntax(parts, span.to(&self.prev_span())));
            }
            TokenKind::Backslash => return Err(self.not_a_pattern(span, "a lambda abstraction")),
            TokenKind::BottomOpen => return Err(self.not_a_pattern(span, "the bottom element")),
            _ => return Err(self.error_here("a pattern")),
        };
        Ok(Pattern::new(kind, span))
    }

    fn tuple_pattern(&mut self) -> PResult<Pattern> {
        let start = self.expect(&TokenKind::LParen)?.span;
        let mut items = vec![self.pattern()?];
        while self.eat(&TokenKind::Comma) {
            items.push(self.pattern()?);
        }
        self.expect(&TokenKind::RParen)?;
        let span = start.to(&self.prev_span());
        let mut it = items.into_iter().rev();
        let mut acc = it.next().expect("at least one item");
        for item in it {
            let s = item.span.to(&acc.span);
            acc = Pattern::new(PatternKind::Pair(Box::new(item), Box::new(acc)), s);
        }
        acc.span = span;
        Ok(acc)
    }
}

fn binop(op: BinOp, left: Expr, right: Expr) -> Expr {
    let span = left.span.to(&right.span);
    Expr::new(ExprKind::BinOp(op, Box::new(left), Box::new(right)), span)
}

impl Parser {
    pub(crate) fn current_span(&self) -> SourceSpan {
        self.span()
    }
}
