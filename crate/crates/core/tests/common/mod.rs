#![allow(dead_code)]

use nasl_core::diag::Code;
use nasl_core::{check_specification, parse_source, Diagnostic, Specification, TypedSpecification};

pub fn fixture(name: &str) -> String {
    let path = format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

pub fn parse(src: &str) -> Specification {
    match parse_source(src, "test.nsml") {
        Ok(out) => out.spec,
        Err(diags) => panic!("parse failed:\n{}", render(&diags)),
    }
}

pub fn check(src: &str) -> TypedSpecification {
    match check_specification(&parse(src)) {
        Ok(t) => t,
        Err(diags) => panic!("check failed:\n{}", render(&diags)),
    }
}

pub fn check_errors(src: &str) -> Vec<Diagnostic> {
    match check_specification(&parse(src)) {
        Ok(_) => panic!("expected errors"),
        Err(diags) => diags.into_iter().filter(|d| d.is_error()).collect(),
    }
}

pub fn codes(diags: &[Diagnostic]) -> Vec<Code> {
    diags.iter().map(|d| d.code).collect()
}

pub fn render(diags: &[Diagnostic]) -> String {
    diags.iter().map(|d| format!("{d}\n")).collect()
}

pub const IMP_PRELUDE: &str = "
domain Env = Symbol -> Int;
syntax Stm = Symbol '=' Exp | Stm ';' Stm;
syntax Exp = '#' Int | Symbol | Exp '+' Exp;
let empty = \\x : Symbol . -|Int|;
";
