use std::io::{self, BufRead, IsTerminal, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nasl_core::diag::has_errors;
use nasl_core::eval::{render_outcome, EvaluationResult, RenderOptions};
use nasl_core::frontend::parse_repl_input;
use nasl_core::session::{Reply, Session, HELP};
use nasl_core::texgen::{emit_latex, TexOptions};
use nasl_core::{check_specification, parse_source, run_evaluations, Diagnostic, Fuel, TypedSpecification};

#[derive(Parser)]
#[command(name = "nasl", version, about = "Check, run and typeset natural-semantics specifications")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and type-check a specification.
    Check { file: PathBuf },
    /// Check a specification and run its `evaluate` directives.
    Run {
        file: PathBuf,
        /// Print the derivation tree of each successful evaluation.
        #[arg(long)]
        show_tree: bool,
        #[command(flatten)]
        limits: Limits,
    },
    /// Render grammars and rules as a LaTeX document.
    Latex {
        file: PathBuf,
        /// Output path; defaults to the input path with a `.tex` extension.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Emit the document body only.
        #[arg(long)]
        fragment: bool,
    },
    /// Interactive session reading definitions and evaluations from stdin.
    Repl {
        /// Print derivation trees of evaluations.
        #[arg(long)]
        show_tree: bool,
        #[command(flatten)]
        limits: Limits,
    },
}

#[derive(Args)]
struct Limits {
    /// Maximum rule applications per evaluation.
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    max_fuel: u64,
    /// Levels of nested premises shown in failure traces.
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..))]
    trace_depth: u64,
}

const EXIT_ERRORS: u8 = 1;
const EXIT_IO: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Check { file } => cmd_check(&file),
        Command::Run {
            file,
            show_tree,
            limits,
        } => cmd_run(&file, show_tree, &limits),
        Command::Latex {
            file,
            output,
            fragment,
        } => cmd_latex(&file, output, fragment),
        Command::Repl { show_tree, limits } => repl(show_tree, &limits),
    };
    ExitCode::from(code)
}

fn print_diagnostics(diags: &[Diagnostic]) {
    for d in diags {
        eprintln!("{d}");
    }
}

/// Reads, parses and checks `path`, printing every diagnostic.
fn load(path: &Path) -> Result<TypedSpecification, u8> {
    let src = std::fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        EXIT_IO
    })?;
    let parsed = parse_source(&src, &path.display().to_string()).map_err(|diags| {
        print_diagnostics(&diags);
        EXIT_ERRORS
    })?;
    print_diagnostics(&parsed.warnings);
    let tspec = check_specification(&parsed.spec).map_err(|diags| {
        print_diagnostics(&diags);
        EXIT_ERRORS
    })?;
    print_diagnostics(&tspec.warnings);
    Ok(tspec)
}

fn cmd_check(path: &Path) -> u8 {
    match load(path) {
        Ok(_) => 0,
        Err(code) => code,
    }
}

fn cmd_run(path: &Path, show_tree: bool, limits: &Limits) -> u8 {
    let tspec = match load(path) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let results = match run_evaluations(&tspec, Fuel(limits.max_fuel)) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("{e}");
            return EXIT_ERRORS;
        }
    };
    if results.is_empty() {
        println!("no evaluations");
        return 0;
    }
    let opts = RenderOptions {
        show_tree,
        trace_depth: limits.trace_depth as usize,
    };
    print_results(&results, opts);
    if results.iter().any(|r| r.outcome.is_err()) {
        EXIT_ERRORS
    } else {
        0
    }
}

fn cmd_latex(path: &Path, output: Option<PathBuf>, fragment: bool) -> u8 {
    let tspec = match load(path) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let output = output.unwrap_or_else(|| path.with_extension("tex"));
    let tex = emit_latex(&tspec, TexOptions { fragment });
    match std::fs::write(&output, tex) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: cannot write {}: {e}", output.display());
            EXIT_IO
        }
    }
}

fn repl(show_tree: bool, limits: &Limits) -> u8 {
    let mut session = Session::new();
    session.fuel = Fuel(limits.max_fuel);
    let opts = RenderOptions {
        show_tree,
        trace_depth: limits.trace_depth as usize,
    };
    let interactive = io::stdin().is_terminal();
    let prompt = |pending: bool| {
        if interactive {
            print!("{}", if pending { "  ... " } else { "nasl> " });
            let _ = io::stdout().flush();
        }
    };

    let mut buffer = String::new();
    prompt(false);
    for line in io::stdin().lock().lines() {
        let line = match line {
            Ok(l) => l,
            Err(e) => {
                eprintln!("error: {e}");
                return EXIT_IO;
            }
        };
        // A blank line submits whatever is pending, complete or not.
        if line.trim().is_empty() && !buffer.is_empty() {
            report_incomplete(&buffer);
            buffer.clear();
            prompt(false);
            continue;
        }
        buffer.push_str(&line);
        buffer.push('\n');
        match session.feed(&buffer) {
            Reply::Incomplete => {
                prompt(true);
                continue;
            }
            Reply::Quit => return 0,
            reply => print_reply(reply, opts),
        }
        buffer.clear();
        prompt(false);
    }
    if !buffer.trim().is_empty() {
        report_incomplete(&buffer);
    }
    0
}

fn report_incomplete(input: &str) {
    match parse_repl_input(input) {
        Err(e) => print_diagnostics(&e.diagnostics),
        Ok(_) => eprintln!("error: incomplete input"),
    }
}

/// Failed evaluations are prefixed with the location of their directive.
fn print_results(results: &[EvaluationResult], opts: RenderOptions) {
    let mut out = io::stdout().lock();
    for r in results {
        if r.outcome.is_err() {
            let _ = write!(out, "{}: ", r.evaluation.span);
        }
        let _ = write!(out, "{}", render_outcome(&r.outcome, opts));
    }
}

fn print_reply(reply: Reply, opts: RenderOptions) {
    let mut out = io::stdout().lock();
    match reply {
        Reply::Nothing | Reply::Quit | Reply::Incomplete => {}
        Reply::Help => {
            let _ = writeln!(out, "{HELP}");
        }
        Reply::Defined { name, warnings } => {
            print_diagnostics(&warnings);
            let _ = writeln!(out, "defined {name}");
        }
        Reply::Evaluated(outcome) => {
            let _ = write!(out, "{}", render_outcome(&outcome, opts));
        }
        Reply::Loaded {
            path,
            warnings,
            results,
        } => {
            print_diagnostics(&warnings);
            let _ = writeln!(out, "loaded {}", path.display());
            drop(out);
            print_results(&results, opts);
        }
        Reply::LatexWritten(path) => {
            let _ = writeln!(out, "wrote {}", path.display());
        }
        Reply::Rejected(diags) => {
            print_diagnostics(&diags);
            if !has_errors(&diags) {
                eprintln!("error: input rejected");
            }
        }
        Reply::Failed(msg) => eprintln!("error: {msg}"),
    }
}
