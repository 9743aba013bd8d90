//! Lexing, parsing and printing of metalanguage source.

pub mod lexer;
pub mod parser;
pub mod printer;
pub mod repl;

pub use lexer::{tokenize, tokenize_file, LexError, Token, TokenKind};
pub use parser::{parse_source, parse_specification, ParseOutput};
pub use printer::{erase_spans, print_specification};
pub use repl::{parse_repl_input, ReplCommand, ReplItem, ReplParseError};
