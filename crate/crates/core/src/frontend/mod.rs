//! Text format for theories, substitutions, derivations and proof schemata,
//! its printers, and the command-line driver.

mod ast;
pub mod cli;
mod document;
mod lexer;
mod parser;
pub mod pretty;
mod printer;

pub use ast::{DefEq, DefRhs, Item, SchemaExpr, SourceFile};
pub use cli::{run_cli, CliConfig, CliOutput};
pub use document::{build, parse_document, Document};
pub use lexer::{lex, Spanned, Tok};
pub use parser::{parse, parse_expr, parse_formula, parse_num, parse_subst, parse_term, Expr, Parser, Scope};
pub use printer::{print_derivation, print_item, print_schema, print_source};
