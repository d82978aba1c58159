//! Concrete syntax: lexer, parser with error recovery, canonical printer.

mod lexer;
mod parser;
mod printer;

pub use parser::{parse_appcfg, parse_architecture, parse_library, ParseResult};
pub use printer::{args as format_args_list, pretty_print, PrettyPrint};
