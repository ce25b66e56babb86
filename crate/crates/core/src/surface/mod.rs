//! Concrete syntax: lexing, parsing, pretty-printing and diagnostics.

pub mod diagnostic;
pub mod lexer;
pub mod parser;
pub mod pretty;

pub use diagnostic::{Code, Diagnostic, Severity, Span};
pub use parser::{parse_context, parse_kind, parse_term, parse_type, parse_unit, SourceUnit};
pub use pretty::{pretty_kind, pretty_term, pretty_type};
