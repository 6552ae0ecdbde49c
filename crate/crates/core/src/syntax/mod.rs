//! Concrete and abstract syntax of λP2 pseudo-terms.

mod context;
mod parse;
mod print;
mod term;

pub use context::{Context, VarClass};
pub use parse::{parse, parse_term, parse_term_in, Decl, DeclarationFile, ParseError, Pos};
pub use print::{print, print_in};
pub use term::{name, JElim, Name, Sort, Term};

#[cfg(test)]
mod tests;
