//! Syntax: abstract trees, the concrete grammar, α-equivalence, and the
//! nonstandard substitutions mixing clocks, terms, and ticks.

pub mod alpha;
pub mod ast;
pub mod parser;
pub mod printer;
pub mod subst;

pub use alpha::{alpha_eq_term, alpha_eq_type};
pub use ast::*;
pub use parser::{parse_file, parse_term_in, parse_type_in, ParseError, SourceFile};
pub use printer::{print_context, print_judgement, print_term, print_type};
pub use subst::{weaken, weaken_clock, Binding, SyntacticSubst};
