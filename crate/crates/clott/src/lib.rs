//! A kernel for a clocked guarded dependent type theory: a checker for the
//! tick/clock typing rules and an evaluator computing the presheaf
//! semantics at concrete worlds, with lemma-indexed property suites over a
//! finite skeleton of worlds.

pub mod harness;
pub mod interp;
pub mod semantics;
pub mod syntax;
pub mod typecheck;
pub mod worlds;

use syntax::parser::ParseError;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error("type error: {0}")]
    Type(String),
    #[error("semantic error: {0}")]
    Sem(String),
    #[error("truncation exceeded: {0}")]
    Truncation(String),
    #[error("not enumerable: {0}")]
    NotEnumerable(String),
    #[error("world error: {0}")]
    World(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub fn sem_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Sem(msg.into()))
}
