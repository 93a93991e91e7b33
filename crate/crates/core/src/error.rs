use thiserror::Error;

use crate::derivation::{Rule, Violation};
use crate::names::Name;
use crate::sta::StaViolation;
use crate::term::{NotARedex, ParseError};
use crate::types::TypeError;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error(transparent)]
    Violation(#[from] Violation),
    #[error(transparent)]
    StaViolation(#[from] StaViolation),
    #[error("cannot apply {rule}: {reason}")]
    Rule { rule: Rule, reason: &'static str },
    #[error("variable {0} is not in the context")]
    NotInContext(Name),
    #[error("variable {0} is already in the context")]
    AlreadyInContext(Name),
    #[error("contexts clash on {0}")]
    ContextClash(Name),
    #[error("type mismatch: {0}")]
    TypeMismatch(String),
    #[error("conclusion type is not stratified")]
    NotStratified,
    #[error("component index {0} out of range")]
    IndexOutOfRange(usize),
    #[error(transparent)]
    NotARedex(#[from] NotARedex),
    #[error("no quantifier detour at the given node")]
    NotADetour,
    #[error("bad node path")]
    BadPath,
    #[error("segment contains a {0} node")]
    NotAChain(Rule),
    #[error("decomposition mismatch: {0}")]
    Decomposition(String),
    #[error("fuel exhausted")]
    Fuel,
    #[error("term reduces to a term containing itself")]
    Divergent,
    #[error("not a numeral")]
    NotANumeral,
    #[error("bad derivation shape: {0}")]
    Shape(String),
    #[error("json: {0}")]
    Json(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
