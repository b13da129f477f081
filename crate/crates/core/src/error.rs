use alloc::string::String;
use alloc::vec::Vec;

use crate::signature::Diagnostic;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Everything that can go wrong while reading or manipulating presentations,
/// terms and formulae. Line numbers are 1-based; `0` means "not from a source
/// line".
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("line {line}: syntax error: {message}")]
    Syntax { line: usize, message: String },

    #[error("line {line}: unknown sort `{name}`")]
    UnknownSort { line: usize, name: String },

    #[error("line {line}: arity mismatch: {message}")]
    ArityMismatch { line: usize, message: String },

    #[error("line {line}: bad attribute: {message}")]
    BadAttribute { line: usize, message: String },

    #[error("invalid presentation: {}", first_message(.0))]
    Invalid(Vec<Diagnostic>),

    #[error("unknown builtin `{0}`")]
    UnknownBuiltin(String),

    #[error("line {line}: sort error: {message}")]
    Sort { line: usize, message: String },

    #[error("fixed point variable `{0}` occurs under an odd number of negations")]
    NonPositiveFixedPoint(String),

    #[error("unbound fixed point variable `{0}`")]
    UnboundVar(String),

    #[error("no logic is enabled on sort `{0}`")]
    LogicNotEnabled(String),

    #[error("derived form `{0}` is not available for this presentation")]
    MacroUnavailable(String),

    #[error("trace replay failed at step {step}: {message}")]
    ReplayMismatch { step: usize, message: String },
}

fn first_message(diags: &[Diagnostic]) -> String {
    match diags.first() {
        Some(d) => alloc::format!("{d}"),
        None => String::new(),
    }
}

impl Error {
    pub(crate) fn syntax(line: usize, message: impl Into<String>) -> Self {
        Error::Syntax { line, message: message.into() }
    }

    pub(crate) fn sort(line: usize, message: impl Into<String>) -> Self {
        Error::Sort { line, message: message.into() }
    }

    pub(crate) fn arity(line: usize, message: impl Into<String>) -> Self {
        Error::ArityMismatch { line, message: message.into() }
    }
}
