use std::fmt;

use thiserror::Error;

use crate::netlist::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Which resource limit a computation ran into.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BudgetKind {
    /// Number of metastable bits that would have to be expanded flatly.
    MetaBits,
    /// Number of visited states or search nodes.
    States,
}

impl fmt::Display for BudgetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BudgetKind::MetaBits => f.write_str("metastable bits"),
            BudgetKind::States => f.write_str("states"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("width mismatch: expected {expected}, found {found}")]
    WidthMismatch { expected: usize, found: usize },

    #[error("arity mismatch: {0}")]
    ArityMismatch(String),

    #[error("budget exceeded: {requested} {kind} requested, limit is {limit}")]
    Budget {
        kind: BudgetKind,
        requested: usize,
        limit: usize,
    },

    #[error("{word} is not a codeword of {code}")]
    NotACodeword { word: String, code: String },

    #[error("precision undefined: resolution {resolution} of {word} is not a codeword of {code}")]
    PrecisionUndefined {
        word: String,
        resolution: String,
        code: String,
    },

    #[error("value {value} out of range: {reason}")]
    OutOfRange { value: usize, reason: String },

    #[error("invalid word {0:?}: expected characters 0, 1 or M")]
    InvalidWord(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid circuit: {}", join_violations(.0))]
    InvalidCircuit(Vec<Violation>),

    #[error("register {0} is a masking register; only simple registers are supported here")]
    MaskingRegister(String),

    #[error("specification is not natural")]
    NotNatural,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("internal check failed: {0}")]
    Internal(String),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

impl Error {
    pub(crate) fn budget(kind: BudgetKind, requested: usize, limit: usize) -> Self {
        Error::Budget { kind, requested, limit }
    }

    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}

/// Resource limits shared by every operation that expands resolution sets
/// or explores state spaces. Exceeding either limit is reported as
/// [`Error::Budget`], never silently truncated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_states: usize,
    pub max_meta_bits: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_states: 1_000_000,
            max_meta_bits: 12,
        }
    }
}

impl Budget {
    pub(crate) fn check_meta(&self, requested: usize) -> Result<()> {
        if requested > self.max_meta_bits {
            Err(Error::budget(BudgetKind::MetaBits, requested, self.max_meta_bits))
        } else {
            Ok(())
        }
    }

    pub(crate) fn check_states(&self, requested: usize) -> Result<()> {
        if requested > self.max_states {
            Err(Error::budget(BudgetKind::States, requested, self.max_states))
        } else {
            Ok(())
        }
    }
}
