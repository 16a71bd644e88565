use crate::formula::VarName;
use thiserror::Error;

/// Errors produced anywhere in the library.
///
/// Variants are grouped so a caller can tell malformed input apart from an
/// exhausted resource budget and from a property that simply does not hold.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("empty formula")]
    EmptyFormula,
    #[error("invalid variable name `{0}`")]
    InvalidVarName(String),
    #[error("variable {0} is not bound by the assignment")]
    UnboundVariable(VarName),
    #[error("machine description, line {line}: {msg}")]
    MachineFormat { line: usize, msg: String },
    #[error("invalid machine: {0}")]
    InvalidMachine(String),
    #[error("malformed machine tag: {0}")]
    TagParse(String),
    #[error("invalid bit string `{0}`")]
    InvalidBits(String),
    #[error("malformed DIMACS input, line {line}: {msg}")]
    Dimacs { line: usize, msg: String },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("conflict budget of {0} exhausted")]
    ConflictBudget(u64),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("brute-force limit exceeded: {0}")]
    LimitExceeded(String),

    #[error("operation requires a {expected} gadget")]
    WrongFamily { expected: &'static str },
    #[error("backbone value oracle returned inconsistent values")]
    InconsistentOracle,
    #[error("assignment domain does not match the variable set")]
    DomainMismatch,
    #[error("variable set is not a backbone of the formula")]
    NotABackbone,
    #[error("machines disagree with complementarity on input `{0}`")]
    NotComplementary(String),
}

impl Error {
    /// True for errors caused by running out of a configured budget.
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            Error::ConflictBudget(_) | Error::BudgetExceeded(_) | Error::LimitExceeded(_)
        )
    }

    /// True for errors caused by unparseable input text.
    pub fn is_input(&self) -> bool {
        matches!(
            self,
            Error::Syntax { .. }
                | Error::EmptyFormula
                | Error::InvalidVarName(_)
                | Error::MachineFormat { .. }
                | Error::InvalidMachine(_)
                | Error::TagParse(_)
                | Error::InvalidBits(_)
                | Error::Dimacs { .. }
                | Error::InvalidParams(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
