use std::io;

use hyperop::{
    BudgetExceeded, DivisibilityError, HypothesisError, InverseError, PowerError, TowerError,
};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Domain(String),
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
    #[error("result has {digits} digits, more than --max-digits {limit}")]
    TooManyDigits { digits: usize, limit: usize },
    #[error("{0}")]
    Falsified(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl CliError {
    /// 0 success, 1 usage or I/O, 2 domain, 3 budget, 4 counterexample.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 1,
            CliError::Domain(_) => 2,
            CliError::Budget(_) | CliError::TooManyDigits { .. } => 3,
            CliError::Falsified(_) => 4,
        }
    }
}

impl From<PowerError> for CliError {
    fn from(e: PowerError) -> Self {
        CliError::Domain(e.to_string())
    }
}

impl From<TowerError> for CliError {
    fn from(e: TowerError) -> Self {
        match e {
            TowerError::UniquenessViolation { .. } => CliError::Falsified(e.to_string()),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

impl From<DivisibilityError> for CliError {
    fn from(e: DivisibilityError) -> Self {
        match e {
            DivisibilityError::Budget(b) => CliError::Budget(b),
            other => CliError::Domain(other.to_string()),
        }
    }
}

impl From<HypothesisError> for CliError {
    fn from(e: HypothesisError) -> Self {
        match e {
            HypothesisError::Budget(b) => CliError::Budget(b),
            other => CliError::Domain(other.to_string()),
        }
    }
}

impl From<InverseError> for CliError {
    fn from(e: InverseError) -> Self {
        match e {
            InverseError::Budget(b) => CliError::Budget(b),
            other => CliError::Domain(other.to_string()),
        }
    }
}
