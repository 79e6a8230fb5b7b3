use defectsum_core::io::IoError;
use defectsum_core::statesum::StateSumError;
use defectsum_core::twisting::TwistingError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
  #[error("{0}")]
  Usage(String),
  #[error(transparent)]
  Io(#[from] IoError),
  #[error("{0}")]
  Invalid(String),
  #[error(transparent)]
  StateSum(#[from] StateSumError),
  #[error(transparent)]
  Twisting(#[from] TwistingError),
  #[error("unknown example {0:?}; run `defectsum examples` for the list")]
  UnknownExample(String),
  #[error("invariant changed along {0} walk(s)")]
  Invariance(usize),
}

impl CliError {
  pub fn exit_code(&self) -> i32 {
    match self {
      CliError::Usage(_) | CliError::UnknownExample(_) => 2,
      CliError::Io(e) if !e.is_validation() => 2,
      _ => 1,
    }
  }
}
