//! JSON documents for groups, bi-sets, twistings and complexes, plus loaders that validate.
//!
//! ```text
//! group     {"name": str?, "order": n, "mul": [[...]]}
//! bi-set    {"size": m, "right": [[x.g]], "left": [[eta.x]]}
//! twisting  {"N": N, "alpha": [[e]], "beta": [[e]], "gamma": [[e]]}
//! complex   {"vertices": n, "on_curve": [bool], "triangles": [[a,b,c]], "curve_edges": [[a,b]]}
//! ```

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{BiSet, BiSetError, FiniteGroup, GroupError, RawBiSet, RawGroup};
use crate::complex::{ComplexError, RawComplex, SurfaceCurveComplex};
use crate::twisting::{CheckMode, RawTwisting, TwistingError, TwistingTriple};

#[derive(Debug, Error)]
pub enum IoError {
  #[error("cannot read {}: {source}", path.display())]
  Read { path: PathBuf, source: std::io::Error },
  #[error("cannot write {}: {source}", path.display())]
  Write { path: PathBuf, source: std::io::Error },
  #[error("cannot parse {}: {source}", path.display())]
  Parse { path: PathBuf, source: serde_json::Error },
  #[error("invalid group in {}: {source}", path.display())]
  Group { path: PathBuf, source: GroupError },
  #[error("invalid bi-set in {}: {source}", path.display())]
  BiSet { path: PathBuf, source: BiSetError },
  #[error("invalid twisting in {}: {source}", path.display())]
  Twisting { path: PathBuf, source: TwistingError },
  #[error("invalid complex in {}: {source}", path.display())]
  Complex { path: PathBuf, source: ComplexError },
}

impl IoError {
  /// True when the file was read and parsed but failed a mathematical check.
  pub fn is_validation(&self) -> bool {
    matches!(self, IoError::Group { .. } | IoError::BiSet { .. } | IoError::Twisting { .. } | IoError::Complex { .. })
  }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, IoError> {
  let text = fs::read_to_string(path).map_err(|source| IoError::Read { path: path.to_owned(), source })?;
  serde_json::from_str(&text).map_err(|source| IoError::Parse { path: path.to_owned(), source })
}

/// Pretty-printed with a trailing newline.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), IoError> {
  let mut text = serde_json::to_string_pretty(value).expect("documents serialize");
  text.push('\n');
  fs::write(path, text).map_err(|source| IoError::Write { path: path.to_owned(), source })
}

pub fn load_group(path: &Path) -> Result<FiniteGroup, IoError> {
  let raw: RawGroup = read_json(path)?;
  FiniteGroup::verify(&raw).map_err(|source| IoError::Group { path: path.to_owned(), source })
}

pub fn load_biset(path: &Path, g: Arc<FiniteGroup>, h: Arc<FiniteGroup>) -> Result<BiSet, IoError> {
  let raw: RawBiSet = read_json(path)?;
  BiSet::verify(&raw, g, h).map_err(|source| IoError::BiSet { path: path.to_owned(), source })
}

pub fn load_twisting(path: &Path, biset: Arc<BiSet>, mode: CheckMode) -> Result<TwistingTriple, IoError> {
  let raw: RawTwisting = read_json(path)?;
  TwistingTriple::validate(&raw, biset, mode).map_err(|source| IoError::Twisting { path: path.to_owned(), source })
}

pub fn load_complex(path: &Path) -> Result<SurfaceCurveComplex, IoError> {
  let raw: RawComplex = read_json(path)?;
  SurfaceCurveComplex::validate(&raw).map_err(|source| IoError::Complex { path: path.to_owned(), source })
}
