use std::collections::BTreeMap;

use defectsum_core::fuzz::FuzzReport;
use defectsum_core::statesum::Strategy;
use defectsum_core::{CyclotomicNumber, MoveKind, StateSum};
use serde::Serialize;
use sha2::{Digest, Sha256};

/// A named input file and its bytes.
pub struct Input {
  pub role:  &'static str,
  pub bytes: Vec<u8>,
}

/// SHA-256 over the role names and contents of all inputs, in the order given.
pub fn digest(inputs: &[Input]) -> String {
  let mut h = Sha256::new();
  for i in inputs {
    h.update(i.role.as_bytes());
    h.update([0]);
    h.update((i.bytes.len() as u64).to_le_bytes());
    h.update(&i.bytes);
  }
  hex::encode(h.finalize())
}

#[derive(Debug, Clone, Serialize)]
pub struct ExactValue {
  pub modulus:      u32,
  /// Rational coefficients of `1, z, z^2, ...` in the power basis of `Q(zeta_N)`.
  pub coefficients: Vec<String>,
  #[serde(skip_serializing_if = "Option::is_none")]
  pub rational:     Option<String>,
  pub decimal:      String,
}

impl From<&CyclotomicNumber> for ExactValue {
  fn from(z: &CyclotomicNumber) -> Self {
    Self {
      modulus:      z.modulus(),
      coefficients: z.coeffs().iter().map(ToString::to_string).collect(),
      rational:     z.as_rational().map(|q| q.to_string()),
      decimal:      z.to_decimal_string(),
    }
  }
}

#[derive(Debug, Clone, Serialize)]
pub struct ViolationSummary {
  pub trial:    usize,
  pub seed:     u64,
  pub step:     usize,
  pub expected: String,
  pub found:    String,
}

#[derive(Debug, Clone, Serialize)]
pub struct FuzzSummary {
  pub trials:                  usize,
  pub steps:                   usize,
  pub evaluations:             usize,
  pub moves_by_kind:           BTreeMap<MoveKind, usize>,
  pub invariance_violations:   Vec<ViolationSummary>,
  pub conservation_violations: Vec<String>,
}

impl FuzzSummary {
  pub fn new(report: &FuzzReport, steps: usize) -> Self {
    Self {
      trials: report.trials.len(),
      steps,
      evaluations: report.evaluations,
      moves_by_kind: report.moves_by_kind.clone(),
      invariance_violations: report
        .invariance_violations
        .iter()
        .map(|v| ViolationSummary {
          trial:    v.trial,
          seed:     v.seed,
          step:     v.step,
          expected: v.expected.clone(),
          found:    v.found.clone(),
        })
        .collect(),
      conservation_violations: report
        .conservation_violations
        .iter()
        .map(|v| format!("trial {} step {}: {}", v.trial, v.step, v.detail))
        .collect(),
    }
  }
}

/// Everything needed to reproduce and audit a run. Only `wall_time_ms` varies between identical
/// runs.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
  pub command:       String,
  pub inputs_digest: String,
  pub seed:          Option<u64>,
  pub mode:          &'static str,
  pub strategy:      Strategy,
  pub kappa:         String,
  pub normalization: String,
  pub z:             ExactValue,
  pub weight_counts: Vec<String>,
  #[serde(skip_serializing_if = "Option::is_none")]
  pub fuzz:          Option<FuzzSummary>,
  pub move_logs:     Vec<String>,
  pub wall_time_ms:  f64,
}

impl RunReport {
  pub fn new(command: &str, inputs: &[Input], twisted: bool, strategy: Strategy, sum: &StateSum) -> Self {
    Self {
      command: command.to_owned(),
      inputs_digest: digest(inputs),
      seed: None,
      mode: if twisted { "twisted" } else { "untwisted" },
      strategy,
      kappa: sum.kappa.to_string(),
      normalization: sum.normalization.to_string(),
      z: ExactValue::from(&sum.value),
      weight_counts: sum.weight_counts.iter().map(ToString::to_string).collect(),
      fuzz: None,
      move_logs: Vec::new(),
      wall_time_ms: 0.0,
    }
  }
}
