//! Invariance campaigns: random move walks with the invariant recomputed after every move.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::CyclotomicNumber;
use crate::complex::{SurfaceCurveComplex, VertexOrdering};
use crate::moves::{self, Conserved, MoveError, MoveKind, MoveRecord, WalkConfig};
use crate::statesum::{compute_twisted, compute_untwisted, GaugeData, Options, StateSumError, Strategy};

/// A move implementation the harness can drive.
pub trait MoveEngine: Sync {
  fn apply(
    &self,
    cx: &SurfaceCurveComplex,
    ord: &VertexOrdering,
    record: &MoveRecord,
  ) -> Result<(SurfaceCurveComplex, VertexOrdering), MoveError>;
}

/// The moves of [`crate::moves`].
#[derive(Debug, Clone, Copy, Default)]
pub struct StandardMoves;

impl MoveEngine for StandardMoves {
  fn apply(
    &self,
    cx: &SurfaceCurveComplex,
    ord: &VertexOrdering,
    record: &MoveRecord,
  ) -> Result<(SurfaceCurveComplex, VertexOrdering), MoveError> {
    moves::apply(cx, ord, record)
  }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuzzConfig {
  pub trials:             usize,
  pub steps:              usize,
  pub seed:               u64,
  pub max_extra_vertices: usize,
  pub twisted:            bool,
  pub strategy:           Strategy,
  pub jobs:               Option<usize>,
}

impl Default for FuzzConfig {
  fn default() -> Self {
    Self {
      trials:             10,
      steps:              50,
      seed:               0,
      max_extra_vertices: 3,
      twisted:            false,
      strategy:           Strategy::GaugeFixed,
      jobs:               None,
    }
  }
}

impl FuzzConfig {
  /// Seed of trial `t`.
  pub fn trial_seed(&self, t: usize) -> u64 { self.seed.wrapping_add(t as u64) }
}

/// The first step of a trial at which the invariant changed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvarianceViolation {
  pub trial:    usize,
  pub seed:     u64,
  /// 1-based index of the offending move.
  pub step:     usize,
  pub expected: String,
  pub found:    String,
  /// Moves up to and including the offending one; replaying them reproduces the change.
  pub log:      Vec<MoveRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConservationViolation {
  pub trial:  usize,
  pub step:   usize,
  pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialSummary {
  pub trial: usize,
  pub seed:  u64,
  pub moves: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuzzReport {
  pub initial:                String,
  pub evaluations:            usize,
  pub moves_by_kind:          BTreeMap<MoveKind, usize>,
  pub trials:                 Vec<TrialSummary>,
  pub invariance_violations:  Vec<InvarianceViolation>,
  pub conservation_violations: Vec<ConservationViolation>,
}

impl FuzzReport {
  pub fn passed(&self) -> bool { self.invariance_violations.is_empty() && self.conservation_violations.is_empty() }
}

/// Evaluates the configured invariant.
pub fn evaluate(
  cx: &SurfaceCurveComplex,
  ord: &VertexOrdering,
  data: &GaugeData,
  twisted: bool,
  strategy: Strategy,
) -> Result<CyclotomicNumber, StateSumError> {
  let opts = Options { strategy, jobs: Some(1) };
  let sum = if twisted { compute_twisted(cx, ord, data, &opts)? } else { compute_untwisted(cx, ord, data, &opts)? };
  Ok(sum.value)
}

enum StepCheck {
  Sound,
  /// Valid complex and ordering whose conserved quantities changed; still evaluable.
  Drifted(String),
  Invalid(String),
}

fn check_step(start: &Conserved, cx: &SurfaceCurveComplex, ord: &VertexOrdering) -> StepCheck {
  if let Err(e) = SurfaceCurveComplex::validate(&cx.to_raw()) {
    return StepCheck::Invalid(format!("invalid complex: {e}"));
  }
  if let Err(e) = ord.check(cx) {
    return StepCheck::Invalid(format!("invalid ordering: {e}"));
  }
  let now = Conserved::of(cx);
  if now != *start {
    return StepCheck::Drifted(format!("conserved quantities changed from {start:?} to {now:?}"));
  }
  StepCheck::Sound
}

struct TrialOutcome {
  summary:      TrialSummary,
  evaluations:  usize,
  kinds:        Vec<MoveKind>,
  invariance:   Option<InvarianceViolation>,
  conservation: Vec<ConservationViolation>,
}

fn run_trial<E: MoveEngine>(
  cx: &SurfaceCurveComplex,
  ord: &VertexOrdering,
  data: &GaugeData,
  config: &FuzzConfig,
  engine: &E,
  initial: &CyclotomicNumber,
  trial: usize,
) -> Result<TrialOutcome, StateSumError> {
  let seed = config.trial_seed(trial);
  let walk_config = WalkConfig { steps: config.steps, seed, max_extra_vertices: config.max_extra_vertices, max_attempts: 200 };
  let walk = moves::random_walk_using(cx, ord, &walk_config, |c, o, r| engine.apply(c, o, r));
  let start = Conserved::of(cx);
  let mut out = TrialOutcome {
    summary:      TrialSummary { trial, seed, moves: walk.len() },
    evaluations:  0,
    kinds:        walk.iter().map(|s| s.record.kind).collect(),
    invariance:   None,
    conservation: Vec::new(),
  };
  for (i, step) in walk.iter().enumerate() {
    match check_step(&start, &step.complex, &step.ordering) {
      StepCheck::Sound => {}
      StepCheck::Drifted(detail) => out.conservation.push(ConservationViolation { trial, step: i + 1, detail }),
      StepCheck::Invalid(detail) => {
        out.conservation.push(ConservationViolation { trial, step: i + 1, detail });
        continue;
      }
    }
    if out.invariance.is_some() {
      continue;
    }
    let value = evaluate(&step.complex, &step.ordering, data, config.twisted, config.strategy)?;
    out.evaluations += 1;
    if value != *initial {
      out.invariance = Some(InvarianceViolation {
        trial,
        seed,
        step: i + 1,
        expected: initial.to_string(),
        found: value.to_string(),
        log: walk[..=i].iter().map(|s| s.record).collect(),
      });
    }
  }
  Ok(out)
}

/// Runs `config.trials` independent walks and checks the invariant and the conserved quantities
/// at every step.
pub fn run_campaign<E: MoveEngine>(
  cx: &SurfaceCurveComplex,
  ord: &VertexOrdering,
  data: &GaugeData,
  config: &FuzzConfig,
  engine: &E,
) -> Result<FuzzReport, StateSumError> {
  let initial = evaluate(cx, ord, data, config.twisted, config.strategy)?;
  let trials = |t| run_trial(cx, ord, data, config, engine, &initial, t);
  let outcomes: Vec<TrialOutcome> = match config.jobs {
    Some(1) => (0..config.trials).map(trials).collect::<Result<_, _>>()?,
    Some(n) => rayon::ThreadPoolBuilder::new()
      .num_threads(n)
      .build()
      .expect("thread pool")
      .install(|| (0..config.trials).into_par_iter().map(trials).collect::<Result<_, _>>())?,
    None => (0..config.trials).into_par_iter().map(trials).collect::<Result<_, _>>()?,
  };
  let mut report = FuzzReport {
    initial:                 initial.to_string(),
    evaluations:             1,
    moves_by_kind:           BTreeMap::new(),
    trials:                  Vec::new(),
    invariance_violations:   Vec::new(),
    conservation_violations: Vec::new(),
  };
  for o in outcomes {
    report.evaluations += o.evaluations;
    for k in o.kinds {
      *report.moves_by_kind.entry(k).or_default() += 1;
    }
    report.trials.push(o.summary);
    report.invariance_violations.extend(o.invariance);
    report.conservation_violations.extend(o.conservation);
  }
  Ok(report)
}

/// Replays a move log from `cx`, returning the invariant after each move.
pub fn replay_values<E: MoveEngine>(
  cx: &SurfaceCurveComplex,
  ord: &VertexOrdering,
  data: &GaugeData,
  log: &[MoveRecord],
  twisted: bool,
  engine: &E,
) -> Result<Vec<CyclotomicNumber>, ReplayError> {
  let mut cur = (cx.clone(), ord.clone());
  let mut values = Vec::with_capacity(log.len());
  for rec in log {
    cur = engine.apply(&cur.0, &cur.1, rec)?;
    values.push(evaluate(&cur.0, &cur.1, data, twisted, Strategy::GaugeFixed)?);
  }
  Ok(values)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReplayError {
  #[error(transparent)]
  Move(#[from] MoveError),
  #[error(transparent)]
  StateSum(#[from] StateSumError),
}
