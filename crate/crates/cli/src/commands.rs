use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use defectsum_core::algebra::BiSet;
use defectsum_core::complex::{SurfaceCurveComplex, VertexOrdering};
use defectsum_core::fuzz::{run_campaign, FuzzConfig, StandardMoves};
use defectsum_core::io::{self, IoError};
use defectsum_core::statesum::{compute_twisted, compute_untwisted, GaugeData, Options};
use defectsum_core::twisting::{check_conditions, CheckMode, RawTwisting, TwistingTriple};
use defectsum_core::MoveRecord;

use crate::args::{AlgebraArgs, RunArgs};
use crate::catalog;
use crate::error::CliError;
use crate::report::{FuzzSummary, Input, RunReport};

fn read_input(role: &'static str, path: &Path) -> Result<Input, CliError> {
  let bytes = fs::read(path).map_err(|source| IoError::Read { path: path.to_owned(), source })?;
  Ok(Input { role, bytes })
}

struct Loaded {
  data:    GaugeData,
  inputs:  Vec<Input>,
  twisted: bool,
}

/// Loads and validates the algebraic inputs. Without `--hgroup`/`--biset` the curve carries the
/// one-point bi-set with trivial `H`.
fn load_algebra(a: &AlgebraArgs, mode: CheckMode) -> Result<Loaded, CliError> {
  let group_path = a.group.as_deref().ok_or_else(|| CliError::Usage("--group is required".into()))?;
  let mut inputs = vec![read_input("group", group_path)?];
  let g = Arc::new(io::load_group(group_path)?);
  let biset = match (&a.hgroup, &a.biset) {
    (Some(hp), Some(bp)) => {
      inputs.push(read_input("hgroup", hp)?);
      inputs.push(read_input("biset", bp)?);
      let h = Arc::new(io::load_group(hp)?);
      Arc::new(io::load_biset(bp, g, h)?)
    }
    (None, None) => Arc::new(BiSet::point(g)),
    _ => return Err(CliError::Usage("--hgroup and --biset must be given together".into())),
  };
  let Some(tp) = &a.twisting else {
    if a.modulus.is_some() {
      return Err(CliError::Usage("--modulus needs --twisting".into()));
    }
    return Ok(Loaded { data: GaugeData::untwisted(biset), inputs, twisted: false });
  };
  inputs.push(read_input("twisting", tp)?);
  let mut tw = io::load_twisting(tp, biset, mode)?;
  if let Some(n) = a.modulus {
    tw = tw
      .with_modulus(n)
      .ok_or_else(|| CliError::Usage(format!("--modulus {n} is not a multiple of the twisting's N = {}", tw.modulus())))?;
  }
  Ok(Loaded { data: GaugeData::twisted(tw), inputs, twisted: true })
}

fn load_complex(path: &Path, inputs: &mut Vec<Input>) -> Result<SurfaceCurveComplex, CliError> {
  inputs.insert(0, read_input("complex", path)?);
  Ok(io::load_complex(path)?)
}

fn options(run: &RunArgs) -> Options { Options { strategy: run.strategy.into(), jobs: run.jobs } }

fn print_value(report: &RunReport) {
  println!("mode:          {}", report.mode);
  println!("kappa:         {}", report.kappa);
  println!("normalization: {}", report.normalization);
  match &report.z.rational {
    Some(q) => println!("Z:             {q}"),
    None => println!("Z:             [{}] in Q(zeta_{})", report.z.coefficients.join(", "), report.z.modulus),
  }
  println!("decimal:       {}", report.z.decimal);
}

pub fn validate_complex(path: &Path) -> Result<(), CliError> {
  let cx = io::load_complex(path)?;
  println!("valid flag-like complex");
  println!("vertices:      {} ({} on the curve)", cx.vertex_count(), cx.curve_vertex_count());
  println!("edges:         {} ({} on the curve)", cx.edges().len(), cx.curve_length());
  println!("triangles:     {}", cx.triangles().len());
  println!("euler char:    {}", cx.euler_characteristic());
  println!("curve comps:   {}", cx.curve_component_count());
  Ok(())
}

pub fn validate_twisting(a: &AlgebraArgs, all_witnesses: bool) -> Result<(), CliError> {
  let mode = if all_witnesses { CheckMode::Exhaustive } else { CheckMode::FailFast };
  let no_twist = AlgebraArgs { twisting: None, modulus: None, ..a.clone() };
  let loaded = load_algebra(&no_twist, mode)?;
  let biset = loaded.data.biset();
  println!("group G:       order {}", biset.g().order());
  println!("group H:       order {}", biset.h().order());
  println!("bi-set X:      {} elements, commuting actions", biset.size());
  let Some(tp) = &a.twisting else {
    return Ok(());
  };
  let raw: RawTwisting = io::read_json(tp)?;
  let witnesses = check_conditions(&raw, biset, mode)?;
  if witnesses.is_empty() {
    TwistingTriple::validate(&raw, biset.clone(), mode)?;
    println!("twisting:      N = {}, all four conditions hold", raw.modulus);
    return Ok(());
  }
  for w in &witnesses {
    println!("{w}");
  }
  Err(CliError::Invalid(format!("twisting fails {} condition instance(s)", witnesses.len())))
}

pub fn compute(complex: &Path, a: &AlgebraArgs, run: &RunArgs) -> Result<RunReport, CliError> {
  let start = Instant::now();
  let mut loaded = load_algebra(a, CheckMode::Exhaustive)?;
  let cx = load_complex(complex, &mut loaded.inputs)?;
  let ord = VertexOrdering::curve_first(&cx);
  let opts = options(run);
  let sum = if loaded.twisted {
    compute_twisted(&cx, &ord, &loaded.data, &opts)?
  } else {
    compute_untwisted(&cx, &ord, &loaded.data, &opts)?
  };
  let mut report = RunReport::new("compute", &loaded.inputs, loaded.twisted, opts.strategy, &sum);
  report.wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
  print_value(&report);
  if let Some(out) = &run.out {
    io::write_json(out, &report)?;
  }
  Ok(report)
}

fn log_path(out: &Path, trial: usize) -> PathBuf {
  let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "run".into());
  out.with_file_name(format!("{stem}.trial-{trial}.moves.jsonl"))
}

fn json_lines(log: &[MoveRecord]) -> String {
  log.iter().map(|r| serde_json::to_string(r).expect("records serialize") + "\n").collect()
}

pub fn fuzz(
  complex: &Path,
  a: &AlgebraArgs,
  run: &RunArgs,
  steps: usize,
  trials: usize,
  seed: u64,
) -> Result<RunReport, CliError> {
  let start = Instant::now();
  let mut loaded = load_algebra(a, CheckMode::Exhaustive)?;
  let cx = load_complex(complex, &mut loaded.inputs)?;
  let ord = VertexOrdering::curve_first(&cx);
  let opts = options(run);
  let sum = if loaded.twisted {
    compute_twisted(&cx, &ord, &loaded.data, &opts)?
  } else {
    compute_untwisted(&cx, &ord, &loaded.data, &opts)?
  };
  let config = FuzzConfig { trials, steps, seed, twisted: loaded.twisted, strategy: opts.strategy, jobs: run.jobs, ..FuzzConfig::default() };
  let fuzz = run_campaign(&cx, &ord, &loaded.data, &config, &StandardMoves)?;

  let mut report = RunReport::new("fuzz", &loaded.inputs, loaded.twisted, opts.strategy, &sum);
  report.seed = Some(seed);
  report.fuzz = Some(FuzzSummary::new(&fuzz, steps));
  for v in &fuzz.invariance_violations {
    let lines = json_lines(&v.log);
    match &run.out {
      Some(out) => {
        let path = log_path(out, v.trial);
        fs::write(&path, lines).map_err(|source| IoError::Write { path: path.clone(), source })?;
        report.move_logs.push(path.display().to_string());
      }
      None => {
        println!("minimal move log for trial {} (seed {}):", v.trial, v.seed);
        std::io::stdout().write_all(lines.as_bytes()).ok();
        report.move_logs.push("stdout".into());
      }
    }
  }
  report.wall_time_ms = start.elapsed().as_secs_f64() * 1e3;

  print_value(&report);
  println!("walks:         {trials} x {steps} moves, {} evaluations", fuzz.evaluations);
  for v in &fuzz.invariance_violations {
    println!("trial {} (seed {}): step {} changed Z from {} to {}", v.trial, v.seed, v.step, v.expected, v.found);
  }
  for v in &fuzz.conservation_violations {
    println!("trial {} step {}: {}", v.trial, v.step, v.detail);
  }
  if let Some(out) = &run.out {
    io::write_json(out, &report)?;
  }
  if !fuzz.passed() {
    return Err(CliError::Invariance(fuzz.invariance_violations.len().max(fuzz.conservation_violations.len())));
  }
  println!("invariant unchanged along every walk");
  Ok(report)
}

pub fn examples(name: Option<&str>, out: &Path) -> Result<(), CliError> {
  let Some(name) = name else {
    for n in catalog::NAMES {
      println!("{n:<20} {}", catalog::build(n).expect("listed examples build").summary);
    }
    return Ok(());
  };
  let bundle = catalog::build(name).ok_or_else(|| CliError::UnknownExample(name.to_owned()))?;
  let dir = out.join(name);
  fs::create_dir_all(&dir).map_err(|source| IoError::Write { path: dir.clone(), source })?;
  io::write_json(&dir.join("complex.json"), &bundle.complex)?;
  io::write_json(&dir.join("group.json"), &bundle.group)?;
  io::write_json(&dir.join("hgroup.json"), &bundle.hgroup)?;
  io::write_json(&dir.join("biset.json"), &bundle.biset)?;
  let mut cmd = format!(
    "defectsum compute --complex {0}/complex.json --group {0}/group.json --hgroup {0}/hgroup.json --biset {0}/biset.json",
    dir.display()
  );
  if let Some(tw) = &bundle.twisting {
    io::write_json(&dir.join("twisting.json"), tw)?;
    cmd.push_str(&format!(" --twisting {}/twisting.json", dir.display()));
  }
  println!("wrote {}: {}", dir.display(), bundle.summary);
  println!("{cmd}");
  Ok(())
}
