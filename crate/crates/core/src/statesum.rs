//! Admissible colourings and the state-sum invariants.
//!
//! A colouring labels bulk edges by `G`, edges meeting the curve in one endpoint by `X` and curve
//! edges by `H`. With `(v0, v1, v2)` the rank order of a triangle and `a, b, c` the labels on
//! `01, 12, 02`, the triangle is admissible when `ab = c` (bulk), `a.b = c` (one curve vertex) or
//! `a.b = c` with `a` acting on the left (curve edge).
//!
//! ```text
//! Z = |G|^-(off-curve vertices) |H|^-(curve vertices) sum_admissible prod_triangles w^eps
//! ```

use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{BiSet, CyclotomicNumber, Elem, UnitScalar, IDENTITY};
use crate::complex::{Edge, OrderingError, SurfaceCurveComplex, TriangleClass, Vertex, VertexOrdering};
use crate::twisting::TwistingTriple;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EdgeClass {
  /// Both endpoints off the curve; labelled by `G`.
  Bulk,
  /// Exactly one endpoint on the curve; labelled by `X`.
  MeetsCurve,
  /// A curve edge; labelled by `H`.
  OnCurve,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StateSumError {
  #[error("complex has no curve but H has order {h} and X has {x} elements (both must be 1)")]
  EmptyCurveData { h: usize, x: usize },
  #[error("ordering does not fit the complex: {0}")]
  Ordering(#[from] OrderingError),
  #[error("gauge data carries no twisting")]
  MissingTwisting,
  #[error("twisting was built over a different bi-set")]
  BiSetMismatch,
  #[error("colouring has {got} labels for {expected} edges")]
  LabelCount { expected: usize, got: usize },
  #[error("label {label} on edge {edge} is outside its domain of size {size}")]
  LabelOutOfRange { edge: Edge, label: Elem, size: usize },
}

pub fn edge_class(cx: &SurfaceCurveComplex, e: Edge) -> EdgeClass {
  if cx.is_curve_edge(e) {
    EdgeClass::OnCurve
  } else if cx.is_on_curve(e.lo()) || cx.is_on_curve(e.hi()) {
    EdgeClass::MeetsCurve
  } else {
    EdgeClass::Bulk
  }
}

/// `(G, H, X)` with an optional twisting over the same bi-set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaugeData {
  biset:    Arc<BiSet>,
  twisting: Option<TwistingTriple>,
}

impl GaugeData {
  pub fn new(biset: Arc<BiSet>, twisting: Option<TwistingTriple>) -> Result<Self, StateSumError> {
    if let Some(t) = &twisting {
      if **t.biset() != *biset {
        return Err(StateSumError::BiSetMismatch);
      }
    }
    Ok(Self { biset, twisting })
  }

  pub fn untwisted(biset: Arc<BiSet>) -> Self { Self { biset, twisting: None } }

  pub fn twisted(twisting: TwistingTriple) -> Self { Self { biset: twisting.biset().clone(), twisting: Some(twisting) } }

  /// Plain Dijkgraaf-Witten data: trivial `H`, one-point `X`.
  pub fn bulk_only(g: Arc<crate::algebra::FiniteGroup>) -> Self { Self::untwisted(Arc::new(BiSet::point(g))) }

  pub fn biset(&self) -> &Arc<BiSet> { &self.biset }

  pub fn twisting(&self) -> Option<&TwistingTriple> { self.twisting.as_ref() }

  fn domain(&self, class: EdgeClass) -> usize {
    match class {
      EdgeClass::Bulk => self.biset.g().order(),
      EdgeClass::MeetsCurve => self.biset.size(),
      EdgeClass::OnCurve => self.biset.h().order(),
    }
  }

  fn check(&self, cx: &SurfaceCurveComplex) -> Result<(), StateSumError> {
    if cx.curve_vertex_count() == 0 && (self.biset.h().order() != 1 || self.biset.size() != 1) {
      return Err(StateSumError::EmptyCurveData { h: self.biset.h().order(), x: self.biset.size() });
    }
    Ok(())
  }
}

/// Edge labels indexed like [`SurfaceCurveComplex::edges`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Coloring(pub Vec<Elem>);

impl Coloring {
  pub fn labels(&self) -> &[Elem] { &self.0 }

  pub fn label(&self, cx: &SurfaceCurveComplex, e: Edge) -> Elem { self.0[cx.edge_index(e).expect("edge of complex")] }

  /// Checks that every label lies in the domain of its edge class.
  pub fn check(&self, cx: &SurfaceCurveComplex, data: &GaugeData) -> Result<(), StateSumError> {
    if self.0.len() != cx.edges().len() {
      return Err(StateSumError::LabelCount { expected: cx.edges().len(), got: self.0.len() });
    }
    for (&e, &label) in cx.edges().iter().zip(&self.0) {
      let size = data.domain(edge_class(cx, e));
      if label >= size {
        return Err(StateSumError::LabelOutOfRange { edge: e, label, size });
      }
    }
    Ok(())
  }
}

/// Labels on the edges `01, 12, 02` of `t`.
fn triangle_labels(cx: &SurfaceCurveComplex, t: [Vertex; 3], coloring: &Coloring, ord: &VertexOrdering) -> [Elem; 3] {
  let [v0, v1, v2] = ord.local_order(t);
  [
    coloring.label(cx, Edge::new(v0, v1)),
    coloring.label(cx, Edge::new(v1, v2)),
    coloring.label(cx, Edge::new(v0, v2)),
  ]
}

fn relation(biset: &BiSet, class: TriangleClass, a: Elem, b: Elem) -> Elem {
  match class {
    TriangleClass::Bulk => biset.g().mul(a, b),
    TriangleClass::VertexOnCurve => biset.act_right(a, b),
    TriangleClass::EdgeOnCurve => biset.act_left(a, b),
  }
}

pub fn is_admissible(
  cx: &SurfaceCurveComplex,
  t: [Vertex; 3],
  coloring: &Coloring,
  ord: &VertexOrdering,
  data: &GaugeData,
) -> bool {
  let [a, b, c] = triangle_labels(cx, t, coloring, ord);
  relation(&data.biset, cx.classify(t), a, b) == c
}

pub fn chi(cx: &SurfaceCurveComplex, t: [Vertex; 3], coloring: &Coloring, ord: &VertexOrdering, data: &GaugeData) -> u8 {
  u8::from(is_admissible(cx, t, coloring, ord, data))
}

/// Labels on the edges `01` and `12`: `(f, g)`, `(x, g)` or `(eta, x)` by class.
pub fn lambda_tilde(cx: &SurfaceCurveComplex, t: [Vertex; 3], coloring: &Coloring, ord: &VertexOrdering) -> (Elem, Elem) {
  let [a, b, _] = triangle_labels(cx, t, coloring, ord);
  (a, b)
}

/// `alpha`, `beta` or `gamma` of `lambda_tilde`, raised to `epsilon(t)`.
pub fn weight(
  cx: &SurfaceCurveComplex,
  t: [Vertex; 3],
  coloring: &Coloring,
  ord: &VertexOrdering,
  twisting: &TwistingTriple,
) -> UnitScalar {
  let (a, b) = lambda_tilde(cx, t, coloring, ord);
  let w = match cx.classify(t) {
    TriangleClass::Bulk => twisting.alpha(a, b),
    TriangleClass::VertexOnCurve => twisting.beta(a, b),
    TriangleClass::EdgeOnCurve => twisting.gamma(a, b),
  };
  w.pow_sign(ord.epsilon(t))
}

/// How colourings are enumerated for the invariants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
  /// Every admissible colouring.
  Exhaustive,
  /// Colourings whose labels on spanning forests of the bulk graph and of the curve are the
  /// identity, rescaled by the order of the vertex gauge group acting freely on those labels.
  #[default]
  GaugeFixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Options {
  pub strategy: Strategy,
  /// Worker threads; `None` uses the global pool, `Some(1)` runs sequentially.
  pub jobs:     Option<usize>,
}

/// Result of a state-sum evaluation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateSum {
  /// Number of admissible colourings.
  pub kappa:         BigUint,
  /// `weight_counts[k]` admissible colourings have total weight `zeta_N^k`.
  pub weight_counts: Vec<BigUint>,
  /// `|G|^-(off-curve vertices) |H|^-(curve vertices)`.
  pub normalization: BigRational,
  /// The normalized, weighted sum.
  pub value:         CyclotomicNumber,
}

impl StateSum {
  pub fn modulus(&self) -> u32 { self.value.modulus() }

  /// `normalization * kappa`.
  pub fn untwisted(&self) -> BigRational { &self.normalization * BigRational::from_integer(self.kappa.clone().into()) }
}

#[derive(Debug, Clone, Copy)]
enum Source {
  Free,
  Fixed(Elem),
  /// Solve triangle `tri` for the label at position `unknown` (0, 1, 2 = edges 01, 12, 02).
  Solve { tri: usize, unknown: u8 },
}

#[derive(Debug, Clone)]
struct Step {
  edge:      usize,
  source:    Source,
  completes: Vec<usize>,
}

/// The relation `R(a, b) = c` of one triangle class, with inverse lookups.
#[derive(Debug, Clone)]
struct ClassTable {
  b_size:  usize,
  c_size:  usize,
  forward: Vec<Elem>,
  /// `(a, c) -> [b]`
  solve_b: Vec<Vec<Elem>>,
  /// `(b, c) -> [a]`
  solve_a: Vec<Vec<Elem>>,
  weight:  Vec<u32>,
}

impl ClassTable {
  fn new(sizes: [usize; 3], rel: impl Fn(Elem, Elem) -> Elem, weight: impl Fn(Elem, Elem) -> u32) -> Self {
    let [na, nb, nc] = sizes;
    let mut forward = Vec::with_capacity(na * nb);
    let mut solve_b = vec![Vec::new(); na * nc];
    let mut solve_a = vec![Vec::new(); nb * nc];
    let mut w = Vec::with_capacity(na * nb);
    for a in 0..na {
      for b in 0..nb {
        let c = rel(a, b);
        forward.push(c);
        solve_b[a * nc + c].push(b);
        solve_a[b * nc + c].push(a);
        w.push(weight(a, b));
      }
    }
    Self { b_size: nb, c_size: nc, forward, solve_b, solve_a, weight: w }
  }

  fn unique(&self, unknown: u8) -> bool {
    match unknown {
      2 => true,
      1 => self.solve_b.iter().all(|s| s.len() <= 1),
      _ => self.solve_a.iter().all(|s| s.len() <= 1),
    }
  }
}

#[derive(Debug, Clone, Copy)]
struct Tri {
  class: usize,
  edges: [usize; 3],
  neg:   bool,
}

/// A compiled enumeration plan for one complex, ordering and gauge data.
struct Evaluator {
  modulus: u32,
  domains: Vec<usize>,
  tables:  [ClassTable; 3],
  tris:    Vec<Tri>,
  steps:   Vec<Step>,
}

fn class_index(c: TriangleClass) -> usize {
  match c {
    TriangleClass::Bulk => 0,
    TriangleClass::VertexOnCurve => 1,
    TriangleClass::EdgeOnCurve => 2,
  }
}

/// Edges of a spanning forest of the graph on `vertices` formed by `edges`.
fn spanning_forest(n: usize, edges: impl Iterator<Item = (usize, Edge)>) -> Vec<usize> {
  let mut parent: Vec<usize> = (0..n).collect();
  fn find(p: &mut [usize], mut a: usize) -> usize {
    while p[a] != a {
      p[a] = p[p[a]];
      a = p[a];
    }
    a
  }
  let mut tree = Vec::new();
  for (i, e) in edges {
    let (ra, rb) = (find(&mut parent, e.lo()), find(&mut parent, e.hi()));
    if ra != rb {
      parent[ra] = rb;
      tree.push(i);
    }
  }
  tree
}

impl Evaluator {
  fn new(
    cx: &SurfaceCurveComplex,
    ord: &VertexOrdering,
    data: &GaugeData,
    weighted: bool,
    strategy: Strategy,
  ) -> Result<Self, StateSumError> {
    ord.check(cx)?;
    data.check(cx)?;
    let biset = &data.biset;
    let (ng, nh, nx) = (biset.g().order(), biset.h().order(), biset.size());
    let tw = if weighted { Some(data.twisting.as_ref().ok_or(StateSumError::MissingTwisting)?) } else { None };
    let modulus = tw.map_or(1, |t| t.modulus());
    let tables = [
      ClassTable::new([ng, ng, ng], |a, b| biset.g().mul(a, b), |a, b| tw.map_or(0, |t| t.alpha_exp(a, b))),
      ClassTable::new([nx, ng, nx], |a, b| biset.act_right(a, b), |a, b| tw.map_or(0, |t| t.beta_exp(a, b))),
      ClassTable::new([nh, nx, nx], |a, b| biset.act_left(a, b), |a, b| tw.map_or(0, |t| t.gamma_exp(a, b))),
    ];
    let domains: Vec<usize> = cx.edges().iter().map(|&e| data.domain(edge_class(cx, e))).collect();
    let tris: Vec<Tri> = cx
      .triangles()
      .iter()
      .map(|&t| {
        let [v0, v1, v2] = ord.local_order(t);
        let idx = |a, b| cx.edge_index(Edge::new(a, b)).expect("triangle edge");
        Tri {
          class: class_index(cx.classify(t)),
          edges: [idx(v0, v1), idx(v1, v2), idx(v0, v2)],
          neg:   ord.epsilon(t) < 0,
        }
      })
      .collect();

    let mut fixed = Vec::new();
    if strategy == Strategy::GaugeFixed {
      let n = cx.vertex_count();
      let bulk = cx.edges().iter().copied().enumerate().filter(|&(_, e)| edge_class(cx, e) == EdgeClass::Bulk);
      fixed.extend(spanning_forest(n, bulk));
      let curve = cx.edges().iter().copied().enumerate().filter(|&(_, e)| cx.is_curve_edge(e));
      fixed.extend(spanning_forest(n, curve));
    }
    let steps = plan(cx.edges().len(), &tris, &tables, &fixed);
    Ok(Self { modulus, domains, tables, tris, steps })
  }

  /// Gauge group order divided out by fixing, as `(bulk tree edges, curve tree edges)`.
  fn fixed_counts(&self, cx: &SurfaceCurveComplex) -> (usize, usize) {
    let mut counts = (0, 0);
    for s in &self.steps {
      if let Source::Fixed(_) = s.source {
        if cx.is_curve_edge(cx.edges()[s.edge]) {
          counts.1 += 1;
        } else {
          counts.0 += 1;
        }
      }
    }
    counts
  }

  fn candidates<'a>(&'a self, step: &Step, labels: &[Elem], buf: &'a mut [Elem; 1]) -> &'a [Elem] {
    match step.source {
      Source::Fixed(v) => {
        buf[0] = v;
        &buf[..]
      }
      Source::Free => {
        // sentinel: an empty slice means "every label in the domain"
        &[]
      }
      Source::Solve { tri, unknown } => {
        let t = &self.tris[tri];
        let table = &self.tables[t.class];
        let [ea, eb, ec] = t.edges;
        match unknown {
          2 => {
            buf[0] = table.forward[labels[ea] * table.b_size + labels[eb]];
            &buf[..]
          }
          1 => &table.solve_b[labels[ea] * table.c_size + labels[ec]],
          _ => &table.solve_a[labels[eb] * table.c_size + labels[ec]],
        }
      }
    }
  }

  /// Applies `value` at `depth`; returns the added weight exponent if all completed triangles
  /// are admissible.
  fn place(&self, depth: usize, value: Elem, labels: &mut [Elem]) -> Option<u32> {
    let step = &self.steps[depth];
    labels[step.edge] = value;
    let mut add = 0u32;
    for &ti in &step.completes {
      let t = &self.tris[ti];
      let table = &self.tables[t.class];
      let [ea, eb, ec] = t.edges;
      let k = labels[ea] * table.b_size + labels[eb];
      if table.forward[k] != labels[ec] {
        return None;
      }
      let w = table.weight[k];
      add += if t.neg { (self.modulus - w) % self.modulus } else { w };
    }
    Some(add % self.modulus)
  }

  fn dfs(&self, depth: usize, labels: &mut Vec<Elem>, exp: u32, visit: &mut dyn FnMut(&[Elem], u32)) {
    if depth == self.steps.len() {
      visit(labels, exp);
      return;
    }
    let step = &self.steps[depth];
    let mut buf = [0];
    let cands = self.candidates(step, labels, &mut buf);
    if matches!(step.source, Source::Free) {
      for v in 0..self.domains[step.edge] {
        if let Some(add) = self.place(depth, v, labels) {
          self.dfs(depth + 1, labels, (exp + add) % self.modulus, visit);
        }
      }
    } else {
      let cands: Vec<Elem> = cands.to_vec();
      for v in cands {
        if let Some(add) = self.place(depth, v, labels) {
          self.dfs(depth + 1, labels, (exp + add) % self.modulus, visit);
        }
      }
    }
  }

  /// Partial assignments after the first `depth` steps.
  fn prefixes(&self, depth: usize) -> Vec<(Vec<Elem>, u32)> {
    let mut level = vec![(vec![0; self.domains.len()], 0u32)];
    for d in 0..depth {
      let mut next = Vec::new();
      for (labels, exp) in level {
        let step = &self.steps[d];
        let mut buf = [0];
        let values: Vec<Elem> = if matches!(step.source, Source::Free) {
          (0..self.domains[step.edge]).collect()
        } else {
          self.candidates(step, &labels, &mut buf).to_vec()
        };
        for v in values {
          let mut l = labels.clone();
          if let Some(add) = self.place(d, v, &mut l) {
            next.push((l, (exp + add) % self.modulus));
          }
        }
      }
      level = next;
    }
    level
  }

  fn histogram(&self, parallel: bool) -> Vec<u64> {
    let n = self.modulus as usize;
    if !parallel {
      let mut hist = vec![0u64; n];
      let mut labels = vec![0; self.domains.len()];
      self.dfs(0, &mut labels, 0, &mut |_, e| hist[e as usize] += 1);
      return hist;
    }
    let mut depth = 0;
    let mut frontier = self.prefixes(0);
    while depth < self.steps.len() && frontier.len() < 256 {
      depth += 1;
      frontier = self.prefixes(depth);
    }
    frontier
      .into_par_iter()
      .map(|(mut labels, exp)| {
        let mut hist = vec![0u64; n];
        self.dfs(depth, &mut labels, exp, &mut |_, e| hist[e as usize] += 1);
        hist
      })
      .reduce(|| vec![0u64; n], |a, b| a.iter().zip(&b).map(|(x, y)| x + y).collect())
  }
}

/// Greedy triangle-saturating edge order: fixed edges first, then repeatedly an edge forced by a
/// triangle whose other two edges are known (unique solutions preferred), else a free edge.
fn plan(edge_count: usize, tris: &[Tri], tables: &[ClassTable; 3], fixed: &[usize]) -> Vec<Step> {
  let mut assigned = vec![false; edge_count];
  let mut done = vec![false; tris.len()];
  let mut edge_tris = vec![Vec::new(); edge_count];
  for (i, t) in tris.iter().enumerate() {
    for &e in &t.edges {
      edge_tris[e].push(i);
    }
  }
  let mut steps = Vec::with_capacity(edge_count);
  let mut push = |edge: usize, source: Source, assigned: &mut Vec<bool>, done: &mut Vec<bool>| {
    assigned[edge] = true;
    let mut completes = Vec::new();
    for &ti in &edge_tris[edge] {
      if !done[ti] && tris[ti].edges.iter().all(|&e| assigned[e]) {
        done[ti] = true;
        completes.push(ti);
      }
    }
    steps.push(Step { edge, source, completes });
  };
  for &e in fixed {
    push(e, Source::Fixed(IDENTITY), &mut assigned, &mut done);
  }
  while assigned.iter().any(|&a| !a) {
    // best forced edge: score 2 for a unique solve, 1 otherwise
    let mut best: Option<(u8, usize, u8)> = None;
    for (ti, t) in tris.iter().enumerate() {
      let missing: Vec<u8> = (0..3u8).filter(|&p| !assigned[t.edges[p as usize]]).collect();
      if missing.len() != 1 {
        continue;
      }
      let unknown = missing[0];
      let score = if tables[t.class].unique(unknown) { 2 } else { 1 };
      if best.is_none_or(|(s, _, _)| score > s) {
        best = Some((score, ti, unknown));
        if score == 2 {
          break;
        }
      }
    }
    if let Some((_, ti, unknown)) = best {
      let edge = tris[ti].edges[unknown as usize];
      push(edge, Source::Solve { tri: ti, unknown }, &mut assigned, &mut done);
      continue;
    }
    // free edge: prefer one touching partially assigned triangles
    let edge = (0..edge_count)
      .filter(|&e| !assigned[e])
      .max_by_key(|&e| {
        let touching = edge_tris[e].iter().filter(|&&ti| tris[ti].edges.iter().any(|&x| assigned[x])).count();
        (touching, std::cmp::Reverse(e))
      })
      .expect("unassigned edge");
    push(edge, Source::Free, &mut assigned, &mut done);
  }
  steps
}

fn run<R>(jobs: Option<usize>, f: impl FnOnce() -> R + Send) -> R
where
  R: Send,
{
  match jobs {
    Some(n) if n > 1 => rayon::ThreadPoolBuilder::new().num_threads(n).build().expect("thread pool").install(f),
    _ => f(),
  }
}

fn pow(base: usize, exp: usize) -> BigUint { BigUint::from(base).pow(exp as u32) }

fn evaluate(
  cx: &SurfaceCurveComplex,
  ord: &VertexOrdering,
  data: &GaugeData,
  weighted: bool,
  options: &Options,
) -> Result<StateSum, StateSumError> {
  let ev = Evaluator::new(cx, ord, data, weighted, options.strategy)?;
  let parallel = options.jobs != Some(1);
  let hist = run(options.jobs, || ev.histogram(parallel));
  let (ng, nh) = (data.biset.g().order(), data.biset.h().order());
  let (fixed_bulk, fixed_curve) = ev.fixed_counts(cx);
  let gauge = pow(ng, fixed_bulk) * pow(nh, fixed_curve);
  let weight_counts: Vec<BigUint> = hist.iter().map(|&c| BigUint::from(c) * &gauge).collect();
  let kappa = weight_counts.iter().sum();
  let normalization = normalization(cx, data);
  let scale = &normalization * BigRational::from_integer(gauge.into());
  let value = CyclotomicNumber::from_exponent_counts(ev.modulus, &hist).scale(&scale);
  Ok(StateSum { kappa, weight_counts, normalization, value })
}

/// Untwisted evaluation (weights ignored even when a twisting is present).
pub fn compute_untwisted(
  cx: &SurfaceCurveComplex,
  ord: &VertexOrdering,
  data: &GaugeData,
  options: &Options,
) -> Result<StateSum, StateSumError> {
  evaluate(cx, ord, data, false, options)
}

/// Twisted evaluation; requires a twisting in `data`.
pub fn compute_twisted(
  cx: &SurfaceCurveComplex,
  ord: &VertexOrdering,
  data: &GaugeData,
  options: &Options,
) -> Result<StateSum, StateSumError> {
  evaluate(cx, ord, data, true, options)
}

pub fn invariant_untwisted(
  cx: &SurfaceCurveComplex,
  ord: &VertexOrdering,
  data: &GaugeData,
) -> Result<BigRational, StateSumError> {
  Ok(compute_untwisted(cx, ord, data, &Options::default())?.untwisted())
}

pub fn invariant_twisted(
  cx: &SurfaceCurveComplex,
  ord: &VertexOrdering,
  data: &GaugeData,
) -> Result<CyclotomicNumber, StateSumError> {
  Ok(compute_twisted(cx, ord, data, &Options::default())?.value)
}

/// Number of admissible colourings, by exhaustive enumeration.
pub fn count_admissible(cx: &SurfaceCurveComplex, ord: &VertexOrdering, data: &GaugeData) -> Result<u64, StateSumError> {
  let opts = Options { strategy: Strategy::Exhaustive, jobs: Some(1) };
  let sum = compute_untwisted(cx, ord, data, &opts)?;
  Ok(sum.kappa.to_u64().expect("count fits in u64"))
}

/// Calls `visit` once per admissible colouring, in a deterministic order.
pub fn for_each_admissible(
  cx: &SurfaceCurveComplex,
  ord: &VertexOrdering,
  data: &GaugeData,
  mut visit: impl FnMut(&Coloring),
) -> Result<(), StateSumError> {
  let ev = Evaluator::new(cx, ord, data, false, Strategy::Exhaustive)?;
  let mut labels = vec![0; ev.domains.len()];
  let mut scratch = Coloring(Vec::new());
  ev.dfs(0, &mut labels, 0, &mut |l, _| {
    scratch.0.clear();
    scratch.0.extend_from_slice(l);
    visit(&scratch);
  });
  Ok(())
}

pub fn enumerate_admissible(
  cx: &SurfaceCurveComplex,
  ord: &VertexOrdering,
  data: &GaugeData,
) -> Result<Vec<Coloring>, StateSumError> {
  let mut out = Vec::new();
  for_each_admissible(cx, ord, data, |c| out.push(c.clone()))?;
  Ok(out)
}

/// `|G|^-(off-curve vertices) |H|^-(curve vertices)`.
pub fn normalization(cx: &SurfaceCurveComplex, data: &GaugeData) -> BigRational {
  let (ng, nh) = (data.biset.g().order(), data.biset.h().order());
  BigRational::new(BigInt::one(), (pow(ng, cx.off_curve_vertex_count()) * pow(nh, cx.curve_vertex_count())).into())
}

#[cfg(test)]
mod tests {
  use super::*;
  use crate::algebra::{characters_of, cyclic_group, symmetric_group, FiniteGroup};
  use crate::complex::{sphere_octahedron_equator, tetrahedron_sphere, torus_7vertex, torus_grid};
  use crate::twisting::from_characters;

  fn z(n: usize) -> Arc<FiniteGroup> { Arc::new(cyclic_group(n)) }

  fn q(n: i64, d: i64) -> BigRational { BigRational::new(BigInt::from(n), BigInt::from(d)) }

  fn exhaustive() -> Options { Options { strategy: Strategy::Exhaustive, jobs: Some(1) } }

  #[test]
  fn edge_classes() {
    let cx = sphere_octahedron_equator();
    assert_eq!(edge_class(&cx, Edge::new(0, 4)), EdgeClass::MeetsCurve);
    assert_eq!(edge_class(&cx, Edge::new(0, 1)), EdgeClass::OnCurve);
    let grid = torus_grid(3, 3, 0).unwrap();
    assert_eq!(edge_class(&grid, Edge::new(3, 4)), EdgeClass::Bulk);
  }

  #[test]
  fn dijkgraaf_witten_values() {
    let tet = tetrahedron_sphere();
    let data = GaugeData::bulk_only(z(2));
    let ord = VertexOrdering::curve_first(&tet);
    assert_eq!(count_admissible(&tet, &ord, &data).unwrap(), 8);
    assert_eq!(invariant_untwisted(&tet, &ord, &data).unwrap(), q(1, 2));

    let t7 = torus_7vertex();
    let ord = VertexOrdering::curve_first(&t7);
    assert_eq!(count_admissible(&t7, &ord, &data).unwrap(), 256);
    assert_eq!(invariant_untwisted(&t7, &ord, &data).unwrap(), q(2, 1));
    let s3 = GaugeData::bulk_only(Arc::new(symmetric_group(3)));
    assert_eq!(invariant_untwisted(&t7, &ord, &s3).unwrap(), q(3, 1));
  }

  #[test]
  fn trivial_data_has_one_colouring() {
    let one = z(1);
    let data = GaugeData::untwisted(Arc::new(BiSet::regular(one)));
    for cx in [sphere_octahedron_equator(), torus_grid(3, 4, 2).unwrap()] {
      let ord = VertexOrdering::curve_first(&cx);
      assert_eq!(count_admissible(&cx, &ord, &data).unwrap(), 1);
      assert_eq!(invariant_untwisted(&cx, &ord, &data).unwrap(), q(1, 1));
    }
  }

  #[test]
  fn empty_curve_requires_degenerate_data() {
    let tet = tetrahedron_sphere();
    let data = GaugeData::untwisted(Arc::new(BiSet::regular(z(2))));
    let err = invariant_untwisted(&tet, &VertexOrdering::curve_first(&tet), &data).unwrap_err();
    assert_eq!(err, StateSumError::EmptyCurveData { h: 2, x: 2 });
  }

  #[test]
  fn admissibility_examples() {
    // Z/3 bulk: 1 + 2 = 0
    let grid = torus_grid(3, 3, 0).unwrap();
    let ord = VertexOrdering::curve_first(&grid);
    let data = GaugeData::untwisted(Arc::new(BiSet::regular(z(3))));
    let bulk = *grid.triangles().iter().find(|&&t| grid.classify(t) == TriangleClass::Bulk).unwrap();
    let [v0, v1, v2] = ord.local_order(bulk);
    let mut labels = vec![0; grid.edges().len()];
    labels[grid.edge_index(Edge::new(v0, v1)).unwrap()] = 1;
    labels[grid.edge_index(Edge::new(v1, v2)).unwrap()] = 2;
    labels[grid.edge_index(Edge::new(v0, v2)).unwrap()] = 0;
    let col = Coloring(labels);
    assert!(is_admissible(&grid, bulk, &col, &ord, &data));
    assert_eq!(chi(&grid, bulk, &col, &ord, &data), 1);

    let oct = sphere_octahedron_equator();
    let ord = VertexOrdering::curve_first(&oct);
    let data = GaugeData::untwisted(Arc::new(BiSet::regular(z(2))));
    // EdgeOnCurve triangle (0, 1, 4): eta = 1, x = 0, y = 1
    let t = [0, 1, 4];
    let mut labels = vec![0; oct.edges().len()];
    labels[oct.edge_index(Edge::new(0, 1)).unwrap()] = 1;
    labels[oct.edge_index(Edge::new(0, 4)).unwrap()] = 1;
    let col = Coloring(labels);
    assert!(is_admissible(&oct, t, &col, &ord, &data));
    assert_eq!(lambda_tilde(&oct, t, &col, &ord), (1, 0));
  }

  #[test]
  fn vertex_on_curve_admissibility() {
    let cx = torus_grid(3, 3, 0).unwrap();
    let ord = VertexOrdering::curve_first(&cx);
    let data = GaugeData::untwisted(Arc::new(BiSet::regular(z(2))));
    let t = *cx.triangles().iter().find(|&&t| cx.classify(t) == TriangleClass::VertexOnCurve).unwrap();
    let [v0, v1, v2] = ord.local_order(t);
    let mut labels = vec![0; cx.edges().len()];
    labels[cx.edge_index(Edge::new(v1, v2)).unwrap()] = 1;
    let col = Coloring(labels);
    assert_eq!(chi(&cx, t, &col, &ord, &data), 0);
    assert!(cx.is_on_curve(v0));
  }

  #[test]
  fn weights_follow_epsilon() {
    let cx = sphere_octahedron_equator();
    let ord = VertexOrdering::curve_first(&cx);
    let biset = Arc::new(BiSet::regular(z(2)));
    let chars = characters_of(biset.g(), 2);
    let tw = from_characters(biset.clone(), &chars[1..], &chars[1..], 2).unwrap();
    let t = *cx.triangles().iter().find(|&&t| ord.epsilon(t) < 0).unwrap();
    let [v0, _, v2] = ord.local_order(t);
    let mut labels = vec![0; cx.edges().len()];
    labels[cx.edge_index(Edge::new(v0, ord.local_order(t)[1])).unwrap()] = 1;
    labels[cx.edge_index(Edge::new(v0, v2)).unwrap()] = 1;
    let w = weight(&cx, t, &Coloring(labels), &ord, &tw);
    assert_eq!(w, UnitScalar::new(2, 1));

    let trivial = TwistingTriple::trivial(biset, 3);
    let w = weight(&cx, t, &Coloring(vec![0; cx.edges().len()]), &ord, &trivial);
    assert!(w.is_one());
  }

  #[test]
  fn gauge_fixed_matches_exhaustive() {
    let s3 = Arc::new(symmetric_group(3));
    let (h, embed) = s3.subgroup(&[0, 1]).unwrap();
    let h = Arc::new(h);
    let biset = Arc::new(BiSet::from_fns(6, s3.clone(), h, |x, g| s3.mul(x, g), |eta, x| s3.mul(embed[eta], x)).unwrap());
    let data = GaugeData::untwisted(biset);
    for cx in [sphere_octahedron_equator(), torus_grid(3, 3, 0).unwrap()] {
      let ord = VertexOrdering::curve_first(&cx);
      let a = compute_untwisted(&cx, &ord, &data, &exhaustive()).unwrap();
      let b = compute_untwisted(&cx, &ord, &data, &Options::default()).unwrap();
      assert_eq!(a, b);
    }
  }

  #[test]
  fn twisted_gauge_fixed_matches_exhaustive() {
    let biset = Arc::new(BiSet::regular(z(2)));
    let chars = characters_of(biset.g(), 2);
    let tw = from_characters(biset, &chars[1..], &chars[1..], 2).unwrap();
    let data = GaugeData::twisted(tw);
    for cx in [sphere_octahedron_equator(), torus_grid(3, 3, 0).unwrap()] {
      let ord = VertexOrdering::curve_first(&cx);
      let a = compute_twisted(&cx, &ord, &data, &exhaustive()).unwrap();
      let b = compute_twisted(&cx, &ord, &data, &Options { strategy: Strategy::GaugeFixed, jobs: Some(2) }).unwrap();
      assert_eq!(a, b);
    }
  }

  #[test]
  fn trivial_twisting_embeds_untwisted() {
    let biset = Arc::new(BiSet::regular(z(3)));
    let data = GaugeData::twisted(TwistingTriple::trivial(biset, 3));
    let cx = sphere_octahedron_equator();
    let ord = VertexOrdering::curve_first(&cx);
    let t = invariant_twisted(&cx, &ord, &data).unwrap();
    let u = invariant_untwisted(&cx, &ord, &data).unwrap();
    assert_eq!(t.as_rational(), Some(u));
  }

  #[test]
  fn enumeration_is_well_typed_and_admissible() {
    let data = GaugeData::untwisted(Arc::new(BiSet::regular(z(2))));
    let cx = sphere_octahedron_equator();
    let ord = VertexOrdering::curve_first(&cx);
    let all = enumerate_admissible(&cx, &ord, &data).unwrap();
    assert_eq!(all.len() as u64, count_admissible(&cx, &ord, &data).unwrap());
    for c in &all {
      c.check(&cx, &data).unwrap();
      assert!(cx.triangles().iter().all(|&t| is_admissible(&cx, t, c, &ord, &data)));
    }
    let mut sorted = all.clone();
    sorted.sort();
    sorted.dedup();
    assert_eq!(sorted.len(), all.len());
  }

  #[test]
  fn missing_twisting_and_mismatch() {
    let data = GaugeData::untwisted(Arc::new(BiSet::regular(z(2))));
    let cx = sphere_octahedron_equator();
    let ord = VertexOrdering::curve_first(&cx);
    assert_eq!(invariant_twisted(&cx, &ord, &data).unwrap_err(), StateSumError::MissingTwisting);
    let other = TwistingTriple::trivial(Arc::new(BiSet::regular(z(3))), 3);
    assert_eq!(GaugeData::new(data.biset().clone(), Some(other)), Err(StateSumError::BiSetMismatch));
  }
}
