//! Flag-like extended Pachner moves: 1-3 subdivision and its 3-1 weld, the 2-2 flip, and the
//! 1-2 subdivision of a curve edge with its 2-1 weld.
//!
//! Moves are persistent: they return a new complex and ordering. New vertices are appended with
//! index `vertex_count()`; welds delete a vertex and shift higher indices down by one.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{ComplexError, Edge, OrderingError, RawComplex, SurfaceCurveComplex, Vertex, VertexOrdering};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MoveKind {
  Subdivide13,
  Weld31,
  Flip22,
  CurveSubdivide12,
  CurveWeld21,
}

impl MoveKind {
  pub const ALL: [MoveKind; 5] =
    [MoveKind::Subdivide13, MoveKind::Weld31, MoveKind::Flip22, MoveKind::CurveSubdivide12, MoveKind::CurveWeld21];

  pub fn adds_vertex(self) -> bool { matches!(self, MoveKind::Subdivide13 | MoveKind::CurveSubdivide12) }

  pub fn removes_vertex(self) -> bool { matches!(self, MoveKind::Weld31 | MoveKind::CurveWeld21) }
}

/// The simplex a move acts on, named by vertex labels of the pre-move complex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MoveTarget {
  Triangle([Vertex; 3]),
  Edge([Vertex; 2]),
  Vertex(Vertex),
}

impl fmt::Display for MoveTarget {
  fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match self {
      MoveTarget::Triangle(t) => write!(f, "triangle {t:?}"),
      MoveTarget::Edge(e) => write!(f, "edge {e:?}"),
      MoveTarget::Vertex(v) => write!(f, "vertex {v}"),
    }
  }
}

/// Enough information to replay a move deterministically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MoveRecord {
  pub kind:          MoveKind,
  pub target:        MoveTarget,
  /// Rank given to the new vertex, for subdividing moves.
  #[serde(default, skip_serializing_if = "Option::is_none")]
  pub rank_position: Option<usize>,
}

impl fmt::Display for MoveRecord {
  fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    write!(f, "{:?} on {}", self.kind, self.target)?;
    if let Some(p) = self.rank_position {
      write!(f, " at rank {p}")?;
    }
    Ok(())
  }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoveError {
  #[error("no triangle {0:?} in the complex")]
  NoSuchTriangle([Vertex; 3]),
  #[error("no edge {0} in the complex")]
  NoSuchEdge(Edge),
  #[error("no vertex {0} in the complex")]
  NoSuchVertex(Vertex),
  #[error("rank position {position} outside the legal range {lo}..={hi}")]
  BadRankPosition { position: usize, lo: usize, hi: usize },
  #[error("vertex {0} lies on the curve")]
  OnCurveVertex(Vertex),
  #[error("vertex {vertex} has degree {degree}, expected 3")]
  NotDegreeThree { vertex: Vertex, degree: usize },
  #[error("edge {0} is a curve edge and cannot be flipped")]
  CurveEdgeFlip(Edge),
  #[error("flipping edge {0} would create an existing edge")]
  DegenerateQuad(Edge),
  #[error("edge {0} is not a curve edge")]
  NotCurveEdge(Edge),
  #[error("vertex {0} does not have the link of a subdivided curve edge")]
  WrongLink(Vertex),
  #[error("move would break flag-likeness: {0}")]
  WouldBreakFlagLike(ComplexError),
  #[error("move would not produce a simplicial surface: {0}")]
  WouldBreakSurface(ComplexError),
  #[error("move kind {kind:?} cannot act on {target}")]
  TargetMismatch { kind: MoveKind, target: MoveTarget },
  #[error("ordering does not fit the complex: {0}")]
  Ordering(#[from] OrderingError),
}

fn finish(raw: RawComplex) -> Result<SurfaceCurveComplex, MoveError> {
  SurfaceCurveComplex::validate(&raw).map_err(|e| match e {
    ComplexError::NotFlagLike(_) | ComplexError::CurveNotCurve(_) => MoveError::WouldBreakFlagLike(e),
    other => MoveError::WouldBreakSurface(other),
  })
}

/// Triangle index of the stored triangle with the vertex set of `t`.
fn find_triangle(cx: &SurfaceCurveComplex, t: [Vertex; 3]) -> Result<usize, MoveError> {
  let mut key = t;
  key.sort_unstable();
  cx.triangles()
    .iter()
    .position(|s| {
      let mut s = *s;
      s.sort_unstable();
      s == key
    })
    .ok_or(MoveError::NoSuchTriangle(t))
}

fn check_vertex(cx: &SurfaceCurveComplex, v: Vertex) -> Result<(), MoveError> {
  if v >= cx.vertex_count() { Err(MoveError::NoSuchVertex(v)) } else { Ok(()) }
}

fn check_rank(position: usize, lo: usize, hi: usize) -> Result<(), MoveError> {
  if position < lo || position > hi { Err(MoveError::BadRankPosition { position, lo, hi }) } else { Ok(()) }
}

/// Rotates `t` so that `first` comes first.
fn rotate_to(t: [Vertex; 3], first: Vertex) -> [Vertex; 3] {
  let i = t.iter().position(|&v| v == first).expect("vertex in triangle");
  [t[i], t[(i + 1) % 3], t[(i + 2) % 3]]
}

/// The two triangles at `e = {u, w}` as `(a, b, c)` and `(b, a, d)`; `c`, `d` are the apexes.
fn edge_quad(cx: &SurfaceCurveComplex, e: Edge) -> Result<(usize, usize, [Vertex; 4]), MoveError> {
  let at = cx.triangles_at_edge(e);
  if at.len() != 2 {
    return Err(MoveError::NoSuchEdge(e));
  }
  let (mut i1, mut i2) = (at[0], at[1]);
  let mut t1 = rotate_to(cx.triangles()[i1], e.lo());
  if t1[1] != e.hi() {
    std::mem::swap(&mut i1, &mut i2);
    t1 = rotate_to(cx.triangles()[i1], e.lo());
  }
  let t2 = rotate_to(cx.triangles()[i2], e.hi());
  debug_assert_eq!(t1[1], e.hi());
  debug_assert_eq!(t2[1], e.lo());
  Ok((i1, i2, [t1[0], t1[1], t1[2], t2[2]]))
}

/// Link of `v` as a cyclic successor map: triangle `(v, p, q)` contributes `p -> q`.
fn link_cycle(cx: &SurfaceCurveComplex, v: Vertex) -> Vec<Vertex> {
  let next: HashMap<Vertex, Vertex> = cx
    .triangles()
    .iter()
    .filter(|t| t.contains(&v))
    .map(|&t| {
      let r = rotate_to(t, v);
      (r[1], r[2])
    })
    .collect();
  let start = *next.keys().min().expect("vertex has a link");
  let mut cycle = vec![start];
  let mut cur = next[&start];
  while cur != start {
    cycle.push(cur);
    cur = next[&cur];
  }
  cycle
}

fn relabel_without(raw: &mut RawComplex, v: Vertex) {
  let shift = |w: Vertex| if w > v { w - 1 } else { w };
  raw.vertices -= 1;
  raw.on_curve.remove(v);
  for t in &mut raw.triangles {
    *t = t.map(shift);
  }
  for e in &mut raw.curve_edges {
    *e = e.map(shift);
  }
}

/// Legal rank positions for the vertex added by a subdividing move of `kind`.
pub fn rank_range(cx: &SurfaceCurveComplex, kind: MoveKind) -> Option<(usize, usize)> {
  match kind {
    MoveKind::Subdivide13 => Some((cx.curve_vertex_count(), cx.vertex_count())),
    MoveKind::CurveSubdivide12 => Some((0, cx.curve_vertex_count())),
    _ => None,
  }
}

/// Replaces triangle `t` by three triangles around a new off-curve vertex.
pub fn subdivide_13(
  cx: &SurfaceCurveComplex,
  ord: &VertexOrdering,
  t: [Vertex; 3],
  rank_position: usize,
) -> Result<(SurfaceCurveComplex, VertexOrdering), MoveError> {
  ord.check(cx)?;
  let idx = find_triangle(cx, t)?;
  check_rank(rank_position, cx.curve_vertex_count(), cx.vertex_count())?;
  let [a, b, c] = cx.triangles()[idx];
  let v = cx.vertex_count();
  let mut raw = cx.to_raw();
  raw.vertices += 1;
  raw.on_curve.push(false);
  raw.triangles.swap_remove(idx);
  raw.triangles.extend([[a, b, v], [b, c, v], [c, a, v]]);
  Ok((finish(raw)?, ord.with_inserted(rank_position)))
}

/// Removes an off-curve vertex of degree three, merging its three triangles.
pub fn weld_31(
  cx: &SurfaceCurveComplex,
  ord: &VertexOrdering,
  v: Vertex,
) -> Result<(SurfaceCurveComplex, VertexOrdering), MoveError> {
  ord.check(cx)?;
  check_vertex(cx, v)?;
  if cx.is_on_curve(v) {
    return Err(MoveError::OnCurveVertex(v));
  }
  let around = cx.triangles_around(v);
  if around.len() != 3 {
    return Err(MoveError::NotDegreeThree { vertex: v, degree: around.len() });
  }
  let link = link_cycle(cx, v);
  let mut raw = cx.to_raw();
  raw.triangles = raw.triangles.iter().enumerate().filter(|(i, _)| !around.contains(i)).map(|(_, &t)| t).collect();
  // (v, p, q) oriented means the merged triangle runs p -> q
  raw.triangles.push([link[0], link[1], link[2]]);
  relabel_without(&mut raw, v);
  Ok((finish(raw)?, ord.with_removed(v)))
}

/// Replaces the diagonal `e` of the quadrilateral formed by its two triangles with the other one.
pub fn flip_22(
  cx: &SurfaceCurveComplex,
  ord: &VertexOrdering,
  e: Edge,
) -> Result<(SurfaceCurveComplex, VertexOrdering), MoveError> {
  ord.check(cx)?;
  if !cx.has_edge(e) {
    return Err(MoveError::NoSuchEdge(e));
  }
  if cx.is_curve_edge(e) {
    return Err(MoveError::CurveEdgeFlip(e));
  }
  let (i1, i2, [a, b, c, d]) = edge_quad(cx, e)?;
  if cx.has_edge(Edge::new(c, d)) {
    return Err(MoveError::DegenerateQuad(e));
  }
  let mut raw = cx.to_raw();
  raw.triangles[i1] = [a, d, c];
  raw.triangles[i2] = [d, b, c];
  Ok((finish(raw)?, ord.clone()))
}

/// Splits the curve edge `e` at a new curve vertex joined to both apexes.
pub fn curve_subdivide_12(
  cx: &SurfaceCurveComplex,
  ord: &VertexOrdering,
  e: Edge,
  rank_position: usize,
) -> Result<(SurfaceCurveComplex, VertexOrdering), MoveError> {
  ord.check(cx)?;
  if !cx.has_edge(e) {
    return Err(MoveError::NoSuchEdge(e));
  }
  if !cx.is_curve_edge(e) {
    return Err(MoveError::NotCurveEdge(e));
  }
  check_rank(rank_position, 0, cx.curve_vertex_count())?;
  let (i1, i2, [a, b, c, d]) = edge_quad(cx, e)?;
  let m = cx.vertex_count();
  let mut raw = cx.to_raw();
  raw.vertices += 1;
  raw.on_curve.push(true);
  raw.triangles[i1] = [a, m, c];
  raw.triangles[i2] = [b, m, d];
  raw.triangles.extend([[m, b, c], [m, a, d]]);
  raw.curve_edges.retain(|&[p, q]| Edge::new(p, q) != e);
  raw.curve_edges.extend([[a, m], [m, b]]);
  Ok((finish(raw)?, ord.with_inserted(rank_position)))
}

/// Removes a curve vertex of degree four whose curve neighbours are opposite in its link,
/// merging its two curve edges.
pub fn curve_weld_21(
  cx: &SurfaceCurveComplex,
  ord: &VertexOrdering,
  v: Vertex,
) -> Result<(SurfaceCurveComplex, VertexOrdering), MoveError> {
  ord.check(cx)?;
  check_vertex(cx, v)?;
  if !cx.is_on_curve(v) || cx.degree(v) != 4 {
    return Err(MoveError::WrongLink(v));
  }
  let neighbours: Vec<Vertex> = cx.curve_edges().filter(|e| e.contains(v)).map(|e| e.other(v)).collect();
  let link = link_cycle(cx, v);
  let pos = |w: Vertex| link.iter().position(|&u| u == w).expect("curve neighbour in link");
  let (pa, pb) = (pos(neighbours[0]), pos(neighbours[1]));
  if (pa + 2) % 4 != pb {
    return Err(MoveError::WrongLink(v));
  }
  // (v, p, q) contributes p -> q, so the link runs a -> d -> b -> c
  let a = link[pa];
  let d = link[(pa + 1) % 4];
  let b = link[pb];
  let c = link[(pa + 3) % 4];
  if cx.has_edge(Edge::new(a, b)) {
    return Err(MoveError::WouldBreakSurface(ComplexError::NotClosed(Edge::new(a, b))));
  }
  let mut raw = cx.to_raw();
  raw.triangles.retain(|t| !t.contains(&v));
  raw.triangles.extend([[a, b, c], [b, a, d]]);
  raw.curve_edges.retain(|e| !e.contains(&v));
  raw.curve_edges.push([a, b]);
  relabel_without(&mut raw, v);
  Ok((finish(raw)?, ord.with_removed(v)))
}

/// Applies a recorded move.
pub fn apply(
  cx: &SurfaceCurveComplex,
  ord: &VertexOrdering,
  record: &MoveRecord,
) -> Result<(SurfaceCurveComplex, VertexOrdering), MoveError> {
  let mismatch = || MoveError::TargetMismatch { kind: record.kind, target: record.target };
  let rank = || record.rank_position.ok_or_else(mismatch);
  match (record.kind, record.target) {
    (MoveKind::Subdivide13, MoveTarget::Triangle(t)) => subdivide_13(cx, ord, t, rank()?),
    (MoveKind::Weld31, MoveTarget::Vertex(v)) => weld_31(cx, ord, v),
    (MoveKind::Flip22, MoveTarget::Edge([p, q])) if p != q => flip_22(cx, ord, Edge::new(p, q)),
    (MoveKind::CurveSubdivide12, MoveTarget::Edge([p, q])) if p != q => {
      curve_subdivide_12(cx, ord, Edge::new(p, q), rank()?)
    }
    (MoveKind::CurveWeld21, MoveTarget::Vertex(v)) => curve_weld_21(cx, ord, v),
    _ => Err(mismatch()),
  }
}

/// One accepted step of a random walk: the state after applying `record`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkStep {
  pub complex:  SurfaceCurveComplex,
  pub ordering: VertexOrdering,
  pub record:   MoveRecord,
}

/// Parameters for [`random_walk`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkConfig {
  pub steps:              usize,
  pub seed:               u64,
  /// Subdividing moves are not proposed once the complex has this many more vertices than the
  /// start.
  pub max_extra_vertices: usize,
  /// Proposals tried per step before giving up on the step.
  pub max_attempts:       usize,
}

impl WalkConfig {
  pub fn new(steps: usize, seed: u64) -> Self { Self { steps, seed, max_extra_vertices: 3, max_attempts: 200 } }
}

/// Candidate targets of each kind in the current complex, before precondition checks.
fn propose<R: Rng>(cx: &SurfaceCurveComplex, kind: MoveKind, rng: &mut R) -> Option<MoveRecord> {
  let rank = |rng: &mut R| rank_range(cx, kind).map(|(lo, hi)| rng.random_range(lo..=hi));
  let target = match kind {
    MoveKind::Subdivide13 => MoveTarget::Triangle(*cx.triangles().choose(rng)?),
    MoveKind::Flip22 => {
      let e = cx.edges().iter().filter(|e| !cx.is_curve_edge(**e)).collect::<Vec<_>>().choose(rng).copied()?;
      MoveTarget::Edge([e.lo(), e.hi()])
    }
    MoveKind::CurveSubdivide12 => {
      let e = cx.curve_edges().collect::<Vec<_>>().choose(rng).copied()?;
      MoveTarget::Edge([e.lo(), e.hi()])
    }
    MoveKind::Weld31 => {
      let vs: Vec<Vertex> = (0..cx.vertex_count()).filter(|&v| !cx.is_on_curve(v) && cx.degree(v) == 3).collect();
      MoveTarget::Vertex(*vs.choose(rng)?)
    }
    MoveKind::CurveWeld21 => {
      let vs: Vec<Vertex> = (0..cx.vertex_count()).filter(|&v| cx.is_on_curve(v) && cx.degree(v) == 4).collect();
      MoveTarget::Vertex(*vs.choose(rng)?)
    }
  };
  Some(MoveRecord { kind, target, rank_position: rank(rng) })
}

/// Seeded random sequence of applicable flag-like moves. Every intermediate state is validated
/// by construction. Steps where no proposal succeeds within `max_attempts` are skipped.
pub fn random_walk(cx: &SurfaceCurveComplex, ord: &VertexOrdering, config: &WalkConfig) -> Vec<WalkStep> {
  random_walk_using(cx, ord, config, apply)
}

/// [`random_walk`] with a caller-supplied move implementation.
pub fn random_walk_using<F>(cx: &SurfaceCurveComplex, ord: &VertexOrdering, config: &WalkConfig, apply: F) -> Vec<WalkStep>
where
  F: Fn(&SurfaceCurveComplex, &VertexOrdering, &MoveRecord) -> Result<(SurfaceCurveComplex, VertexOrdering), MoveError>,
{
  let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
  let cap = cx.vertex_count() + config.max_extra_vertices;
  let mut cur = (cx.clone(), ord.clone());
  let mut out = Vec::with_capacity(config.steps);
  for _ in 0..config.steps {
    for _ in 0..config.max_attempts {
      let kind = *MoveKind::ALL.choose(&mut rng).expect("nonempty");
      if kind.adds_vertex() && cur.0.vertex_count() >= cap {
        continue;
      }
      let Some(record) = propose(&cur.0, kind, &mut rng) else { continue };
      if let Ok(next) = apply(&cur.0, &cur.1, &record) {
        out.push(WalkStep { complex: next.0.clone(), ordering: next.1.clone(), record });
        cur = next;
        break;
      }
    }
  }
  out
}

/// [`random_walk`] with default limits.
pub fn random_flag_like_walk(cx: &SurfaceCurveComplex, ord: &VertexOrdering, steps: usize, seed: u64) -> Vec<WalkStep> {
  random_walk(cx, ord, &WalkConfig::new(steps, seed))
}

/// Combinatorial quantities every move must preserve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conserved {
  pub euler_characteristic:  i64,
  pub curve_components:      usize,
}

impl Conserved {
  pub fn of(cx: &SurfaceCurveComplex) -> Self {
    Self { euler_characteristic: cx.euler_characteristic(), curve_components: cx.curve_component_count() }
  }
}

/// Canonical form up to vertex relabelling for small complexes: the lexicographically least
/// sorted triangle list over all relabellings that fix the curve/off-curve split, found by
/// brute force. Intended for tests on complexes with at most nine vertices.
pub fn canonical_form(cx: &SurfaceCurveComplex) -> (Vec<bool>, Vec<[Vertex; 3]>) {
  let n = cx.vertex_count();
  assert!(n <= 9, "canonical_form is brute force");
  let mut best: Option<Vec<[Vertex; 3]>> = None;
  let on: Vec<Vertex> = (0..n).filter(|&v| cx.is_on_curve(v)).collect();
  let off: Vec<Vertex> = (0..n).filter(|&v| !cx.is_on_curve(v)).collect();
  let mut on_perm = on.clone();
  permute(&mut on_perm, 0, &mut |on_p| {
    let mut off_perm = off.clone();
    permute(&mut off_perm, 0, &mut |off_p| {
      let mut label = vec![0; n];
      for (i, &v) in on_p.iter().chain(off_p.iter()).enumerate() {
        label[v] = i;
      }
      let mut tris: Vec<[Vertex; 3]> = cx
        .triangles()
        .iter()
        .map(|t| {
          let r = t.map(|v| label[v]);
          let m = (0..3).min_by_key(|&i| r[i]).expect("three");
          [r[m], r[(m + 1) % 3], r[(m + 2) % 3]]
        })
        .collect();
      tris.sort_unstable();
      if best.as_ref().is_none_or(|b| tris < *b) {
        best = Some(tris);
      }
    });
  });
  let on_curve = (0..n).map(|i| i < on.len()).collect();
  (on_curve, best.expect("at least one relabelling"))
}

fn permute(items: &mut Vec<Vertex>, k: usize, visit: &mut dyn FnMut(&[Vertex])) {
  if k == items.len() {
    visit(items);
    return;
  }
  for i in k..items.len() {
    items.swap(k, i);
    permute(items, k + 1, visit);
    items.swap(k, i);
  }
}

/// Curve edges as a sorted set, for comparisons in tests.
pub fn curve_edge_set(cx: &SurfaceCurveComplex) -> BTreeSet<Edge> { cx.curve_edges().collect() }
