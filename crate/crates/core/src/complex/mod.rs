//! Oriented closed triangulated surfaces with a marked curve subcomplex.
//!
//! Orientation is stored per triangle: the listed cyclic order of each triangle is its
//! orientation as induced by the surface. Coherence (every edge traversed once in each direction)
//! is part of validation.

mod builders;
mod ordering;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use builders::{sphere_octahedron_equator, tetrahedron_sphere, torus_7vertex, torus_grid, BuilderError};
pub use ordering::{OrderingError, VertexOrdering};

pub type Vertex = usize;

/// An unordered pair of distinct vertices, stored with the smaller index first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge(Vertex, Vertex);

impl Edge {
  pub fn new(a: Vertex, b: Vertex) -> Self {
    debug_assert_ne!(a, b, "loop edge");
    if a < b { Self(a, b) } else { Self(b, a) }
  }

  pub fn lo(self) -> Vertex { self.0 }

  pub fn hi(self) -> Vertex { self.1 }

  pub fn contains(self, v: Vertex) -> bool { self.0 == v || self.1 == v }

  /// The endpoint that is not `v`.
  pub fn other(self, v: Vertex) -> Vertex { if self.0 == v { self.1 } else { self.0 } }
}

impl fmt::Display for Edge {
  fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result { write!(f, "{{{}, {}}}", self.0, self.1) }
}

/// The three kinds of triangles a flag-like triangulation can contain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TriangleClass {
  /// No vertex on the curve.
  Bulk,
  /// Exactly one vertex on the curve.
  VertexOnCurve,
  /// One curve edge (and its two vertices) on the curve.
  EdgeOnCurve,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
  #[error("complex has no triangles")]
  Empty,
  #[error("on_curve has {len} entries for {vertices} vertices")]
  OnCurveLength { len: usize, vertices: usize },
  #[error("triangle {0:?} references a vertex out of range")]
  VertexOutOfRange([Vertex; 3]),
  #[error("triangle {0:?} repeats a vertex")]
  DegenerateTriangle([Vertex; 3]),
  #[error("triangle {0:?} appears twice")]
  DuplicateTriangle([Vertex; 3]),
  #[error("vertex {0} lies in no triangle")]
  IsolatedVertex(Vertex),
  #[error("edge {0} is not shared by exactly two triangles")]
  NotClosed(Edge),
  #[error("the two triangles at edge {0} traverse it in the same direction")]
  IncoherentOrientation(Edge),
  #[error("the link of vertex {0} is not a single circle")]
  NonManifoldVertex(Vertex),
  #[error("curve edge {0} is not an edge of the triangulation")]
  CurveNotSubcomplex(Edge),
  #[error("curve is not a union of simple closed curves at vertex {0}")]
  CurveNotCurve(Vertex),
  #[error("triangle {0:?} meets the curve in something other than a single face")]
  NotFlagLike([Vertex; 3]),
}

/// Unvalidated complex file contents. Listed triangle order is the orientation cyclic order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawComplex {
  pub vertices:    usize,
  pub on_curve:    Vec<bool>,
  pub triangles:   Vec<[Vertex; 3]>,
  pub curve_edges: Vec<[Vertex; 2]>,
}

/// A validated flag-like triangulation of a surface/curve pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceCurveComplex {
  on_curve:    Vec<bool>,
  triangles:   Vec<[Vertex; 3]>,
  curve_edges: BTreeSet<Edge>,
  edges:       Vec<Edge>,
  edge_index:  HashMap<Edge, usize>,
}

fn triangle_edges(t: [Vertex; 3]) -> [(Vertex, Vertex); 3] { [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] }

/// Everything except flag-likeness: closed oriented surface, curve a disjoint union of simple
/// closed curves inside the 1-skeleton.
fn check_surface(raw: &RawComplex) -> Result<(Vec<Edge>, BTreeSet<Edge>), ComplexError> {
  let n = raw.vertices;
  if raw.triangles.is_empty() {
    return Err(ComplexError::Empty);
  }
  if raw.on_curve.len() != n {
    return Err(ComplexError::OnCurveLength { len: raw.on_curve.len(), vertices: n });
  }
  let mut seen_sets = BTreeSet::new();
  let mut used = vec![false; n];
  for &t in &raw.triangles {
    if t.iter().any(|&v| v >= n) {
      return Err(ComplexError::VertexOutOfRange(t));
    }
    if t[0] == t[1] || t[1] == t[2] || t[0] == t[2] {
      return Err(ComplexError::DegenerateTriangle(t));
    }
    let mut key = t;
    key.sort_unstable();
    if !seen_sets.insert(key) {
      return Err(ComplexError::DuplicateTriangle(t));
    }
    for v in t {
      used[v] = true;
    }
  }
  if let Some(v) = used.iter().position(|&u| !u) {
    return Err(ComplexError::IsolatedVertex(v));
  }

  // directed edge usage
  let mut directed: BTreeMap<Edge, (usize, usize)> = BTreeMap::new();
  for &t in &raw.triangles {
    for (a, b) in triangle_edges(t) {
      let entry = directed.entry(Edge::new(a, b)).or_default();
      if a < b {
        entry.0 += 1;
      } else {
        entry.1 += 1;
      }
    }
  }
  for (&e, &(fwd, bwd)) in &directed {
    if fwd + bwd != 2 {
      return Err(ComplexError::NotClosed(e));
    }
  }
  for (&e, &(fwd, bwd)) in &directed {
    if fwd != 1 || bwd != 1 {
      return Err(ComplexError::IncoherentOrientation(e));
    }
  }

  // vertex links: the directed link edges p -> q from triangles (v, p, q) must form one cycle
  let mut link: Vec<Vec<(Vertex, Vertex)>> = vec![Vec::new(); n];
  for &t in &raw.triangles {
    for i in 0..3 {
      link[t[i]].push((t[(i + 1) % 3], t[(i + 2) % 3]));
    }
  }
  for (v, edges) in link.iter().enumerate() {
    let next: HashMap<Vertex, Vertex> = edges.iter().copied().collect();
    if next.len() != edges.len() {
      return Err(ComplexError::NonManifoldVertex(v));
    }
    let start = edges[0].0;
    let mut cur = start;
    let mut steps = 0;
    loop {
      cur = match next.get(&cur) {
        Some(&w) => w,
        None => return Err(ComplexError::NonManifoldVertex(v)),
      };
      steps += 1;
      if cur == start || steps > edges.len() {
        break;
      }
    }
    if cur != start || steps != edges.len() {
      return Err(ComplexError::NonManifoldVertex(v));
    }
  }

  let edges: Vec<Edge> = directed.keys().copied().collect();
  let mut curve_edges = BTreeSet::new();
  let mut curve_degree = vec![0usize; n];
  for &[a, b] in &raw.curve_edges {
    if a >= n || b >= n || a == b || !directed.contains_key(&Edge::new(a, b)) {
      return Err(ComplexError::CurveNotSubcomplex(Edge(a, b)));
    }
    let e = Edge::new(a, b);
    if !curve_edges.insert(e) {
      continue;
    }
    for v in [a, b] {
      if !raw.on_curve[v] {
        return Err(ComplexError::CurveNotCurve(v));
      }
      curve_degree[v] += 1;
    }
  }
  if let Some(v) = (0..n).find(|&v| raw.on_curve[v] && curve_degree[v] != 2) {
    return Err(ComplexError::CurveNotCurve(v));
  }
  Ok((edges, curve_edges))
}

impl SurfaceCurveComplex {
  /// Checks the closed-surface, orientation, curve and flag-like conditions, reporting the first
  /// failure with its witness.
  pub fn validate(raw: &RawComplex) -> Result<Self, ComplexError> {
    let (edges, curve_edges) = check_surface(raw)?;
    for &t in &raw.triangles {
      let on: Vec<Vertex> = t.iter().copied().filter(|&v| raw.on_curve[v]).collect();
      let ok = match on.len() {
        0 | 1 => true,
        2 => curve_edges.contains(&Edge::new(on[0], on[1])),
        _ => false,
      };
      if !ok {
        return Err(ComplexError::NotFlagLike(t));
      }
    }
    let edge_index = edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    Ok(Self { on_curve: raw.on_curve.clone(), triangles: raw.triangles.clone(), curve_edges, edges, edge_index })
  }

  pub fn vertex_count(&self) -> usize { self.on_curve.len() }

  pub fn triangles(&self) -> &[[Vertex; 3]] { &self.triangles }

  /// All edges, sorted; positions in this slice are the edge indices used by colourings.
  pub fn edges(&self) -> &[Edge] { &self.edges }

  pub fn curve_edges(&self) -> impl Iterator<Item = Edge> + '_ { self.curve_edges.iter().copied() }

  pub fn edge_index(&self, e: Edge) -> Option<usize> { self.edge_index.get(&e).copied() }

  pub fn has_edge(&self, e: Edge) -> bool { self.edge_index.contains_key(&e) }

  pub fn is_on_curve(&self, v: Vertex) -> bool { self.on_curve[v] }

  pub fn on_curve(&self) -> &[bool] { &self.on_curve }

  pub fn is_curve_edge(&self, e: Edge) -> bool { self.curve_edges.contains(&e) }

  pub fn curve_vertex_count(&self) -> usize { self.on_curve.iter().filter(|&&c| c).count() }

  pub fn off_curve_vertex_count(&self) -> usize { self.vertex_count() - self.curve_vertex_count() }

  pub fn curve_length(&self) -> usize { self.curve_edges.len() }

  pub fn euler_characteristic(&self) -> i64 {
    self.vertex_count() as i64 - self.edges.len() as i64 + self.triangles.len() as i64
  }

  /// Number of connected components of the curve.
  pub fn curve_component_count(&self) -> usize {
    let mut adj: HashMap<Vertex, Vec<Vertex>> = HashMap::new();
    for e in &self.curve_edges {
      adj.entry(e.0).or_default().push(e.1);
      adj.entry(e.1).or_default().push(e.0);
    }
    let mut seen = vec![false; self.vertex_count()];
    let mut components = 0;
    for v in 0..self.vertex_count() {
      if !self.on_curve[v] || seen[v] {
        continue;
      }
      components += 1;
      let mut stack = vec![v];
      seen[v] = true;
      while let Some(u) = stack.pop() {
        for &w in adj.get(&u).map(Vec::as_slice).unwrap_or(&[]) {
          if !seen[w] {
            seen[w] = true;
            stack.push(w);
          }
        }
      }
    }
    components
  }

  /// Classification by the number of curve vertices of a triangle.
  pub fn classify(&self, t: [Vertex; 3]) -> TriangleClass {
    match t.iter().filter(|&&v| self.on_curve[v]).count() {
      0 => TriangleClass::Bulk,
      1 => TriangleClass::VertexOnCurve,
      _ => TriangleClass::EdgeOnCurve,
    }
  }

  /// Indices of the triangles containing `v`.
  pub fn triangles_around(&self, v: Vertex) -> Vec<usize> {
    self.triangles.iter().enumerate().filter(|(_, t)| t.contains(&v)).map(|(i, _)| i).collect()
  }

  /// Indices of the (two) triangles containing `e`.
  pub fn triangles_at_edge(&self, e: Edge) -> Vec<usize> {
    self
      .triangles
      .iter()
      .enumerate()
      .filter(|(_, t)| t.contains(&e.lo()) && t.contains(&e.hi()))
      .map(|(i, _)| i)
      .collect()
  }

  pub fn degree(&self, v: Vertex) -> usize { self.triangles.iter().filter(|t| t.contains(&v)).count() }

  pub fn to_raw(&self) -> RawComplex {
    RawComplex {
      vertices:    self.vertex_count(),
      on_curve:    self.on_curve.clone(),
      triangles:   self.triangles.clone(),
      curve_edges: self.curve_edges.iter().map(|e| [e.0, e.1]).collect(),
    }
  }

  /// The same triangulation with the opposite surface orientation.
  pub fn reversed(&self) -> Self {
    let mut raw = self.to_raw();
    for t in &mut raw.triangles {
      t.swap(1, 2);
    }
    Self::validate(&raw).expect("orientation reversal preserves validity")
  }

  /// Barycentric subdivision of `self`; see [`barycentric_subdivide`].
  pub fn barycentric_subdivide(&self) -> Self {
    barycentric_subdivide(&self.to_raw()).expect("valid complexes subdivide")
  }
}

/// Full barycentric subdivision. The input need only be a closed oriented surface whose curve is
/// a subcomplex; the output is always flag-like.
///
/// Vertex numbering: original vertices keep their indices, then one vertex per edge (in sorted
/// edge order), then one per triangle (in listed order).
pub fn barycentric_subdivide(raw: &RawComplex) -> Result<SurfaceCurveComplex, ComplexError> {
  let (edges, curve_edges) = check_surface(raw)?;
  let n = raw.vertices;
  let mid: HashMap<Edge, Vertex> = edges.iter().enumerate().map(|(i, &e)| (e, n + i)).collect();
  let centre0 = n + edges.len();
  let total = centre0 + raw.triangles.len();

  let mut on_curve = vec![false; total];
  on_curve[..n].copy_from_slice(&raw.on_curve);
  let mut new_curve = Vec::new();
  for e in &curve_edges {
    let m = mid[e];
    on_curve[m] = true;
    new_curve.push([e.0, m]);
    new_curve.push([m, e.1]);
  }
  let mut triangles = Vec::with_capacity(6 * raw.triangles.len());
  for (i, &t) in raw.triangles.iter().enumerate() {
    let c = centre0 + i;
    for (a, b) in triangle_edges(t) {
      let m = mid[&Edge::new(a, b)];
      triangles.push([a, m, c]);
      triangles.push([m, b, c]);
    }
  }
  SurfaceCurveComplex::validate(&RawComplex { vertices: total, on_curve, triangles, curve_edges: new_curve })
}
