use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Edge, SurfaceCurveComplex, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderingError {
  #[error("ordering has {len} entries for {vertices} vertices")]
  Length { len: usize, vertices: usize },
  #[error("ordering is not a permutation (rank {0} repeated or out of range)")]
  NotPermutation(usize),
  #[error("off-curve vertex {off} is ranked before curve vertex {on}")]
  NotCurveFirst { on: Vertex, off: Vertex },
}

/// A total order on vertices in which every curve vertex precedes every off-curve vertex.
/// Stored as `rank[v]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VertexOrdering {
  rank: Vec<usize>,
}

impl VertexOrdering {
  /// Curve vertices by index, then off-curve vertices by index.
  pub fn curve_first(cx: &SurfaceCurveComplex) -> Self {
    let order: Vec<Vertex> = (0..cx.vertex_count())
      .filter(|&v| cx.is_on_curve(v))
      .chain((0..cx.vertex_count()).filter(|&v| !cx.is_on_curve(v)))
      .collect();
    Self::from_order_unchecked(&order)
  }

  /// Uniformly random curve-first ordering.
  pub fn random<R: Rng + ?Sized>(cx: &SurfaceCurveComplex, rng: &mut R) -> Self {
    let mut on: Vec<Vertex> = (0..cx.vertex_count()).filter(|&v| cx.is_on_curve(v)).collect();
    let mut off: Vec<Vertex> = (0..cx.vertex_count()).filter(|&v| !cx.is_on_curve(v)).collect();
    on.shuffle(rng);
    off.shuffle(rng);
    on.extend(off);
    Self::from_order_unchecked(&on)
  }

  /// From a list of vertices, lowest rank first.
  pub fn from_order(cx: &SurfaceCurveComplex, order: &[Vertex]) -> Result<Self, OrderingError> {
    let n = cx.vertex_count();
    if order.len() != n {
      return Err(OrderingError::Length { len: order.len(), vertices: n });
    }
    let mut rank = vec![usize::MAX; n];
    for (r, &v) in order.iter().enumerate() {
      if v >= n || rank[v] != usize::MAX {
        return Err(OrderingError::NotPermutation(r));
      }
      rank[v] = r;
    }
    let ord = Self { rank };
    ord.check(cx)?;
    Ok(ord)
  }

  /// From `rank[v]`.
  pub fn from_ranks(cx: &SurfaceCurveComplex, rank: Vec<usize>) -> Result<Self, OrderingError> {
    let n = cx.vertex_count();
    if rank.len() != n {
      return Err(OrderingError::Length { len: rank.len(), vertices: n });
    }
    let mut seen = vec![false; n];
    for &r in &rank {
      if r >= n || seen[r] {
        return Err(OrderingError::NotPermutation(r));
      }
      seen[r] = true;
    }
    let ord = Self { rank };
    ord.check(cx)?;
    Ok(ord)
  }

  fn from_order_unchecked(order: &[Vertex]) -> Self {
    let mut rank = vec![0; order.len()];
    for (r, &v) in order.iter().enumerate() {
      rank[v] = r;
    }
    Self { rank }
  }

  /// Verifies length and the curve-first property against `cx`.
  pub fn check(&self, cx: &SurfaceCurveComplex) -> Result<(), OrderingError> {
    if self.rank.len() != cx.vertex_count() {
      return Err(OrderingError::Length { len: self.rank.len(), vertices: cx.vertex_count() });
    }
    let curve = cx.curve_vertex_count();
    let order = self.order();
    if let Some(off) = order[..curve].iter().copied().find(|&v| !cx.is_on_curve(v)) {
      let on = order[curve..].iter().copied().find(|&v| cx.is_on_curve(v)).expect("misplaced curve vertex");
      return Err(OrderingError::NotCurveFirst { on, off });
    }
    Ok(())
  }

  pub fn len(&self) -> usize { self.rank.len() }

  pub fn is_empty(&self) -> bool { self.rank.is_empty() }

  pub fn rank(&self, v: Vertex) -> usize { self.rank[v] }

  pub fn ranks(&self) -> &[usize] { &self.rank }

  /// Vertices sorted by rank.
  pub fn order(&self) -> Vec<Vertex> {
    let mut order = vec![0; self.rank.len()];
    for (v, &r) in self.rank.iter().enumerate() {
      order[r] = v;
    }
    order
  }

  /// Ordering after appending a new vertex (index `len()`) at rank `position`.
  pub fn with_inserted(&self, position: usize) -> Self {
    assert!(position <= self.rank.len());
    let mut rank: Vec<usize> = self.rank.iter().map(|&r| if r >= position { r + 1 } else { r }).collect();
    rank.push(position);
    Self { rank }
  }

  /// Ordering after deleting vertex `v` and shifting higher indices down by one.
  pub fn with_removed(&self, v: Vertex) -> Self {
    let gone = self.rank[v];
    let rank = self
      .rank
      .iter()
      .enumerate()
      .filter(|&(u, _)| u != v)
      .map(|(_, &r)| if r > gone { r - 1 } else { r })
      .collect();
    Self { rank }
  }

  /// Triangle vertices sorted by rank: `(v0, v1, v2)`.
  pub fn local_order(&self, t: [Vertex; 3]) -> [Vertex; 3] {
    let mut s = t;
    s.sort_unstable_by_key(|&v| self.rank[v]);
    s
  }

  /// Edge endpoints as `(source, target)`, lower rank first.
  pub fn direct(&self, e: Edge) -> (Vertex, Vertex) {
    if self.rank[e.lo()] < self.rank[e.hi()] { (e.lo(), e.hi()) } else { (e.hi(), e.lo()) }
  }

  /// `+1` when the rank order of `t` agrees with its orientation, `-1` otherwise.
  pub fn epsilon(&self, t: [Vertex; 3]) -> i8 {
    let s = self.local_order(t);
    let rotations = [[t[0], t[1], t[2]], [t[1], t[2], t[0]], [t[2], t[0], t[1]]];
    if rotations.contains(&s) { 1 } else { -1 }
  }
}
