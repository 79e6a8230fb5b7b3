//! Finite sets with a right `G`-action and a commuting left `H`-action.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::group::{Elem, FiniteGroup, IDENTITY};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BiSetError {
  #[error("bi-set must have at least one element")]
  Empty,
  #[error("{table} action table has wrong shape: {detail}")]
  Shape { table: &'static str, detail: String },
  #[error("{table} action entry out of range at ({row}, {col})")]
  EntryOutOfRange { table: &'static str, row: usize, col: usize },
  #[error("right action fails at x={x}, g={g}, g'={g2}")]
  NotRightAction { x: Elem, g: Elem, g2: Elem },
  #[error("left action fails at eta={eta}, theta={theta}, x={x}")]
  NotLeftAction { eta: Elem, theta: Elem, x: Elem },
  #[error("actions do not commute at eta={eta}, x={x}, g={g}")]
  NotCommuting { eta: Elem, x: Elem, g: Elem },
  #[error("{0} is not a subgroup (witness element {1})")]
  NotSubgroup(&'static str, Elem),
  #[error("subset not closed: {x} * {by} = {product} is missing")]
  NotClosed { x: Elem, by: Elem, product: Elem },
}

/// Unvalidated action tables: `right[x][g] = x.g`, `left[eta][x] = eta.x`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawBiSet {
  pub size:  usize,
  pub right: Vec<Vec<usize>>,
  pub left:  Vec<Vec<usize>>,
}

/// A validated `(H, X, G)` bi-set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiSet {
  size:  usize,
  g:     Arc<FiniteGroup>,
  h:     Arc<FiniteGroup>,
  right: Vec<Elem>,
  left:  Vec<Elem>,
}

fn flatten(
  table: &'static str,
  rows: &[Vec<usize>],
  nrows: usize,
  ncols: usize,
  bound: usize,
) -> Result<Vec<usize>, BiSetError> {
  if rows.len() != nrows {
    return Err(BiSetError::Shape { table, detail: format!("{} rows, expected {nrows}", rows.len()) });
  }
  let mut out = Vec::with_capacity(nrows * ncols);
  for (r, row) in rows.iter().enumerate() {
    if row.len() != ncols {
      return Err(BiSetError::Shape {
        table,
        detail: format!("row {r} has {} entries, expected {ncols}", row.len()),
      });
    }
    for (c, &v) in row.iter().enumerate() {
      if v >= bound {
        return Err(BiSetError::EntryOutOfRange { table, row: r, col: c });
      }
      out.push(v);
    }
  }
  Ok(out)
}

impl BiSet {
  /// Validates the action tables against `g` (acting on the right) and `h` (on the left).
  pub fn verify(raw: &RawBiSet, g: Arc<FiniteGroup>, h: Arc<FiniteGroup>) -> Result<Self, BiSetError> {
    let m = raw.size;
    if m == 0 {
      return Err(BiSetError::Empty);
    }
    let right = flatten("right", &raw.right, m, g.order(), m)?;
    let left = flatten("left", &raw.left, h.order(), m, m)?;
    let candidate = Self { size: m, g, h, right, left };
    candidate.check_axioms()?;
    Ok(candidate)
  }

  fn check_axioms(&self) -> Result<(), BiSetError> {
    let (g, h) = (&*self.g, &*self.h);
    for x in self.elements() {
      if self.act_right(x, IDENTITY) != x {
        return Err(BiSetError::NotRightAction { x, g: IDENTITY, g2: IDENTITY });
      }
      for a in g.elements() {
        for b in g.elements() {
          if self.act_right(self.act_right(x, a), b) != self.act_right(x, g.mul(a, b)) {
            return Err(BiSetError::NotRightAction { x, g: a, g2: b });
          }
        }
      }
    }
    for x in self.elements() {
      if self.act_left(IDENTITY, x) != x {
        return Err(BiSetError::NotLeftAction { eta: IDENTITY, theta: IDENTITY, x });
      }
    }
    for eta in h.elements() {
      for theta in h.elements() {
        for x in self.elements() {
          if self.act_left(eta, self.act_left(theta, x)) != self.act_left(h.mul(eta, theta), x) {
            return Err(BiSetError::NotLeftAction { eta, theta, x });
          }
        }
      }
    }
    for eta in h.elements() {
      for x in self.elements() {
        for a in g.elements() {
          if self.act_left(eta, self.act_right(x, a)) != self.act_right(self.act_left(eta, x), a) {
            return Err(BiSetError::NotCommuting { eta, x, g: a });
          }
        }
      }
    }
    Ok(())
  }

  /// Builds a bi-set from action closures; panics if the axioms fail.
  pub fn from_fns(
    size: usize,
    g: Arc<FiniteGroup>,
    h: Arc<FiniteGroup>,
    right: impl Fn(Elem, Elem) -> Elem,
    left: impl Fn(Elem, Elem) -> Elem,
  ) -> Result<Self, BiSetError> {
    let raw = RawBiSet {
      size,
      right: (0..size).map(|x| g.elements().map(|a| right(x, a)).collect()).collect(),
      left: h.elements().map(|eta| (0..size).map(|x| left(eta, x)).collect()).collect(),
    };
    Self::verify(&raw, g, h)
  }

  /// `G` and `H` acting on `X = G = H` by right and left multiplication.
  pub fn regular(group: Arc<FiniteGroup>) -> Self {
    let n = group.order();
    let (gr, gl) = (group.clone(), group.clone());
    Self::from_fns(n, group.clone(), group, move |x, a| gr.mul(x, a), move |eta, x| gl.mul(eta, x))
      .expect("regular actions commute by associativity")
  }

  /// Both groups act trivially on a set of `size` points.
  pub fn trivial(size: usize, g: Arc<FiniteGroup>, h: Arc<FiniteGroup>) -> Self {
    Self::from_fns(size, g, h, |x, _| x, |_, x| x).expect("trivial actions")
  }

  /// Degenerate defect data for curve-free surfaces: `H` trivial and `|X| = 1`.
  pub fn point(g: Arc<FiniteGroup>) -> Self {
    Self::trivial(1, g, Arc::new(super::group::cyclic_group(1)))
  }

  pub fn size(&self) -> usize { self.size }

  pub fn elements(&self) -> std::ops::Range<Elem> { 0..self.size }

  /// The group acting on the right.
  pub fn g(&self) -> &Arc<FiniteGroup> { &self.g }

  /// The group acting on the left.
  pub fn h(&self) -> &Arc<FiniteGroup> { &self.h }

  #[inline]
  pub fn act_right(&self, x: Elem, g: Elem) -> Elem { self.right[x * self.g.order() + g] }

  #[inline]
  pub fn act_left(&self, eta: Elem, x: Elem) -> Elem { self.left[eta * self.size + x] }

  pub fn to_raw(&self) -> RawBiSet {
    RawBiSet {
      size:  self.size,
      right: self.elements().map(|x| self.g.elements().map(|a| self.act_right(x, a)).collect()).collect(),
      left:  self.h.elements().map(|eta| self.elements().map(|x| self.act_left(eta, x)).collect()).collect(),
    }
  }
}

/// A bi-set carved out of a single group `Gamma` by multiplication, together with the embeddings
/// of `G`, `H` and `X` back into `Gamma`.
#[derive(Debug, Clone)]
pub struct RegularBiSet {
  pub biset:   BiSet,
  /// `g_elems[i]` is the element of `Gamma` with index `i` in `G`.
  pub g_elems: Vec<Elem>,
  pub h_elems: Vec<Elem>,
  pub x_elems: Vec<Elem>,
}

/// `G` and `H` are subgroups of `gamma`; `X` is a subset closed under `X G` and `H X`.
pub fn regular_biset(
  gamma: &FiniteGroup,
  g_sub: &[Elem],
  h_sub: &[Elem],
  x_sub: &[Elem],
) -> Result<RegularBiSet, BiSetError> {
  if let Some(w) = gamma.subgroup_witness(g_sub) {
    return Err(BiSetError::NotSubgroup("G", w));
  }
  if let Some(w) = gamma.subgroup_witness(h_sub) {
    return Err(BiSetError::NotSubgroup("H", w));
  }
  let (g, g_elems) = gamma.subgroup(g_sub).expect("checked subgroup");
  let (h, h_elems) = gamma.subgroup(h_sub).expect("checked subgroup");
  let mut x_elems = x_sub.to_vec();
  x_elems.sort_unstable();
  x_elems.dedup();
  if x_elems.is_empty() {
    return Err(BiSetError::Empty);
  }
  let mut x_index = vec![usize::MAX; gamma.order()];
  for (i, &x) in x_elems.iter().enumerate() {
    if x >= gamma.order() {
      return Err(BiSetError::EntryOutOfRange { table: "X", row: i, col: 0 });
    }
    x_index[x] = i;
  }
  for &x in &x_elems {
    for &a in &g_elems {
      let p = gamma.mul(x, a);
      if x_index[p] == usize::MAX {
        return Err(BiSetError::NotClosed { x, by: a, product: p });
      }
    }
    for &eta in &h_elems {
      let p = gamma.mul(eta, x);
      if x_index[p] == usize::MAX {
        return Err(BiSetError::NotClosed { x, by: eta, product: p });
      }
    }
  }
  let biset = BiSet::from_fns(
    x_elems.len(),
    Arc::new(g),
    Arc::new(h),
    |x, a| x_index[gamma.mul(x_elems[x], g_elems[a])],
    |eta, x| x_index[gamma.mul(h_elems[eta], x_elems[x])],
  )?;
  Ok(RegularBiSet { biset, g_elems, h_elems, x_elems })
}

#[cfg(test)]
mod tests {
  use super::*;
  use crate::algebra::group::{cyclic_group, permutation_index, symmetric_group};

  #[test]
  fn z2_regular_is_valid() {
    let z2 = Arc::new(cyclic_group(2));
    let raw = RawBiSet { size: 2, right: vec![vec![0, 1], vec![1, 0]], left: vec![vec![0, 1], vec![1, 0]] };
    assert!(BiSet::verify(&raw, z2.clone(), z2).is_ok());
  }

  #[test]
  fn left_identity_violation() {
    let z2 = Arc::new(cyclic_group(2));
    let raw = RawBiSet { size: 2, right: vec![vec![0, 1], vec![1, 0]], left: vec![vec![1, 1], vec![1, 0]] };
    let err = BiSet::verify(&raw, z2.clone(), z2).unwrap_err();
    assert!(matches!(err, BiSetError::NotLeftAction { eta: 0, x: 0, .. }), "{err:?}");
  }

  #[test]
  fn non_commuting_actions() {
    // S3 acting on the right of itself and also on the *left* by right multiplication with the
    // inverse: a valid left action, but it does not commute with right multiplication.
    let s3 = Arc::new(symmetric_group(3));
    let s = s3.clone();
    let t = s3.clone();
    let err = BiSet::from_fns(6, s3.clone(), s3, move |x, a| s.mul(x, a), move |eta, x| t.mul(x, t.inv(eta)))
      .unwrap_err();
    assert!(matches!(err, BiSetError::NotCommuting { .. }), "{err:?}");
  }

  #[test]
  fn s3_two_sided_regular() {
    let s3 = Arc::new(symmetric_group(3));
    let b = BiSet::regular(s3.clone());
    assert_eq!(b.size(), 6);
    assert!(BiSet::verify(&b.to_raw(), s3.clone(), s3).is_ok());
  }

  #[test]
  fn z4_subgroup_translation() {
    let z4 = cyclic_group(4);
    let r = regular_biset(&z4, &[0, 2], &[0, 2], &[0, 1, 2, 3]).unwrap();
    assert_eq!(r.biset.size(), 4);
    assert_eq!(r.biset.g().order(), 2);
  }

  #[test]
  fn z4_not_closed() {
    let z4 = cyclic_group(4);
    let err = regular_biset(&z4, &[0, 2], &[0], &[0, 1]).unwrap_err();
    assert!(matches!(err, BiSetError::NotClosed { by: 2, .. }), "{err:?}");
    let err = regular_biset(&z4, &[0, 1], &[0], &[0, 1, 2, 3]).unwrap_err();
    assert!(matches!(err, BiSetError::NotSubgroup("G", _)));
  }

  #[test]
  fn s3_double_coset_product() {
    let s3 = symmetric_group(3);
    let t = permutation_index(&[1, 0, 2]).unwrap();
    let c = permutation_index(&[1, 2, 0]).unwrap();
    let h = s3.generated_subgroup(&[t]);
    let g = s3.generated_subgroup(&[c]);
    let mut hg: Vec<usize> = h.iter().flat_map(|&a| g.iter().map(move |&b| (a, b))).map(|(a, b)| s3.mul(a, b)).collect();
    hg.sort_unstable();
    hg.dedup();
    let r = regular_biset(&s3, &g, &h, &hg).unwrap();
    assert_eq!(r.biset.size(), 6);
  }
}
