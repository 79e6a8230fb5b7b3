//! Finite groups stored as full Cayley tables.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Element index inside a [`FiniteGroup`]; the identity is always `0`.
pub type Elem = usize;

/// The identity element of every validated group.
pub const IDENTITY: Elem = 0;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
  #[error("group order must be positive")]
  Empty,
  #[error("multiplication table has {rows} rows, expected {expected}")]
  RowCount { rows: usize, expected: usize },
  #[error("row {row} has {len} entries, expected {expected}")]
  RowLength { row: usize, len: usize, expected: usize },
  #[error("entry mul[{a}][{b}] = {value} is out of range")]
  EntryOutOfRange { a: Elem, b: Elem, value: usize },
  #[error("element 0 is not a two-sided identity (fails at {0})")]
  BadIdentity(Elem),
  #[error("element {0} has no two-sided inverse")]
  BadInverse(Elem),
  #[error("not associative: ({0}*{1})*{2} != {0}*({1}*{2})")]
  NotAssociative(Elem, Elem, Elem),
}

/// Unvalidated group tables, as read from a group file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawGroup {
  #[serde(default, skip_serializing_if = "Option::is_none")]
  pub name:  Option<String>,
  pub order: usize,
  pub mul:   Vec<Vec<usize>>,
}

/// A validated finite group. Elements are `0..order` with identity `0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
  name:  Option<String>,
  order: usize,
  mul:   Vec<Elem>,
  inv:   Vec<Elem>,
}

impl FiniteGroup {
  /// Checks the group axioms exhaustively and reports the first failure.
  pub fn verify(raw: &RawGroup) -> Result<Self, GroupError> {
    let n = raw.order;
    if n == 0 {
      return Err(GroupError::Empty);
    }
    if raw.mul.len() != n {
      return Err(GroupError::RowCount { rows: raw.mul.len(), expected: n });
    }
    let mut mul = Vec::with_capacity(n * n);
    for (a, row) in raw.mul.iter().enumerate() {
      if row.len() != n {
        return Err(GroupError::RowLength { row: a, len: row.len(), expected: n });
      }
      for (b, &value) in row.iter().enumerate() {
        if value >= n {
          return Err(GroupError::EntryOutOfRange { a, b, value });
        }
        mul.push(value);
      }
    }
    let at = |a: usize, b: usize| mul[a * n + b];

    for a in 0..n {
      if at(IDENTITY, a) != a || at(a, IDENTITY) != a {
        return Err(GroupError::BadIdentity(a));
      }
    }
    let mut inv = Vec::with_capacity(n);
    for a in 0..n {
      match (0..n).find(|&b| at(a, b) == IDENTITY && at(b, a) == IDENTITY) {
        Some(b) => inv.push(b),
        None => return Err(GroupError::BadInverse(a)),
      }
    }
    for a in 0..n {
      for b in 0..n {
        let ab = at(a, b);
        for c in 0..n {
          if at(ab, c) != at(a, at(b, c)) {
            return Err(GroupError::NotAssociative(a, b, c));
          }
        }
      }
    }
    Ok(Self { name: raw.name.clone(), order: n, mul, inv })
  }

  /// Builds a group from a multiplication closure that is known to satisfy the axioms.
  /// Used by the builders below; debug builds still run the full check.
  fn from_fn(name: String, order: usize, f: impl Fn(Elem, Elem) -> Elem) -> Self {
    let raw = RawGroup {
      name: Some(name),
      order,
      mul: (0..order).map(|a| (0..order).map(|b| f(a, b)).collect()).collect(),
    };
    Self::verify(&raw).expect("builder produced an invalid group table")
  }

  pub fn order(&self) -> usize { self.order }

  pub fn name(&self) -> Option<&str> { self.name.as_deref() }

  #[inline]
  pub fn mul(&self, a: Elem, b: Elem) -> Elem { self.mul[a * self.order + b] }

  #[inline]
  pub fn inv(&self, a: Elem) -> Elem { self.inv[a] }

  pub fn identity(&self) -> Elem { IDENTITY }

  pub fn elements(&self) -> std::ops::Range<Elem> { 0..self.order }

  /// Order of the element `a`.
  pub fn element_order(&self, a: Elem) -> usize {
    let mut k = 1;
    let mut p = a;
    while p != IDENTITY {
      p = self.mul(p, a);
      k += 1;
    }
    k
  }

  pub fn is_abelian(&self) -> bool {
    self.elements().all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
  }

  /// Smallest subgroup containing `generators`, as a sorted element list.
  pub fn generated_subgroup(&self, generators: &[Elem]) -> Vec<Elem> {
    let mut seen = vec![false; self.order];
    seen[IDENTITY] = true;
    let mut stack = vec![IDENTITY];
    while let Some(a) = stack.pop() {
      for &g in generators {
        let b = self.mul(a, g);
        if !seen[b] {
          seen[b] = true;
          stack.push(b);
        }
      }
    }
    self.elements().filter(|&a| seen[a]).collect()
  }

  /// Returns `true` iff `elements` is closed under multiplication and inverses and holds the
  /// identity.
  pub fn is_subgroup(&self, elements: &[Elem]) -> bool { self.subgroup_witness(elements).is_none() }

  /// First element of `elements` (or product of two of them) that violates closure.
  pub(crate) fn subgroup_witness(&self, elements: &[Elem]) -> Option<Elem> {
    let mut member = vec![false; self.order];
    for &a in elements {
      if a >= self.order {
        return Some(a);
      }
      member[a] = true;
    }
    if !member[IDENTITY] {
      return Some(IDENTITY);
    }
    for &a in elements {
      if !member[self.inv(a)] {
        return Some(self.inv(a));
      }
      for &b in elements {
        if !member[self.mul(a, b)] {
          return Some(self.mul(a, b));
        }
      }
    }
    None
  }

  /// Restriction of the multiplication to a subgroup, reindexed densely in the order given by the
  /// sorted element list (so the identity keeps index 0).
  pub fn subgroup(&self, elements: &[Elem]) -> Option<(FiniteGroup, Vec<Elem>)> {
    let mut elems = elements.to_vec();
    elems.sort_unstable();
    elems.dedup();
    if !self.is_subgroup(&elems) {
      return None;
    }
    let mut index = vec![usize::MAX; self.order];
    for (i, &a) in elems.iter().enumerate() {
      index[a] = i;
    }
    let name = format!("subgroup of {}", self.name().unwrap_or("group"));
    let sub = Self::from_fn(name, elems.len(), |i, j| index[self.mul(elems[i], elems[j])]);
    Some((sub, elems))
  }

  /// Number of ordered pairs `(a, b)` with `ab = ba`.
  pub fn commuting_pairs(&self) -> usize {
    self
      .elements()
      .map(|a| self.elements().filter(|&b| self.mul(a, b) == self.mul(b, a)).count())
      .sum()
  }

  pub fn to_raw(&self) -> RawGroup {
    RawGroup {
      name:  self.name.clone(),
      order: self.order,
      mul:   (0..self.order).map(|a| self.mul[a * self.order..(a + 1) * self.order].to_vec()).collect(),
    }
  }
}

/// The cyclic group `Z/n` with `a * b = (a + b) mod n`.
pub fn cyclic_group(n: usize) -> FiniteGroup {
  assert!(n >= 1, "cyclic group order must be positive");
  FiniteGroup::from_fn(format!("Z/{n}"), n, |a, b| (a + b) % n)
}

/// Direct product `A x B`; the pair `(a, b)` has index `a * |B| + b`.
pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> FiniteGroup {
  let nb = b.order();
  let name = format!("{} x {}", a.name().unwrap_or("A"), b.name().unwrap_or("B"));
  FiniteGroup::from_fn(name, a.order() * nb, |x, y| {
    a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb)
  })
}

/// All permutations of `0..n` in lexicographic order. The identity comes first.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
  fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
    if prefix.len() == used.len() {
      out.push(prefix.clone());
      return;
    }
    for i in 0..used.len() {
      if !used[i] {
        used[i] = true;
        prefix.push(i);
        rec(prefix, used, out);
        prefix.pop();
        used[i] = false;
      }
    }
  }
  let mut out = Vec::new();
  rec(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
  out
}

/// The symmetric group on `n` letters. Elements are permutations in lexicographic order and the
/// product `p * q` is "apply `p`, then `q`".
pub fn symmetric_group(n: usize) -> FiniteGroup {
  assert!(n >= 1, "symmetric group needs at least one letter");
  let perms = permutations(n);
  let index = |p: &[usize]| perms.iter().position(|q| q == p).expect("permutation");
  let table: Vec<Vec<usize>> = perms
    .iter()
    .map(|p| perms.iter().map(|q| index(&p.iter().map(|&i| q[i]).collect::<Vec<_>>())).collect())
    .collect();
  FiniteGroup::from_fn(format!("S{n}"), perms.len(), |a, b| table[a][b])
}

/// Index of a permutation (given as images of `0..n`) inside [`symmetric_group`].
pub fn permutation_index(perm: &[usize]) -> Option<Elem> {
  permutations(perm.len()).iter().position(|q| q == perm)
}

#[cfg(test)]
mod tests {
  use super::*;

  #[test]
  fn cyclic_groups() {
    let trivial = cyclic_group(1);
    assert_eq!(trivial.order(), 1);
    assert_eq!(trivial.mul(0, 0), 0);

    let z2 = cyclic_group(2);
    assert_eq!(z2.inv(1), 1);

    let z3 = cyclic_group(3);
    assert!(FiniteGroup::verify(&z3.to_raw()).is_ok());
    assert_eq!(z3.mul(1, 2), 0);

    let z6 = cyclic_group(6);
    assert!(FiniteGroup::verify(&z6.to_raw()).is_ok());
    assert_eq!(z6.element_order(1), 6);
  }

  #[test]
  fn order_two_without_inverse() {
    let raw = RawGroup { name: None, order: 2, mul: vec![vec![0, 1], vec![1, 1]] };
    let err = FiniteGroup::verify(&raw).unwrap_err();
    assert!(matches!(err, GroupError::BadInverse(1) | GroupError::NotAssociative(..)), "{err:?}");
  }

  #[test]
  fn non_associative_loop_is_rejected() {
    // A 5-element loop (Latin square with identity) that is not a group.
    let raw = RawGroup {
      name:  None,
      order: 5,
      mul:   vec![
        vec![0, 1, 2, 3, 4],
        vec![1, 0, 3, 4, 2],
        vec![2, 4, 0, 1, 3],
        vec![3, 2, 4, 0, 1],
        vec![4, 3, 1, 2, 0],
      ],
    };
    assert!(matches!(FiniteGroup::verify(&raw), Err(GroupError::NotAssociative(..))));
  }

  #[test]
  fn shape_errors() {
    let raw = RawGroup { name: None, order: 2, mul: vec![vec![0, 1]] };
    assert_eq!(FiniteGroup::verify(&raw), Err(GroupError::RowCount { rows: 1, expected: 2 }));
    let raw = RawGroup { name: None, order: 2, mul: vec![vec![0, 1], vec![1, 2]] };
    assert!(matches!(FiniteGroup::verify(&raw), Err(GroupError::EntryOutOfRange { .. })));
    let raw = RawGroup { name: None, order: 2, mul: vec![vec![1, 0], vec![0, 1]] };
    assert_eq!(FiniteGroup::verify(&raw), Err(GroupError::BadIdentity(0)));
  }

  #[test]
  fn s3_table_is_a_group() {
    let s3 = symmetric_group(3);
    assert_eq!(s3.order(), 6);
    assert!(!s3.is_abelian());
    assert!(FiniteGroup::verify(&s3.to_raw()).is_ok());
    // conjugacy classes 1 + 3 + 2: centralizer sizes 6, 2, 2, 2, 3, 3.
    assert_eq!(s3.commuting_pairs(), 18);
  }

  #[test]
  fn klein_four() {
    let z2 = cyclic_group(2);
    let v4 = direct_product(&z2, &z2);
    assert_eq!(v4.order(), 4);
    assert!(v4.elements().all(|a| v4.inv(a) == a));
    assert!(v4.is_abelian());
  }

  #[test]
  fn trivial_factor_keeps_table() {
    let s3 = symmetric_group(3);
    let p = direct_product(&cyclic_group(1), &s3);
    for a in s3.elements() {
      for b in s3.elements() {
        assert_eq!(p.mul(a, b), s3.mul(a, b));
      }
    }
  }

  #[test]
  fn z2_times_z3_is_cyclic() {
    let g = direct_product(&cyclic_group(2), &cyclic_group(3));
    assert!(FiniteGroup::verify(&g.to_raw()).is_ok());
    // (1,1) has index 1*3 + 1 = 4.
    let x = 4;
    let mut powers = vec![0];
    let mut p = x;
    while p != 0 {
      powers.push(p);
      p = g.mul(p, x);
    }
    assert_eq!(powers.len(), 6);
    assert_eq!(g.element_order(x), 6);
  }

  #[test]
  fn subgroups_of_s3() {
    let s3 = symmetric_group(3);
    let t = permutation_index(&[1, 0, 2]).unwrap();
    let c = permutation_index(&[1, 2, 0]).unwrap();
    assert_eq!(s3.generated_subgroup(&[t]).len(), 2);
    assert_eq!(s3.generated_subgroup(&[c]).len(), 3);
    assert_eq!(s3.generated_subgroup(&[t, c]).len(), 6);
    assert!(!s3.is_subgroup(&[0, t, c]));
    let (sub, elems) = s3.subgroup(&s3.generated_subgroup(&[c])).unwrap();
    assert_eq!(sub.order(), 3);
    assert_eq!(elems[0], 0);
    assert!(sub.is_abelian());
  }
}
