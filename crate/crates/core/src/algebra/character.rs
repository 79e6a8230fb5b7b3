use std::sync::Arc;

use super::group::{Elem, FiniteGroup, IDENTITY};
use super::scalar::UnitScalar;

/// A homomorphism from a finite group into the `N`-th roots of unity, stored as exponents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Character {
  group:   Arc<FiniteGroup>,
  modulus: u32,
  values:  Vec<u32>,
}

impl Character {
  /// Validates the homomorphism property on all pairs.
  pub fn new(group: Arc<FiniteGroup>, modulus: u32, values: Vec<u32>) -> Option<Self> {
    if values.len() != group.order() || values.iter().any(|&v| v >= modulus) {
      return None;
    }
    if values[IDENTITY] != 0 {
      return None;
    }
    for a in group.elements() {
      for b in group.elements() {
        if values[group.mul(a, b)] != (values[a] + values[b]) % modulus {
          return None;
        }
      }
    }
    Some(Self { group, modulus, values })
  }

  pub fn trivial(group: Arc<FiniteGroup>, modulus: u32) -> Self {
    let values = vec![0; group.order()];
    Self { group, modulus, values }
  }

  pub fn group(&self) -> &Arc<FiniteGroup> { &self.group }

  pub fn modulus(&self) -> u32 { self.modulus }

  pub fn exponent(&self, a: Elem) -> u32 { self.values[a] }

  pub fn value(&self, a: Elem) -> UnitScalar { UnitScalar::new(self.modulus, self.values[a] as i64) }

  pub fn is_trivial(&self) -> bool { self.values.iter().all(|&v| v == 0) }

  /// Pointwise product.
  pub fn product(&self, other: &Self) -> Self {
    assert_eq!(self.modulus, other.modulus);
    let values = self.values.iter().zip(&other.values).map(|(a, b)| (a + b) % self.modulus).collect();
    Self { group: self.group.clone(), modulus: self.modulus, values }
  }
}

/// Greedy generating set: each new generator is the smallest element outside the subgroup
/// generated so far.
fn generators(group: &FiniteGroup) -> Vec<Elem> {
  let mut gens = Vec::new();
  let mut span = group.generated_subgroup(&gens);
  while span.len() < group.order() {
    let next = group.elements().find(|a| span.binary_search(a).is_err()).expect("element outside span");
    gens.push(next);
    span = group.generated_subgroup(&gens);
  }
  gens
}

/// Every homomorphism `group -> mu_N`, found by trying all images of a generating set and
/// propagating along the Cayley graph. Sorted by value table.
pub fn characters_of(group: &Arc<FiniteGroup>, modulus: u32) -> Vec<Character> {
  assert!(modulus >= 1);
  let gens = generators(group);
  let mut found = Vec::new();
  let mut images = vec![0u32; gens.len()];
  loop {
    if let Some(values) = extend(group, &gens, &images, modulus) {
      if let Some(c) = Character::new(group.clone(), modulus, values) {
        found.push(c);
      }
    }
    // next image assignment, odometer style
    let mut i = 0;
    loop {
      if i == images.len() {
        found.sort_by(|a: &Character, b| a.values.cmp(&b.values));
        return found;
      }
      images[i] += 1;
      if images[i] < modulus {
        break;
      }
      images[i] = 0;
      i += 1;
    }
  }
}

fn extend(group: &FiniteGroup, gens: &[Elem], images: &[u32], modulus: u32) -> Option<Vec<u32>> {
  let mut values: Vec<Option<u32>> = vec![None; group.order()];
  values[IDENTITY] = Some(0);
  let mut stack = vec![IDENTITY];
  while let Some(a) = stack.pop() {
    let va = values[a].expect("visited");
    for (&g, &img) in gens.iter().zip(images) {
      let b = group.mul(a, g);
      let vb = (va + img) % modulus;
      match values[b] {
        None => {
          values[b] = Some(vb);
          stack.push(b);
        }
        Some(existing) if existing != vb => return None,
        Some(_) => {}
      }
    }
  }
  values.into_iter().collect()
}
