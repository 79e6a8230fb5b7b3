//! Twisting data `(alpha, beta, gamma)` for the defect state sum.
//!
//! `alpha: G x G`, `beta: X x G` and `gamma: H x X` take values in the `N`-th roots of unity and
//! are stored as exponents mod `N`. A triple is valid when the four cocycle-type identities below
//! hold for every tuple (written additively in the exponents):
//!
//! 1. `alpha(f,g) - alpha(f,gh) + alpha(fg,h) - alpha(g,h) = 0`
//! 2. `beta(x,g) - beta(x,gh) + beta(x.g,h) - alpha(g,h) = 0`
//! 3. `gamma(eta,x) - gamma(eta,x.g) + beta(eta.x,g) - beta(x,g) = 0`
//! 4. `gamma(theta,eta.y) - gamma(theta eta,y) + gamma(eta,y)
//!     - gamma(theta,eta.x) + gamma(theta eta,x) - gamma(eta,x) = 0`

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{
  cyclic_group, direct_product, regular_biset, BiSet, BiSetError, Character, Elem, FiniteGroup, UnitScalar,
};

/// Upper bound on `|G| * |X| * |H|` accepted by [`solve_twistings`].
pub const SOLVER_CELL_LIMIT: usize = 64;

/// One failing instance of a condition: the condition number (1-4) and the tuple it failed on,
/// in the variable order used by that condition (`(f,g,h)`, `(x,g,h)`, `(eta,x,g)`,
/// `(x,y,eta,theta)`).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Violation {
  pub condition: u8,
  pub tuple:     Vec<Elem>,
}

impl fmt::Display for Violation {
  fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let names: &[&str] = match self.condition {
      1 => &["f", "g", "h"],
      2 => &["x", "g", "h"],
      3 => &["eta", "x", "g"],
      _ => &["x", "y", "eta", "theta"],
    };
    let parts: Vec<String> = names.iter().zip(&self.tuple).map(|(n, v)| format!("{n}={v}")).collect();
    write!(f, "condition {} fails at {}", self.condition, parts.join(", "))
  }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TwistingError {
  #[error("modulus N must be positive")]
  ZeroModulus,
  #[error("{table} table has wrong shape: {detail}")]
  Shape { table: &'static str, detail: String },
  #[error("{} condition violation(s); first: {}", .0.len(), .0[0])]
  ConditionViolated(Vec<Violation>),
  #[error("cyclic order {n} does not divide modulus {modulus}")]
  ModulusIncompatible { n: usize, modulus: u32 },
  #[error("input table is not a 2-cocycle: {0}")]
  NotACocycle(Violation),
  #[error("constructed triple failed validation ({} violations); this is a bug", .0.len())]
  InternalConditionFailure(Vec<Violation>),
  #[error("character data mismatch: {0}")]
  CharacterMismatch(String),
  #[error("search space |G||X||H| = {cells} exceeds {SOLVER_CELL_LIMIT}")]
  TooLarge { cells: usize },
  #[error(transparent)]
  BiSet(#[from] BiSetError),
}

/// Report every violation, or stop after the first one found in each condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CheckMode {
  #[default]
  Exhaustive,
  FailFast,
}

/// Unvalidated twisting file contents; entries are integer exponents, reduced mod `N`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawTwisting {
  #[serde(rename = "N")]
  pub modulus: u32,
  pub alpha:   Vec<Vec<i64>>,
  pub beta:    Vec<Vec<i64>>,
  pub gamma:   Vec<Vec<i64>>,
}

/// A validated twisting triple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistingTriple {
  biset:   Arc<BiSet>,
  modulus: u32,
  alpha:   Vec<u32>,
  beta:    Vec<u32>,
  gamma:   Vec<u32>,
}

/// Exponent tables without a validity guarantee, shared by the validator and the constructors.
#[derive(Debug, Clone)]
struct Tables<'a> {
  biset:   &'a BiSet,
  modulus: i64,
  alpha:   &'a [u32],
  beta:    &'a [u32],
  gamma:   &'a [u32],
}

impl Tables<'_> {
  fn a(&self, f: Elem, g: Elem) -> i64 { self.alpha[f * self.biset.g().order() + g] as i64 }

  fn b(&self, x: Elem, g: Elem) -> i64 { self.beta[x * self.biset.g().order() + g] as i64 }

  fn c(&self, eta: Elem, x: Elem) -> i64 { self.gamma[eta * self.biset.size() + x] as i64 }

  fn zero(&self, v: i64) -> bool { v.rem_euclid(self.modulus) == 0 }

  fn condition(&self, which: u8, mode: CheckMode) -> Vec<Violation> {
    let (g, h, x) = (self.biset.g(), self.biset.h(), self.biset);
    let mut out = Vec::new();
    let mut push = |tuple: Vec<Elem>| -> bool {
      out.push(Violation { condition: which, tuple });
      mode == CheckMode::FailFast
    };
    match which {
      1 => {
        for f in g.elements() {
          for a in g.elements() {
            for b in g.elements() {
              let v = self.a(f, a) - self.a(f, g.mul(a, b)) + self.a(g.mul(f, a), b) - self.a(a, b);
              if !self.zero(v) && push(vec![f, a, b]) {
                return out;
              }
            }
          }
        }
      }
      2 => {
        for p in x.elements() {
          for a in g.elements() {
            for b in g.elements() {
              let v = self.b(p, a) - self.b(p, g.mul(a, b)) + self.b(x.act_right(p, a), b) - self.a(a, b);
              if !self.zero(v) && push(vec![p, a, b]) {
                return out;
              }
            }
          }
        }
      }
      3 => {
        for eta in h.elements() {
          for p in x.elements() {
            for a in g.elements() {
              let v = self.c(eta, p) - self.c(eta, x.act_right(p, a)) + self.b(x.act_left(eta, p), a) - self.b(p, a);
              if !self.zero(v) && push(vec![eta, p, a]) {
                return out;
              }
            }
          }
        }
      }
      _ => {
        // gamma(theta, eta.p) - gamma(theta eta, p) + gamma(eta, p) must not depend on p.
        for p in x.elements() {
          for q in x.elements() {
            for eta in h.elements() {
              for theta in h.elements() {
                let te = h.mul(theta, eta);
                let v = self.c(theta, x.act_left(eta, q)) - self.c(te, q) + self.c(eta, q)
                  - self.c(theta, x.act_left(eta, p))
                  + self.c(te, p)
                  - self.c(eta, p);
                if !self.zero(v) && push(vec![p, q, eta, theta]) {
                  return out;
                }
              }
            }
          }
        }
      }
    }
    out
  }

  /// All four conditions, checked concurrently, merged in sorted order.
  fn violations(&self, mode: CheckMode) -> Vec<Violation> {
    let mut all: Vec<Violation> =
      [1u8, 2, 3, 4].par_iter().map(|&c| self.condition(c, mode)).collect::<Vec<_>>().concat();
    all.sort();
    if mode == CheckMode::FailFast {
      all.truncate(1);
    }
    all
  }
}

fn flatten(
  table: &'static str,
  rows: &[Vec<i64>],
  nrows: usize,
  ncols: usize,
  modulus: u32,
) -> Result<Vec<u32>, TwistingError> {
  if rows.len() != nrows {
    return Err(TwistingError::Shape { table, detail: format!("{} rows, expected {nrows}", rows.len()) });
  }
  let mut out = Vec::with_capacity(nrows * ncols);
  for (r, row) in rows.iter().enumerate() {
    if row.len() != ncols {
      return Err(TwistingError::Shape { table, detail: format!("row {r} has {} entries, expected {ncols}", row.len()) });
    }
    out.extend(row.iter().map(|&e| e.rem_euclid(modulus as i64) as u32));
  }
  Ok(out)
}

impl TwistingTriple {
  /// Validates raw tables over the given bi-set (which carries `G` and `H`).
  pub fn validate(raw: &RawTwisting, biset: Arc<BiSet>, mode: CheckMode) -> Result<Self, TwistingError> {
    if raw.modulus == 0 {
      return Err(TwistingError::ZeroModulus);
    }
    let (ng, nh, nx) = (biset.g().order(), biset.h().order(), biset.size());
    let alpha = flatten("alpha", &raw.alpha, ng, ng, raw.modulus)?;
    let beta = flatten("beta", &raw.beta, nx, ng, raw.modulus)?;
    let gamma = flatten("gamma", &raw.gamma, nh, nx, raw.modulus)?;
    Self::from_exponents(biset, raw.modulus, alpha, beta, gamma, mode).map_err(TwistingError::ConditionViolated)
  }

  fn from_exponents(
    biset: Arc<BiSet>,
    modulus: u32,
    alpha: Vec<u32>,
    beta: Vec<u32>,
    gamma: Vec<u32>,
    mode: CheckMode,
  ) -> Result<Self, Vec<Violation>> {
    let violations = Tables { biset: &biset, modulus: modulus as i64, alpha: &alpha, beta: &beta, gamma: &gamma }
      .violations(mode);
    if violations.is_empty() {
      Ok(Self { biset, modulus, alpha, beta, gamma })
    } else {
      Err(violations)
    }
  }

  /// All values equal to 1.
  pub fn trivial(biset: Arc<BiSet>, modulus: u32) -> Self {
    assert!(modulus >= 1);
    let (ng, nh, nx) = (biset.g().order(), biset.h().order(), biset.size());
    Self { biset, modulus, alpha: vec![0; ng * ng], beta: vec![0; nx * ng], gamma: vec![0; nh * nx] }
  }

  pub fn biset(&self) -> &Arc<BiSet> { &self.biset }

  pub fn modulus(&self) -> u32 { self.modulus }

  pub fn is_trivial(&self) -> bool {
    self.alpha.iter().chain(&self.beta).chain(&self.gamma).all(|&e| e == 0)
  }

  #[inline]
  pub fn alpha_exp(&self, f: Elem, g: Elem) -> u32 { self.alpha[f * self.biset.g().order() + g] }

  #[inline]
  pub fn beta_exp(&self, x: Elem, g: Elem) -> u32 { self.beta[x * self.biset.g().order() + g] }

  #[inline]
  pub fn gamma_exp(&self, eta: Elem, x: Elem) -> u32 { self.gamma[eta * self.biset.size() + x] }

  pub fn alpha(&self, f: Elem, g: Elem) -> UnitScalar { UnitScalar::new(self.modulus, self.alpha_exp(f, g) as i64) }

  pub fn beta(&self, x: Elem, g: Elem) -> UnitScalar { UnitScalar::new(self.modulus, self.beta_exp(x, g) as i64) }

  pub fn gamma(&self, eta: Elem, x: Elem) -> UnitScalar {
    UnitScalar::new(self.modulus, self.gamma_exp(eta, x) as i64)
  }

  /// Same values viewed in `mu_M` for a multiple `M` of the current modulus.
  pub fn with_modulus(&self, modulus: u32) -> Option<Self> {
    if modulus == 0 || !modulus.is_multiple_of(self.modulus) {
      return None;
    }
    let k = modulus / self.modulus;
    let scale = |v: &Vec<u32>| v.iter().map(|e| e * k).collect();
    Some(Self {
      biset: self.biset.clone(),
      modulus,
      alpha: scale(&self.alpha),
      beta: scale(&self.beta),
      gamma: scale(&self.gamma),
    })
  }

  pub fn to_raw(&self) -> RawTwisting {
    let rows = |v: &[u32], ncols: usize| v.chunks(ncols).map(|r| r.iter().map(|&e| e as i64).collect()).collect();
    RawTwisting {
      modulus: self.modulus,
      alpha:   rows(&self.alpha, self.biset.g().order()),
      beta:    rows(&self.beta, self.biset.g().order()),
      gamma:   rows(&self.gamma, self.biset.size()),
    }
  }
}

/// Lists the violations of the four conditions for raw tables, without constructing a triple.
pub fn check_conditions(raw: &RawTwisting, biset: &BiSet, mode: CheckMode) -> Result<Vec<Violation>, TwistingError> {
  if raw.modulus == 0 {
    return Err(TwistingError::ZeroModulus);
  }
  let (ng, nh, nx) = (biset.g().order(), biset.h().order(), biset.size());
  let alpha = flatten("alpha", &raw.alpha, ng, ng, raw.modulus)?;
  let beta = flatten("beta", &raw.beta, nx, ng, raw.modulus)?;
  let gamma = flatten("gamma", &raw.gamma, nh, nx, raw.modulus)?;
  Ok(Tables { biset, modulus: raw.modulus as i64, alpha: &alpha, beta: &beta, gamma: &gamma }.violations(mode))
}

/// Violations of the plain 2-cocycle identity for an exponent table on `group`.
pub fn cocycle_violations(group: &FiniteGroup, table: &[u32], modulus: u32, mode: CheckMode) -> Vec<Violation> {
  let n = group.order();
  let a = |f: Elem, g: Elem| table[f * n + g] as i64;
  let mut out = Vec::new();
  for f in group.elements() {
    for g in group.elements() {
      for h in group.elements() {
        let v = a(f, g) - a(f, group.mul(g, h)) + a(group.mul(f, g), h) - a(g, h);
        if v.rem_euclid(modulus as i64) != 0 {
          out.push(Violation { condition: 1, tuple: vec![f, g, h] });
          if mode == CheckMode::FailFast {
            return out;
          }
        }
      }
    }
  }
  out
}

/// The group `Z/n x Z/n` with the bilinear 2-cocycle `((a1,a2),(b1,b2)) -> zeta_N^{(N/n) k a1 b2}`.
///
/// Element `(a1, a2)` has index `a1 * n + a2`. The returned table is flat, `|Gamma|^2` exponents.
pub fn group_2cocycle_zn_zn(n: usize, k: i64, modulus: u32) -> Result<(FiniteGroup, Vec<u32>), TwistingError> {
  if n == 0 || modulus == 0 || !(modulus as usize).is_multiple_of(n) {
    return Err(TwistingError::ModulusIncompatible { n, modulus });
  }
  let gamma = direct_product(&cyclic_group(n), &cyclic_group(n));
  let step = (modulus as usize / n) as i64;
  let order = gamma.order();
  let table = (0..order * order)
    .map(|idx| {
      let (a, b) = (idx / order, idx % order);
      let (a1, b2) = ((a / n) as i64, (b % n) as i64);
      (step * k * a1 * b2).rem_euclid(modulus as i64) as u32
    })
    .collect();
  Ok((gamma, table))
}

/// Restricts a 2-cocycle on `gamma` to `G x G`, `X x G` and `H x X` for subgroups `G`, `H` and a
/// subset `X` closed under `X G` and `H X`.
pub fn restrict_from_group_cocycle(
  gamma: &FiniteGroup,
  alpha_hat: &[u32],
  g_sub: &[Elem],
  h_sub: &[Elem],
  x_sub: &[Elem],
  modulus: u32,
) -> Result<TwistingTriple, TwistingError> {
  let n = gamma.order();
  if modulus == 0 {
    return Err(TwistingError::ZeroModulus);
  }
  if alpha_hat.len() != n * n {
    return Err(TwistingError::Shape { table: "alpha_hat", detail: format!("{} entries, expected {}", alpha_hat.len(), n * n) });
  }
  if let Some(v) = cocycle_violations(gamma, alpha_hat, modulus, CheckMode::FailFast).pop() {
    return Err(TwistingError::NotACocycle(v));
  }
  let r = regular_biset(gamma, g_sub, h_sub, x_sub)?;
  let hat = |a: Elem, b: Elem| alpha_hat[a * n + b] % modulus;
  let alpha = r.g_elems.iter().flat_map(|&f| r.g_elems.iter().map(move |&g| hat(f, g))).collect();
  let beta = r.x_elems.iter().flat_map(|&x| r.g_elems.iter().map(move |&g| hat(x, g))).collect();
  let gamma_t = r.h_elems.iter().flat_map(|&eta| r.x_elems.iter().map(move |&x| hat(eta, x))).collect();
  TwistingTriple::from_exponents(Arc::new(r.biset), modulus, alpha, beta, gamma_t, CheckMode::Exhaustive)
    .map_err(TwistingError::InternalConditionFailure)
}

/// Partition of `X` into double orbits `[x] = { h.x.g }`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DoubleOrbitPartition {
  orbit_of:    Vec<usize>,
  orbit_count: usize,
}

impl DoubleOrbitPartition {
  pub fn orbit_of(&self, x: Elem) -> usize { self.orbit_of[x] }

  pub fn orbit_count(&self) -> usize { self.orbit_count }

  pub fn orbits(&self) -> Vec<Vec<Elem>> {
    let mut out = vec![Vec::new(); self.orbit_count];
    for (x, &o) in self.orbit_of.iter().enumerate() {
      out[o].push(x);
    }
    out
  }
}

/// Double orbits via union-find over single action steps. Orbits are numbered by their smallest
/// element.
pub fn double_orbits(biset: &BiSet) -> DoubleOrbitPartition {
  fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    x
  }
  let m = biset.size();
  let mut parent: Vec<usize> = (0..m).collect();
  let union = |parent: &mut Vec<usize>, a: usize, b: usize| {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
      parent[ra.max(rb)] = ra.min(rb);
    }
  };
  for x in biset.elements() {
    for g in biset.g().elements() {
      union(&mut parent, x, biset.act_right(x, g));
    }
    for eta in biset.h().elements() {
      union(&mut parent, x, biset.act_left(eta, x));
    }
  }
  let mut label = vec![usize::MAX; m];
  let mut orbit_of = vec![0; m];
  let mut count = 0;
  for (x, slot) in orbit_of.iter_mut().enumerate() {
    let r = find(&mut parent, x);
    if label[r] == usize::MAX {
      label[r] = count;
      count += 1;
    }
    *slot = label[r];
  }
  DoubleOrbitPartition { orbit_of, orbit_count: count }
}

/// Character twisting: `alpha = 1`, `beta(x,g) = phi[[x]](g)`, `gamma(eta,x) = psi[[x]](eta)`.
///
/// `phi` and `psi` are indexed by double orbit (see [`double_orbits`]). Characters with a modulus
/// dividing `modulus` are rescaled.
pub fn from_characters(
  biset: Arc<BiSet>,
  phi: &[Character],
  psi: &[Character],
  modulus: u32,
) -> Result<TwistingTriple, TwistingError> {
  if modulus == 0 {
    return Err(TwistingError::ZeroModulus);
  }
  let orbits = double_orbits(&biset);
  if phi.len() != orbits.orbit_count() || psi.len() != orbits.orbit_count() {
    return Err(TwistingError::CharacterMismatch(format!(
      "{} orbits but {} G-characters and {} H-characters",
      orbits.orbit_count(),
      phi.len(),
      psi.len()
    )));
  }
  let rescale = |c: &Character, group: &FiniteGroup, which: &str| -> Result<Vec<u32>, TwistingError> {
    if c.group().as_ref() != group {
      return Err(TwistingError::CharacterMismatch(format!("{which}-character is on a different group")));
    }
    if !modulus.is_multiple_of(c.modulus()) {
      return Err(TwistingError::CharacterMismatch(format!(
        "character modulus {} does not divide {modulus}",
        c.modulus()
      )));
    }
    let k = modulus / c.modulus();
    Ok(group.elements().map(|a| c.exponent(a) * k).collect())
  };
  let phi_vals = phi.iter().map(|c| rescale(c, biset.g(), "G")).collect::<Result<Vec<_>, _>>()?;
  let psi_vals = psi.iter().map(|c| rescale(c, biset.h(), "H")).collect::<Result<Vec<_>, _>>()?;
  let (ng, nh) = (biset.g().order(), biset.h().order());
  let alpha = vec![0; ng * ng];
  let beta = biset.elements().flat_map(|x| phi_vals[orbits.orbit_of(x)].clone()).collect();
  let gamma = (0..nh).flat_map(|eta| biset.elements().map(|x| psi_vals[orbits.orbit_of(x)][eta]).collect::<Vec<_>>()).collect();
  TwistingTriple::from_exponents(biset, modulus, alpha, beta, gamma, CheckMode::Exhaustive)
    .map_err(TwistingError::InternalConditionFailure)
}

/// Enumerates valid twisting triples by backtracking over exponent tables, stopping after
/// `limit` solutions. Only small bi-sets (`|G||X||H| <= 64`) are accepted.
pub fn solve_twistings(biset: Arc<BiSet>, modulus: u32, limit: usize) -> Result<Vec<TwistingTriple>, TwistingError> {
  if modulus == 0 {
    return Err(TwistingError::ZeroModulus);
  }
  let (g, h, x) = (biset.g().clone(), biset.h().clone(), &*biset);
  let (ng, nh, nx) = (g.order(), h.order(), x.size());
  let cells = ng * nx * nh;
  if cells > SOLVER_CELL_LIMIT {
    return Err(TwistingError::TooLarge { cells });
  }
  // variable layout: alpha | beta | gamma
  let va = |f: Elem, a: Elem| f * ng + a;
  let vb = |p: Elem, a: Elem| ng * ng + p * ng + a;
  let vc = |eta: Elem, p: Elem| ng * ng + nx * ng + eta * nx + p;
  let nvars = ng * ng + nx * ng + nh * nx;

  let mut constraints: Vec<Vec<(usize, i64)>> = Vec::new();
  let mut add = |terms: &[(usize, i64)]| {
    let mut combined: Vec<(usize, i64)> = Vec::new();
    for &(v, c) in terms {
      match combined.iter_mut().find(|(w, _)| *w == v) {
        Some((_, k)) => *k += c,
        None => combined.push((v, c)),
      }
    }
    combined.retain(|&(_, c)| c.rem_euclid(modulus as i64) != 0);
    if !combined.is_empty() {
      constraints.push(combined);
    }
  };
  for f in g.elements() {
    for a in g.elements() {
      for b in g.elements() {
        add(&[(va(f, a), 1), (va(f, g.mul(a, b)), -1), (va(g.mul(f, a), b), 1), (va(a, b), -1)]);
      }
    }
  }
  for p in x.elements() {
    for a in g.elements() {
      for b in g.elements() {
        add(&[(vb(p, a), 1), (vb(p, g.mul(a, b)), -1), (vb(x.act_right(p, a), b), 1), (va(a, b), -1)]);
      }
    }
  }
  for eta in h.elements() {
    for p in x.elements() {
      for a in g.elements() {
        add(&[(vc(eta, p), 1), (vc(eta, x.act_right(p, a)), -1), (vb(x.act_left(eta, p), a), 1), (vb(p, a), -1)]);
      }
    }
  }
  for p in x.elements() {
    for q in x.elements() {
      for eta in h.elements() {
        for theta in h.elements() {
          let te = h.mul(theta, eta);
          add(&[
            (vc(theta, x.act_left(eta, q)), 1),
            (vc(te, q), -1),
            (vc(eta, q), 1),
            (vc(theta, x.act_left(eta, p)), -1),
            (vc(te, p), 1),
            (vc(eta, p), -1),
          ]);
        }
      }
    }
  }
  // constraints are checked once their highest variable is assigned
  let mut by_trigger: Vec<Vec<usize>> = vec![Vec::new(); nvars];
  for (i, c) in constraints.iter().enumerate() {
    let top = c.iter().map(|&(v, _)| v).max().expect("nonempty");
    by_trigger[top].push(i);
  }

  struct Search<'a> {
    constraints: &'a [Vec<(usize, i64)>],
    by_trigger:  &'a [Vec<usize>],
    modulus:     i64,
    limit:       usize,
    values:      Vec<u32>,
    found:       Vec<Vec<u32>>,
  }
  impl Search<'_> {
    fn run(&mut self, var: usize) {
      if self.found.len() >= self.limit {
        return;
      }
      if var == self.values.len() {
        self.found.push(self.values.clone());
        return;
      }
      for e in 0..self.modulus as u32 {
        self.values[var] = e;
        let ok = self.by_trigger[var].iter().all(|&ci| {
          let s: i64 = self.constraints[ci].iter().map(|&(v, c)| c * self.values[v] as i64).sum();
          s.rem_euclid(self.modulus) == 0
        });
        if ok {
          self.run(var + 1);
        }
      }
    }
  }
  let mut search = Search {
    constraints: &constraints,
    by_trigger: &by_trigger,
    modulus: modulus as i64,
    limit,
    values: vec![0; nvars],
    found: Vec::new(),
  };
  search.run(0);
  let split_a = ng * ng;
  let split_b = split_a + nx * ng;
  search
    .found
    .into_iter()
    .map(|v| {
      TwistingTriple::from_exponents(
        biset.clone(),
        modulus,
        v[..split_a].to_vec(),
        v[split_a..split_b].to_vec(),
        v[split_b..].to_vec(),
        CheckMode::FailFast,
      )
      .map_err(TwistingError::InternalConditionFailure)
    })
    .collect()
}

#[cfg(test)]
mod tests {
  use super::*;
  use crate::algebra::{characters_of, permutation_index, symmetric_group};

  fn z(n: usize) -> Arc<FiniteGroup> { Arc::new(cyclic_group(n)) }

  #[test]
  fn trivial_triples_validate() {
    let b = Arc::new(BiSet::regular(z(3)));
    let t = TwistingTriple::trivial(b.clone(), 5);
    assert!(TwistingTriple::validate(&t.to_raw(), b, CheckMode::Exhaustive).is_ok());
    // N = 1: every exponent is 0 mod 1
    let b1 = Arc::new(BiSet::regular(z(2)));
    let raw = RawTwisting { modulus: 1, alpha: vec![vec![3, 4]; 2], beta: vec![vec![1, 1]; 2], gamma: vec![vec![7, 0]; 2] };
    let t1 = TwistingTriple::validate(&raw, b1, CheckMode::Exhaustive).unwrap();
    assert!(t1.is_trivial());
  }

  #[test]
  fn flipped_beta_entry_is_caught() {
    let b = Arc::new(BiSet::regular(z(2)));
    let mut raw = TwistingTriple::trivial(b.clone(), 2).to_raw();
    raw.beta[0][1] = 1;
    let err = TwistingTriple::validate(&raw, b.clone(), CheckMode::Exhaustive).unwrap_err();
    let TwistingError::ConditionViolated(v) = err else { panic!("{err:?}") };
    assert!(v.iter().any(|w| w.condition == 2 || w.condition == 3));
    assert!(v.windows(2).all(|w| w[0] <= w[1]));
    let fast = check_conditions(&raw, &b, CheckMode::FailFast).unwrap();
    assert_eq!(fast.len(), 1);
    assert_eq!(fast[0], v[0]);
  }

  #[test]
  fn shape_mismatch() {
    let b = Arc::new(BiSet::regular(z(2)));
    let mut raw = TwistingTriple::trivial(b.clone(), 2).to_raw();
    raw.gamma.pop();
    assert!(matches!(TwistingTriple::validate(&raw, b, CheckMode::Exhaustive), Err(TwistingError::Shape { table: "gamma", .. })));
  }

  #[test]
  fn bilinear_cocycles() {
    let (g, t) = group_2cocycle_zn_zn(2, 1, 2).unwrap();
    assert!(cocycle_violations(&g, &t, 2, CheckMode::Exhaustive).is_empty());
    for a in g.elements() {
      for b in g.elements() {
        let expected = u32::from(a / 2 == 1 && b % 2 == 1);
        assert_eq!(t[a * 4 + b], expected);
      }
    }
    let (_, t0) = group_2cocycle_zn_zn(3, 0, 3).unwrap();
    assert!(t0.iter().all(|&e| e == 0));
    let (g3, t3) = group_2cocycle_zn_zn(3, 1, 3).unwrap();
    assert!(cocycle_violations(&g3, &t3, 3, CheckMode::Exhaustive).is_empty());
    assert!(matches!(group_2cocycle_zn_zn(3, 1, 4), Err(TwistingError::ModulusIncompatible { .. })));
  }

  #[test]
  fn klein_restriction_is_nontrivial() {
    let (g, t) = group_2cocycle_zn_zn(2, 1, 2).unwrap();
    let all: Vec<usize> = g.elements().collect();
    let tw = restrict_from_group_cocycle(&g, &t, &all, &all, &all, 2).unwrap();
    let gammas: Vec<u32> = (0..4).flat_map(|eta| (0..4).map(move |x| (eta, x))).map(|(e, x)| tw.gamma_exp(e, x)).collect();
    assert!(gammas.contains(&1) && gammas.contains(&0));
  }

  #[test]
  fn degenerate_restrictions() {
    let (g, t) = group_2cocycle_zn_zn(2, 1, 2).unwrap();
    let tw = restrict_from_group_cocycle(&g, &t, &[0], &[0], &[0], 2).unwrap();
    assert!(tw.is_trivial());
    let z4 = cyclic_group(4);
    let tw = restrict_from_group_cocycle(&z4, &[0; 16], &[0, 2], &[0, 2], &[0, 1, 2, 3], 4).unwrap();
    assert!(tw.is_trivial());
    assert_eq!(tw.biset().size(), 4);
  }

  #[test]
  fn rejects_non_cocycle_input() {
    let z3 = cyclic_group(3);
    let table = [0, 0, 0, 0, 1, 0, 0, 0, 0];
    let err = restrict_from_group_cocycle(&z3, &table, &[0, 1, 2], &[0, 1, 2], &[0, 1, 2], 3).unwrap_err();
    assert!(matches!(err, TwistingError::NotACocycle(_)), "{err:?}");
  }

  #[test]
  fn orbit_counts() {
    assert_eq!(double_orbits(&BiSet::regular(z(2))).orbit_count(), 1);
    let t = BiSet::trivial(5, z(2), z(3));
    let p = double_orbits(&t);
    assert_eq!(p.orbit_count(), 5);
    assert_eq!(p.orbit_of(3), 3);

    let s3 = symmetric_group(3);
    let tr = permutation_index(&[1, 0, 2]).unwrap();
    let c = permutation_index(&[1, 2, 0]).unwrap();
    let all: Vec<usize> = s3.elements().collect();
    let r = regular_biset(&s3, &s3.generated_subgroup(&[c]), &s3.generated_subgroup(&[tr]), &all).unwrap();
    assert_eq!(double_orbits(&r.biset).orbit_count(), 1);
  }

  #[test]
  fn sign_character_twisting() {
    let b = Arc::new(BiSet::regular(z(2)));
    let sign = characters_of(b.g(), 2).pop().unwrap();
    let tw = from_characters(b, std::slice::from_ref(&sign), std::slice::from_ref(&sign), 2).unwrap();
    for x in 0..2 {
      assert_eq!(tw.beta_exp(x, 1), 1);
      assert_eq!(tw.gamma_exp(1, x), 1);
      assert_eq!(tw.beta_exp(x, 0), 0);
    }
  }

  #[test]
  fn two_orbit_character_twisting() {
    let b = Arc::new(BiSet::trivial(2, z(2), z(2)));
    let chars = characters_of(b.g(), 2);
    let tw = from_characters(b.clone(), &[chars[0].clone(), chars[1].clone()], &[chars[0].clone(), chars[0].clone()], 2).unwrap();
    assert_eq!(tw.beta_exp(0, 1), 0);
    assert_eq!(tw.beta_exp(1, 1), 1);
    let trivial = from_characters(b.clone(), &[chars[0].clone(), chars[0].clone()], &[chars[0].clone(), chars[0].clone()], 2).unwrap();
    assert!(trivial.is_trivial());
    assert!(matches!(from_characters(b, &[chars[0].clone()], &[chars[0].clone()], 2), Err(TwistingError::CharacterMismatch(_))));
  }

  #[test]
  fn solver_finds_only_valid_triples() {
    let b = Arc::new(BiSet::regular(z(2)));
    let sols = solve_twistings(b.clone(), 2, 10_000).unwrap();
    assert!(sols.iter().any(TwistingTriple::is_trivial));
    assert!(sols.iter().any(|t| !t.is_trivial()));
    for s in &sols {
      assert!(check_conditions(&s.to_raw(), &b, CheckMode::Exhaustive).unwrap().is_empty());
    }
    let big = Arc::new(BiSet::regular(Arc::new(symmetric_group(3))));
    assert!(matches!(solve_twistings(big, 2, 1), Err(TwistingError::TooLarge { cells: 216 })));
  }
}
