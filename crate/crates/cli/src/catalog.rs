//! Bundled example inputs.

use std::sync::Arc;

use defectsum_core::algebra::{characters_of, cyclic_group, symmetric_group, BiSet, FiniteGroup, RawBiSet, RawGroup};
use defectsum_core::complex::{
  sphere_octahedron_equator, tetrahedron_sphere, torus_7vertex, torus_grid, RawComplex, SurfaceCurveComplex,
};
use defectsum_core::twisting::{from_characters, group_2cocycle_zn_zn, restrict_from_group_cocycle, RawTwisting, TwistingTriple};

pub const NAMES: [&str; 7] = [
  "tetrahedron",
  "octahedron-equator",
  "torus7",
  "torus-grid",
  "example1-klein",
  "example2-characters",
  "s3-transposition",
];

pub struct Bundle {
  pub summary:  &'static str,
  pub complex:  RawComplex,
  pub group:    RawGroup,
  pub hgroup:   RawGroup,
  pub biset:    RawBiSet,
  pub twisting: Option<RawTwisting>,
}

fn bundle(summary: &'static str, cx: SurfaceCurveComplex, biset: &BiSet, twisting: Option<&TwistingTriple>) -> Bundle {
  Bundle {
    summary,
    complex: cx.to_raw(),
    group: biset.g().to_raw(),
    hgroup: biset.h().to_raw(),
    biset: biset.to_raw(),
    twisting: twisting.map(TwistingTriple::to_raw),
  }
}

fn z(n: usize) -> Arc<FiniteGroup> { Arc::new(cyclic_group(n)) }

/// Twisting by the first non-trivial character of each group on the single double orbit.
fn sign_characters(biset: Arc<BiSet>, modulus: u32) -> TwistingTriple {
  let pick = |g: &Arc<FiniteGroup>| {
    let cs = characters_of(g, modulus);
    cs.iter().find(|c| !c.is_trivial()).unwrap_or(&cs[0]).clone()
  };
  let (phi, psi) = (pick(biset.g()), pick(biset.h()));
  from_characters(biset, &[phi], &[psi], modulus).expect("characters give a twisting")
}

/// `X = G = S3` acting on itself on the right, `H = <(1 2)>` acting on the left.
fn s3_transposition() -> Arc<BiSet> {
  let s3 = Arc::new(symmetric_group(3));
  let (h, embed) = s3.subgroup(&[0, 1]).expect("transposition subgroup");
  let (left, right) = (s3.clone(), s3.clone());
  Arc::new(
    BiSet::from_fns(6, s3, Arc::new(h), move |x, g| right.mul(x, g), move |eta, x| left.mul(embed[eta], x))
      .expect("commuting actions"),
  )
}

pub fn build(name: &str) -> Option<Bundle> {
  let b = match name {
    "tetrahedron" => bundle("tetrahedral sphere, no curve, G = Z/2", tetrahedron_sphere(), &BiSet::point(z(2)), None),
    "octahedron-equator" => {
      let x = Arc::new(BiSet::regular(z(2)));
      let tw = sign_characters(x.clone(), 2);
      bundle("octahedral sphere with equator, Z/2 regular bi-set, sign characters", sphere_octahedron_equator(), &x, Some(&tw))
    }
    "torus7" => bundle("7-vertex torus, no curve, G = Z/3", torus_7vertex(), &BiSet::point(z(3)), None),
    "torus-grid" => {
      let x = Arc::new(BiSet::regular(z(3)));
      let tw = sign_characters(x.clone(), 3);
      bundle("3x3 grid torus with a meridian, Z/3 regular bi-set, characters mod 3", torus_grid(3, 3, 0).ok()?, &x, Some(&tw))
    }
    "example1-klein" => {
      let (gamma, table) = group_2cocycle_zn_zn(2, 1, 2).ok()?;
      let all = [0, 1, 2, 3];
      let tw = restrict_from_group_cocycle(&gamma, &table, &all, &all, &all, 2).ok()?;
      bundle(
        "octahedral sphere with equator, Klein four group, restricted bilinear cocycle",
        sphere_octahedron_equator(),
        tw.biset(),
        Some(&tw),
      )
    }
    "example2-characters" => {
      let x = s3_transposition();
      let tw = sign_characters(x.clone(), 2);
      bundle("3x3 grid torus, S3 with H = <(1 2)>, sign characters", torus_grid(3, 3, 0).ok()?, &x, Some(&tw))
    }
    "s3-transposition" => {
      bundle("octahedral sphere with equator, S3 with H = <(1 2)>, untwisted", sphere_octahedron_equator(), &s3_transposition(), None)
    }
    _ => return None,
  };
  Some(b)
}
