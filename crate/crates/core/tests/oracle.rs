mod common;

use std::sync::Arc;

use common::*;
use defectsum_core::algebra::{symmetric_group, BiSet};
use defectsum_core::complex::{
  sphere_octahedron_equator, tetrahedron_sphere, torus_7vertex, torus_grid, SurfaceCurveComplex, VertexOrdering,
};
use defectsum_core::statesum::{StateSum, compute_twisted, compute_untwisted, invariant_untwisted, GaugeData, Options, Strategy};
use num_bigint::BigInt;
use num_rational::BigRational;

fn ratio(p: i64, q: i64) -> BigRational { BigRational::new(BigInt::from(p), BigInt::from(q)) }

fn opts(strategy: Strategy) -> Options { Options { strategy, jobs: Some(1) } }

fn evaluate(cx: &SurfaceCurveComplex, ord: &VertexOrdering, data: &GaugeData, strategy: Strategy) -> StateSum {
  if data.twisting().is_some() {
    compute_twisted(cx, ord, data, &opts(strategy)).unwrap()
  } else {
    compute_untwisted(cx, ord, data, &opts(strategy)).unwrap()
  }
}

fn forget_curve(cx: &SurfaceCurveComplex) -> SurfaceCurveComplex {
  let mut raw = cx.to_raw();
  raw.on_curve = vec![false; raw.vertices];
  raw.curve_edges.clear();
  SurfaceCurveComplex::validate(&raw).unwrap()
}

#[test]
fn dijkgraaf_witten_on_spheres_and_tori() {
  for g in [z(2), z(3), z(4), Arc::new(symmetric_group(3)), klein()] {
    let data = GaugeData::bulk_only(g.clone());
    let n = g.order() as i64;
    let tet = tetrahedron_sphere();
    assert_eq!(invariant_untwisted(&tet, &VertexOrdering::curve_first(&tet), &data).unwrap(), ratio(1, n));
    for cx in [torus_7vertex(), forget_curve(&torus_grid(3, 3, 0).unwrap())] {
      let z = invariant_untwisted(&cx, &VertexOrdering::curve_first(&cx), &data).unwrap();
      assert_eq!(z, ratio(commuting_pairs(&g) as i64, n));
    }
  }
}

#[test]
fn octahedron_with_sign_characters_is_one_half() {
  let cx = sphere_octahedron_equator();
  let ord = VertexOrdering::curve_first(&cx);
  let data = GaugeData::twisted(sign_twisting(regular(2), 2));
  let truth = oracle(&cx, &ord, &data);
  assert_eq!(truth.histogram, vec![32, 0]);
  let sum = compute_twisted(&cx, &ord, &data, &opts(Strategy::Exhaustive)).unwrap();
  assert_eq!(sum.value.as_rational(), Some(ratio(1, 2)));
}

#[test]
fn regular_biset_is_transparent() {
  for (_, cx) in fixtures() {
    let ord = VertexOrdering::curve_first(&cx);
    let bare = forget_curve(&cx);
    let bare_ord = VertexOrdering::curve_first(&bare);
    for g in [z(2), z(3), klein(), Arc::new(symmetric_group(3))] {
      let with_curve = invariant_untwisted(&cx, &ord, &GaugeData::untwisted(Arc::new(BiSet::regular(g.clone())))).unwrap();
      let without = invariant_untwisted(&bare, &bare_ord, &GaugeData::bulk_only(g)).unwrap();
      assert_eq!(with_curve, without);
    }
  }
}

#[test]
fn pinned_values_on_fixtures() {
  let oct = sphere_octahedron_equator();
  let grid = torus_grid(3, 3, 0).unwrap();
  let cases: [(&SurfaceCurveComplex, GaugeData, BigRational); 4] = [
    (&oct, GaugeData::untwisted(s3_with_transposition()), ratio(1, 2)),
    (&grid, GaugeData::untwisted(s3_with_transposition()), ratio(4, 1)),
    (&oct, GaugeData::twisted(klein_restricted()), ratio(1, 4)),
    (&grid, GaugeData::twisted(klein_restricted()), ratio(1, 1)),
  ];
  for (cx, data, expected) in cases {
    let ord = VertexOrdering::curve_first(cx);
    assert_eq!(evaluate(cx, &ord, &data, Strategy::GaugeFixed).value.as_rational(), Some(expected));
  }
}

#[test]
fn gauge_fixing_matches_exhaustive() {
  let mut cases: Vec<(SurfaceCurveComplex, VertexOrdering)> =
    small_fixtures().into_iter().map(|(_, cx, ord)| (cx, ord)).collect();
  cases.extend(fixtures().into_iter().map(|(_, cx)| {
    let ord = VertexOrdering::curve_first(&cx);
    (cx, ord)
  }));
  for (cx, ord) in &cases {
    let mut gauges = small_gauges(cx);
    if cx.curve_vertex_count() > 0 {
      gauges.extend(untwisted_gauges());
      gauges.extend(twisted_gauges());
    }
    for (name, data) in gauges {
      let fast = evaluate(cx, ord, &data, Strategy::GaugeFixed);
      let slow = evaluate(cx, ord, &data, Strategy::Exhaustive);
      assert_eq!(fast.kappa, slow.kappa, "{name}");
      assert_eq!(fast.value, slow.value, "{name}");
    }
  }
}

#[test]
fn parallel_and_sequential_agree() {
  let cx = torus_grid(3, 3, 0).unwrap();
  let ord = VertexOrdering::curve_first(&cx);
  let data = GaugeData::twisted(klein_restricted());
  let seq = compute_twisted(&cx, &ord, &data, &Options { strategy: Strategy::GaugeFixed, jobs: Some(1) }).unwrap();
  let par = compute_twisted(&cx, &ord, &data, &Options { strategy: Strategy::GaugeFixed, jobs: Some(4) }).unwrap();
  assert_eq!(seq, par);
}
