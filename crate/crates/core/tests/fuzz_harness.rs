mod common;

use common::*;
use defectsum_core::complex::{SurfaceCurveComplex, VertexOrdering};
use defectsum_core::fuzz::{replay_values, run_campaign, FuzzConfig, MoveEngine, StandardMoves};
use defectsum_core::moves::{self, MoveError, MoveKind, MoveRecord};
use defectsum_core::statesum::GaugeData;

/// Standard moves, except that every 2-2 flip also adds a disjoint tetrahedral sphere.
struct SphereOnFlip;

impl MoveEngine for SphereOnFlip {
  fn apply(
    &self,
    cx: &SurfaceCurveComplex,
    ord: &VertexOrdering,
    record: &MoveRecord,
  ) -> Result<(SurfaceCurveComplex, VertexOrdering), MoveError> {
    let (cx, ord) = moves::apply(cx, ord, record)?;
    if record.kind != MoveKind::Flip22 {
      return Ok((cx, ord));
    }
    let mut raw = cx.to_raw();
    let n = raw.vertices;
    raw.vertices += 4;
    raw.on_curve.extend([false; 4]);
    raw.triangles.extend([[n, n + 2, n + 1], [n, n + 1, n + 3], [n, n + 3, n + 2], [n + 1, n + 2, n + 3]]);
    let mut ord = ord;
    for _ in 0..4 {
      ord = ord.with_inserted(ord.len());
    }
    Ok((SurfaceCurveComplex::validate(&raw).expect("disjoint union is a surface"), ord))
  }
}

#[test]
fn corrupted_engine_is_caught_at_first_flip() {
  for (_, cx) in fixtures() {
    let ord = VertexOrdering::curve_first(&cx);
    let data = GaugeData::untwisted(regular(2));
    let config = FuzzConfig { trials: 4, steps: 30, seed: 21, ..FuzzConfig::default() };
    let report = run_campaign(&cx, &ord, &data, &config, &SphereOnFlip).unwrap();
    assert!(!report.passed());
    assert!(!report.conservation_violations.is_empty());
    assert!(!report.invariance_violations.is_empty());
    for v in &report.invariance_violations {
      let last = v.log.last().unwrap();
      assert_eq!(last.kind, MoveKind::Flip22);
      assert_eq!(v.log.iter().filter(|r| r.kind == MoveKind::Flip22).count(), 1);
      assert_eq!(v.step, v.log.len());

      let bad = replay_values(&cx, &ord, &data, &v.log, false, &SphereOnFlip).unwrap();
      assert_eq!(bad.last().unwrap().to_string(), v.found);
      assert!(bad[..bad.len() - 1].iter().all(|z| z.to_string() == v.expected));
      let good = replay_values(&cx, &ord, &data, &v.log, false, &StandardMoves).unwrap();
      assert!(good.iter().all(|z| z.to_string() == v.expected));
    }
  }
}

#[test]
fn standard_engine_passes_the_same_campaign() {
  for (_, cx) in fixtures() {
    let ord = VertexOrdering::curve_first(&cx);
    let data = GaugeData::untwisted(regular(2));
    let config = FuzzConfig { trials: 4, steps: 30, seed: 21, ..FuzzConfig::default() };
    let report = run_campaign(&cx, &ord, &data, &config, &StandardMoves).unwrap();
    assert!(report.passed(), "{:?}", report.invariance_violations);
  }
}
