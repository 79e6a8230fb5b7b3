//! Fixtures shared by the benchmarks.

use std::sync::Arc;

use defectsum_core::algebra::{cyclic_group, symmetric_group, BiSet};
use defectsum_core::complex::{sphere_octahedron_equator, torus_grid, SurfaceCurveComplex, VertexOrdering};
use defectsum_core::statesum::GaugeData;

pub struct Case {
  pub name:     String,
  pub complex:  SurfaceCurveComplex,
  pub ordering: VertexOrdering,
  pub data:     GaugeData,
}

fn case(name: String, complex: SurfaceCurveComplex, data: GaugeData) -> Case {
  let ordering = VertexOrdering::curve_first(&complex);
  Case { name, complex, ordering, data }
}

/// Regular bi-sets over a few groups on the octahedron and on grid tori of growing size.
pub fn cases() -> Vec<Case> {
  let mut out = Vec::new();
  let groups = [("Z2", Arc::new(cyclic_group(2))), ("Z3", Arc::new(cyclic_group(3))), ("S3", Arc::new(symmetric_group(3)))];
  for (gname, g) in &groups {
    let data = GaugeData::untwisted(Arc::new(BiSet::regular(g.clone())));
    out.push(case(format!("octahedron/{gname}"), sphere_octahedron_equator(), data.clone()));
    for n in [3, 4] {
      out.push(case(format!("torus-grid-{n}x{n}/{gname}"), torus_grid(n, n, 0).expect("grid"), data.clone()));
    }
  }
  out
}
