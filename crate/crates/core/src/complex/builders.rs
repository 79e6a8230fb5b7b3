use thiserror::Error;

use super::{RawComplex, SurfaceCurveComplex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuilderError {
  #[error("grid must be at least 3 x 3, got {0} x {1}")]
  TooSmall(usize, usize),
  #[error("curve row {row} out of range for {rows} rows")]
  RowOutOfRange { row: usize, rows: usize },
}

fn build(raw: RawComplex) -> SurfaceCurveComplex {
  SurfaceCurveComplex::validate(&raw).expect("builder output is valid")
}

/// Boundary of the tetrahedron, no curve.
pub fn tetrahedron_sphere() -> SurfaceCurveComplex {
  build(RawComplex {
    vertices:    4,
    on_curve:    vec![false; 4],
    triangles:   vec![[0, 2, 1], [0, 1, 3], [0, 3, 2], [1, 2, 3]],
    curve_edges: vec![],
  })
}

/// Octahedron with the equator `0-1-2-3` as curve; `4` and `5` are the poles.
pub fn sphere_octahedron_equator() -> SurfaceCurveComplex {
  let mut triangles = Vec::new();
  for i in 0..4 {
    let j = (i + 1) % 4;
    triangles.push([i, j, 4]);
    triangles.push([j, i, 5]);
  }
  build(RawComplex {
    vertices: 6,
    on_curve: vec![true, true, true, true, false, false],
    triangles,
    curve_edges: vec![[0, 1], [1, 2], [2, 3], [3, 0]],
  })
}

/// The 7-vertex (Moebius) torus, no curve.
pub fn torus_7vertex() -> SurfaceCurveComplex {
  let mut triangles = Vec::new();
  for i in 0..7 {
    triangles.push([i, (i + 1) % 7, (i + 3) % 7]);
    triangles.push([i, (i + 3) % 7, (i + 2) % 7]);
  }
  build(RawComplex { vertices: 7, on_curve: vec![false; 7], triangles, curve_edges: vec![] })
}

/// `rows x cols` periodic grid with each square cut along its diagonal; vertex `(i, j)` has index
/// `i * cols + j`. Row `curve_row` is the curve.
pub fn torus_grid(rows: usize, cols: usize, curve_row: usize) -> Result<SurfaceCurveComplex, BuilderError> {
  if rows < 3 || cols < 3 {
    return Err(BuilderError::TooSmall(rows, cols));
  }
  if curve_row >= rows {
    return Err(BuilderError::RowOutOfRange { row: curve_row, rows });
  }
  let idx = |i: usize, j: usize| (i % rows) * cols + (j % cols);
  let mut triangles = Vec::new();
  for i in 0..rows {
    for j in 0..cols {
      let (v00, v01, v10, v11) = (idx(i, j), idx(i, j + 1), idx(i + 1, j), idx(i + 1, j + 1));
      triangles.push([v00, v01, v11]);
      triangles.push([v00, v11, v10]);
    }
  }
  let mut on_curve = vec![false; rows * cols];
  let mut curve_edges = Vec::new();
  for j in 0..cols {
    on_curve[idx(curve_row, j)] = true;
    curve_edges.push([idx(curve_row, j), idx(curve_row, j + 1)]);
  }
  Ok(build(RawComplex { vertices: rows * cols, on_curve, triangles, curve_edges }))
}
