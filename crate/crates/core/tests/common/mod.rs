//! Shared fixtures and a brute-force oracle that only reads raw tables.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use defectsum_core::algebra::{characters_of, cyclic_group, direct_product, symmetric_group, BiSet, FiniteGroup};
use defectsum_core::complex::{sphere_octahedron_equator, torus_grid, SurfaceCurveComplex, VertexOrdering};
use defectsum_core::statesum::GaugeData;
use defectsum_core::twisting::{from_characters, group_2cocycle_zn_zn, restrict_from_group_cocycle, TwistingTriple};

pub fn z(n: usize) -> Arc<FiniteGroup> { Arc::new(cyclic_group(n)) }

pub fn regular(n: usize) -> Arc<BiSet> { Arc::new(BiSet::regular(z(n))) }

/// `X = S3` with `G = S3` on the right and `H = <(1 2)>` on the left.
pub fn s3_with_transposition() -> Arc<BiSet> {
  let s3 = Arc::new(symmetric_group(3));
  let (h, embed) = s3.subgroup(&[0, 1]).expect("subgroup");
  let left = s3.clone();
  let right = s3.clone();
  Arc::new(BiSet::from_fns(6, s3, Arc::new(h), move |x, g| right.mul(x, g), move |eta, x| left.mul(embed[eta], x)).unwrap())
}

/// Character twisting on a bi-set with one double orbit, using the first non-trivial character
/// on each side.
pub fn sign_twisting(biset: Arc<BiSet>, modulus: u32) -> TwistingTriple {
  let phi = characters_of(biset.g(), modulus);
  let psi = characters_of(biset.h(), modulus);
  let pick = |cs: &[defectsum_core::algebra::Character]| cs.iter().find(|c| !c.is_trivial()).cloned().unwrap_or_else(|| cs[0].clone());
  from_characters(biset, &[pick(&phi)], &[pick(&psi)], modulus).expect("character twisting")
}

/// `G = H = X = Z/2 x Z/2` with the restriction of the bilinear cocycle `zeta_2^(a1 b2)`.
pub fn klein_restricted() -> TwistingTriple {
  let (gamma, table) = group_2cocycle_zn_zn(2, 1, 2).unwrap();
  let all = [0, 1, 2, 3];
  restrict_from_group_cocycle(&gamma, &table, &all, &all, &all, 2).unwrap()
}

/// Klein four group, for callers that need the plain group.
pub fn klein() -> Arc<FiniteGroup> { Arc::new(direct_product(&cyclic_group(2), &cyclic_group(2))) }

pub fn fixtures() -> Vec<(&'static str, SurfaceCurveComplex)> {
  vec![("octahedron-equator", sphere_octahedron_equator()), ("torus-grid-3x3", torus_grid(3, 3, 0).unwrap())]
}

pub fn untwisted_gauges() -> Vec<(&'static str, GaugeData)> {
  vec![
    ("Z2 regular", GaugeData::untwisted(regular(2))),
    ("Z3 regular", GaugeData::untwisted(regular(3))),
    ("S3 with H=<(12)>", GaugeData::untwisted(s3_with_transposition())),
  ]
}

pub fn twisted_gauges() -> Vec<(&'static str, GaugeData)> {
  vec![
    ("Z2 sign characters", GaugeData::twisted(sign_twisting(regular(2), 2))),
    ("Z3 characters", GaugeData::twisted(sign_twisting(regular(3), 3))),
    ("S3 sign characters", GaugeData::twisted(sign_twisting(s3_with_transposition(), 2))),
    ("Klein restricted cocycle", GaugeData::twisted(klein_restricted())),
  ]
}

/// Everything the brute-force oracle finds: admissible labellings (indexed by sorted edge) and
/// the histogram of their total weight exponents.
pub struct OracleResult {
  pub colorings: Vec<Vec<usize>>,
  pub histogram: Vec<u64>,
}

/// Brute force over every well-typed labelling. Signs come from the parity of the permutation
/// sorting each stored triangle by rank.
pub fn oracle(cx: &SurfaceCurveComplex, ord: &VertexOrdering, data: &GaugeData) -> OracleResult {
  let raw = cx.to_raw();
  let biset = data.biset().to_raw();
  let g = data.biset().g().to_raw();
  let h_order = data.biset().h().order();
  let tw = data.twisting().map(|t| t.to_raw());
  let n_mod = tw.as_ref().map_or(1, |t| t.modulus as i64);
  let rank = ord.ranks();

  let mut curve = BTreeSet::new();
  for &[a, b] in &raw.curve_edges {
    curve.insert((a.min(b), a.max(b)));
  }
  let mut keys = BTreeSet::new();
  for t in &raw.triangles {
    for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[0], t[2])] {
      keys.insert((a.min(b), a.max(b)));
    }
  }
  let edge_ids: BTreeMap<(usize, usize), usize> = keys.iter().enumerate().map(|(i, &k)| (k, i)).collect();
  let domain: Vec<usize> = keys
    .iter()
    .map(|&(a, b)| {
      if curve.contains(&(a, b)) {
        h_order
      } else if raw.on_curve[a] || raw.on_curve[b] {
        biset.size
      } else {
        g.order
      }
    })
    .collect();

  struct T {
    e:    [usize; 3],
    on:   usize,
    sign: i64,
  }
  let tris: Vec<T> = raw
    .triangles
    .iter()
    .map(|t| {
      let mut s = *t;
      s.sort_by_key(|&v| rank[v]);
      let pos: Vec<usize> = s.iter().map(|v| t.iter().position(|w| w == v).unwrap()).collect();
      let inversions = (0..3).flat_map(|i| (i + 1..3).map(move |j| (i, j))).filter(|&(i, j)| pos[i] > pos[j]).count();
      let id = |a: usize, b: usize| edge_ids[&(a.min(b), a.max(b))];
      T {
        e:    [id(s[0], s[1]), id(s[1], s[2]), id(s[0], s[2])],
        on:   s.iter().filter(|&&v| raw.on_curve[v]).count(),
        sign: if inversions % 2 == 0 { 1 } else { -1 },
      }
    })
    .collect();

  let mut result = OracleResult { colorings: Vec::new(), histogram: vec![0; n_mod as usize] };
  let mut labels = vec![0usize; domain.len()];
  'outer: loop {
    let mut total = 0i64;
    let mut ok = true;
    for t in &tris {
      let (a, b, c) = (labels[t.e[0]], labels[t.e[1]], labels[t.e[2]]);
      let (product, w) = match t.on {
        0 => (g.mul[a][b], tw.as_ref().map_or(0, |tw| tw.alpha[a][b])),
        1 => (biset.right[a][b], tw.as_ref().map_or(0, |tw| tw.beta[a][b])),
        _ => (biset.left[a][b], tw.as_ref().map_or(0, |tw| tw.gamma[a][b])),
      };
      if product != c {
        ok = false;
        break;
      }
      total += t.sign * w;
    }
    if ok {
      result.histogram[total.rem_euclid(n_mod) as usize] += 1;
      result.colorings.push(labels.clone());
    }
    let mut i = 0;
    loop {
      if i == labels.len() {
        break 'outer;
      }
      labels[i] += 1;
      if labels[i] < domain[i] {
        break;
      }
      labels[i] = 0;
      i += 1;
    }
  }
  result
}

/// Number of commuting pairs in a group, from its raw table.
pub fn commuting_pairs(g: &FiniteGroup) -> usize {
  let raw = g.to_raw();
  (0..raw.order).flat_map(|a| (0..raw.order).map(move |b| (a, b))).filter(|&(a, b)| raw.mul[a][b] == raw.mul[b][a]).count()
}

/// Product of the domain sizes, for skipping oversized brute-force runs.
pub fn labelling_space(cx: &SurfaceCurveComplex, data: &GaugeData) -> f64 {
  cx.edges()
    .iter()
    .map(|&e| {
      let b = data.biset();
      (if cx.is_curve_edge(e) {
        b.h().order()
      } else if cx.is_on_curve(e.lo()) || cx.is_on_curve(e.hi()) {
        b.size()
      } else {
        b.g().order()
      }) as f64
    })
    .product()
}

/// Flag-like complexes with at most 14 edges, each with a curve-first ordering.
pub fn small_fixtures() -> Vec<(&'static str, SurfaceCurveComplex, VertexOrdering)> {
  use defectsum_core::complex::tetrahedron_sphere;
  use defectsum_core::moves::{curve_weld_21, subdivide_13};
  use rand::SeedableRng;

  let tet = tetrahedron_sphere();
  let tet_ord = VertexOrdering::curve_first(&tet);
  let (tet5, tet5_ord) = subdivide_13(&tet, &tet_ord, [0, 1, 3], 4).unwrap();
  let oct = sphere_octahedron_equator();
  let oct_ord = VertexOrdering::curve_first(&oct);
  let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
  let oct_shuffled = VertexOrdering::random(&oct, &mut rng);
  let (bip, bip_ord) = curve_weld_21(&oct, &oct_ord, 0).unwrap();
  let (bip6, bip6_ord) = subdivide_13(&bip, &bip_ord, bip.triangles()[0], 3).unwrap();
  vec![
    ("tetrahedron", tet.clone(), tet_ord),
    ("tetrahedron+1-3", tet5, tet5_ord),
    ("octahedron-equator", oct.clone(), oct_ord),
    ("octahedron-equator shuffled", oct, oct_shuffled),
    ("bipyramid", bip, bip_ord),
    ("bipyramid+1-3", bip6, bip6_ord),
  ]
}

/// Gauge data with `|G|, |H|, |X| <= 3` that fits `cx` (bulk-only data when the curve is empty).
pub fn small_gauges(cx: &SurfaceCurveComplex) -> Vec<(&'static str, GaugeData)> {
  if cx.curve_vertex_count() == 0 {
    return vec![
      ("Z2 bulk", GaugeData::bulk_only(z(2))),
      ("Z3 bulk", GaugeData::bulk_only(z(3))),
      ("Z3 bulk, trivial twisting mod 3", GaugeData::twisted(TwistingTriple::trivial(Arc::new(BiSet::point(z(3))), 3))),
    ];
  }
  vec![
    ("Z2 regular", GaugeData::untwisted(regular(2))),
    ("Z3 regular", GaugeData::untwisted(regular(3))),
    ("Z2 sign characters", GaugeData::twisted(sign_twisting(regular(2), 2))),
    ("Z3 characters", GaugeData::twisted(sign_twisting(regular(3), 3))),
    ("G=Z3, H=Z2, X=3 fixed points", GaugeData::untwisted(Arc::new(BiSet::trivial(3, z(3), z(2))))),
    ("G=Z2, H=Z3 trivial on 2 points", GaugeData::untwisted(Arc::new(BiSet::trivial(2, z(2), z(3))))),
  ]
}
