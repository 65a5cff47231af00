//! Half-space representations: facet enumeration (V → H) and vertex
//! enumeration of `{x : E x = f, A x ≤ b}` (H → V).

use itertools::Itertools;
use nalgebra::{DMatrix, DVector};

use super::EPS_GEOM;

/// `normal · x ≤ offset` (or `=` when used as an equality).
#[derive(Debug, Clone)]
pub(crate) struct HalfSpace {
    pub normal: DVector<f64>,
    pub offset: f64,
}

#[derive(Debug, Clone, Default)]
pub(crate) struct HRep {
    pub equalities: Vec<HalfSpace>,
    pub inequalities: Vec<HalfSpace>,
}

impl HRep {
    pub fn extend(&mut self, other: HRep) {
        self.equalities.extend(other.equalities);
        self.inequalities.extend(other.inequalities);
    }
}

/// Affine hull of a point set: `origin + span(basis)`, with `normals`
/// spanning the orthogonal complement.
pub(crate) struct AffineHull {
    pub origin: DVector<f64>,
    pub basis: DMatrix<f64>,
    pub normals: DMatrix<f64>,
}

pub(crate) fn affine_hull(points: &[Vec<f64>]) -> AffineHull {
    let m = points[0].len();
    let origin = DVector::from_column_slice(&points[0]);
    let cols = m.max(points.len() - 1);
    let mut diffs = DMatrix::zeros(m, cols);
    for (j, p) in points.iter().skip(1).enumerate() {
        for i in 0..m {
            diffs[(i, j)] = p[i] - origin[i];
        }
    }
    let svd = diffs.svd(true, false);
    let u = svd.u.expect("left singular vectors requested");
    let (span, complement): (Vec<usize>, Vec<usize>) =
        (0..m).partition(|&k| svd.singular_values[k] > EPS_GEOM);
    AffineHull {
        origin,
        basis: u.select_columns(&span),
        normals: u.select_columns(&complement),
    }
}

/// Facet description of `conv(points)`. Points are assumed distinct.
pub(crate) fn facets(points: &[Vec<f64>]) -> HRep {
    let hull = affine_hull(points);
    let d = hull.basis.ncols();

    let equalities = hull
        .normals
        .column_iter()
        .map(|n| HalfSpace {
            normal: n.into_owned(),
            offset: n.dot(&hull.origin),
        })
        .collect();

    let local: Vec<DVector<f64>> = points
        .iter()
        .map(|p| {
            hull.basis
                .tr_mul(&(DVector::from_column_slice(p) - &hull.origin))
        })
        .collect();

    let mut found: Vec<(DVector<f64>, f64)> = Vec::new();
    if d > 0 {
        for subset in (0..local.len()).combinations(d) {
            let Some((a, b)) = hyperplane_through(&local, &subset, d) else {
                continue;
            };
            let slack: Vec<f64> = local.iter().map(|y| a.dot(y) - b).collect();
            let max = slack.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let min = slack.iter().copied().fold(f64::INFINITY, f64::min);
            let (a, b) = if max <= EPS_GEOM {
                (a, b)
            } else if min >= -EPS_GEOM {
                (-a, -b)
            } else {
                continue;
            };
            let duplicate = found
                .iter()
                .any(|(fa, fb)| (fa - &a).amax() <= 1e-7 && (fb - b).abs() <= 1e-7);
            if !duplicate {
                found.push((a, b));
            }
        }
    }

    let inequalities = found
        .into_iter()
        .map(|(a, b)| {
            let normal = &hull.basis * a;
            let offset = b + normal.dot(&hull.origin);
            HalfSpace { normal, offset }
        })
        .collect();

    HRep {
        equalities,
        inequalities,
    }
}

/// Unit-normal hyperplane `a·y = b` through the chosen `d` points of a
/// `d`-dimensional space, if they are affinely independent.
fn hyperplane_through(
    local: &[DVector<f64>],
    subset: &[usize],
    d: usize,
) -> Option<(DVector<f64>, f64)> {
    let mut m = DMatrix::zeros(d + 1, d + 1);
    for (row, &i) in subset.iter().enumerate() {
        for k in 0..d {
            m[(row, k)] = local[i][k];
        }
        m[(row, d)] = -1.0;
    }
    let svd = m.svd(false, true);
    let v_t = svd.v_t?;
    let small: Vec<usize> = (0..=d)
        .filter(|&k| svd.singular_values[k] <= 1e-10)
        .collect();
    // The padded zero row always contributes one null direction; affinely
    // independent points contribute no more.
    if small.len() != 1 {
        return None;
    }
    let null = v_t.row(small[0]).transpose();
    let a = null.rows(0, d).into_owned();
    let norm = a.norm();
    if norm <= 1e-12 {
        return None;
    }
    Some((a / norm, null[d] / norm))
}

/// Vertices of the bounded polyhedron `{x ∈ R^m : E x = f, A x ≤ b}`.
pub(crate) fn enumerate_vertices(m: usize, system: &HRep) -> Vec<Vec<f64>> {
    let (x0, null_basis) = if system.equalities.is_empty() {
        (DVector::zeros(m), DMatrix::identity(m, m))
    } else {
        let r = system.equalities.len();
        let rows = r.max(m);
        let mut e = DMatrix::zeros(rows, m);
        let mut f = DVector::zeros(rows);
        for (i, h) in system.equalities.iter().enumerate() {
            e.set_row(i, &h.normal.transpose());
            f[i] = h.offset;
        }
        let svd = e.clone().svd(true, true);
        let Ok(x0) = svd.solve(&f, EPS_GEOM) else {
            return Vec::new();
        };
        if (&e * &x0 - &f).amax() > 10.0 * EPS_GEOM {
            return Vec::new();
        }
        let v_t = svd.v_t.expect("right singular vectors requested");
        let free: Vec<usize> = (0..m)
            .filter(|&k| svd.singular_values[k] <= EPS_GEOM)
            .collect();
        let basis = v_t.select_rows(&free).transpose();
        (x0, basis)
    };
    let k = null_basis.ncols();

    let mut rows: Vec<(DVector<f64>, f64)> = Vec::new();
    for h in &system.inequalities {
        let a = null_basis.tr_mul(&h.normal);
        let b = h.offset - h.normal.dot(&x0);
        let norm = a.norm();
        if norm <= 1e-12 {
            if b < -EPS_GEOM {
                return Vec::new();
            }
            continue;
        }
        let (a, b) = (a / norm, b / norm);
        let duplicate = rows
            .iter()
            .any(|(ra, rb)| (ra - &a).amax() <= 1e-12 && (rb - b).abs() <= 1e-12);
        if !duplicate {
            rows.push((a, b));
        }
    }

    let feasible = |y: &DVector<f64>| rows.iter().all(|(a, b)| a.dot(y) <= b + EPS_GEOM);

    if k == 0 {
        let y = DVector::zeros(0);
        return if feasible(&y) {
            vec![x0.iter().copied().collect()]
        } else {
            Vec::new()
        };
    }

    let mut vertices: Vec<Vec<f64>> = Vec::new();
    for subset in (0..rows.len()).combinations(k) {
        let mut a = DMatrix::zeros(k, k);
        let mut b = DVector::zeros(k);
        for (r, &i) in subset.iter().enumerate() {
            a.set_row(r, &rows[i].0.transpose());
            b[r] = rows[i].1;
        }
        let lu = a.lu();
        if lu.determinant().abs() <= 1e-10 {
            continue;
        }
        let Some(y) = lu.solve(&b) else { continue };
        if !feasible(&y) {
            continue;
        }
        let x: Vec<f64> = (&x0 + &null_basis * y).iter().copied().collect();
        if !vertices.iter().any(|v| super::max_dist(v, &x) <= EPS_GEOM) {
            vertices.push(x);
        }
    }
    vertices
}
