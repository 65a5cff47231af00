//! Convex polytopes in vertex representation on the probability simplex and
//! the nonnegative likelihood cone.
//!
//! Membership is decided by non-negative least squares on the barycentric
//! system; intersection goes through half-space form (facet enumeration of
//! each operand, then vertex enumeration of the joint system).

mod hrep;
mod nnls;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

pub(crate) use hrep::{enumerate_vertices, HRep, HalfSpace};

/// Max-norm tolerance for vertex identity, feasibility slack and half-space
/// satisfaction.
pub const EPS_GEOM: f64 = 1e-9;

/// Largest supported ambient dimension (frame size).
pub const MAX_DIM: usize = 16;

/// A bounded convex polytope held as its minimal vertex list.
#[derive(Debug, Clone, PartialEq)]
pub struct Polytope {
    dim: usize,
    vertices: Vec<Vec<f64>>,
}

impl Polytope {
    /// The empty polytope of the given ambient dimension.
    pub fn empty(dim: usize) -> Self {
        Polytope {
            dim,
            vertices: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn into_vertices(self) -> Vec<Vec<f64>> {
        self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Whether `point` is a convex combination of the vertices, within
    /// [`EPS_GEOM`].
    pub fn contains(&self, point: &[f64]) -> Result<bool> {
        self.contains_within(point, EPS_GEOM)
    }

    /// Membership with an explicit max-norm residual tolerance.
    pub fn contains_within(&self, point: &[f64], tol: f64) -> Result<bool> {
        if point.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: point.len(),
            });
        }
        Ok(in_hull(&self.vertices, point, tol))
    }

    /// Set equality up to tolerance: every vertex of each lies in the other.
    pub fn same_set(&self, other: &Polytope) -> bool {
        if self.dim != other.dim {
            return false;
        }
        self.vertices
            .iter()
            .all(|v| in_hull(&other.vertices, v, EPS_GEOM))
            && other
                .vertices
                .iter()
                .all(|v| in_hull(&self.vertices, v, EPS_GEOM))
    }

    pub(crate) fn h_rep(&self) -> HRep {
        hrep::facets(&self.vertices)
    }
}

pub(crate) fn max_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn in_hull(vertices: &[Vec<f64>], point: &[f64], tol: f64) -> bool {
    match vertices {
        [] => false,
        [v] => max_dist(v, point) <= tol,
        _ => {
            let m = point.len();
            let n = vertices.len();
            let mut a = DMatrix::zeros(m + 1, n);
            for (j, v) in vertices.iter().enumerate() {
                for i in 0..m {
                    a[(i, j)] = v[i];
                }
                a[(m, j)] = 1.0;
            }
            let mut b = DVector::zeros(m + 1);
            for i in 0..m {
                b[i] = point[i];
            }
            b[m] = 1.0;
            let weights = nnls::nnls(&a, &b);
            (a * weights - b).amax() <= tol
        }
    }
}

pub(crate) fn validate_points(points: &[Vec<f64>]) -> Result<usize> {
    let first = points.first().ok_or(Error::EmptyInput)?;
    let dim = first.len();
    if dim == 0 {
        return Err(Error::InvalidInput("zero-length vector".into()));
    }
    if dim > MAX_DIM {
        return Err(Error::FrameTooLarge(dim));
    }
    for p in points {
        if p.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: p.len(),
            });
        }
        if p.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("non-finite coordinate".into()));
        }
    }
    Ok(dim)
}

/// Minimal vertex set of `conv(points)`. Every returned vertex is one of the
/// inputs, kept in first-occurrence order.
pub fn convex_hull(points: &[Vec<f64>]) -> Result<Polytope> {
    let dim = validate_points(points)?;

    let mut kept: Vec<Vec<f64>> = Vec::with_capacity(points.len());
    for p in points {
        if !kept.iter().any(|k| max_dist(k, p) <= EPS_GEOM) {
            kept.push(p.clone());
        }
    }

    let mut i = 0;
    while i < kept.len() && kept.len() > 1 {
        let others: Vec<Vec<f64>> = kept
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, v)| v.clone())
            .collect();
        if in_hull(&others, &kept[i], EPS_GEOM) {
            kept.remove(i);
        } else {
            i += 1;
        }
    }

    Ok(Polytope {
        dim,
        vertices: kept,
    })
}

/// `a ∩ b` in vertex form; empty when the operands are disjoint.
pub fn intersect(a: &Polytope, b: &Polytope) -> Result<Polytope> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch {
            expected: a.dim,
            found: b.dim,
        });
    }
    if a.dim > MAX_DIM {
        return Err(Error::FrameTooLarge(a.dim));
    }
    if a.is_empty() || b.is_empty() {
        return Ok(Polytope::empty(a.dim));
    }
    let mut system = a.h_rep();
    system.extend(b.h_rep());
    let mut vertices = enumerate_vertices(a.dim, &system);
    if vertices.is_empty() {
        return Ok(Polytope::empty(a.dim));
    }
    // Vertices shared with an operand come back exact rather than re-solved.
    for v in &mut vertices {
        if let Some(exact) = a
            .vertices
            .iter()
            .chain(&b.vertices)
            .find(|w| max_dist(w, v) <= EPS_GEOM)
        {
            v.clone_from(exact);
        }
    }
    convex_hull(&vertices)
}

/// Vertices of `{x : E x = f, A x ≤ b}`, minimized. Used where a polytope
/// is naturally given by constraints (maximal families).
pub(crate) fn polytope_from_constraints(dim: usize, system: &HRep) -> Result<Polytope> {
    if dim > MAX_DIM {
        return Err(Error::FrameTooLarge(dim));
    }
    let vertices = enumerate_vertices(dim, system);
    if vertices.is_empty() {
        return Ok(Polytope::empty(dim));
    }
    convex_hull(&vertices)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hull(points: &[&[f64]]) -> Polytope {
        convex_hull(&points.iter().map(|p| p.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn paper_prior() -> Polytope {
        hull(&[
            &[1.0, 0.0, 0.0],
            &[0.5, 0.5, 0.0],
            &[0.5, 0.3, 0.2],
            &[0.8, 0.0, 0.2],
        ])
    }

    #[test]
    fn midpoint_is_dropped() {
        let p = hull(&[&[1.0, 0.0], &[0.0, 1.0], &[0.5, 0.5]]);
        assert_eq!(p.vertices(), &[vec![1.0, 0.0], vec![0.0, 1.0]]);
    }

    #[test]
    fn four_prior_extremes_are_all_kept() {
        assert_eq!(paper_prior().len(), 4);
    }

    #[test]
    fn duplicates_collapse() {
        let p = hull(&[&[0.3, 0.7], &[0.3, 0.7]]);
        assert_eq!(p.vertices(), &[vec![0.3, 0.7]]);
    }

    #[test]
    fn empty_input_is_rejected() {
        assert_eq!(convex_hull(&[]), Err(Error::EmptyInput));
    }

    #[test]
    fn oversized_frame_is_rejected() {
        assert_eq!(convex_hull(&[vec![0.0; 17]]), Err(Error::FrameTooLarge(17)));
    }

    #[test]
    fn segment_membership() {
        let seg = hull(&[&[1.0, 0.0], &[0.0, 1.0]]);
        assert!(seg.contains(&[0.25, 0.75]).unwrap());
        assert!(!seg.contains(&[0.6, 0.5]).unwrap());
        assert!(matches!(
            seg.contains(&[0.2, 0.3, 0.5]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn interior_point_of_prior() {
        // Witness for the feasibility problem: 0.1·p1 + 0.4·p2 + 0.5·p4.
        let mix: Vec<f64> = (0..3)
            .map(|i| 0.1 * [1.0, 0.0, 0.0][i] + 0.4 * [0.5, 0.5, 0.0][i] + 0.5 * [0.8, 0.0, 0.2][i])
            .collect();
        assert!(max_dist(&mix, &[0.7, 0.2, 0.1]) < 1e-12);
        assert!(paper_prior().contains(&[0.7, 0.2, 0.1]).unwrap());
        assert!(!paper_prior().contains(&[0.2, 0.2, 0.6]).unwrap());
    }

    #[test]
    fn interval_intersection() {
        let a = hull(&[&[0.75, 0.25], &[0.85, 0.15]]);
        let b = hull(&[&[0.8, 0.2], &[0.9, 0.1]]);
        let c = intersect(&a, &b).unwrap();
        assert!(c.same_set(&hull(&[&[0.8, 0.2], &[0.85, 0.15]])));
        assert_eq!(c.len(), 2);
    }

    #[test]
    fn intersection_is_idempotent() {
        let p = paper_prior();
        let q = intersect(&p, &p).unwrap();
        assert_eq!(q.len(), 4);
        assert!(q.same_set(&p));
    }

    #[test]
    fn disjoint_points() {
        let c = intersect(&hull(&[&[1.0, 0.0]]), &hull(&[&[0.0, 1.0]])).unwrap();
        assert!(c.is_empty());
    }

    #[test]
    fn segments_meeting_at_origin() {
        let a = hull(&[&[0.0, 0.0], &[1.0, 0.0]]);
        let b = hull(&[&[0.0, 0.0], &[0.0, 1.0]]);
        let c = intersect(&a, &b).unwrap();
        assert_eq!(c.vertices(), &[vec![0.0, 0.0]]);
    }
}
