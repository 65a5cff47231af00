//! Evidence as convex sets of likelihood functions.
//!
//! An observation `O` induces the likelihood `l(a) = P(O | X = a)`. Imprecise
//! evidence is a convex set of such functions; two sets are equivalent when
//! their hulls agree after adding the null likelihood `l_N = 0`, which stands
//! for the impossible observation and never changes any answer. The canonical
//! form of a set is that hull. The coordinatewise maximum of a set is its
//! possibility distribution.

use crate::credal::Frame;
use crate::error::{Error, Result};
use crate::event::{Event, Interval, IntervalTable};
use crate::geometry::{self, Polytope, EPS_GEOM};

/// A likelihood function: `m` values in `[0, 1]`, no sum constraint.
#[derive(Debug, Clone, PartialEq)]
pub struct LikelihoodVector(Vec<f64>);

impl LikelihoodVector {
    pub fn new(values: Vec<f64>) -> Result<LikelihoodVector> {
        if let Some(bad) = values
            .iter()
            .find(|v| !v.is_finite() || **v < 0.0 || **v > 1.0)
        {
            return Err(Error::InvalidInput(format!(
                "likelihood value {bad} outside [0, 1]"
            )));
        }
        Ok(LikelihoodVector(values))
    }

    pub fn null(m: usize) -> LikelihoodVector {
        LikelihoodVector(vec![0.0; m])
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvidenceSet {
    frame: Frame,
    polytope: Polytope,
    canonical: bool,
}

impl EvidenceSet {
    /// Hull of the given likelihoods, as given (not canonicalized).
    pub fn new(frame: Frame, extremes: Vec<Vec<f64>>) -> Result<EvidenceSet> {
        if extremes.is_empty() {
            return Err(Error::EmptyInput);
        }
        for l in &extremes {
            frame.check_len(l.len())?;
            LikelihoodVector::new(l.clone())?;
        }
        let polytope = geometry::convex_hull(&extremes)?;
        Ok(EvidenceSet {
            frame,
            polytope,
            canonical: false,
        })
    }

    /// Evidence from one exactly known likelihood, canonicalized.
    pub fn precise(frame: Frame, likelihood: Vec<f64>) -> Result<EvidenceSet> {
        Ok(EvidenceSet::new(frame, vec![likelihood])?.canonicalize())
    }

    /// The impossible observation.
    pub fn null(frame: Frame) -> EvidenceSet {
        let m = frame.size();
        EvidenceSet::new(frame, vec![vec![0.0; m]])
            .expect("null likelihood is valid")
            .canonicalize()
    }

    /// An uninformative observation: every likelihood in `[0, 1]^m`.
    pub fn vacuous(frame: Frame) -> EvidenceSet {
        let m = frame.size();
        EvidenceSet::interval(frame, vec![0.0; m], vec![1.0; m]).expect("unit box is valid")
    }

    /// Evidence given by per-outcome bounds `lower_i ≤ P(O | a_i) ≤ upper_i`.
    pub fn interval(frame: Frame, lower: Vec<f64>, upper: Vec<f64>) -> Result<EvidenceSet> {
        frame.check_len(lower.len())?;
        frame.check_len(upper.len())?;
        LikelihoodVector::new(lower.clone())?;
        LikelihoodVector::new(upper.clone())?;
        if let Some(index) = (0..lower.len()).find(|&i| lower[i] > upper[i]) {
            return Err(Error::InvalidBounds {
                index,
                lower: lower[index],
                upper: upper[index],
            });
        }
        let mut points = box_vertices(&lower, &upper);
        points.push(vec![0.0; lower.len()]);
        Ok(EvidenceSet {
            frame,
            polytope: geometry::convex_hull(&points)?,
            canonical: true,
        })
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn extremes(&self) -> &[Vec<f64>] {
        self.polytope.vertices()
    }

    pub fn polytope(&self) -> &Polytope {
        &self.polytope
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical
    }

    pub fn contains(&self, l: &[f64]) -> Result<bool> {
        self.polytope.contains(l)
    }

    /// `E ∪ {l_N}` without reducing to canonical form.
    pub fn with_null(&self) -> EvidenceSet {
        let mut points = self.extremes().to_vec();
        points.push(vec![0.0; self.frame.size()]);
        EvidenceSet {
            frame: self.frame.clone(),
            polytope: geometry::convex_hull(&points).expect("points already validated"),
            canonical: false,
        }
    }

    /// `C(E)`: the hull of `E` together with the null likelihood.
    pub fn canonicalize(&self) -> EvidenceSet {
        if self.canonical {
            return self.clone();
        }
        EvidenceSet {
            canonical: true,
            ..self.with_null()
        }
    }

    /// Same canonical hull, up to tolerance.
    pub fn equivalent(&self, other: &EvidenceSet) -> Result<bool> {
        self.frame.check_same(&other.frame)?;
        Ok(self
            .canonicalize()
            .polytope
            .same_set(&other.canonicalize().polytope))
    }

    /// `π(a) = max_{l ∈ E} l(a)`.
    pub fn possibility(&self) -> PossibilityDist {
        let m = self.frame.size();
        let values = (0..m)
            .map(|i| self.extremes().iter().map(|l| l[i]).fold(0.0, f64::max))
            .collect();
        PossibilityDist {
            frame: self.frame.clone(),
            values,
        }
    }

    /// Two pieces of evidence about the same observation: `C(E1) ∩ C(E2)`.
    pub fn conjunction(&self, other: &EvidenceSet) -> Result<EvidenceSet> {
        self.frame.check_same(&other.frame)?;
        let polytope = geometry::intersect(
            &self.canonicalize().polytope,
            &other.canonicalize().polytope,
        )?;
        // l_N lies in both operands, so the intersection is never empty.
        debug_assert!(!polytope.is_empty());
        Ok(EvidenceSet {
            frame: self.frame.clone(),
            polytope,
            canonical: true,
        })
    }

    /// `C(E1 ∪ E2)`.
    pub fn disjunction(&self, other: &EvidenceSet) -> Result<EvidenceSet> {
        self.frame.check_same(&other.frame)?;
        let points: Vec<Vec<f64>> = self
            .extremes()
            .iter()
            .chain(other.extremes())
            .cloned()
            .collect();
        Ok(EvidenceSet::from_points(self.frame.clone(), points))
    }

    /// Conjunction of two observations with no assumption on how they
    /// interact: each coordinate of `P(O1 ∧ O2 | a)` ranges over its Fréchet
    /// bounds `[max(0, l1 + l2 − 1), min(l1, l2)]`.
    pub fn observe_and_frechet(&self, other: &EvidenceSet) -> Result<EvidenceSet> {
        self.frame.check_same(&other.frame)?;
        let (a, b) = (self.canonicalize(), other.canonicalize());
        let mut points = Vec::new();
        for l1 in a.extremes() {
            for l2 in b.extremes() {
                let lower: Vec<f64> = l1
                    .iter()
                    .zip(l2)
                    .map(|(x, y)| (x + y - 1.0).max(0.0))
                    .collect();
                let upper: Vec<f64> = l1.iter().zip(l2).map(|(x, y)| x.min(*y)).collect();
                points.extend(box_vertices(&lower, &upper));
            }
        }
        Ok(EvidenceSet::from_points(self.frame.clone(), points))
    }

    /// Conjunction of two observations that are conditionally independent
    /// given the outcome: likelihoods multiply.
    pub fn observe_and_independent(&self, other: &EvidenceSet) -> Result<EvidenceSet> {
        self.frame.check_same(&other.frame)?;
        let (a, b) = (self.canonicalize(), other.canonicalize());
        let points = a
            .extremes()
            .iter()
            .flat_map(|l1| {
                b.extremes()
                    .iter()
                    .map(move |l2| l1.iter().zip(l2).map(|(x, y)| x * y).collect())
            })
            .collect();
        Ok(EvidenceSet::from_points(self.frame.clone(), points))
    }

    /// Canonical hull of already-validated points.
    fn from_points(frame: Frame, mut points: Vec<Vec<f64>>) -> EvidenceSet {
        points.push(vec![0.0; frame.size()]);
        let polytope = geometry::convex_hull(&points).expect("points already validated");
        EvidenceSet {
            frame,
            polytope,
            canonical: true,
        }
    }
}

/// Corners of the axis-aligned box `[lower, upper]`; fixed coordinates do
/// not multiply the corner count.
fn box_vertices(lower: &[f64], upper: &[f64]) -> Vec<Vec<f64>> {
    let free: Vec<usize> = (0..lower.len())
        .filter(|&i| upper[i] - lower[i] > EPS_GEOM)
        .collect();
    (0..1usize << free.len())
        .map(|mask| {
            let mut v = lower.to_vec();
            for (bit, &i) in free.iter().enumerate() {
                if mask & (1 << bit) != 0 {
                    v[i] = upper[i];
                }
            }
            v
        })
        .collect()
}

/// A possibility distribution, not necessarily normalized.
#[derive(Debug, Clone, PartialEq)]
pub struct PossibilityDist {
    frame: Frame,
    values: Vec<f64>,
}

impl PossibilityDist {
    pub fn new(frame: Frame, values: Vec<f64>) -> Result<PossibilityDist> {
        frame.check_len(values.len())?;
        LikelihoodVector::new(values.clone())?;
        Ok(PossibilityDist { frame, values })
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `Π(A) = max_{a ∈ A} π(a)`, zero for the empty event.
    pub fn measure(&self, event: Event) -> f64 {
        event
            .indices()
            .take_while(|&i| i < self.values.len())
            .map(|i| self.values[i])
            .fold(0.0, f64::max)
    }

    /// Upper consistency `g*(A) = Π(A) / Π(U)` and its dual lower
    /// `g_*(A) = 1 − g*(Ā)` for every event.
    pub fn consistency_table(&self) -> Result<ConsistencyTable> {
        let m = self.frame.size();
        let total = self.measure(Event::full(m));
        if total <= 0.0 {
            return Err(Error::TotalConflict);
        }
        let upper = |a: Event| self.measure(a) / total;
        let bounds = Event::all(m)
            .map(|a| Interval::new(1.0 - upper(a.complement(m)), upper(a)))
            .collect();
        Ok(ConsistencyTable {
            frame: self.frame.clone(),
            bounds,
        })
    }
}

/// Evidence-only probability intervals `[g_*(A), g*(A)]`, indexed by event
/// bitmask.
#[derive(Debug, Clone, PartialEq)]
pub struct ConsistencyTable {
    frame: Frame,
    bounds: Vec<Interval>,
}

impl ConsistencyTable {
    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn get(&self, event: Event) -> Interval {
        self.bounds[event.0 as usize]
    }

    pub fn upper(&self, event: Event) -> f64 {
        self.get(event).upper
    }

    pub fn lower(&self, event: Event) -> f64 {
        self.get(event).lower
    }

    pub fn table(&self, events: &[Event]) -> IntervalTable {
        events.iter().map(|&e| (e, self.get(e))).collect()
    }
}
