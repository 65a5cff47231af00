//! Prior information as credal sets: convex sets of probability
//! distributions over a finite frame, with optional context tags.

use std::collections::BTreeSet;

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::event::{Event, Interval, IntervalTable};
use crate::geometry::{self, HRep, HalfSpace, Polytope, EPS_GEOM, MAX_DIM};

/// Tolerance on `Σ p = 1` for probability vectors.
pub const EPS_SUM: f64 = 1e-9;

/// Ordered list of distinct outcome labels.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Frame {
    labels: Vec<String>,
}

impl Frame {
    pub fn new<I, S>(labels: I) -> Result<Frame>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::InvalidInput(
                "a frame needs at least one outcome".into(),
            ));
        }
        if labels.len() > MAX_DIM {
            return Err(Error::FrameTooLarge(labels.len()));
        }
        let distinct: BTreeSet<&String> = labels.iter().collect();
        if distinct.len() != labels.len() {
            return Err(Error::InvalidInput("frame labels must be distinct".into()));
        }
        Ok(Frame { labels })
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Event made of the named outcomes; `None` if a label is unknown.
    pub fn event<S: AsRef<str>>(&self, labels: &[S]) -> Option<Event> {
        labels
            .iter()
            .map(|l| self.index_of(l.as_ref()))
            .collect::<Option<Vec<_>>>()
            .map(Event::from_indices)
    }

    /// Comma-joined member labels; `{}` for the empty event.
    pub fn event_label(&self, event: Event) -> String {
        if event.is_empty() {
            return "{}".to_string();
        }
        event
            .indices()
            .filter(|&i| i < self.size())
            .map(|i| self.labels[i].as_str())
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn full_event(&self) -> Event {
        Event::full(self.size())
    }

    /// Product frame in row-major order, labelled `"<u>,<v>"`.
    pub fn product(&self, other: &Frame) -> Result<Frame> {
        let size = self.size() * other.size();
        if size > MAX_DIM {
            return Err(Error::FrameTooLarge(size));
        }
        Frame::new(
            self.labels
                .iter()
                .flat_map(|u| other.labels.iter().map(move |v| format!("{u},{v}"))),
        )
    }

    pub(crate) fn check_len(&self, found: usize) -> Result<()> {
        if found != self.size() {
            return Err(Error::DimensionMismatch {
                expected: self.size(),
                found,
            });
        }
        Ok(())
    }

    pub(crate) fn check_same(&self, other: &Frame) -> Result<()> {
        if self != other {
            return Err(Error::DimensionMismatch {
                expected: self.size(),
                found: other.size(),
            });
        }
        Ok(())
    }
}

/// A probability distribution: values in `[0, 1]` summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbVector(Vec<f64>);

impl ProbVector {
    pub fn new(values: Vec<f64>) -> Result<ProbVector> {
        if let Some(bad) = values
            .iter()
            .find(|v| !v.is_finite() || **v < -EPS_SUM || **v > 1.0 + EPS_SUM)
        {
            return Err(Error::InvalidInput(format!(
                "probability value {bad} outside [0, 1]"
            )));
        }
        let total: f64 = values.iter().sum();
        if (total - 1.0).abs() > EPS_SUM {
            return Err(Error::InvalidInput(format!(
                "probabilities sum to {total}, not 1"
            )));
        }
        Ok(ProbVector(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn prob(&self, event: Event) -> f64 {
        event.mass(&self.0)
    }
}

impl AsRef<[f64]> for ProbVector {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// Convex set of distributions, held as its minimal list of extremes.
#[derive(Debug, Clone, PartialEq)]
pub struct CredalSet {
    frame: Frame,
    polytope: Polytope,
    contexts: BTreeSet<String>,
}

impl CredalSet {
    /// Convex hull of the given distributions.
    pub fn new(frame: Frame, extremes: Vec<Vec<f64>>) -> Result<CredalSet> {
        if extremes.is_empty() {
            return Err(Error::EmptySet);
        }
        for p in &extremes {
            frame.check_len(p.len())?;
            ProbVector::new(p.clone())?;
        }
        let polytope = geometry::convex_hull(&extremes)?;
        Ok(CredalSet {
            frame,
            polytope,
            contexts: BTreeSet::new(),
        })
    }

    pub fn singleton(frame: Frame, p: ProbVector) -> Result<CredalSet> {
        CredalSet::new(frame, vec![p.into_inner()])
    }

    /// The whole simplex: no prior information at all.
    pub fn vacuous(frame: Frame) -> CredalSet {
        let m = frame.size();
        let extremes = (0..m)
            .map(|i| (0..m).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        CredalSet::new(frame, extremes).expect("degenerate distributions are valid")
    }

    /// The empty credal set, the outcome of conflicting conjunctions.
    pub fn empty(frame: Frame) -> CredalSet {
        let dim = frame.size();
        CredalSet {
            frame,
            polytope: Polytope::empty(dim),
            contexts: BTreeSet::new(),
        }
    }

    pub fn with_contexts<I, S>(mut self, contexts: I) -> CredalSet
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.contexts = contexts.into_iter().map(Into::into).collect();
        self
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn contexts(&self) -> &BTreeSet<String> {
        &self.contexts
    }

    pub fn extremes(&self) -> &[Vec<f64>] {
        self.polytope.vertices()
    }

    pub fn polytope(&self) -> &Polytope {
        &self.polytope
    }

    pub fn is_empty(&self) -> bool {
        self.polytope.is_empty()
    }

    pub fn contains(&self, p: &[f64]) -> Result<bool> {
        self.polytope.contains(p)
    }

    /// Same frame and the same set of distributions (contexts ignored).
    pub fn same_set(&self, other: &CredalSet) -> bool {
        self.frame == other.frame && self.polytope.same_set(&other.polytope)
    }

    /// Both pieces of information hold: the intersection of the two sets.
    ///
    /// Sets gathered under different contexts can only be conjoined when the
    /// caller asserts that the contexts do not interact.
    pub fn conjunction(&self, other: &CredalSet, assume_no_interaction: bool) -> Result<CredalSet> {
        self.frame.check_same(&other.frame)?;
        if self.contexts != other.contexts && !assume_no_interaction {
            return Err(self.context_mismatch(other));
        }
        let polytope = geometry::intersect(&self.polytope, &other.polytope)?;
        Ok(CredalSet {
            frame: self.frame.clone(),
            polytope,
            contexts: self.contexts.union(&other.contexts).cloned().collect(),
        })
    }

    /// One of the two pieces of information holds: hull of the union.
    pub fn disjunction(&self, other: &CredalSet) -> Result<CredalSet> {
        self.frame.check_same(&other.frame)?;
        if self.contexts != other.contexts {
            return Err(self.context_mismatch(other));
        }
        let points: Vec<Vec<f64>> = self
            .extremes()
            .iter()
            .chain(other.extremes())
            .cloned()
            .collect();
        if points.is_empty() {
            return Ok(CredalSet::empty(self.frame.clone()).with_contexts(self.contexts.clone()));
        }
        Ok(CredalSet {
            frame: self.frame.clone(),
            polytope: geometry::convex_hull(&points)?,
            contexts: self.contexts.clone(),
        })
    }

    fn context_mismatch(&self, other: &CredalSet) -> Error {
        Error::ContextMismatch {
            left: self.contexts.iter().cloned().collect(),
            right: other.contexts.iter().cloned().collect(),
        }
    }

    /// Lower and upper probabilities of every event. `P(A)` is linear in
    /// `P`, so both optima are attained at extremes.
    pub fn envelope(&self) -> Result<Envelope> {
        if self.is_empty() {
            return Err(Error::EmptySet);
        }
        let m = self.frame.size();
        let bounds = Event::all(m)
            .map(|a| {
                let (lo, hi) = self
                    .extremes()
                    .iter()
                    .map(|p| a.mass(p))
                    .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                        (lo.min(v), hi.max(v))
                    });
                Interval::new(lo, hi)
            })
            .collect();
        Ok(Envelope {
            frame: self.frame.clone(),
            bounds,
        })
    }

    /// Convex hull of all pairwise products of extremes over the product
    /// frame. This contains every product `P·Q` with `P`, `Q` in the
    /// operands, plus the mixtures the hull adds.
    pub fn independent_product(&self, other: &CredalSet) -> Result<CredalSet> {
        if self.is_empty() || other.is_empty() {
            return Err(Error::EmptySet);
        }
        let frame = self.frame.product(&other.frame)?;
        let points: Vec<Vec<f64>> = self
            .extremes()
            .iter()
            .flat_map(|p| {
                other.extremes().iter().map(move |q| {
                    p.iter()
                        .flat_map(|a| q.iter().map(move |b| a * b))
                        .collect()
                })
            })
            .collect();
        Ok(CredalSet {
            frame,
            polytope: geometry::convex_hull(&points)?,
            contexts: self.contexts.union(&other.contexts).cloned().collect(),
        })
    }
}

/// Lower and upper probability for every event of a frame, indexed by
/// event bitmask.
#[derive(Debug, Clone, PartialEq)]
pub struct Envelope {
    frame: Frame,
    bounds: Vec<Interval>,
}

impl Envelope {
    /// Envelope from a per-event bound function. `∅` and the sure event are
    /// pinned to `[0, 0]` and `[1, 1]`.
    pub fn from_fn<F>(frame: Frame, mut bound: F) -> Result<Envelope>
    where
        F: FnMut(Event) -> Interval,
    {
        let m = frame.size();
        let full = Event::full(m);
        let mut bounds = Vec::with_capacity(1 << m);
        for a in Event::all(m) {
            let iv = if a.is_empty() {
                Interval::point(0.0)
            } else if a == full {
                Interval::point(1.0)
            } else {
                bound(a)
            };
            if !(iv.lower.is_finite() && iv.upper.is_finite()) || iv.lower > iv.upper + EPS_GEOM {
                return Err(Error::InvalidBounds {
                    index: a.0 as usize,
                    lower: iv.lower,
                    upper: iv.upper,
                });
            }
            bounds.push(iv);
        }
        Ok(Envelope { frame, bounds })
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn get(&self, event: Event) -> Interval {
        self.bounds[event.0 as usize]
    }

    pub fn lower(&self, event: Event) -> f64 {
        self.get(event).lower
    }

    pub fn upper(&self, event: Event) -> f64 {
        self.get(event).upper
    }

    pub fn table(&self, events: &[Event]) -> IntervalTable {
        events.iter().map(|&e| (e, self.get(e))).collect()
    }

    /// Largest credal set compatible with the envelope:
    /// `{P : l(A) ≤ P(A) ≤ u(A) for all A}`.
    pub fn maximal_family(&self) -> Result<CredalSet> {
        let m = self.frame.size();
        let indicator = |a: Event| {
            DVector::from_iterator(m, (0..m).map(|i| if a.contains(i) { 1.0 } else { 0.0 }))
        };
        let mut system = HRep::default();
        system.equalities.push(HalfSpace {
            normal: indicator(Event::full(m)),
            offset: 1.0,
        });
        for i in 0..m {
            system.inequalities.push(HalfSpace {
                normal: -indicator(Event::singleton(i)),
                offset: 0.0,
            });
        }
        let full = Event::full(m);
        for a in Event::all(m).filter(|a| !a.is_empty() && *a != full) {
            let iv = self.get(a);
            if iv.lower > 0.0 {
                system.inequalities.push(HalfSpace {
                    normal: -indicator(a),
                    offset: -iv.lower,
                });
            }
            if iv.upper < 1.0 {
                system.inequalities.push(HalfSpace {
                    normal: indicator(a),
                    offset: iv.upper,
                });
            }
        }
        let polytope = geometry::polytope_from_constraints(m, &system)?;
        if polytope.is_empty() {
            return Err(Error::EmptySet);
        }
        Ok(CredalSet {
            frame: self.frame.clone(),
            polytope,
            contexts: BTreeSet::new(),
        })
    }
}
