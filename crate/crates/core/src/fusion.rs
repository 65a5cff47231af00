//! Combination of a credal prior with evidence, and conditioning.
//!
//! Combining a prior `p` with a likelihood `l` gives `h = p × l`
//! coordinatewise; normalizing `h` is Bayes' rule, and its total mass
//! `Σ h` is the likelihood of that prior given the observation. For sets,
//! the combination is the canonical hull of all such products. Each non-null
//! extreme `h_k` yields a conditional distribution with possibility
//! `π_k = Σ h_k`, and conditional intervals come from Choquet integrals of
//! the member conditionals against the possibility measure `g*` (upper) and
//! its dual necessity `g_*` (lower).

use log::warn;

use crate::credal::{CredalSet, Frame, ProbVector};
use crate::error::{Error, Result};
use crate::event::{Event, Interval, IntervalTable};
use crate::evidential::EvidenceSet;
use crate::geometry::{self, Polytope};

/// Below this normalizer the observation is nearly impossible under every
/// admissible prior and the conditionals deserve suspicion.
pub const LOW_LIKELIHOOD: f64 = 1e-6;

/// `H = C({p × l | p ∈ C, l ∈ E})`.
#[derive(Debug, Clone, PartialEq)]
pub struct CombinedSet {
    frame: Frame,
    polytope: Polytope,
}

impl CombinedSet {
    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    /// Minimal extremes, the null vector included when it is extreme.
    pub fn extremes(&self) -> &[Vec<f64>] {
        self.polytope.vertices()
    }

    pub fn polytope(&self) -> &Polytope {
        &self.polytope
    }

    /// Normalize every non-null extreme into a conditional with its weight.
    pub fn ensemble(&self) -> Result<ConditionalEnsemble> {
        let members = self
            .extremes()
            .iter()
            .filter_map(|h| {
                let weight: f64 = h.iter().sum();
                (weight > 0.0).then(|| Member {
                    conditional: ProbVector::new(h.iter().map(|x| x / weight).collect())
                        .expect("normalized nonnegative vector"),
                    weight,
                })
            })
            .collect();
        ConditionalEnsemble::new(self.frame.clone(), members)
    }
}

/// Fuses prior and evidence into the set of combination functions.
pub fn combine(prior: &CredalSet, evidence: &EvidenceSet) -> Result<CombinedSet> {
    prior.frame().check_same(evidence.frame())?;
    if prior.is_empty() {
        return Err(Error::EmptySet);
    }
    let m = prior.frame().size();
    let canonical = evidence.canonicalize();
    let mut points: Vec<Vec<f64>> = prior
        .extremes()
        .iter()
        .flat_map(|p| {
            canonical
                .extremes()
                .iter()
                .map(move |l| p.iter().zip(l).map(|(a, b)| a * b).collect())
        })
        .collect();
    points.push(vec![0.0; m]);
    Ok(CombinedSet {
        frame: prior.frame().clone(),
        polytope: geometry::convex_hull(&points)?,
    })
}

/// One candidate conditional and the possibility that it is the right one.
#[derive(Debug, Clone, PartialEq)]
pub struct Member {
    pub conditional: ProbVector,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalEnsemble {
    frame: Frame,
    members: Vec<Member>,
    normalizer: f64,
}

impl ConditionalEnsemble {
    pub fn new(frame: Frame, members: Vec<Member>) -> Result<ConditionalEnsemble> {
        for m in &members {
            frame.check_len(m.conditional.values().len())?;
            if !(m.weight > 0.0 && m.weight <= 1.0 + geometry::EPS_GEOM) {
                return Err(Error::InvalidInput(format!(
                    "member weight {} outside (0, 1]",
                    m.weight
                )));
            }
        }
        let normalizer = members.iter().map(|m| m.weight).fold(0.0, f64::max);
        if members.is_empty() || normalizer <= 0.0 {
            return Err(Error::TotalConflict);
        }
        if normalizer < LOW_LIKELIHOOD {
            warn!(
                "observation likelihood {normalizer:e} is tiny under every prior; \
                 conditionals are sensitive to errors in the prior"
            );
        }
        Ok(ConditionalEnsemble {
            frame,
            members,
            normalizer,
        })
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn members(&self) -> &[Member] {
        &self.members
    }

    pub fn normalizer(&self) -> f64 {
        self.normalizer
    }

    pub fn is_low_likelihood(&self) -> bool {
        self.normalizer < LOW_LIKELIHOOD
    }

    pub fn weights(&self) -> Vec<f64> {
        self.members.iter().map(|m| m.weight).collect()
    }

    pub fn measures(&self) -> EnsembleMeasures {
        EnsembleMeasures::new(self.weights())
    }

    /// `P_k(B | O)` for every member `k`.
    pub fn member_probs(&self, event: Event) -> Vec<f64> {
        self.members
            .iter()
            .map(|m| m.conditional.prob(event))
            .collect()
    }

    /// `[I(P_k(B|O) / g_*), I(P_k(B|O) / g*)]` per event.
    pub fn conditional_intervals(&self, events: &[Event]) -> Result<IntervalTable> {
        let measures = self.measures();
        let full = self.frame.full_event();
        events
            .iter()
            .map(|&b| {
                if b.is_empty() {
                    return Ok((b, Interval::point(0.0)));
                }
                if b == full {
                    return Ok((b, Interval::point(1.0)));
                }
                let f = self.member_probs(b);
                let upper = choquet_integral(&f, |d| measures.upper(d))?;
                let lower = choquet_integral(&f, |d| measures.lower(d))?;
                Ok((b, Interval::new(lower, upper)))
            })
            .collect()
    }

    /// Plain min/max over member conditionals.
    pub fn upper_lower_conditioning(&self, events: &[Event]) -> IntervalTable {
        events
            .iter()
            .map(|&b| {
                let (lo, hi) = self
                    .member_probs(b)
                    .into_iter()
                    .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                        (lo.min(v), hi.max(v))
                    });
                (b, Interval::new(lo, hi))
            })
            .collect()
    }
}

/// The possibility over ensemble members and its dual:
/// `g*(D) = max_{k ∈ D} π_k / max_k π_k`, `g_*(D) = 1 − g*(D̄)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleMeasures {
    weights: Vec<f64>,
    normalizer: f64,
}

impl EnsembleMeasures {
    pub fn new(weights: Vec<f64>) -> Self {
        let normalizer = weights.iter().copied().fold(0.0, f64::max);
        EnsembleMeasures {
            weights,
            normalizer,
        }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn upper(&self, subset: &[usize]) -> f64 {
        subset.iter().map(|&k| self.weights[k]).fold(0.0, f64::max) / self.normalizer
    }

    pub fn lower(&self, subset: &[usize]) -> f64 {
        let mut inside = vec![false; self.weights.len()];
        for &k in subset {
            inside[k] = true;
        }
        let outside = (0..self.weights.len())
            .filter(|&k| !inside[k])
            .map(|k| self.weights[k])
            .fold(0.0, f64::max);
        1.0 - outside / self.normalizer
    }
}

/// Discrete Choquet integral of `f ≥ 0` against a monotone set function `g`
/// (called with index subsets, `g(∅) = 0`):
/// `Σ_i (f_(i) − f_(i+1)) · g({(1), …, (i)})` with `f` sorted decreasingly
/// and `f_(n+1) = 0`.
pub fn choquet_integral<G>(f: &[f64], g: G) -> Result<f64>
where
    G: Fn(&[usize]) -> f64,
{
    if let Some(bad) = f.iter().find(|v| !v.is_finite() || **v < 0.0) {
        return Err(Error::InvalidInput(format!(
            "Choquet integrand must be finite and nonnegative, got {bad}"
        )));
    }
    let mut order: Vec<usize> = (0..f.len()).collect();
    order.sort_by(|&a, &b| f[b].total_cmp(&f[a]));
    let mut total = 0.0;
    for i in 0..order.len() {
        let next = order.get(i + 1).map_or(0.0, |&k| f[k]);
        let step = f[order[i]] - next;
        if step > 0.0 {
            total += step * g(&order[..=i]);
        }
    }
    Ok(total)
}
