//! Independent checks: Monte Carlo simulation of the generative story behind
//! prior and evidence, and a direct discretization of the Choquet integral.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;

use crate::credal::{CredalSet, ProbVector};
use crate::error::{Error, Result};
use crate::event::Event;
use crate::evidential::EvidenceSet;

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationReport {
    pub trials: u64,
    pub event: Event,
    /// Trials where the observation occurred and the outcome fell in `event`.
    pub hits: u64,
    pub empirical_consistency: f64,
    pub std_error: f64,
    /// `Π(event)` of the evidence.
    pub bound: f64,
    pub violated: bool,
}

/// Uniform weights on the simplex with `n` corners.
fn simplex_weights<R: Rng>(n: usize, rng: &mut R) -> Vec<f64> {
    let draws: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = draws.iter().sum();
    draws.into_iter().map(|d| d / total).collect()
}

fn mixture<R: Rng>(extremes: &[Vec<f64>], rng: &mut R) -> Vec<f64> {
    let weights = simplex_weights(extremes.len(), rng);
    let m = extremes[0].len();
    (0..m)
        .map(|i| extremes.iter().zip(&weights).map(|(v, w)| w * v[i]).sum())
        .collect()
}

/// A random member of the credal set: a mixture of its extremes with
/// uniformly distributed mixture weights.
pub fn sample_prior_with<R: Rng>(c: &CredalSet, rng: &mut R) -> Result<ProbVector> {
    if c.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut p = mixture(c.extremes(), rng);
    let total: f64 = p.iter().sum();
    p.iter_mut().for_each(|x| *x = (*x / total).clamp(0.0, 1.0));
    ProbVector::new(p)
}

pub fn sample_prior(c: &CredalSet, seed: u64) -> Result<ProbVector> {
    sample_prior_with(c, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// A random member of the evidence set as stored (canonical sets include
/// the null likelihood among their extremes).
pub fn sample_likelihood_with<R: Rng>(e: &EvidenceSet, rng: &mut R) -> Vec<f64> {
    mixture(e.extremes(), rng)
        .into_iter()
        .map(|x| x.clamp(0.0, 1.0))
        .collect()
}

fn draw_outcome<R: Rng>(p: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for (i, &w) in p.iter().enumerate() {
        acc += w;
        if u < acc {
            return i;
        }
    }
    p.iter().rposition(|&w| w > 0.0).unwrap_or(p.len() - 1)
}

/// Simulates: pick a prior from `c`, a likelihood from `e`, draw the outcome
/// from the prior, and let the observation occur with the likelihood of that
/// outcome. The frequency of "observation and outcome in `a`" must not exceed
/// `Π(a)`; a violation is flagged beyond three binomial standard errors.
pub fn check_possibility_bound(
    c: &CredalSet,
    e: &EvidenceSet,
    a: Event,
    trials: u64,
    seed: u64,
) -> Result<SimulationReport> {
    c.frame().check_same(e.frame())?;
    if trials == 0 {
        return Err(Error::InvalidInput("at least one trial is required".into()));
    }
    if c.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = 0u64;
    for _ in 0..trials {
        let p = sample_prior_with(c, &mut rng)?;
        let l = sample_likelihood_with(e, &mut rng);
        let x = draw_outcome(p.values(), &mut rng);
        let observed = rng.random::<f64>() < l[x];
        if observed && a.contains(x) {
            hits += 1;
        }
    }
    let empirical = hits as f64 / trials as f64;
    let std_error = (empirical * (1.0 - empirical) / trials as f64).sqrt();
    let bound = e.possibility().measure(a);
    Ok(SimulationReport {
        trials,
        event: a,
        hits,
        empirical_consistency: empirical,
        std_error,
        bound,
        violated: empirical > bound + 3.0 * std_error,
    })
}

/// `∫_0^max f g({k : f_k ≥ α}) dα` by the midpoint rule with the given step.
/// Error is at most `step · g(all)` per breakpoint of the integrand.
pub fn riemann_choquet<G>(f: &[f64], g: G, step: f64) -> f64
where
    G: Fn(&[usize]) -> f64,
{
    assert!(step > 0.0, "step must be positive");
    let top = f.iter().copied().fold(0.0, f64::max);
    let cells = (top / step).ceil() as usize;
    let mut level_set = Vec::with_capacity(f.len());
    let mut total = 0.0;
    for j in 0..cells {
        let start = j as f64 * step;
        let width = step.min(top - start);
        let alpha = start + width / 2.0;
        level_set.clear();
        level_set.extend((0..f.len()).filter(|&k| f[k] >= alpha));
        total += width * g(&level_set);
    }
    total
}
