//! Inference over incomplete probabilistic information.
//!
//! Prior ("a priori") knowledge is a credal set: a convex set of probability
//! distributions over a finite frame. Evidence from an observation is a convex
//! set of likelihood functions, whose coordinatewise maximum is a possibility
//! distribution. Fusing the two yields a set of combination functions
//! `h = p × l`; normalizing each extreme gives a conditional distribution
//! together with a possibility (its total mass), and Choquet integration of
//! the conditionals against that possibility produces conditional intervals.
//!
//! Module map:
//!
//! - [`geometry`]: convex hulls, membership, and intersection of polytopes.
//! - [`credal`]: frames, events, credal sets, envelopes, maximal families.
//! - [`evidential`]: likelihood sets, possibility and consistency measures.
//! - [`fusion`]: combination, conditional ensembles, Choquet conditioning.
//! - [`oracle`]: Monte Carlo and brute-force checks.
//! - [`model`]: JSON model files and the batch runner behind the CLI.

pub mod credal;
pub mod error;
pub mod event;
pub mod evidential;
pub mod fusion;
pub mod geometry;
pub mod model;
pub mod oracle;

pub use credal::{CredalSet, Envelope, Frame, ProbVector};
pub use error::{Error, Result};
pub use event::{Event, Interval, IntervalTable};
pub use evidential::{ConsistencyTable, EvidenceSet, LikelihoodVector, PossibilityDist};
pub use fusion::{CombinedSet, ConditionalEnsemble, EnsembleMeasures};
pub use geometry::{Polytope, EPS_GEOM, MAX_DIM};
