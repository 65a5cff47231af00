//! Declarative model files: a JSON document naming a frame, prior credal
//! sets, evidence sets, and an ordered list of queries.
//!
//! ```json
//! { "frame": ["1", "2", "3"],
//!   "priors": [{"name": "C", "extremes": [[1, 0, 0], [0.5, 0.5, 0]]}],
//!   "evidence": [{"name": "O2", "likelihood": [0.1, 0.6, 1]}],
//!   "queries": [{"op": "condition", "prior": "C", "evidence": ["O2"],
//!                "method": "both", "events": "all"}] }
//! ```

mod run;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::credal::{CredalSet, Frame, EPS_SUM};
use crate::error::Error;
use crate::event::Event;
use crate::evidential::EvidenceSet;
use crate::geometry::MAX_DIM;

pub use run::{run, Report, RunError, RunFailure, RunOptions, Table};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub frame: Vec<String>,
    #[serde(default)]
    pub priors: Vec<PriorDecl>,
    #[serde(default)]
    pub evidence: Vec<EvidenceDecl>,
    #[serde(default)]
    pub queries: Vec<Query>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PriorDecl {
    pub name: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub contexts: Vec<String>,
    pub extremes: Vec<Vec<f64>>,
}

/// Exactly one of: `likelihood`, `lower` + `upper`, or `extremes`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvidenceDecl {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub likelihood: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lower: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub upper: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extremes: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FuseMode {
    Frechet,
    #[default]
    Independent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FuseOutput {
    #[default]
    Intervals,
    Possibility,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Choquet,
    Upperlower,
    #[default]
    Both,
}

/// `"all"` or a list of events, each a list of outcome labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EventsSpec {
    Keyword(String),
    List(Vec<Vec<String>>),
}

impl Default for EventsSpec {
    fn default() -> Self {
        EventsSpec::Keyword("all".to_string())
    }
}

fn default_trials() -> u64 {
    100_000
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "kebab-case")]
pub enum Query {
    /// Lower/upper probabilities of a prior.
    Envelope {
        prior: String,
        #[serde(default)]
        events: EventsSpec,
    },
    /// Conjunction of two priors or of two evidence sets.
    Conjunction {
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        priors: Vec<String>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        evidence: Vec<String>,
        #[serde(default)]
        assume_no_interaction: bool,
        #[serde(default, rename = "as", skip_serializing_if = "Option::is_none")]
        bind: Option<String>,
        #[serde(default)]
        events: EventsSpec,
    },
    /// Disjunction of two priors or of two evidence sets.
    Disjunction {
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        priors: Vec<String>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        evidence: Vec<String>,
        #[serde(default, rename = "as", skip_serializing_if = "Option::is_none")]
        bind: Option<String>,
        #[serde(default)]
        events: EventsSpec,
    },
    /// Conjunction of observations (left fold over the list).
    FuseObs {
        evidence: Vec<String>,
        #[serde(default)]
        mode: FuseMode,
        #[serde(default)]
        then: FuseOutput,
        #[serde(default, rename = "as", skip_serializing_if = "Option::is_none")]
        bind: Option<String>,
        #[serde(default)]
        events: EventsSpec,
    },
    /// Extremes of the combined set with their normalized weights.
    Combine {
        prior: String,
        evidence: Vec<String>,
        #[serde(default)]
        mode: FuseMode,
    },
    /// Conditional intervals of a prior given evidence.
    Condition {
        prior: String,
        evidence: Vec<String>,
        #[serde(default)]
        mode: FuseMode,
        #[serde(default)]
        method: Method,
        #[serde(default)]
        events: EventsSpec,
    },
    /// Equality of two priors, or equivalence of two evidence sets.
    Compare {
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        priors: Vec<String>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        evidence: Vec<String>,
    },
    /// Monte Carlo check of the possibility bound for each event.
    Verify {
        prior: String,
        evidence: Vec<String>,
        #[serde(default)]
        mode: FuseMode,
        #[serde(default)]
        events: EventsSpec,
        #[serde(default = "default_trials")]
        trials: u64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
    },
}

impl Query {
    pub fn op(&self) -> &'static str {
        match self {
            Query::Envelope { .. } => "envelope",
            Query::Conjunction { .. } => "conjunction",
            Query::Disjunction { .. } => "disjunction",
            Query::FuseObs { .. } => "fuse-obs",
            Query::Combine { .. } => "combine",
            Query::Condition { .. } => "condition",
            Query::Compare { .. } => "compare",
            Query::Verify { .. } => "verify",
        }
    }
}

/// Model diagnostics; each carries a stable code.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{context}: unknown reference '{name}'")]
    UnknownReference { context: String, name: String },
    #[error("{context}: vector of length {found} does not match frame size {expected}")]
    VectorLengthMismatch {
        context: String,
        expected: usize,
        found: usize,
    },
    #[error("{context}: lower bound {lower} exceeds upper bound {upper} at coordinate {index}")]
    InvalidBounds {
        context: String,
        index: usize,
        lower: f64,
        upper: f64,
    },
    #[error("{context}: {message}")]
    InvalidValue { context: String, message: String },
    #[error("duplicate name '{0}'")]
    DuplicateName(String),
    #[error("query {index}: {message}")]
    InvalidQuery { index: usize, message: String },
    #[error("invalid frame: {0}")]
    InvalidFrame(String),
}

impl ModelError {
    pub fn code(&self) -> &'static str {
        match self {
            ModelError::Syntax { .. } => "E101",
            ModelError::UnknownReference { .. } => "E102",
            ModelError::VectorLengthMismatch { .. } => "E103",
            ModelError::InvalidBounds { .. } => "E104",
            ModelError::InvalidValue { .. } => "E105",
            ModelError::DuplicateName(_) => "E106",
            ModelError::InvalidQuery { .. } => "E107",
            ModelError::InvalidFrame(_) => "E108",
        }
    }

    pub fn exit_status(&self) -> i32 {
        match self {
            ModelError::Syntax { .. } => 10,
            ModelError::UnknownReference { .. } => 11,
            ModelError::VectorLengthMismatch { .. } => 12,
            ModelError::InvalidBounds { .. } => 13,
            ModelError::InvalidValue { .. } => 14,
            ModelError::DuplicateName(_) => 15,
            ModelError::InvalidQuery { .. } => 16,
            ModelError::InvalidFrame(_) => 17,
        }
    }
}

/// Parses and validates a model document.
pub fn parse_model(text: &str) -> Result<ModelFile, ModelError> {
    let model: ModelFile = serde_json::from_str(text).map_err(|e| ModelError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    model.validate()?;
    Ok(model)
}

/// Names visible to queries, split by kind.
#[derive(Default)]
struct Scope {
    priors: BTreeSet<String>,
    evidence: BTreeSet<String>,
}

impl Scope {
    fn declare(set: &mut BTreeSet<String>, name: &str) -> Result<(), ModelError> {
        if !set.insert(name.to_string()) {
            return Err(ModelError::DuplicateName(name.to_string()));
        }
        Ok(())
    }

    fn require(set: &BTreeSet<String>, index: usize, name: &str) -> Result<(), ModelError> {
        if !set.contains(name) {
            return Err(ModelError::UnknownReference {
                context: format!("query {index}"),
                name: name.to_string(),
            });
        }
        Ok(())
    }
}

impl ModelFile {
    pub fn frame(&self) -> Result<Frame, ModelError> {
        Frame::new(self.frame.iter().cloned()).map_err(|e| ModelError::InvalidFrame(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serializes")
    }

    /// Checks every vector, bound and cross-reference.
    pub fn validate(&self) -> Result<(), ModelError> {
        let frame = self.frame()?;
        let m = frame.size();
        let mut scope = Scope::default();

        for prior in &self.priors {
            Scope::declare(&mut scope.priors, &prior.name)?;
            let context = format!("prior '{}'", prior.name);
            if prior.extremes.is_empty() {
                return Err(ModelError::InvalidValue {
                    context,
                    message: "at least one extreme distribution is required".into(),
                });
            }
            for p in &prior.extremes {
                check_len(&context, m, p.len())?;
                let total: f64 = p.iter().sum();
                if p.iter().any(|x| !(0.0..=1.0).contains(x)) || (total - 1.0).abs() > EPS_SUM {
                    return Err(ModelError::InvalidValue {
                        context,
                        message: format!("{p:?} is not a probability distribution"),
                    });
                }
            }
        }

        for ev in &self.evidence {
            Scope::declare(&mut scope.evidence, &ev.name)?;
            validate_evidence(ev, m)?;
        }

        for (i, query) in self.queries.iter().enumerate() {
            let index = i + 1;
            validate_query(query, index, &frame, &mut scope)?;
        }
        Ok(())
    }

    pub(crate) fn build_prior(&self, decl: &PriorDecl) -> Result<CredalSet, Error> {
        Ok(
            CredalSet::new(self.frame_unchecked(), decl.extremes.clone())?
                .with_contexts(decl.contexts.iter().cloned()),
        )
    }

    pub(crate) fn build_evidence(&self, decl: &EvidenceDecl) -> Result<EvidenceSet, Error> {
        let frame = self.frame_unchecked();
        match (&decl.likelihood, &decl.lower, &decl.upper, &decl.extremes) {
            (Some(l), None, None, None) => EvidenceSet::new(frame, vec![l.clone()]),
            (None, Some(lo), Some(hi), None) => {
                EvidenceSet::interval(frame, lo.clone(), hi.clone())
            }
            (None, None, None, Some(xs)) => EvidenceSet::new(frame, xs.clone()),
            _ => Err(Error::InvalidInput(format!(
                "evidence '{}' has no single form",
                decl.name
            ))),
        }
    }

    fn frame_unchecked(&self) -> Frame {
        self.frame().expect("validated model")
    }
}

fn check_len(context: &str, expected: usize, found: usize) -> Result<(), ModelError> {
    if expected != found {
        return Err(ModelError::VectorLengthMismatch {
            context: context.to_string(),
            expected,
            found,
        });
    }
    Ok(())
}

fn check_likelihood(context: &str, m: usize, values: &[f64]) -> Result<(), ModelError> {
    check_len(context, m, values.len())?;
    if let Some(bad) = values.iter().find(|x| !(0.0..=1.0).contains(*x)) {
        return Err(ModelError::InvalidValue {
            context: context.to_string(),
            message: format!("likelihood value {bad} outside [0, 1]"),
        });
    }
    Ok(())
}

fn validate_evidence(ev: &EvidenceDecl, m: usize) -> Result<(), ModelError> {
    let context = format!("evidence '{}'", ev.name);
    match (&ev.likelihood, &ev.lower, &ev.upper, &ev.extremes) {
        (Some(l), None, None, None) => check_likelihood(&context, m, l),
        (None, Some(lo), Some(hi), None) => {
            check_likelihood(&context, m, lo)?;
            check_likelihood(&context, m, hi)?;
            if let Some(index) = (0..m).find(|&i| lo[i] > hi[i]) {
                return Err(ModelError::InvalidBounds {
                    context,
                    index,
                    lower: lo[index],
                    upper: hi[index],
                });
            }
            Ok(())
        }
        (None, None, None, Some(xs)) if !xs.is_empty() => {
            xs.iter().try_for_each(|l| check_likelihood(&context, m, l))
        }
        _ => Err(ModelError::InvalidValue {
            context,
            message: "give exactly one of 'likelihood', 'lower'+'upper', or a nonempty 'extremes'"
                .into(),
        }),
    }
}

fn validate_events(spec: &EventsSpec, index: usize, frame: &Frame) -> Result<(), ModelError> {
    match spec {
        EventsSpec::Keyword(k) if k == "all" => {
            if frame.size() > MAX_DIM {
                return Err(ModelError::InvalidFrame(format!(
                    "\"all\" events need a frame of at most {MAX_DIM} outcomes"
                )));
            }
            Ok(())
        }
        EventsSpec::Keyword(k) => Err(ModelError::InvalidQuery {
            index,
            message: format!("unknown events keyword '{k}'"),
        }),
        EventsSpec::List(events) => {
            for labels in events {
                if let Some(bad) = labels.iter().find(|l| frame.index_of(l).is_none()) {
                    return Err(ModelError::UnknownReference {
                        context: format!("query {index} events"),
                        name: bad.clone(),
                    });
                }
            }
            Ok(())
        }
    }
}

/// Resolves an events spec against a frame; the spec must be valid.
pub(crate) fn resolve_events(spec: &EventsSpec, frame: &Frame) -> Vec<Event> {
    match spec {
        EventsSpec::Keyword(_) => Event::all_by_size(frame.size()),
        EventsSpec::List(events) => events
            .iter()
            .map(|labels| frame.event(labels).expect("validated labels"))
            .collect(),
    }
}

/// Which namespace a binary set operation works in.
fn pair_kind<'a>(
    priors: &'a [String],
    evidence: &'a [String],
    index: usize,
) -> Result<(bool, &'a [String]), ModelError> {
    match (priors.len(), evidence.len()) {
        (2, 0) => Ok((true, priors)),
        (0, 2) => Ok((false, evidence)),
        _ => Err(ModelError::InvalidQuery {
            index,
            message: "name exactly two 'priors' or exactly two 'evidence' sets".into(),
        }),
    }
}

fn require_evidence_list(scope: &Scope, index: usize, names: &[String]) -> Result<(), ModelError> {
    if names.is_empty() {
        return Err(ModelError::InvalidQuery {
            index,
            message: "at least one evidence set is required".into(),
        });
    }
    names
        .iter()
        .try_for_each(|n| Scope::require(&scope.evidence, index, n))
}

fn validate_query(
    query: &Query,
    index: usize,
    frame: &Frame,
    scope: &mut Scope,
) -> Result<(), ModelError> {
    match query {
        Query::Envelope { prior, events } => {
            Scope::require(&scope.priors, index, prior)?;
            validate_events(events, index, frame)
        }
        Query::Conjunction {
            priors,
            evidence,
            bind,
            events,
            ..
        }
        | Query::Disjunction {
            priors,
            evidence,
            bind,
            events,
        } => {
            let (is_prior, names) = pair_kind(priors, evidence, index)?;
            let set = if is_prior {
                &mut scope.priors
            } else {
                &mut scope.evidence
            };
            for n in names {
                Scope::require(set, index, n)?;
            }
            if let Some(b) = bind {
                Scope::declare(set, b)?;
            }
            validate_events(events, index, frame)
        }
        Query::FuseObs {
            evidence,
            bind,
            events,
            ..
        } => {
            require_evidence_list(scope, index, evidence)?;
            if let Some(b) = bind {
                Scope::declare(&mut scope.evidence, b)?;
            }
            validate_events(events, index, frame)
        }
        Query::Combine {
            prior, evidence, ..
        } => {
            Scope::require(&scope.priors, index, prior)?;
            require_evidence_list(scope, index, evidence)
        }
        Query::Condition {
            prior,
            evidence,
            events,
            ..
        } => {
            Scope::require(&scope.priors, index, prior)?;
            require_evidence_list(scope, index, evidence)?;
            validate_events(events, index, frame)
        }
        Query::Compare { priors, evidence } => {
            let (is_prior, names) = pair_kind(priors, evidence, index)?;
            let set = if is_prior {
                &scope.priors
            } else {
                &scope.evidence
            };
            names.iter().try_for_each(|n| Scope::require(set, index, n))
        }
        Query::Verify {
            prior,
            evidence,
            events,
            trials,
            ..
        } => {
            Scope::require(&scope.priors, index, prior)?;
            require_evidence_list(scope, index, evidence)?;
            if *trials == 0 {
                return Err(ModelError::InvalidQuery {
                    index,
                    message: "verify needs at least one trial".into(),
                });
            }
            validate_events(events, index, frame)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: &str = r#"{
        "frame": ["1", "2", "3"],
        "priors": [{"name": "C", "contexts": ["Co1"],
                    "extremes": [[1, 0, 0], [0.5, 0.5, 0], [0.5, 0.3, 0.2], [0.8, 0, 0.2]]}],
        "evidence": [{"name": "O1", "likelihood": [1, 0.5, 0.2]},
                     {"name": "O2", "likelihood": [0.1, 0.6, 1]},
                     {"name": "Ob", "lower": [0.1, 0, 0], "upper": [0.2, 0.5, 1]}],
        "queries": [{"op": "condition", "prior": "C", "evidence": ["O2"], "method": "both", "events": "all"},
                    {"op": "fuse-obs", "evidence": ["O1", "O2"], "mode": "independent", "then": "intervals"}]
    }"#;

    #[test]
    fn parses_the_example() {
        let model = parse_model(EXAMPLE).unwrap();
        assert_eq!(model.frame, ["1", "2", "3"]);
        assert_eq!(model.priors[0].contexts, ["Co1"]);
        assert_eq!(model.evidence.len(), 3);
        assert!(matches!(
            model.queries[0],
            Query::Condition {
                method: Method::Both,
                ..
            }
        ));
    }

    #[test]
    fn round_trips_through_text() {
        let model = parse_model(EXAMPLE).unwrap();
        assert_eq!(parse_model(&model.to_json()).unwrap(), model);
    }

    #[test]
    fn syntax_errors_carry_a_position() {
        let err = parse_model("{\n  \"frame\": [\"a\",\n}").unwrap_err();
        assert!(matches!(err, ModelError::Syntax { line: 3, .. }), "{err:?}");
        assert_eq!(err.code(), "E101");
    }

    #[test]
    fn diagnostics() {
        let short =
            r#"{"frame": ["1","2","3"], "priors": [{"name": "C", "extremes": [[0.5, 0.5]]}]}"#;
        assert!(matches!(
            parse_model(short),
            Err(ModelError::VectorLengthMismatch {
                expected: 3,
                found: 2,
                ..
            })
        ));

        let bounds =
            r#"{"frame": ["a"], "evidence": [{"name": "E", "lower": [0.5], "upper": [0.2]}]}"#;
        assert!(matches!(
            parse_model(bounds),
            Err(ModelError::InvalidBounds { .. })
        ));

        let unknown = r#"{"frame": ["a"], "queries": [{"op": "envelope", "prior": "nope"}]}"#;
        assert!(matches!(
            parse_model(unknown),
            Err(ModelError::UnknownReference { .. })
        ));

        let dup = r#"{"frame": ["a"], "priors": [{"name": "P", "extremes": [[1]]},
                                                 {"name": "P", "extremes": [[1]]}]}"#;
        assert!(matches!(
            parse_model(dup),
            Err(ModelError::DuplicateName(_))
        ));

        let not_prob =
            r#"{"frame": ["a","b"], "priors": [{"name": "P", "extremes": [[0.7, 0.7]]}]}"#;
        assert!(matches!(
            parse_model(not_prob),
            Err(ModelError::InvalidValue { .. })
        ));

        let bad_label = r#"{"frame": ["a","b"], "priors": [{"name": "P", "extremes": [[1, 0]]}],
                            "queries": [{"op": "envelope", "prior": "P", "events": [["c"]]}]}"#;
        assert!(matches!(
            parse_model(bad_label),
            Err(ModelError::UnknownReference { .. })
        ));

        let arity = r#"{"frame": ["a","b"], "priors": [{"name": "P", "extremes": [[1, 0]]}],
                        "queries": [{"op": "conjunction", "priors": ["P"]}]}"#;
        assert!(matches!(
            parse_model(arity),
            Err(ModelError::InvalidQuery { index: 1, .. })
        ));

        let frame = r#"{"frame": ["a","a"]}"#;
        assert!(matches!(
            parse_model(frame),
            Err(ModelError::InvalidFrame(_))
        ));
    }

    #[test]
    fn bindings_extend_the_scope() {
        let text = r#"{"frame": ["a","b"],
            "priors": [{"name": "P", "extremes": [[0.9, 0.1], [0.7, 0.3]]},
                       {"name": "Q", "extremes": [[0.8, 0.2], [0.6, 0.4]]}],
            "queries": [{"op": "conjunction", "priors": ["P", "Q"], "as": "PQ"},
                        {"op": "envelope", "prior": "PQ"}]}"#;
        assert!(parse_model(text).is_ok());
        let early = text.replace(r#""as": "PQ""#, r#""as": "P""#);
        assert!(matches!(
            parse_model(&early),
            Err(ModelError::DuplicateName(_))
        ));
    }
}
