//! Query execution and table rendering.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use super::{resolve_events, FuseMode, FuseOutput, Method, ModelError, ModelFile, Query};
use crate::credal::{CredalSet, Frame};
use crate::error::Error;
use crate::event::{Event, IntervalTable};
use crate::evidential::EvidenceSet;
use crate::fusion::combine;
use crate::oracle::check_possibility_bound;

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunOptions {
    /// Seed for verify queries that do not name their own.
    pub seed: u64,
    pub decimals: usize,
    pub pretty: bool,
}

impl RunOptions {
    pub fn new() -> Self {
        RunOptions {
            seed: 0,
            decimals: 4,
            pretty: false,
        }
    }
}

/// A failure while executing query `query` (1-based).
#[derive(Debug, Clone, PartialEq, Error)]
#[error("query {query} ({op}): {source}")]
pub struct RunError {
    pub query: usize,
    pub op: &'static str,
    #[source]
    pub source: Error,
}

impl RunError {
    pub fn code(&self) -> &'static str {
        match self.source {
            Error::EmptySet => "E201",
            Error::ContextMismatch { .. } => "E202",
            Error::TotalConflict => "E203",
            Error::DimensionMismatch { .. } => "E204",
            Error::FrameTooLarge(_) => "E205",
            Error::InvalidBounds { .. } => "E206",
            Error::InvalidInput(_) => "E207",
            Error::EmptyInput => "E208",
        }
    }

    pub fn exit_status(&self) -> i32 {
        match self.source {
            Error::EmptySet => 20,
            Error::ContextMismatch { .. } => 21,
            Error::TotalConflict => 22,
            Error::DimensionMismatch { .. } => 23,
            Error::FrameTooLarge(_) => 24,
            Error::InvalidBounds { .. } => 25,
            Error::InvalidInput(_) => 26,
            Error::EmptyInput => 27,
        }
    }
}

/// One rendered table: an id shared by its rows, column headers after the
/// id column, and preformatted cells.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub id: String,
    pub title: String,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Report {
    pub tables: Vec<Table>,
}

impl Report {
    /// Tab-separated rows, `id` first, no header.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for t in &self.tables {
            for row in &t.rows {
                out.push_str(&t.id);
                for cell in row {
                    out.push('\t');
                    out.push_str(cell);
                }
                out.push('\n');
            }
        }
        out
    }

    /// Aligned columns with a title and header per table.
    pub fn to_pretty(&self) -> String {
        let mut out = String::new();
        for (n, t) in self.tables.iter().enumerate() {
            if n > 0 {
                out.push('\n');
            }
            let _ = writeln!(out, "[{}] {}", t.id, t.title);
            let mut widths: Vec<usize> = t.header.iter().map(|h| h.chars().count()).collect();
            for row in &t.rows {
                for (w, cell) in widths.iter_mut().zip(row) {
                    *w = (*w).max(cell.chars().count());
                }
            }
            let line = |cells: Vec<&str>| {
                cells
                    .iter()
                    .zip(&widths)
                    .map(|(c, w)| format!("{c:<w$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
                    .trim_end()
                    .to_string()
            };
            let _ = writeln!(out, "  {}", line(t.header.clone()));
            for row in &t.rows {
                let _ = writeln!(out, "  {}", line(row.iter().map(String::as_str).collect()));
            }
        }
        out
    }

    pub fn render(&self, options: &RunOptions) -> String {
        if options.pretty {
            self.to_pretty()
        } else {
            self.to_tsv()
        }
    }
}

/// Fixed-decimal rendering that never prints a negative zero.
fn fmt_value(v: f64, decimals: usize) -> String {
    let half_ulp = 0.5 * 10f64.powi(-(decimals as i32));
    let v = if v.abs() < half_ulp { 0.0 } else { v };
    format!("{v:.decimals$}")
}

struct Env<'a> {
    model: &'a ModelFile,
    frame: Frame,
    priors: HashMap<String, CredalSet>,
    evidence: HashMap<String, EvidenceSet>,
    options: &'a RunOptions,
}

impl Env<'_> {
    fn prior(&self, name: &str) -> &CredalSet {
        &self.priors[name]
    }

    fn evidence(&self, name: &str) -> &EvidenceSet {
        &self.evidence[name]
    }

    fn fused(&self, names: &[String], mode: FuseMode) -> Result<EvidenceSet, Error> {
        let mut acc = self.evidence(&names[0]).clone();
        for n in &names[1..] {
            let next = self.evidence(n);
            acc = match mode {
                FuseMode::Frechet => acc.observe_and_frechet(next)?,
                FuseMode::Independent => acc.observe_and_independent(next)?,
            };
        }
        Ok(acc)
    }

    fn interval_table(&self, id: String, title: String, table: &IntervalTable) -> Table {
        let d = self.options.decimals;
        Table {
            id,
            title,
            header: vec!["event", "lower", "upper"],
            rows: table
                .iter()
                .map(|(e, iv)| {
                    vec![
                        self.frame.event_label(*e),
                        fmt_value(iv.lower, d),
                        fmt_value(iv.upper, d),
                    ]
                })
                .collect(),
        }
    }

    fn execute(&mut self, index: usize, query: &Query) -> Result<Vec<Table>, Error> {
        let id = format!("q{index}");
        let d = self.options.decimals;
        match query {
            Query::Envelope { prior, events } => {
                let events = resolve_events(events, &self.frame);
                let table = self.prior(prior).envelope()?.table(&events);
                Ok(vec![self.interval_table(
                    id,
                    format!("envelope of {prior}"),
                    &table,
                )])
            }
            Query::Conjunction {
                priors,
                evidence,
                assume_no_interaction,
                bind,
                events,
            } => {
                let events = resolve_events(events, &self.frame);
                if !priors.is_empty() {
                    let c = self
                        .prior(&priors[0])
                        .conjunction(self.prior(&priors[1]), *assume_no_interaction)?;
                    let title = format!("envelope of {} ∧ {}", priors[0], priors[1]);
                    self.bind_prior(bind, c.clone());
                    let table = c.envelope()?.table(&events);
                    Ok(vec![self.interval_table(id, title, &table)])
                } else {
                    let e = self
                        .evidence(&evidence[0])
                        .conjunction(self.evidence(&evidence[1]))?;
                    let title = format!("consistency of {} ∧ {}", evidence[0], evidence[1]);
                    self.bind_evidence(bind, e.clone());
                    let table = e.possibility().consistency_table()?.table(&events);
                    Ok(vec![self.interval_table(id, title, &table)])
                }
            }
            Query::Disjunction {
                priors,
                evidence,
                bind,
                events,
            } => {
                let events = resolve_events(events, &self.frame);
                if !priors.is_empty() {
                    let c = self.prior(&priors[0]).disjunction(self.prior(&priors[1]))?;
                    let title = format!("envelope of {} ∨ {}", priors[0], priors[1]);
                    self.bind_prior(bind, c.clone());
                    let table = c.envelope()?.table(&events);
                    Ok(vec![self.interval_table(id, title, &table)])
                } else {
                    let e = self
                        .evidence(&evidence[0])
                        .disjunction(self.evidence(&evidence[1]))?;
                    let title = format!("consistency of {} ∨ {}", evidence[0], evidence[1]);
                    self.bind_evidence(bind, e.clone());
                    let table = e.possibility().consistency_table()?.table(&events);
                    Ok(vec![self.interval_table(id, title, &table)])
                }
            }
            Query::FuseObs {
                evidence,
                mode,
                then,
                bind,
                events,
            } => {
                let fused = self.fused(evidence, *mode)?;
                let label = evidence.join(" ∧ ");
                self.bind_evidence(bind, fused.clone());
                let pi = fused.possibility();
                match then {
                    FuseOutput::Intervals => {
                        let events = resolve_events(events, &self.frame);
                        let table = pi.consistency_table()?.table(&events);
                        Ok(vec![self.interval_table(
                            id,
                            format!("consistency of {label}"),
                            &table,
                        )])
                    }
                    FuseOutput::Possibility => Ok(vec![Table {
                        id,
                        title: format!("possibility of {label}"),
                        header: vec!["outcome", "possibility"],
                        rows: (0..self.frame.size())
                            .map(|i| {
                                vec![
                                    self.frame.event_label(Event::singleton(i)),
                                    fmt_value(pi.values()[i], d),
                                ]
                            })
                            .collect(),
                    }]),
                }
            }
            Query::Combine {
                prior,
                evidence,
                mode,
            } => {
                let e = self.fused(evidence, *mode)?;
                let h = combine(self.prior(prior), &e)?;
                let rows = h
                    .extremes()
                    .iter()
                    .enumerate()
                    .map(|(k, v)| {
                        let weight: f64 = v.iter().sum();
                        let conditional = if weight > 0.0 {
                            v.iter()
                                .map(|x| fmt_value(x / weight, d))
                                .collect::<Vec<_>>()
                                .join(",")
                        } else {
                            "undefined".to_string()
                        };
                        vec![
                            format!("h{}", k + 1),
                            v.iter()
                                .map(|x| fmt_value(*x, d))
                                .collect::<Vec<_>>()
                                .join(","),
                            conditional,
                            fmt_value(weight, d),
                        ]
                    })
                    .collect();
                Ok(vec![Table {
                    id,
                    title: format!("{prior} ⊗ {}", evidence.join(" ∧ ")),
                    header: vec!["extreme", "h", "conditional", "possibility"],
                    rows,
                }])
            }
            Query::Condition {
                prior,
                evidence,
                mode,
                method,
                events,
            } => {
                let events = resolve_events(events, &self.frame);
                let e = self.fused(evidence, *mode)?;
                let ensemble = combine(self.prior(prior), &e)?.ensemble()?;
                let label = format!("{prior} ⊗ {}", evidence.join(" ∧ "));
                let mut tables = Vec::new();
                let tagged = |suffix: &str| {
                    if *method == Method::Both {
                        format!("{id}:{suffix}")
                    } else {
                        id.clone()
                    }
                };
                if matches!(method, Method::Choquet | Method::Both) {
                    let table = ensemble.conditional_intervals(&events)?;
                    tables.push(self.interval_table(
                        tagged("choquet"),
                        format!("Choquet conditioning of {label}"),
                        &table,
                    ));
                }
                if matches!(method, Method::Upperlower | Method::Both) {
                    let table = ensemble.upper_lower_conditioning(&events);
                    tables.push(self.interval_table(
                        tagged("upperlower"),
                        format!("upper-lower conditioning of {label}"),
                        &table,
                    ));
                }
                Ok(tables)
            }
            Query::Compare { priors, evidence } => {
                let (relation, value) = if !priors.is_empty() {
                    let same = self.prior(&priors[0]).same_set(self.prior(&priors[1]));
                    ("equal", same)
                } else {
                    let same = self
                        .evidence(&evidence[0])
                        .equivalent(self.evidence(&evidence[1]))?;
                    ("equivalent", same)
                };
                let names = if priors.is_empty() { evidence } else { priors };
                Ok(vec![Table {
                    id,
                    title: format!("compare {} and {}", names[0], names[1]),
                    header: vec!["relation", "holds"],
                    rows: vec![vec![relation.to_string(), value.to_string()]],
                }])
            }
            Query::Verify {
                prior,
                evidence,
                mode,
                events,
                trials,
                seed,
            } => {
                let events = resolve_events(events, &self.frame);
                let e = self.fused(evidence, *mode)?;
                let c = self.prior(prior);
                let seed = seed.unwrap_or(self.options.seed);
                let mut rows = Vec::with_capacity(events.len());
                for (k, &a) in events.iter().enumerate() {
                    let report =
                        check_possibility_bound(c, &e, a, *trials, seed.wrapping_add(k as u64))?;
                    rows.push(vec![
                        self.frame.event_label(a),
                        fmt_value(report.empirical_consistency, d),
                        fmt_value(report.bound, d),
                        if report.violated { "violated" } else { "ok" }.to_string(),
                    ]);
                }
                Ok(vec![Table {
                    id,
                    title: format!("possibility bound check for {prior}, {trials} trials"),
                    header: vec!["event", "empirical", "bound", "status"],
                    rows,
                }])
            }
        }
    }

    fn bind_prior(&mut self, bind: &Option<String>, c: CredalSet) {
        if let Some(name) = bind {
            self.priors.insert(name.clone(), c);
        }
    }

    fn bind_evidence(&mut self, bind: &Option<String>, e: EvidenceSet) {
        if let Some(name) = bind {
            self.evidence.insert(name.clone(), e);
        }
    }
}

/// Builds declared sets and executes queries in order. Stops at the first
/// failing query.
pub fn run(model: &ModelFile, options: &RunOptions) -> Result<Report, RunFailure> {
    model.validate().map_err(RunFailure::Model)?;
    let frame = model.frame().map_err(RunFailure::Model)?;
    let wrap = |source| {
        RunFailure::Query(RunError {
            query: 0,
            op: "declare",
            source,
        })
    };

    let mut env = Env {
        model,
        frame,
        priors: HashMap::new(),
        evidence: HashMap::new(),
        options,
    };
    for decl in &model.priors {
        let c = env.model.build_prior(decl).map_err(wrap)?;
        env.priors.insert(decl.name.clone(), c);
    }
    for decl in &model.evidence {
        let e = env.model.build_evidence(decl).map_err(wrap)?;
        env.evidence.insert(decl.name.clone(), e);
    }

    let mut report = Report::default();
    for (i, query) in model.queries.iter().enumerate() {
        let tables = env.execute(i + 1, query).map_err(|source| {
            RunFailure::Query(RunError {
                query: i + 1,
                op: query.op(),
                source,
            })
        })?;
        report.tables.extend(tables);
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RunFailure {
    #[error(transparent)]
    Model(ModelError),
    #[error(transparent)]
    Query(RunError),
}

impl RunFailure {
    pub fn code(&self) -> &'static str {
        match self {
            RunFailure::Model(e) => e.code(),
            RunFailure::Query(e) => e.code(),
        }
    }

    pub fn exit_status(&self) -> i32 {
        match self {
            RunFailure::Model(e) => e.exit_status(),
            RunFailure::Query(e) => e.exit_status(),
        }
    }
}
