#![allow(dead_code)]

use credal_fusion::{CredalSet, EvidenceSet, Frame};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRng, TestRunner};

pub const O1: [f64; 3] = [1.0, 0.5, 0.2];
pub const O2: [f64; 3] = [0.1, 0.6, 1.0];

pub fn frame3() -> Frame {
    Frame::new(["1", "2", "3"]).unwrap()
}

pub fn frame_of(m: usize) -> Frame {
    Frame::new((1..=m).map(|i| format!("u{i}"))).unwrap()
}

/// The four-extreme prior over {1, 2, 3}.
pub fn example_prior() -> CredalSet {
    CredalSet::new(
        frame3(),
        vec![
            vec![1.0, 0.0, 0.0],
            vec![0.5, 0.5, 0.0],
            vec![0.5, 0.3, 0.2],
            vec![0.8, 0.0, 0.2],
        ],
    )
    .unwrap()
}

/// Two urns (99 red / 1 black and the reverse), two draws with replacement
/// from the same unknown urn.
pub fn urn_prior() -> CredalSet {
    let draw = Frame::new(["R", "B"]).unwrap();
    let urn1 = CredalSet::new(draw.clone(), vec![vec![0.99, 0.01]]).unwrap();
    let urn2 = CredalSet::new(draw, vec![vec![0.01, 0.99]]).unwrap();
    let p1 = urn1.independent_product(&urn1).unwrap();
    let p2 = urn2.independent_product(&urn2).unwrap();
    p1.disjunction(&p2).unwrap()
}

pub fn urn_first_red() -> EvidenceSet {
    EvidenceSet::new(urn_prior().frame().clone(), vec![vec![1.0, 1.0, 0.0, 0.0]]).unwrap()
}

pub fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

pub fn prob_vec(m: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0u32..=20, m)
        .prop_filter("nonzero mass", |v| v.iter().any(|&x| x > 0))
        .prop_map(|v| {
            let total: u32 = v.iter().sum();
            v.into_iter().map(|x| x as f64 / total as f64).collect()
        })
}

pub fn likelihood(m: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0u32..=10, m)
        .prop_map(|v| v.into_iter().map(|x| x as f64 / 10.0).collect())
}

pub fn credal(m: usize, max_extremes: usize) -> impl Strategy<Value = CredalSet> {
    prop::collection::vec(prob_vec(m), 1..=max_extremes)
        .prop_map(move |ps| CredalSet::new(frame_of(m), ps).unwrap())
}

pub fn evidence(m: usize, max_extremes: usize) -> impl Strategy<Value = EvidenceSet> {
    prop::collection::vec(likelihood(m), 1..=max_extremes)
        .prop_map(move |ls| EvidenceSet::new(frame_of(m), ls).unwrap())
}

/// Deterministic runner with the given number of cases.
pub fn runner(cases: u32) -> TestRunner {
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    let rng = TestRng::deterministic_rng(config.rng_algorithm);
    TestRunner::new_with_rng(config, rng)
}

pub fn check(cond: bool, msg: impl Into<String>) -> Result<(), TestCaseError> {
    if cond {
        Ok(())
    } else {
        Err(TestCaseError::fail(msg.into()))
    }
}
