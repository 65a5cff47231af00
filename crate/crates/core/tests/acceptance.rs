//! Acceptance criteria. Each test prints one `[PASS]`/`[FAIL]` line; run with
//! `cargo test -p credal-fusion --test acceptance -- --nocapture` to see them.

mod common;

use std::time::{Duration, Instant};

use common::*;
use credal_fusion::fusion::{choquet_integral, combine, EnsembleMeasures};
use credal_fusion::oracle::{check_possibility_bound, riemann_choquet};
use credal_fusion::{CredalSet, Event, EvidenceSet, Interval, PossibilityDist};
use proptest::prelude::*;

type Check = Result<(), String>;

fn report(id: &str, title: &str, outcome: Check) {
    match &outcome {
        Ok(()) => println!("[PASS] {id} {title}"),
        Err(why) => println!("[FAIL] {id} {title}: {why}"),
    }
    if let Err(why) = outcome {
        panic!("{id} failed: {why}");
    }
}

/// Median wall time of `runs` calls.
fn median_time<T>(runs: usize, mut f: impl FnMut() -> T) -> Duration {
    let mut times: Vec<Duration> = (0..runs)
        .map(|_| {
            let start = Instant::now();
            std::hint::black_box(f());
            start.elapsed()
        })
        .collect();
    times.sort();
    times[runs / 2]
}

/// Events of {1,2,3} with the intervals printed for the observation O1
/// (shared by the prior C).
const FIRST_TABLE: [(u32, f64, f64); 8] = [
    (0b000, 0.0, 0.0),
    (0b001, 0.5, 1.0),
    (0b010, 0.0, 0.5),
    (0b100, 0.0, 0.2),
    (0b011, 0.8, 1.0),
    (0b101, 0.5, 1.0),
    (0b110, 0.0, 0.5),
    (0b111, 1.0, 1.0),
];

fn compare_table(got: impl Fn(Event) -> Interval, expected: &[(u32, f64, f64)], tol: f64) -> Check {
    for &(mask, lo, hi) in expected {
        let iv = got(Event(mask));
        if !iv.approx_eq(&Interval::new(lo, hi), tol) {
            return Err(format!("event {mask:03b}: got {iv}, expected [{lo}, {hi}]"));
        }
    }
    Ok(())
}

#[test]
fn ac1_evidence_interval_table() {
    let outcome = (|| {
        let pi = PossibilityDist::new(frame3(), O1.to_vec()).unwrap();
        let table = pi.consistency_table().map_err(|e| e.to_string())?;
        compare_table(|e| table.get(e), &FIRST_TABLE, 0.005)?;
        let t = median_time(11, || pi.consistency_table());
        if t >= Duration::from_millis(1) {
            return Err(format!("runtime {t:?} ≥ 1 ms"));
        }
        Ok(())
    })();
    report("AC1", "consistency table of π=(1,0.5,0.2)", outcome);
}

#[test]
fn ac2_credal_envelope() {
    let outcome = (|| {
        let c = example_prior();
        let env = c.envelope().map_err(|e| e.to_string())?;
        compare_table(|e| env.get(e), &FIRST_TABLE, 0.005)?;
        let t = median_time(11, || c.envelope());
        if t >= Duration::from_millis(1) {
            return Err(format!("runtime {t:?} ≥ 1 ms"));
        }
        Ok(())
    })();
    report(
        "AC2",
        "envelope of hull{p1..p4} equals the O1 table",
        outcome,
    );
}

#[test]
fn ac3_observation_conjunction() {
    let outcome = (|| {
        let e1 = EvidenceSet::precise(frame3(), O1.to_vec()).unwrap();
        let e2 = EvidenceSet::precise(frame3(), O2.to_vec()).unwrap();
        let fused = e1.observe_and_independent(&e2).map_err(|e| e.to_string())?;
        let pi = fused.possibility();
        if pi.values() != [0.1, 0.3, 0.2] {
            return Err(format!("π = {:?}", pi.values()));
        }
        let table = pi.consistency_table().map_err(|e| e.to_string())?;
        let expected = [
            (0b000, 0.0, 0.0),
            (0b001, 0.0, 0.33),
            (0b010, 0.33, 1.0),
            (0b100, 0.0, 0.67),
            (0b011, 0.33, 1.0),
            (0b101, 0.0, 0.67),
            (0b110, 0.67, 1.0),
            (0b111, 1.0, 1.0),
        ];
        compare_table(|e| table.get(e), &expected, 0.005)
    })();
    report("AC3", "independent fusion of O1, O2", outcome);
}

#[test]
fn ac4_fusion_extremes_and_ensemble() {
    let outcome = (|| {
        let e2 = EvidenceSet::precise(frame3(), O2.to_vec()).unwrap();
        let h = combine(&example_prior(), &e2).map_err(|e| e.to_string())?;
        let extremes = [
            [0.0, 0.0, 0.0],
            [0.1, 0.0, 0.0],
            [0.05, 0.3, 0.0],
            [0.05, 0.18, 0.2],
            [0.08, 0.0, 0.2],
        ];
        if h.extremes().len() != extremes.len() {
            return Err(format!("{} extremes, expected 5", h.extremes().len()));
        }
        for x in &extremes {
            if !h.extremes().iter().any(|v| close(v, x, 1e-9)) {
                return Err(format!("missing extreme {x:?}"));
            }
        }

        // Printed rows: conditional (1, 2, 3) and possibility, for h2..h5.
        let printed = [
            (h_index(&extremes[1]), [1.0, 0.0, 0.0], 0.1),
            (h_index(&extremes[2]), [0.14, 0.86, 0.0], 0.35),
            (h_index(&extremes[3]), [0.12, 0.42, 0.46], 0.43),
            (h_index(&extremes[4]), [0.29, 0.0, 0.71], 0.28),
        ];
        let ensemble = h.ensemble().map_err(|e| e.to_string())?;
        if ensemble.members().len() != 4 {
            return Err("the null extreme must be the only one dropped".into());
        }
        let mut mismatches = Vec::new();
        for (source, conditional, weight) in printed {
            let member = ensemble
                .members()
                .iter()
                .find(|m| (m.weight - source).abs() < 1e-12)
                .ok_or_else(|| format!("no member with weight {source}"))?;
            if (member.weight - weight).abs() > 0.005 {
                mismatches.push(format!("weight {} vs {weight}", member.weight));
            }
            for (i, (&got, &want)) in member
                .conditional
                .values()
                .iter()
                .zip(&conditional)
                .enumerate()
            {
                if (got - want).abs() > 0.005 {
                    mismatches.push(format!(
                        "member with π={weight}, outcome {}: {got:.5} vs printed {want} (off by {:.5})",
                        i + 1,
                        (got - want).abs()
                    ));
                }
            }
        }
        if mismatches.is_empty() {
            Ok(())
        } else {
            Err(mismatches.join("; "))
        }
    })();
    report(
        "AC4",
        "combine(C, O2) extremes and normalized table",
        outcome,
    );
}

fn h_index(h: &[f64; 3]) -> f64 {
    h.iter().sum()
}

#[test]
fn ac5_choquet_conditioning() {
    let outcome = (|| {
        let e2 = EvidenceSet::precise(frame3(), O2.to_vec()).unwrap();
        let ens = combine(&example_prior(), &e2)
            .and_then(|h| h.ensemble())
            .map_err(|e| e.to_string())?;
        let table = ens
            .conditional_intervals(&Event::all_by_size(3))
            .map_err(|e| e.to_string())?;
        let expected = [
            (0b000, 0.0, 0.0),
            (0b001, 0.12, 0.40),
            (0b010, 0.15, 0.78),
            (0b100, 0.09, 0.63),
            (0b011, 0.37, 0.91),
            (0b101, 0.22, 0.85),
            (0b110, 0.60, 0.88),
            (0b111, 1.0, 1.0),
        ];
        compare_table(|e| table.get(e).unwrap(), &expected, 0.005)
    })();
    report("AC5", "Choquet conditional intervals of C ⊗ O2", outcome);
}

#[test]
fn ac6_urn_example() {
    let outcome = (|| {
        let prior = urn_prior();
        if prior.extremes().len() != 2 {
            return Err("urn prior must have two extremes".into());
        }
        let p1 = [0.9801, 0.0099, 0.0099, 0.0001];
        if !prior.extremes().iter().any(|p| close(p, &p1, 1e-12)) {
            return Err("product prior does not contain p1".into());
        }
        let h = combine(&prior, &urn_first_red()).map_err(|e| e.to_string())?;
        for x in [[0.9801, 0.0099, 0.0, 0.0], [0.0001, 0.0099, 0.0, 0.0]] {
            if !h.extremes().iter().any(|v| close(v, &x, 1e-12)) {
                return Err(format!("missing combination {x:?}"));
            }
        }
        let frame = prior.frame().clone();
        let r2 = frame.event(&["R,R", "B,R"]).unwrap();
        let b2 = frame.event(&["R,B", "B,B"]).unwrap();
        let table = h
            .ensemble()
            .and_then(|ens| ens.conditional_intervals(&[r2, b2]))
            .map_err(|e| e.to_string())?;
        for (event, lo, hi) in [(r2, 0.9801, 0.9900), (b2, 0.0100, 0.0199)] {
            let iv = table.get(event).unwrap();
            if !iv.approx_eq(&Interval::new(lo, hi), 5e-5) {
                return Err(format!("{}: got {iv}", frame.event_label(event)));
            }
        }
        Ok(())
    })();
    report("AC6", "two-urn example end to end", outcome);
}

fn property_suite() -> Check {
    let run = |name: &str, result: Result<(), String>| result.map_err(|e| format!("{name}: {e}"));

    let sizes = 2usize..=5;

    run(
        "null-likelihood invariance",
        runner(500)
            .run(
                &sizes
                    .clone()
                    .prop_flat_map(|m| (credal(m, 4), evidence(m, 3))),
                |(c, e)| {
                    let events = Event::all_by_size(c.frame().size());
                    let plain = combine(&c, &e).and_then(|h| h.ensemble());
                    let with_null = combine(&c, &e.with_null()).and_then(|h| h.ensemble());
                    match (plain, with_null) {
                        (Ok(a), Ok(b)) => {
                            let ta = a.conditional_intervals(&events).unwrap();
                            let tb = b.conditional_intervals(&events).unwrap();
                            for ((_, x), (_, y)) in ta.iter().zip(tb.iter()) {
                                check(x.approx_eq(y, 1e-12), format!("{x} vs {y}"))?;
                            }
                            Ok(())
                        }
                        (Err(a), Err(b)) => check(a == b, "different errors"),
                        _ => check(false, "only one side failed"),
                    }
                },
            )
            .map_err(|e| e.to_string()),
    )?;

    run(
        "envelope duality",
        runner(500)
            .run(&sizes.clone().prop_flat_map(|m| credal(m, 4)), |c| {
                let m = c.frame().size();
                let env = c.envelope().unwrap();
                for a in Event::all(m) {
                    let dual = 1.0 - env.upper(a.complement(m));
                    check((env.lower(a) - dual).abs() <= 1e-12, format!("{a:?}"))?;
                }
                Ok(())
            })
            .map_err(|e| e.to_string()),
    )?;

    run(
        "consistency duality",
        runner(500)
            .run(
                &sizes
                    .clone()
                    .prop_flat_map(|m| likelihood(m).prop_map(move |l| (m, l))),
                |(m, l)| {
                    prop_assume!(l.iter().any(|&x| x > 0.0));
                    let table = PossibilityDist::new(frame_of(m), l)
                        .unwrap()
                        .consistency_table()
                        .unwrap();
                    for a in Event::all(m) {
                        let sum = table.lower(a) + table.upper(a.complement(m));
                        check((sum - 1.0).abs() <= 1e-12, format!("{a:?}: {sum}"))?;
                    }
                    Ok(())
                },
            )
            .map_err(|e| e.to_string()),
    )?;

    run(
        "interval nesting",
        runner(500)
            .run(
                &sizes
                    .clone()
                    .prop_flat_map(|m| (credal(m, 4), evidence(m, 3))),
                |(c, e)| {
                    let ens = combine(&c, &e).and_then(|h| h.ensemble());
                    prop_assume!(ens.is_ok());
                    let ens = ens.unwrap();
                    let events = Event::all_by_size(c.frame().size());
                    let choquet = ens.conditional_intervals(&events).unwrap();
                    let minmax = ens.upper_lower_conditioning(&events);
                    for ((a, p), (_, t)) in choquet.iter().zip(minmax.iter()) {
                        let ok = t.lower <= p.lower + 1e-12
                            && p.lower <= p.upper + 1e-12
                            && p.upper <= t.upper + 1e-12;
                        check(ok, format!("{a:?}: choquet {p}, min/max {t}"))?;
                    }
                    Ok(())
                },
            )
            .map_err(|e| e.to_string()),
    )?;

    run(
        "Bayes degeneration",
        runner(500)
            .run(
                &sizes
                    .clone()
                    .prop_flat_map(|m| (prob_vec(m), likelihood(m))),
                |(p, l)| {
                    let z: f64 = p.iter().zip(&l).map(|(a, b)| a * b).sum();
                    prop_assume!(z > 0.0);
                    let m = p.len();
                    let c = CredalSet::new(frame_of(m), vec![p.clone()]).unwrap();
                    let e = EvidenceSet::new(frame_of(m), vec![l.clone()]).unwrap();
                    let ens = combine(&c, &e).unwrap().ensemble().unwrap();
                    let events = Event::all_by_size(m);
                    let table = ens.conditional_intervals(&events).unwrap();
                    for (a, iv) in table.iter() {
                        let bayes: f64 = a.indices().map(|i| p[i] * l[i]).sum::<f64>() / z;
                        check(
                            iv.approx_eq(&Interval::point(bayes), 1e-9),
                            format!("{a:?}: {iv} vs {bayes}"),
                        )?;
                    }
                    Ok(())
                },
            )
            .map_err(|e| e.to_string()),
    )?;

    run(
        "possibility maxitivity",
        runner(500)
            .run(
                &sizes.clone().prop_flat_map(|m| {
                    let full = (1u32 << m) - 1;
                    (evidence(m, 3), 0..=full, 0..=full)
                }),
                |(e, a, b)| {
                    let pi = e.possibility();
                    let (a, b) = (Event(a), Event(b));
                    let joined = pi.measure(a.union(b));
                    check(joined == pi.measure(a).max(pi.measure(b)), "Π(A∪B) ≠ max")
                },
            )
            .map_err(|e| e.to_string()),
    )?;

    run(
        "Fréchet dominates independence",
        runner(500)
            .run(
                &sizes.prop_flat_map(|m| (evidence(m, 2), evidence(m, 2))),
                |(e1, e2)| {
                    let frechet = e1.observe_and_frechet(&e2).unwrap().possibility();
                    let indep = e1.observe_and_independent(&e2).unwrap().possibility();
                    for (i, (x, y)) in indep.values().iter().zip(frechet.values()).enumerate() {
                        check(x <= &(y + 1e-12), format!("coordinate {i}: {x} > {y}"))?;
                    }
                    Ok(())
                },
            )
            .map_err(|e| e.to_string()),
    )?;

    Ok(())
}

#[test]
fn ac7_property_suite() {
    report(
        "AC7",
        "randomized property suite (500 cases each)",
        property_suite(),
    );
}

fn oracle_agreement() -> Check {
    use rand::{Rng, SeedableRng};
    let start = Instant::now();

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
    for instance in 0..1000 {
        let n = rng.random_range(1..=8);
        let f: Vec<f64> = (0..n)
            .map(|_| {
                // Some ties on purpose.
                if rng.random_bool(0.2) {
                    0.5
                } else {
                    rng.random::<f64>()
                }
            })
            .collect();
        let weights: Vec<f64> = (0..n).map(|_| rng.random_range(0.01..=1.0)).collect();
        let g = EnsembleMeasures::new(weights);
        let lower = rng.random_bool(0.5);
        let measure = |d: &[usize]| if lower { g.lower(d) } else { g.upper(d) };
        let layered = choquet_integral(&f, measure).map_err(|e| e.to_string())?;
        let direct = riemann_choquet(&f, measure, 1e-4);
        if (layered - direct).abs() > 1e-3 {
            return Err(format!(
                "instance {instance}: layer {layered} vs Riemann {direct}"
            ));
        }
    }

    let e1 = EvidenceSet::new(frame3(), vec![O1.to_vec()]).unwrap();
    let e2 = EvidenceSet::new(frame3(), vec![O2.to_vec()]).unwrap();
    let cases = [
        ("C/O1", example_prior(), e1),
        ("C/O2", example_prior(), e2),
        ("urns", urn_prior(), urn_first_red()),
    ];
    for (name, prior, evidence) in &cases {
        let m = prior.frame().size();
        for (k, a) in Event::all(m).enumerate() {
            let r = check_possibility_bound(prior, evidence, a, 100_000, 1000 + k as u64)
                .map_err(|e| e.to_string())?;
            if r.violated {
                return Err(format!(
                    "{name} {a:?}: empirical {} > bound {} + 3σ",
                    r.empirical_consistency, r.bound
                ));
            }
        }
    }

    let elapsed = start.elapsed();
    if elapsed >= Duration::from_secs(30) {
        return Err(format!("runtime {elapsed:?} ≥ 30 s"));
    }
    Ok(())
}

#[test]
fn ac8_oracle_agreement() {
    report(
        "AC8",
        "Choquet/Riemann agreement and Monte Carlo possibility bound",
        oracle_agreement(),
    );
}
