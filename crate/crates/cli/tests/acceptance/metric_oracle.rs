//! Criterion 3: curve construction equals brute-force recomputation
//! exactly, over an exhaustive enumeration of small bundles on a score grid
//! plus seeded random bundles filling the 5-approaches x 5-frames x
//! 5-alarms envelope.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use railgauge_core::metric::build_curve;

use crate::bundle_from_parts;
use crate::oracle::{self, OracleBundle};

const GRID: [f64; 3] = [0.2, 0.5, 0.8];
const DISTANCES: [f64; 5] = [500.0, 400.0, 300.0, 200.0, 100.0];
const ALARM_TIMES: [f64; 5] = [10.0, 20.0, 30.0, 40.0, 50.0];
const HOURS: f64 = 2.0;
// (x_percent, persistence, merge_window_s)
const PARAM_COMBOS: [(f64, u32, f64); 3] = [(50.0, 1, 0.0), (100.0, 2, 15.0), (30.0, 1, 15.0)];

fn check_equivalence(approaches: &[Vec<(f64, f64)>], alarms: &[(f64, f64)]) -> usize {
    let bundle = bundle_from_parts(approaches, alarms, HOURS);
    let oracle_bundle = OracleBundle {
        approaches: approaches.to_vec(),
        alarms: alarms.to_vec(),
        hours: HOURS,
    };
    let mut checked = 0;
    for (x, persistence, window) in PARAM_COMBOS {
        let curve = build_curve(&bundle, x, persistence, window).unwrap();
        let expected = oracle::curve(&oracle_bundle, x, persistence as usize, window);
        assert_eq!(curve.points.len(), expected.len(), "point count differs");
        for (point, (threshold, d_x, fp)) in curve.points.iter().zip(&expected) {
            assert!(
                point.threshold == *threshold && point.d_x_m == *d_x && point.fp_per_h == *fp,
                "mismatch at x={x} p={persistence} w={window}: \
                 got ({}, {}, {}), oracle ({threshold}, {d_x}, {fp})",
                point.threshold,
                point.d_x_m,
                point.fp_per_h
            );
        }
        checked += 1;
    }
    checked
}

// All score tuples of the given length over GRID, as frames on the fixed
// distance template.
fn score_tuples(len: usize) -> Vec<Vec<(f64, f64)>> {
    let mut tuples = vec![Vec::new()];
    for _ in 0..len {
        tuples = tuples
            .into_iter()
            .flat_map(|prefix| {
                GRID.iter().map(move |s| {
                    let mut next = prefix.clone();
                    next.push(*s);
                    next
                })
            })
            .collect();
    }
    tuples
        .into_iter()
        .map(|scores| {
            scores
                .into_iter()
                .enumerate()
                .map(|(i, s)| (DISTANCES[i], s))
                .collect()
        })
        .collect()
}

fn alarm_tuples(len: usize) -> Vec<Vec<(f64, f64)>> {
    let mut tuples = vec![Vec::new()];
    for _ in 0..len {
        tuples = tuples
            .into_iter()
            .flat_map(|prefix: Vec<f64>| {
                GRID.iter().map(move |s| {
                    let mut next = prefix.clone();
                    next.push(*s);
                    next
                })
            })
            .collect();
    }
    tuples
        .into_iter()
        .map(|scores| {
            scores
                .into_iter()
                .enumerate()
                .map(|(i, s)| (ALARM_TIMES[i], s))
                .collect()
        })
        .collect()
}

#[test]
fn criterion_3_exhaustive_small_bundles() {
    let mut cases = 0usize;

    // one approach, 1..=5 frames, 0..=2 alarms
    for frames in 1..=5usize {
        for approach in score_tuples(frames) {
            for n_alarms in 0..=2usize {
                for alarms in alarm_tuples(n_alarms) {
                    cases += check_equivalence(std::slice::from_ref(&approach), &alarms);
                }
            }
        }
    }

    // two approaches, 1..=3 frames each, 0..=2 alarms
    for f1 in 1..=3usize {
        for a1 in score_tuples(f1) {
            for f2 in 1..=3usize {
                for a2 in score_tuples(f2) {
                    for n_alarms in 0..=2usize {
                        for alarms in alarm_tuples(n_alarms) {
                            cases +=
                                check_equivalence(&[a1.clone(), a2.clone()], &alarms);
                        }
                    }
                }
            }
        }
    }

    // alarm-heavy: one single-frame approach, 3..=5 alarms
    for approach in score_tuples(1) {
        for n_alarms in 3..=5usize {
            for alarms in alarm_tuples(n_alarms) {
                cases += check_equivalence(std::slice::from_ref(&approach), &alarms);
            }
        }
    }

    assert_eq!(cases, 76_635, "enumeration shrank unexpectedly");
    println!(
        "ACCEPTANCE criterion 3 (exhaustive metric-oracle equivalence, {cases} sweeps): PASS"
    );
}

#[test]
fn criterion_3_seeded_random_envelope() {
    let mut rng = ChaCha12Rng::seed_from_u64(0xACCE97);
    let mut cases = 0usize;
    for _ in 0..1000 {
        let n_approaches = rng.gen_range(1..=5);
        let approaches: Vec<Vec<(f64, f64)>> = (0..n_approaches)
            .map(|_| {
                let n_frames = rng.gen_range(1..=5);
                (0..n_frames)
                    .map(|i| (DISTANCES[i], rng.gen::<f64>()))
                    .collect()
            })
            .collect();
        let n_alarms = rng.gen_range(0..=5);
        let mut times: Vec<f64> = (0..n_alarms).map(|_| rng.gen::<f64>() * 3600.0).collect();
        times.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let alarms: Vec<(f64, f64)> = times.into_iter().map(|t| (t, rng.gen::<f64>())).collect();
        cases += check_equivalence(&approaches, &alarms);
    }
    assert_eq!(cases, 3000);
    println!("ACCEPTANCE criterion 3 (seeded random envelope, {cases} sweeps): PASS");
}
