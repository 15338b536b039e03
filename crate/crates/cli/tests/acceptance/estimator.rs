//! Criterion 4: estimator consistency for the reference detector model
//! (d50 = 300 m, slope 30 m, true rate 0.01/h) on a seed-fixed simulation
//! of 1000 approaches and 10 000 clear hours.

use railgauge_core::domain::ObstacleClass;
use railgauge_core::metric::{detection_distance, fp_rate, quantile_distance};
use railgauge_core::simgen::{simulate_log, DetectorModel, SimConfig};
use railgauge_core::stats::fp_rate_interval;
use railgauge_core::units::kmh_to_ms;

#[test]
fn criterion_4_estimator_consistency() {
    let model = DetectorModel::new(300.0, 30.0, 600.0, 0.01, 0.1).unwrap();
    let cfg = SimConfig {
        seed: 2024,
        n_approaches: 1000,
        clear_hours: 10_000.0,
        approach_speed_ms: kmh_to_ms(130.0),
        frame_interval_m: 10.0,
        scenario_mix: vec![
            (ObstacleClass::Person, 0.7),
            (ObstacleClass::PassengerCar, 0.3),
        ],
    };
    let bundle = simulate_log(&model, &cfg).unwrap();
    assert_eq!(bundle.approaches.len(), 1000);
    assert_eq!(bundle.total_clear_hours(), 10_000.0);

    let distances: Vec<f64> = bundle
        .approaches
        .iter()
        .map(|trace| detection_distance(trace, 0.5, 1))
        .collect();
    let empirical_d50 = quantile_distance(&distances, 50.0).unwrap();
    let relative_gap = (empirical_d50 - 300.0).abs() / 300.0;
    assert!(
        relative_gap < 0.05,
        "empirical d50 {empirical_d50} is {relative_gap:.3} away from 300 m (limit 5%)"
    );

    let rate = fp_rate(&bundle.segments, 0.5, 0.0).unwrap();
    let count = (rate * 10_000.0).round() as u64;
    let interval = fp_rate_interval(count, 10_000.0, 0.95);
    assert!(
        interval.contains(0.01),
        "95% interval [{}, {}] around the observed rate {rate} misses the true 0.01/h",
        interval.lower_per_h,
        interval.upper_per_h
    );

    println!(
        "ACCEPTANCE criterion 4 (estimator consistency: d50 {empirical_d50} m, rate {rate}/h): PASS"
    );
}
