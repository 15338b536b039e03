//! Criteria 1 and 2: the braking/horn model reproduces the reference
//! numbers for a 130 km/h train braking at 1 m/s² with a 350 m horn range.

use railgauge_core::kinematics::KinematicParams;
use railgauge_core::units::kmh_to_ms;

fn reference() -> KinematicParams {
    KinematicParams::new(kmh_to_ms(130.0), 1.0, 350.0).unwrap()
}

#[test]
fn criterion_1_kinematics_reproduction() {
    let p = reference();

    let avoidance = p.braking_avoidance_distance_m();
    assert!(
        (avoidance - 652.0).abs() <= 0.5,
        "avoidance distance {avoidance} not within 652.0 +/- 0.5"
    );

    let t350 = p.horn_reaction_time_s(350.0).unwrap();
    assert!(
        (t350 - 11.53).abs() <= 0.02,
        "horn reaction time at 350 m was {t350}, expected 11.53 +/- 0.02"
    );

    let t500 = p.horn_reaction_time_s(500.0).unwrap();
    assert!(
        (t500 - 14.25).abs() <= 0.02,
        "horn reaction time at 500 m was {t500}, expected 14.25 +/- 0.02"
    );

    // continuity at the audibility seam: approach from below vs the exact
    // seam value, within 1e-9 s
    let seam = p.horn_audible_m;
    let below = p.horn_reaction_time_s(f64::from_bits(seam.to_bits() - 1)).unwrap();
    let at = p.horn_reaction_time_s(seam).unwrap();
    assert!(
        (below - at).abs() <= 1e-9,
        "horn reaction time jumps by {} at the seam",
        (below - at).abs()
    );

    println!("ACCEPTANCE criterion 1 (kinematics reproduction): PASS");
}

#[test]
fn criterion_2_car_fatality_threshold() {
    let p = reference();
    let threshold = p.car_fatal_detection_threshold_m();
    assert!(
        (threshold - 590.3).abs() <= 0.5,
        "car-fatality detection threshold {threshold} not within 590.3 +/- 0.5"
    );
    println!("ACCEPTANCE criterion 2 (car-fatality threshold): PASS");
}
