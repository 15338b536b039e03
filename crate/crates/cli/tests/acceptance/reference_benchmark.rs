//! Criterion 7: reference comparison against every embedded human
//! benchmark row matches hand-coded expectations. For each row a system
//! just above the requirement must pass, one just below must fail, and one
//! exactly at the requirement must pass (the comparison is inclusive).

use std::collections::BTreeMap;

use railgauge_core::benchmark::{Bound, Condition, HUMAN_BENCHMARK_ROWS};
use railgauge_core::risk::reference_compare;
use railgauge_core::HumanBenchmark;

#[test]
fn criterion_7_reference_benchmark_rows() {
    let benchmark = HumanBenchmark::default();
    assert_eq!(benchmark.rows().len(), 18);

    for row in HUMAN_BENCHMARK_ROWS {
        // `Any` rows are reachable through either filter
        let condition = match row.condition {
            Condition::Night => Condition::Night,
            _ => Condition::Day,
        };
        for (offset, expected_pass) in [(1.0, true), (0.0, true), (-1.0, false)] {
            let medians: BTreeMap<String, f64> =
                [(row.object.to_string(), row.median_m + offset)]
                    .into_iter()
                    .collect();
            let verdict = reference_compare(&medians, &benchmark, condition).unwrap();
            assert_eq!(verdict.classes.len(), 1);
            let class = &verdict.classes[0];
            assert_eq!(
                class.pass, expected_pass,
                "row {:?} ({:?}) at offset {offset}: expected pass={expected_pass}",
                row.object, row.condition
            );
            assert_eq!(class.human_median_m, row.median_m);
            // comparisons against lower-bound rows cannot prove
            // superiority and must say so
            assert_eq!(class.bound_limited, row.bound == Bound::AtLeast);
        }
    }

    // spot values straight from the table
    let spot = |object: &str, condition, median: f64, pass: bool| {
        let medians: BTreeMap<String, f64> =
            [(object.to_string(), median)].into_iter().collect();
        let verdict = reference_compare(&medians, &benchmark, condition).unwrap();
        assert_eq!(verdict.pass(), pass, "{object} at {median} m");
    };
    spot("person in safety jacket", Condition::Day, 450.0, true);
    spot("person", Condition::Day, 200.0, false);
    spot("person", Condition::Night, 60.0, true);
    spot("passenger car", Condition::Day, 300.0, true);
    spot("passenger car", Condition::Day, 299.0, false);
    spot("trees", Condition::Day, 60.0, true);
    spot("fallen rocks", Condition::Night, 29.0, false);

    // requesting a class outside the filter errors
    let medians: BTreeMap<String, f64> =
        [("fluorescent object 5x5x5 cm".to_string(), 100.0)]
            .into_iter()
            .collect();
    assert!(reference_compare(&medians, &benchmark, Condition::Day).is_err());
    assert!(reference_compare(&medians, &benchmark, Condition::Night).is_ok());

    println!("ACCEPTANCE criterion 7 (human reference benchmark, 18 rows x 3 offsets): PASS");
}
