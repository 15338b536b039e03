//! Acceptance suite: one test per criterion, each printing a PASS line on
//! success (run with `cargo test --test acceptance -- --nocapture` to see
//! them). Tolerances are pinned in the assertions themselves.

mod estimator;
mod kinematics_repro;
mod metric_oracle;
mod oracle;
mod properties;
mod reference_benchmark;
mod run_binary;

use std::collections::BTreeMap;

use railgauge_core::domain::{
    AlarmEvent, ApproachTrace, ClearSegment, Frame, LogBundle, ObstacleClass,
};

/// Builds a core bundle from bare (distance, score) frames and (time,
/// score) alarms; times are synthesized to satisfy the trace invariants.
pub fn bundle_from_parts(
    approaches: &[Vec<(f64, f64)>],
    alarms: &[(f64, f64)],
    hours: f64,
) -> LogBundle {
    let traces = approaches
        .iter()
        .enumerate()
        .map(|(i, frames)| {
            let frames = frames
                .iter()
                .enumerate()
                .map(|(j, (d, s))| Frame::new(*d, j as f64, *s).unwrap())
                .collect();
            ApproachTrace::new(format!("a{i}"), ObstacleClass::Person, frames, false).unwrap()
        })
        .collect();
    let alarm_events = alarms
        .iter()
        .map(|(t, s)| AlarmEvent::new(*t, *s).unwrap())
        .collect();
    let segments = vec![ClearSegment::new("s0", hours, alarm_events).unwrap()];
    LogBundle::new(traces, segments, BTreeMap::new()).unwrap()
}
