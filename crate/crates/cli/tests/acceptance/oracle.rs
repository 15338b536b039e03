//! Independent brute-force recomputation of the curve pipeline, straight
//! from the definitions. Deliberately shares no code path with the library
//! (no window-minima index, no binary search, no selection): detection
//! distances scan every run, quantiles fully sort, merge counting replays
//! the rule alarm by alarm.

/// Frames as (distance_m, score), ordered far to near.
pub type OracleFrames = Vec<(f64, f64)>;

/// A minimal bundle: per-approach frames, one alarm list (time, score),
/// total clear hours.
pub struct OracleBundle {
    pub approaches: Vec<OracleFrames>,
    pub alarms: Vec<(f64, f64)>,
    pub hours: f64,
}

pub fn detection_distance(frames: &[(f64, f64)], threshold: f64, persistence: usize) -> f64 {
    let n = frames.len();
    let mut best = 0.0f64;
    if persistence >= 1 && persistence <= n {
        for start in 0..=(n - persistence) {
            if frames[start..start + persistence]
                .iter()
                .all(|(_, score)| *score >= threshold)
            {
                best = best.max(frames[start].0);
            }
        }
    }
    best
}

pub fn quantile(distances: &[f64], x_percent: f64) -> f64 {
    let n = distances.len();
    assert!(n > 0);
    let k = ((n as f64 * x_percent / 100.0).ceil() as usize).clamp(1, n);
    let mut sorted = distances.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
    sorted[k - 1]
}

pub fn merged_count(alarms: &[(f64, f64)], threshold: f64, window_s: f64) -> u64 {
    let mut count = 0u64;
    let mut last_counted: Option<f64> = None;
    for (time, score) in alarms {
        if *score < threshold {
            continue;
        }
        let merged = matches!(last_counted, Some(t) if *time - t < window_s);
        if !merged {
            count += 1;
            last_counted = Some(*time);
        }
    }
    count
}

// Smallest f64 above a non-negative finite value, by bit increment.
fn bump(x: f64) -> f64 {
    f64::from_bits(x.to_bits() + 1)
}

/// Full sweep: (threshold, dX, fp_per_h) per threshold, thresholds being
/// the distinct observed scores descending plus a sentinel above the max.
pub fn curve(
    bundle: &OracleBundle,
    x_percent: f64,
    persistence: usize,
    window_s: f64,
) -> Vec<(f64, f64, f64)> {
    let mut thresholds: Vec<f64> = bundle
        .approaches
        .iter()
        .flatten()
        .map(|(_, s)| *s)
        .chain(bundle.alarms.iter().map(|(_, s)| *s))
        .collect();
    thresholds.sort_by(|a, b| b.partial_cmp(a).unwrap());
    thresholds.dedup();
    match thresholds.first().copied() {
        Some(max) => thresholds.insert(0, bump(max)),
        None => thresholds.push(1.0),
    }
    thresholds
        .into_iter()
        .map(|threshold| {
            let distances: Vec<f64> = bundle
                .approaches
                .iter()
                .map(|frames| detection_distance(frames, threshold, persistence))
                .collect();
            let d_x = quantile(&distances, x_percent);
            let fp = merged_count(&bundle.alarms, threshold, window_s) as f64 / bundle.hours;
            (threshold, d_x, fp)
        })
        .collect()
}
