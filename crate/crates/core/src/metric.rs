//! The obstacle-detection performance submetric.
//!
//! A system is summarized by how far away it detects X% of appearing
//! obstacles (abscissa) against how many false alarms it raises per clear
//! operating hour (ordinate, reported as the negative decimal logarithm of
//! the rate). Both move together as the detection threshold changes, so a
//! system is a curve, not a point; picking a threshold picks an operating
//! point on it.
//!
//! Conventions fixed here:
//! - A non-detection and a detection at contact both enter the distance
//!   list as exactly 0 m.
//! - The X% distance is an order statistic: the k-th largest with
//!   `k = ceil(n·X/100)`, no interpolation.
//! - Thresholds sweep the distinct scores observed in the log, plus one
//!   sentinel just above the maximum (the all-negative extreme). Between
//!   observed scores the curve is constant, so nothing is lost.
//! - Exposure is clear-segment time only; approach time never enters the
//!   false-positive denominator.
//! - A zero rate has ordinate +infinity and is exported as the string
//!   "inf", never as a stand-in number.

use rayon::prelude::*;
use thiserror::Error;

use crate::domain::{ApproachTrace, ClearSegment, LogBundle, MinimaTuple};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricError {
    #[error("empty distance list")]
    EmptyDistances,
    #[error("x_percent {0} out of (0,100]")]
    BadXPercent(f64),
    #[error("no exposure: total clear hours must be positive")]
    NoExposure,
    #[error("bundle has no approaches")]
    EmptyApproaches,
    #[error("budget infeasible: no curve point has fp_per_h <= {0}")]
    BudgetInfeasible(f64),
    #[error("x_percent mismatch: {0} vs {1}")]
    XPercentMismatch(f64, f64),
    #[error("curve has no points")]
    EmptyCurve,
    #[error("curve violates monotonicity: {0}")]
    NonMonotoneCurve(&'static str),
}

/// `-log10(rate)`; +infinity when the rate is zero.
pub fn fp_ordinate(fp_per_h: f64) -> f64 {
    if fp_per_h == 0.0 {
        f64::INFINITY
    } else {
        let o = -fp_per_h.log10();
        // normalize -0.0 from a rate of exactly 1/h
        if o == 0.0 {
            0.0
        } else {
            o
        }
    }
}

/// One threshold on the sweep: the X% detection distance and the
/// false-positive rate the system shows there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub threshold: f64,
    pub d_x_m: f64,
    pub fp_per_h: f64,
    pub fp_ordinate: f64,
}

impl CurvePoint {
    pub fn new(threshold: f64, d_x_m: f64, fp_per_h: f64) -> Self {
        CurvePoint {
            threshold,
            d_x_m,
            fp_per_h,
            fp_ordinate: fp_ordinate(fp_per_h),
        }
    }
}

/// A full threshold sweep for one system and one X.
///
/// Points are sorted by strictly descending threshold; along that order the
/// detection distance and the false-positive rate are both non-decreasing
/// (the two axes trade off exactly at the sweep level). The top point's
/// threshold sits one ulp above the highest observed score and may
/// therefore exceed 1.0 by that ulp.
#[derive(Debug, Clone, PartialEq)]
pub struct PerformanceCurve {
    pub x_percent: f64,
    pub points: Vec<CurvePoint>,
    pub n_approaches: usize,
    pub clear_hours: f64,
}

impl PerformanceCurve {
    pub fn new(
        x_percent: f64,
        points: Vec<CurvePoint>,
        n_approaches: usize,
        clear_hours: f64,
    ) -> Result<Self, MetricError> {
        if points.is_empty() {
            return Err(MetricError::EmptyCurve);
        }
        for pair in points.windows(2) {
            if pair[1].threshold >= pair[0].threshold {
                return Err(MetricError::NonMonotoneCurve(
                    "thresholds must be strictly decreasing",
                ));
            }
            if pair[1].d_x_m < pair[0].d_x_m {
                return Err(MetricError::NonMonotoneCurve(
                    "d_x_m must be non-decreasing along descending threshold",
                ));
            }
            if pair[1].fp_per_h < pair[0].fp_per_h {
                return Err(MetricError::NonMonotoneCurve(
                    "fp_per_h must be non-decreasing along descending threshold",
                ));
            }
        }
        Ok(PerformanceCurve {
            x_percent,
            points,
            n_approaches,
            clear_hours,
        })
    }

    /// Largest detection distance achievable at a false-positive rate of at
    /// most `rate_per_h`, i.e. the step-function value of the curve at that
    /// rate. `None` if no point is that quiet.
    pub fn best_distance_at(&self, rate_per_h: f64) -> Option<f64> {
        let idx = self.points.partition_point(|p| p.fp_per_h <= rate_per_h);
        if idx == 0 {
            None
        } else {
            Some(self.points[idx - 1].d_x_m)
        }
    }

    /// CSV export with one row per point and 9 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("threshold,dX_m,fp_per_h,fp_ordinate\n");
        for p in &self.points {
            out.push_str(&format!(
                "{},{},{},{}\n",
                format_sig9(p.threshold),
                format_sig9(p.d_x_m),
                format_sig9(p.fp_per_h),
                format_sig9(p.fp_ordinate)
            ));
        }
        out
    }
}

/// 9 significant digits; infinities come out as "inf".
pub fn format_sig9(x: f64) -> String {
    if x.is_infinite() {
        (if x > 0.0 { "inf" } else { "-inf" }).to_string()
    } else {
        format!("{:.8e}", x)
    }
}

/// One chosen point on a curve, together with the rate budget it was
/// selected under (`fp_per_h <= fp_budget_per_h` always holds).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatingPoint {
    pub threshold: f64,
    pub d_x_m: f64,
    pub fp_per_h: f64,
    pub fp_budget_per_h: f64,
}

/// Distance at which the detector first holds an alarm for `persistence`
/// consecutive frames at or above `threshold`, scanning from far to near.
///
/// Returns the distance of the first frame of the farthest such run, or 0
/// when no run qualifies. A contact-only trace (no frames) is 0 as well: a
/// detection at contact and a non-detection count as the same.
pub fn detection_distance(trace: &ApproachTrace, threshold: f64, persistence: u32) -> f64 {
    debug_assert!((0.0..=1.0).contains(&threshold) || threshold > 1.0);
    debug_assert!(persistence >= 1, "persistence must be at least 1");
    let p = persistence as usize;
    if trace.frames.len() < p {
        return 0.0;
    }
    trace
        .frames
        .windows(p)
        .find(|run| run.iter().all(|f| f.score >= threshold))
        .map(|run| run[0].distance_m)
        .unwrap_or(0.0)
}

/// The k-th largest distance with `k = ceil(n·x_percent/100)`: at least X%
/// of the obstacles are detected at this distance or farther.
pub fn quantile_distance(distances: &[f64], x_percent: f64) -> Result<f64, MetricError> {
    if distances.is_empty() {
        return Err(MetricError::EmptyDistances);
    }
    if !(x_percent > 0.0 && x_percent <= 100.0) {
        return Err(MetricError::BadXPercent(x_percent));
    }
    let n = distances.len();
    let k = ((n as f64 * x_percent / 100.0).ceil() as usize).clamp(1, n);
    let mut sorted = distances.to_vec();
    sorted.sort_unstable_by(|a, b| b.total_cmp(a));
    Ok(sorted[k - 1])
}

/// Hourly false-positive rate at a threshold: qualifying alarms (score at
/// or above the threshold) divided by total clear hours, after merging.
///
/// Merging is anchored at counted alarms: within each segment, a
/// qualifying alarm strictly less than `merge_window_s` seconds after the
/// last counted alarm is folded into it and does not extend the window.
/// A window of 0 therefore counts every qualifying alarm.
pub fn fp_rate(
    segments: &[ClearSegment],
    threshold: f64,
    merge_window_s: f64,
) -> Result<f64, MetricError> {
    debug_assert!(merge_window_s >= 0.0, "merge window must be non-negative");
    let total_hours: f64 = segments.iter().map(|s| s.duration_h).sum();
    if total_hours <= 0.0 {
        return Err(MetricError::NoExposure);
    }
    let count = count_merged_alarms(segments, threshold, merge_window_s);
    Ok(count as f64 / total_hours)
}

fn count_merged_alarms(segments: &[ClearSegment], threshold: f64, merge_window_s: f64) -> u64 {
    let mut count = 0u64;
    for segment in segments {
        let mut last_counted: Option<f64> = None;
        for alarm in &segment.alarms {
            if alarm.score < threshold {
                continue;
            }
            match last_counted {
                Some(t) if alarm.time_s - t < merge_window_s => {}
                _ => {
                    count += 1;
                    last_counted = Some(alarm.time_s);
                }
            }
        }
    }
    count
}

/// Per-trace index answering "detection distance at threshold t" in
/// O(log frames) instead of rescanning the trace: window minima of the
/// scores, then a running prefix maximum, which is non-decreasing and
/// therefore binary-searchable. Results are bit-identical to
/// [`detection_distance`] (comparisons only, no arithmetic).
struct TraceProfile {
    prefix_max: Vec<f64>,
    start_distances: Vec<f64>,
}

impl TraceProfile {
    fn build(trace: &ApproachTrace, persistence: u32) -> Self {
        let p = persistence as usize;
        let n = trace.frames.len();
        if n < p {
            return TraceProfile {
                prefix_max: Vec::new(),
                start_distances: Vec::new(),
            };
        }
        let mut window_min = Vec::with_capacity(n - p + 1);
        let mut deque: std::collections::VecDeque<usize> = std::collections::VecDeque::new();
        for i in 0..n {
            while let Some(&back) = deque.back() {
                if trace.frames[back].score >= trace.frames[i].score {
                    deque.pop_back();
                } else {
                    break;
                }
            }
            deque.push_back(i);
            if i + 1 >= p {
                let front = *deque.front().expect("window is non-empty");
                if front + p <= i {
                    deque.pop_front();
                }
                window_min.push(trace.frames[*deque.front().expect("window is non-empty")].score);
            }
        }
        let mut prefix_max = window_min;
        for i in 1..prefix_max.len() {
            prefix_max[i] = prefix_max[i].max(prefix_max[i - 1]);
        }
        let start_distances = trace.frames[..n - p + 1]
            .iter()
            .map(|f| f.distance_m)
            .collect();
        TraceProfile {
            prefix_max,
            start_distances,
        }
    }

    fn distance_at(&self, threshold: f64) -> f64 {
        let idx = self.prefix_max.partition_point(|&m| m < threshold);
        if idx == self.prefix_max.len() {
            0.0
        } else {
            self.start_distances[idx]
        }
    }
}

/// Sweeps every distinct score observed in the bundle (plus a sentinel one
/// ulp above the maximum, representing permanent negative detection) and
/// emits one [`CurvePoint`] per threshold. The sweep is parallelized over
/// thresholds; output is identical for any thread count.
pub fn build_curve(
    bundle: &LogBundle,
    x_percent: f64,
    persistence: u32,
    merge_window_s: f64,
) -> Result<PerformanceCurve, MetricError> {
    if bundle.approaches.is_empty() {
        return Err(MetricError::EmptyApproaches);
    }
    if !(x_percent > 0.0 && x_percent <= 100.0) {
        return Err(MetricError::BadXPercent(x_percent));
    }
    let clear_hours = bundle.total_clear_hours();
    if clear_hours <= 0.0 {
        return Err(MetricError::NoExposure);
    }

    let mut thresholds: Vec<f64> = bundle
        .approaches
        .iter()
        .flat_map(|t| t.frames.iter().map(|f| f.score))
        .chain(
            bundle
                .segments
                .iter()
                .flat_map(|s| s.alarms.iter().map(|a| a.score)),
        )
        .collect();
    thresholds.sort_unstable_by(|a, b| b.total_cmp(a));
    thresholds.dedup();
    match thresholds.first().copied() {
        Some(max) => thresholds.insert(0, max.next_up()),
        // No scores anywhere (all approaches contact-only, no alarms):
        // a single all-negative point describes the system completely.
        None => thresholds.push(1.0),
    }

    let profiles: Vec<TraceProfile> = bundle
        .approaches
        .iter()
        .map(|t| TraceProfile::build(t, persistence))
        .collect();

    let points: Vec<CurvePoint> = thresholds
        .par_iter()
        .map(|&threshold| {
            let distances: Vec<f64> = profiles.iter().map(|p| p.distance_at(threshold)).collect();
            let d_x = quantile_distance(&distances, x_percent)
                .expect("approaches are non-empty and x_percent was validated");
            let rate =
                count_merged_alarms(&bundle.segments, threshold, merge_window_s) as f64 / clear_hours;
            CurvePoint::new(threshold, d_x, rate)
        })
        .collect();

    PerformanceCurve::new(x_percent, points, bundle.approaches.len(), clear_hours)
}

/// Among points within the rate budget, picks the one with the largest
/// detection distance; ties fall to the lower rate, then to the higher
/// threshold. Errors when no point meets the budget.
pub fn select_operating_point(
    curve: &PerformanceCurve,
    fp_budget_per_h: f64,
) -> Result<OperatingPoint, MetricError> {
    debug_assert!(fp_budget_per_h > 0.0, "budget must be positive");
    let mut best: Option<&CurvePoint> = None;
    for point in &curve.points {
        if point.fp_per_h > fp_budget_per_h {
            continue;
        }
        let better = match best {
            None => true,
            Some(b) => {
                point.d_x_m > b.d_x_m
                    || (point.d_x_m == b.d_x_m
                        && (point.fp_per_h < b.fp_per_h
                            || (point.fp_per_h == b.fp_per_h && point.threshold > b.threshold)))
            }
        };
        if better {
            best = Some(point);
        }
    }
    best.map(|p| OperatingPoint {
        threshold: p.threshold,
        d_x_m: p.d_x_m,
        fp_per_h: p.fp_per_h,
        fp_budget_per_h,
    })
    .ok_or(MetricError::BudgetInfeasible(fp_budget_per_h))
}

/// One function's gate result: the distance floor and the rate cap, with
/// signed margins (negative margin = violated).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateCheck {
    pub pass: bool,
    pub distance_ok: bool,
    pub rate_ok: bool,
    pub distance_margin_m: f64,
    pub fp_margin_per_h: f64,
}

impl GateCheck {
    fn evaluate(point: &OperatingPoint, min_distance_m: f64, max_fp_per_h: f64) -> Self {
        let distance_ok = point.d_x_m >= min_distance_m;
        // A zero cap means the rate gate is not constrained.
        let (rate_ok, fp_margin) = if max_fp_per_h == 0.0 {
            (true, f64::INFINITY)
        } else {
            (
                point.fp_per_h <= max_fp_per_h,
                max_fp_per_h - point.fp_per_h,
            )
        };
        GateCheck {
            pass: distance_ok && rate_ok,
            distance_ok,
            rate_ok,
            distance_margin_m: point.d_x_m - min_distance_m,
            fp_margin_per_h: fp_margin,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinimaVerdict {
    pub braking: GateCheck,
    pub horn: GateCheck,
}

impl MinimaVerdict {
    pub fn pass(&self) -> bool {
        self.braking.pass && self.horn.pass
    }
}

/// Checks the braking and horn operating points against their minima.
pub fn check_minima(
    braking: &OperatingPoint,
    horn: &OperatingPoint,
    minima: &MinimaTuple,
) -> MinimaVerdict {
    MinimaVerdict {
        braking: GateCheck::evaluate(
            braking,
            minima.braking_min_distance_m,
            minima.braking_max_fp_per_h,
        ),
        horn: GateCheck::evaluate(horn, minima.horn_min_distance_m, minima.horn_max_fp_per_h),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FunctionWinner {
    A,
    B,
    Tie,
    Neither,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FunctionComparison {
    pub winner: FunctionWinner,
    pub a_point: Option<OperatingPoint>,
    pub b_point: Option<OperatingPoint>,
}

/// Pointwise relation of the two curves over their shared rate range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dominance {
    ADominates,
    BDominates,
    /// Identical step functions: no preference.
    Equivalent,
    /// Each is better somewhere.
    Mixed,
    /// The curves' rate ranges do not overlap.
    NoOverlap,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub x_percent: f64,
    pub braking: FunctionComparison,
    pub horn: FunctionComparison,
    pub dominance: Dominance,
}

fn effective_budget(max_fp_per_h: f64) -> f64 {
    if max_fp_per_h == 0.0 {
        f64::INFINITY
    } else {
        max_fp_per_h
    }
}

fn compare_function(
    a: &PerformanceCurve,
    b: &PerformanceCurve,
    budget_per_h: f64,
) -> FunctionComparison {
    let a_point = select_operating_point(a, budget_per_h).ok();
    let b_point = select_operating_point(b, budget_per_h).ok();
    let winner = match (&a_point, &b_point) {
        (Some(pa), Some(pb)) => {
            if pa.d_x_m > pb.d_x_m {
                FunctionWinner::A
            } else if pb.d_x_m > pa.d_x_m {
                FunctionWinner::B
            } else {
                FunctionWinner::Tie
            }
        }
        (Some(_), None) => FunctionWinner::A,
        (None, Some(_)) => FunctionWinner::B,
        (None, None) => FunctionWinner::Neither,
    };
    FunctionComparison {
        winner,
        a_point,
        b_point,
    }
}

/// Compares two systems measured at the same X: the per-function winners
/// under the minima's rate caps, plus whether one curve dominates the other
/// pointwise (step interpolation at every rate both curves can reach).
pub fn compare_systems(
    a: &PerformanceCurve,
    b: &PerformanceCurve,
    minima: &MinimaTuple,
) -> Result<ComparisonReport, MetricError> {
    if a.x_percent != b.x_percent {
        return Err(MetricError::XPercentMismatch(a.x_percent, b.x_percent));
    }

    let braking = compare_function(a, b, effective_budget(minima.braking_max_fp_per_h));
    let horn = compare_function(a, b, effective_budget(minima.horn_max_fp_per_h));

    let range = |c: &PerformanceCurve| {
        (
            c.points.first().expect("curve is non-empty").fp_per_h,
            c.points.last().expect("curve is non-empty").fp_per_h,
        )
    };
    let (a_lo, a_hi) = range(a);
    let (b_lo, b_hi) = range(b);
    let lo = a_lo.max(b_lo);
    let hi = a_hi.min(b_hi);

    let dominance = if lo > hi {
        Dominance::NoOverlap
    } else {
        let mut rates: Vec<f64> = a
            .points
            .iter()
            .chain(b.points.iter())
            .map(|p| p.fp_per_h)
            .filter(|r| *r >= lo && *r <= hi)
            .collect();
        rates.sort_unstable_by(f64::total_cmp);
        rates.dedup();
        let mut a_better = false;
        let mut b_better = false;
        for r in rates {
            let da = a.best_distance_at(r).expect("rate is within a's range");
            let db = b.best_distance_at(r).expect("rate is within b's range");
            if da > db {
                a_better = true;
            } else if db > da {
                b_better = true;
            }
        }
        match (a_better, b_better) {
            (true, false) => Dominance::ADominates,
            (false, true) => Dominance::BDominates,
            (false, false) => Dominance::Equivalent,
            (true, true) => Dominance::Mixed,
        }
    };

    Ok(ComparisonReport {
        x_percent: a.x_percent,
        braking,
        horn,
        dominance,
    })
}
