//! Seeded synthetic-log generation with an analytically known detector.
//!
//! The simulated detector follows a logistic score law over distance,
//! `mean_score(d) = 1 / (1 + exp((d − d50)/slope))`, optionally perturbed
//! by bounded uniform noise, and raises false alarms as a Poisson process
//! whose scores are uniform in [0,1). Every derived quantity of interest
//! (detection distance per threshold, alarm rate per threshold) then has a
//! closed form, which makes simulated logs usable as an independent oracle
//! for the curve pipeline.
//!
//! Reproducibility: the generator is a ChaCha12 stream cipher RNG seeded
//! with `seed_from_u64`, and every draw is an explicit step in a documented
//! order (per approach: one class draw, then one noise draw per frame when
//! the noise amplitude is positive; then for the clear segment: the alarm
//! count via inverse-transform Poisson sampling in chunks of lambda <= 16,
//! then one time draw per alarm, then one score draw per alarm). Output is
//! byte-identical across runs and platforms for the same seed.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use thiserror::Error;

use crate::domain::{AlarmEvent, ApproachTrace, ClearSegment, Frame, LogBundle, ObstacleClass};
use crate::metric::CurvePoint;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("d50_m must be positive and at most max_range_m")]
    BadD50,
    #[error("slope_m must be positive")]
    BadSlope,
    #[error("max_range_m must be positive")]
    BadMaxRange,
    #[error("fp_rate_per_h must be non-negative and finite")]
    BadFpRate,
    #[error("noise amplitude must be in [0, 0.5)")]
    BadNoise,
    #[error("n_approaches must be at least 1")]
    NoApproaches,
    #[error("clear_hours must be positive")]
    BadClearHours,
    #[error("approach_speed_ms must be positive")]
    BadSpeed,
    #[error("frame_interval_m must be positive")]
    BadFrameInterval,
    #[error("scenario mix must have non-negative weights with a positive sum")]
    BadScenarioMix,
}

/// The simulated detector.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectorModel {
    /// Distance at which the mean score crosses 0.5.
    pub d50_m: f64,
    /// Logistic width; smaller is steeper.
    pub slope_m: f64,
    /// Sensor range; frames start here.
    pub max_range_m: f64,
    /// True alarm rate at score threshold 0.5. Alarm scores are uniform,
    /// so candidate alarms arrive at twice this rate and thin linearly
    /// with the threshold.
    pub fp_rate_per_h: f64,
    /// Additive uniform score noise in [-amplitude, +amplitude].
    pub noise_amplitude: f64,
}

impl DetectorModel {
    pub fn new(
        d50_m: f64,
        slope_m: f64,
        max_range_m: f64,
        fp_rate_per_h: f64,
        noise_amplitude: f64,
    ) -> Result<Self, SimError> {
        if !max_range_m.is_finite() || max_range_m <= 0.0 {
            return Err(SimError::BadMaxRange);
        }
        if !d50_m.is_finite() || d50_m <= 0.0 || d50_m > max_range_m {
            return Err(SimError::BadD50);
        }
        if !slope_m.is_finite() || slope_m <= 0.0 {
            return Err(SimError::BadSlope);
        }
        if !fp_rate_per_h.is_finite() || fp_rate_per_h < 0.0 {
            return Err(SimError::BadFpRate);
        }
        if !noise_amplitude.is_finite() || !(0.0..0.5).contains(&noise_amplitude) {
            return Err(SimError::BadNoise);
        }
        Ok(DetectorModel {
            d50_m,
            slope_m,
            max_range_m,
            fp_rate_per_h,
            noise_amplitude,
        })
    }

    /// Mean detector score at distance `d`.
    pub fn mean_score(&self, d_m: f64) -> f64 {
        1.0 / (1.0 + ((d_m - self.d50_m) / self.slope_m).exp())
    }

    /// Inverse of the score law: the distance at which the mean score
    /// equals `threshold`. Unbounded below 0 / above the range; callers
    /// clamp.
    pub fn inverse_score(&self, threshold: f64) -> f64 {
        self.d50_m + self.slope_m * ((1.0 - threshold) / threshold).ln()
    }
}

/// Simulation shape: how many approaches, how much clear time, and the
/// sampling geometry.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub seed: u64,
    pub n_approaches: usize,
    pub clear_hours: f64,
    pub approach_speed_ms: f64,
    pub frame_interval_m: f64,
    /// Obstacle-class mix; weights are normalized internally. Order
    /// matters for the draw sequence, so keep it deterministic (the CLI
    /// feeds it from a sorted map).
    pub scenario_mix: Vec<(ObstacleClass, f64)>,
}

impl SimConfig {
    pub fn validate(&self) -> Result<(), SimError> {
        if self.n_approaches == 0 {
            return Err(SimError::NoApproaches);
        }
        if !self.clear_hours.is_finite() || self.clear_hours <= 0.0 {
            return Err(SimError::BadClearHours);
        }
        if !self.approach_speed_ms.is_finite() || self.approach_speed_ms <= 0.0 {
            return Err(SimError::BadSpeed);
        }
        if !self.frame_interval_m.is_finite() || self.frame_interval_m <= 0.0 {
            return Err(SimError::BadFrameInterval);
        }
        let sum: f64 = self.scenario_mix.iter().map(|(_, w)| w).sum();
        if self.scenario_mix.iter().any(|(_, w)| *w < 0.0 || !w.is_finite()) || sum <= 0.0 {
            return Err(SimError::BadScenarioMix);
        }
        Ok(())
    }
}

/// The frame-distance grid used by the simulator: from `max_range_m` down
/// in `frame_interval_m` steps, ending exactly at 0.
pub fn frame_grid(max_range_m: f64, frame_interval_m: f64) -> Vec<f64> {
    let steps = (max_range_m / frame_interval_m).ceil() as usize;
    (0..=steps)
        .map(|i| (max_range_m - i as f64 * frame_interval_m).max(0.0))
        .collect()
}

// Inverse-transform Poisson draw (product-of-uniforms form), chunked so
// exp(-lambda) stays far from underflow. Sum of independent Poisson chunks
// is Poisson in the total.
fn poisson_draw(rng: &mut ChaCha12Rng, lambda: f64) -> u64 {
    const CHUNK: f64 = 16.0;
    let mut remaining = lambda;
    let mut total = 0;
    while remaining > CHUNK {
        total += poisson_chunk(rng, CHUNK);
        remaining -= CHUNK;
    }
    total + poisson_chunk(rng, remaining)
}

fn poisson_chunk(rng: &mut ChaCha12Rng, lambda: f64) -> u64 {
    if lambda <= 0.0 {
        return 0;
    }
    let floor = (-lambda).exp();
    let mut count = 0u64;
    let mut product: f64 = rng.gen();
    while product > floor {
        count += 1;
        product *= rng.gen::<f64>();
    }
    count
}

/// Generates a complete log bundle. Deterministic for a fixed config:
/// repeated calls yield identical bundles, and the serialized form is
/// byte-identical across platforms.
pub fn simulate_log(model: &DetectorModel, cfg: &SimConfig) -> Result<LogBundle, SimError> {
    cfg.validate()?;
    let mut rng = ChaCha12Rng::seed_from_u64(cfg.seed);
    let grid = frame_grid(model.max_range_m, cfg.frame_interval_m);
    let mix_total: f64 = cfg.scenario_mix.iter().map(|(_, w)| w).sum();

    let mut approaches = Vec::with_capacity(cfg.n_approaches);
    for i in 0..cfg.n_approaches {
        let class_draw: f64 = rng.gen::<f64>() * mix_total;
        let mut class = cfg.scenario_mix.last().expect("mix is non-empty").0.clone();
        let mut cumulative = 0.0;
        for (candidate, weight) in &cfg.scenario_mix {
            cumulative += weight;
            if class_draw < cumulative {
                class = candidate.clone();
                break;
            }
        }
        let frames = grid
            .iter()
            .map(|&d| {
                let mut score = model.mean_score(d);
                if model.noise_amplitude > 0.0 {
                    let noise = model.noise_amplitude * (2.0 * rng.gen::<f64>() - 1.0);
                    score = (score + noise).clamp(0.0, 1.0);
                }
                let time = (model.max_range_m - d) / cfg.approach_speed_ms;
                Frame::new(d, time, score).expect("simulated frame is valid")
            })
            .collect();
        approaches.push(
            ApproachTrace::new(format!("app-{i:06}"), class, frames, false)
                .expect("simulated trace is valid"),
        );
    }

    // Candidate alarms arrive at twice the threshold-0.5 rate; uniform
    // scores thin them back to fp_rate_per_h at 0.5.
    let lambda = 2.0 * model.fp_rate_per_h * cfg.clear_hours;
    let n_alarms = poisson_draw(&mut rng, lambda);
    let duration_s = cfg.clear_hours * 3600.0;
    let times: Vec<f64> = (0..n_alarms).map(|_| rng.gen::<f64>() * duration_s).collect();
    let scores: Vec<f64> = (0..n_alarms).map(|_| rng.gen::<f64>()).collect();
    let mut alarm_pairs: Vec<(f64, f64)> = times.into_iter().zip(scores).collect();
    alarm_pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let alarms = alarm_pairs
        .into_iter()
        .map(|(t, s)| AlarmEvent::new(t, s).expect("simulated alarm is valid"))
        .collect();
    let segments = vec![
        ClearSegment::new("seg-000000", cfg.clear_hours, alarms).expect("simulated segment is valid"),
    ];

    let mut meta = BTreeMap::new();
    meta.insert("seed".to_string(), cfg.seed.to_string());
    meta.insert("system".to_string(), "simgen".to_string());
    Ok(LogBundle::new(approaches, segments, meta).expect("simulated bundle is valid"))
}

/// Closed-form curve of the noise-free detector at the given thresholds.
///
/// With zero noise this is exact; with noise it is the mean-score curve,
/// which empirical sweeps approach only statistically. `frame_interval_m`
/// snaps distances down to the simulator's frame grid so results are
/// comparable with a simulated log; pass `None` for the continuous law.
/// All approaches behave identically under zero noise, so the result does
/// not depend on `x_percent` (kept so call sites state which curve family
/// they mean).
pub fn true_curve(
    model: &DetectorModel,
    _x_percent: f64,
    thresholds: &[f64],
    frame_interval_m: Option<f64>,
) -> Vec<CurvePoint> {
    thresholds
        .iter()
        .map(|&threshold| {
            let d_x = match frame_interval_m {
                Some(interval) => frame_grid(model.max_range_m, interval)
                    .into_iter()
                    .find(|&d| model.mean_score(d) >= threshold)
                    .unwrap_or(0.0),
                None => {
                    if threshold <= 0.0 {
                        model.max_range_m
                    } else if threshold >= 1.0 {
                        0.0
                    } else {
                        model.inverse_score(threshold).clamp(0.0, model.max_range_m)
                    }
                }
            };
            let fp = (2.0 * model.fp_rate_per_h * (1.0 - threshold)).max(0.0);
            CurvePoint::new(threshold, d_x, fp)
        })
        .collect()
}
