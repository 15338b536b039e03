//! Constant-deceleration braking model for a train approaching a stationary
//! obstacle, with the warning-horn timing that goes with it.
//!
//! The model is deliberately simple: uniform emergency braking at `a` m/s²
//! with zero actuation delay, horn and brakes applied at the moment of
//! detection. All inputs and outputs are SI (m, s, m/s, m/s²).

use thiserror::Error;

/// Default speed above which a train striking a passenger car is fatal to
/// the car driver: 40 km/h.
pub const DEFAULT_FATAL_SPEED_CAR_MS: f64 = 40.0 / 3.6;

/// Default speed at or above which a collision carries derailment risk:
/// 130 km/h (a simplifying single-threshold assumption).
pub const DEFAULT_DERAIL_SPEED_MS: f64 = 130.0 / 3.6;

/// Default maximum distance at which the warning horn is audible to a
/// person at the obstacle, from the whistle-board spacing rule: 350 m.
pub const DEFAULT_HORN_AUDIBLE_M: f64 = 350.0;

/// Returned when a kinematic quantity is requested for a detection distance
/// at which braking already prevents the collision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("collision avoided: detection distance exceeds the braking avoidance distance")]
pub struct CollisionAvoided;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("hazard area table is empty")]
pub struct EmptyHazardTable;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KinematicsError {
    #[error("initial speed must be positive and finite, got {0}")]
    BadSpeed(String),
    #[error("deceleration must be positive and finite, got {0}")]
    BadDeceleration(String),
    #[error("{field} must be non-negative and finite, got {value}")]
    BadParam { field: &'static str, value: String },
    #[error("hazard table thresholds must be strictly increasing")]
    UnorderedThresholds,
    #[error("hazard table clearances must be non-negative and non-decreasing")]
    UnorderedClearances,
}

/// Parameters of the braking/horn model.
///
/// `v` is the train speed at detection, `a` the uniform braking
/// deceleration. The two fatality thresholds are configurable with the
/// defaults above; `horn_audible_m` is independent of the braking distances
/// and may be larger or smaller than them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KinematicParams {
    pub v_ms: f64,
    pub a_ms2: f64,
    pub horn_audible_m: f64,
    pub fatal_speed_car_ms: f64,
    pub derail_speed_ms: f64,
}

impl KinematicParams {
    pub fn new(v_ms: f64, a_ms2: f64, horn_audible_m: f64) -> Result<Self, KinematicsError> {
        Self::with_thresholds(
            v_ms,
            a_ms2,
            horn_audible_m,
            DEFAULT_FATAL_SPEED_CAR_MS,
            DEFAULT_DERAIL_SPEED_MS,
        )
    }

    pub fn with_thresholds(
        v_ms: f64,
        a_ms2: f64,
        horn_audible_m: f64,
        fatal_speed_car_ms: f64,
        derail_speed_ms: f64,
    ) -> Result<Self, KinematicsError> {
        if !v_ms.is_finite() || v_ms < 0.0 {
            return Err(KinematicsError::BadSpeed(v_ms.to_string()));
        }
        if !a_ms2.is_finite() || a_ms2 <= 0.0 {
            return Err(KinematicsError::BadDeceleration(a_ms2.to_string()));
        }
        for (field, value) in [
            ("horn_audible_m", horn_audible_m),
            ("fatal_speed_car_ms", fatal_speed_car_ms),
            ("derail_speed_ms", derail_speed_ms),
        ] {
            if !value.is_finite() || value < 0.0 {
                return Err(KinematicsError::BadParam {
                    field,
                    value: value.to_string(),
                });
            }
        }
        Ok(KinematicParams {
            v_ms,
            a_ms2,
            horn_audible_m,
            fatal_speed_car_ms,
            derail_speed_ms,
        })
    }

    /// Distance needed to brake from `v` to standstill: `v²/(2a)`.
    /// Detection at or beyond this distance prevents the collision.
    pub fn braking_avoidance_distance_m(&self) -> f64 {
        self.v_ms * self.v_ms / (2.0 * self.a_ms2)
    }

    /// Impact speed when braking starts `d` meters from the obstacle:
    /// `sqrt(v² − 2ad)`, clamped at zero. Zero means the collision is
    /// avoided (or the train stops exactly at the obstacle).
    pub fn collision_speed_ms(&self, d_m: f64) -> f64 {
        debug_assert!(d_m >= 0.0, "detection distance must be non-negative");
        (self.v_ms * self.v_ms - 2.0 * self.a_ms2 * d_m).max(0.0).sqrt()
    }

    /// Seconds between the person at the obstacle hearing the horn and the
    /// impact, when horn and brakes are both applied at detection distance
    /// `d`. The horn becomes audible once the train is within
    /// `horn_audible_m`, i.e. at speed `u(d) = v` for `d < horn_audible_m`
    /// and `u(d) = sqrt(v² − 2a(d − horn_audible_m))` otherwise; the result
    /// is `(u(d) − collision_speed(d)) / a`.
    ///
    /// The two branches meet at `d = horn_audible_m` (the visible kink is a
    /// slope change, not a jump). Errors with [`CollisionAvoided`] when `d`
    /// exceeds the avoidance distance and no impact happens.
    pub fn horn_reaction_time_s(&self, d_m: f64) -> Result<f64, CollisionAvoided> {
        debug_assert!(d_m >= 0.0, "detection distance must be non-negative");
        if d_m > self.braking_avoidance_distance_m() {
            return Err(CollisionAvoided);
        }
        let v2 = self.v_ms * self.v_ms;
        let speed_when_audible = if d_m < self.horn_audible_m {
            self.v_ms
        } else {
            (v2 - 2.0 * self.a_ms2 * (d_m - self.horn_audible_m)).max(0.0).sqrt()
        };
        Ok((speed_when_audible - self.collision_speed_ms(d_m)) / self.a_ms2)
    }

    /// Minimum detection distance at which the impact speed drops to the
    /// car-driver fatality threshold: `(v² − u²)/(2a)`, or 0 when the train
    /// is not faster than the threshold to begin with.
    pub fn car_fatal_detection_threshold_m(&self) -> f64 {
        let u = self.fatal_speed_car_ms;
        if self.v_ms <= u {
            return 0.0;
        }
        (self.v_ms * self.v_ms - u * u) / (2.0 * self.a_ms2)
    }
}

/// Speed-dependent clearance around a moving train, as a step function of
/// speed. The table ships empty; thresholds come from regulation and must
/// be supplied by configuration.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct HazardAreaTable {
    steps: Vec<(f64, f64)>,
}

impl HazardAreaTable {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a table from `(speed_threshold_ms, clearance_m)` pairs.
    /// Thresholds must be strictly increasing, clearances non-negative and
    /// non-decreasing.
    pub fn new(steps: Vec<(f64, f64)>) -> Result<Self, KinematicsError> {
        for pair in steps.windows(2) {
            if pair[1].0 <= pair[0].0 {
                return Err(KinematicsError::UnorderedThresholds);
            }
            if pair[1].1 < pair[0].1 {
                return Err(KinematicsError::UnorderedClearances);
            }
        }
        if steps.iter().any(|(t, c)| !t.is_finite() || !c.is_finite() || *c < 0.0) {
            return Err(KinematicsError::UnorderedClearances);
        }
        Ok(HazardAreaTable { steps })
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn steps(&self) -> &[(f64, f64)] {
        &self.steps
    }

    /// Clearance of the highest threshold at or below `speed_ms`; zero
    /// below the lowest threshold.
    pub fn clearance_at(&self, speed_ms: f64) -> Result<f64, EmptyHazardTable> {
        if self.steps.is_empty() {
            return Err(EmptyHazardTable);
        }
        Ok(self
            .steps
            .iter()
            .take_while(|(threshold, _)| *threshold <= speed_ms)
            .last()
            .map(|(_, clearance)| *clearance)
            .unwrap_or(0.0))
    }
}
