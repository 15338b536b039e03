//! Domain types for obstacle-approach logs and performance submissions.
//!
//! All constructors enforce the type invariants; a value of one of these
//! types is valid by construction and immutable afterwards, so it can be
//! shared freely across parallel workers.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

/// A violated invariant on a domain value.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DomainError {
    #[error("non-monotone distance: frames must be strictly decreasing in distance_m")]
    NonMonotoneDistance,
    #[error("non-monotone time: frames must be strictly increasing in time_s")]
    NonMonotoneTime,
    #[error("score {0} out of range: scores must be finite and in [0,1]")]
    ScoreOutOfRange(String),
    #[error("negative or non-finite {field}: {value}")]
    BadNumber { field: &'static str, value: String },
    #[error("approach {0:?} has no frames and is not marked contacted")]
    EmptyTrace(String),
    #[error("segment {0:?} must have positive duration_h")]
    NonPositiveDuration(String),
    #[error("alarm times must be sorted non-decreasing in segment {0:?}")]
    UnsortedAlarms(String),
    #[error("alarm at t={time_s} s exceeds segment {id:?} duration of {duration_h} h")]
    AlarmBeyondDuration {
        id: String,
        time_s: f64,
        duration_h: f64,
    },
    #[error("duplicate id {0:?}")]
    DuplicateId(String),
    #[error("empty id")]
    EmptyId,
}

fn check_finite(field: &'static str, value: f64) -> Result<(), DomainError> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(DomainError::BadNumber {
            field,
            value: value.to_string(),
        })
    }
}

fn check_non_negative(field: &'static str, value: f64) -> Result<(), DomainError> {
    check_finite(field, value)?;
    if value >= 0.0 {
        Ok(())
    } else {
        Err(DomainError::BadNumber {
            field,
            value: value.to_string(),
        })
    }
}

/// One detector output while approaching an obstacle: distance from the
/// obstacle along the track, time since the approach started, and the
/// detector confidence for "obstacle present".
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    pub distance_m: f64,
    pub time_s: f64,
    pub score: f64,
}

impl Frame {
    pub fn new(distance_m: f64, time_s: f64, score: f64) -> Result<Self, DomainError> {
        check_non_negative("distance_m", distance_m)?;
        check_non_negative("time_s", time_s)?;
        if !score.is_finite() || !(0.0..=1.0).contains(&score) {
            return Err(DomainError::ScoreOutOfRange(score.to_string()));
        }
        Ok(Frame {
            distance_m,
            time_s,
            score,
        })
    }
}

/// Obstacle category of an approach. Open-ended: anything outside the named
/// classes is carried verbatim as `Other(label)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ObstacleClass {
    Person,
    PersonSafetyJacket,
    PassengerCar,
    Tree,
    Rock,
    GenericSmall,
    GenericLarge,
    Other(String),
}

impl ObstacleClass {
    /// Canonical wire label, e.g. `"person_safety_jacket"`.
    pub fn label(&self) -> &str {
        match self {
            ObstacleClass::Person => "person",
            ObstacleClass::PersonSafetyJacket => "person_safety_jacket",
            ObstacleClass::PassengerCar => "passenger_car",
            ObstacleClass::Tree => "tree",
            ObstacleClass::Rock => "rock",
            ObstacleClass::GenericSmall => "generic_small",
            ObstacleClass::GenericLarge => "generic_large",
            ObstacleClass::Other(label) => label,
        }
    }

    pub fn from_label(label: &str) -> Self {
        match label {
            "person" => ObstacleClass::Person,
            "person_safety_jacket" => ObstacleClass::PersonSafetyJacket,
            "passenger_car" => ObstacleClass::PassengerCar,
            "tree" => ObstacleClass::Tree,
            "rock" => ObstacleClass::Rock,
            "generic_small" => ObstacleClass::GenericSmall,
            "generic_large" => ObstacleClass::GenericLarge,
            other => ObstacleClass::Other(other.to_string()),
        }
    }
}

impl fmt::Display for ObstacleClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// One obstacle approach: ordered detector frames from far to near, plus the
/// outcome. A trace that ends at physical contact may have zero frames; a
/// detection at contact and a non-detection are metrically identical, so the
/// frames that matter are the ones before contact.
#[derive(Debug, Clone, PartialEq)]
pub struct ApproachTrace {
    pub id: String,
    pub obstacle_class: ObstacleClass,
    pub frames: Vec<Frame>,
    pub contacted: bool,
}

impl ApproachTrace {
    pub fn new(
        id: impl Into<String>,
        obstacle_class: ObstacleClass,
        frames: Vec<Frame>,
        contacted: bool,
    ) -> Result<Self, DomainError> {
        let id = id.into();
        if id.is_empty() {
            return Err(DomainError::EmptyId);
        }
        if frames.is_empty() && !contacted {
            return Err(DomainError::EmptyTrace(id));
        }
        for pair in frames.windows(2) {
            if pair[1].distance_m >= pair[0].distance_m {
                return Err(DomainError::NonMonotoneDistance);
            }
            if pair[1].time_s <= pair[0].time_s {
                return Err(DomainError::NonMonotoneTime);
            }
        }
        Ok(ApproachTrace {
            id,
            obstacle_class,
            frames,
            contacted,
        })
    }
}

/// A candidate false alarm inside an obstacle-free segment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlarmEvent {
    pub time_s: f64,
    pub score: f64,
}

impl AlarmEvent {
    pub fn new(time_s: f64, score: f64) -> Result<Self, DomainError> {
        check_non_negative("time_s", time_s)?;
        if !score.is_finite() || !(0.0..=1.0).contains(&score) {
            return Err(DomainError::ScoreOutOfRange(score.to_string()));
        }
        Ok(AlarmEvent { time_s, score })
    }
}

/// Obstacle-free operating time with the alarms raised during it. This is
/// the exposure denominator for false-positive rates.
#[derive(Debug, Clone, PartialEq)]
pub struct ClearSegment {
    pub id: String,
    pub duration_h: f64,
    pub alarms: Vec<AlarmEvent>,
}

impl ClearSegment {
    pub fn new(
        id: impl Into<String>,
        duration_h: f64,
        alarms: Vec<AlarmEvent>,
    ) -> Result<Self, DomainError> {
        let id = id.into();
        if id.is_empty() {
            return Err(DomainError::EmptyId);
        }
        check_finite("duration_h", duration_h)?;
        if duration_h <= 0.0 {
            return Err(DomainError::NonPositiveDuration(id));
        }
        let duration_s = duration_h * 3600.0;
        for pair in alarms.windows(2) {
            if pair[1].time_s < pair[0].time_s {
                return Err(DomainError::UnsortedAlarms(id));
            }
        }
        if let Some(alarm) = alarms.iter().find(|a| a.time_s > duration_s) {
            return Err(DomainError::AlarmBeyondDuration {
                id,
                time_s: alarm.time_s,
                duration_h,
            });
        }
        Ok(ClearSegment {
            id,
            duration_h,
            alarms,
        })
    }
}

/// A full evaluation log: obstacle approaches, clear operating time, and
/// free-form metadata (system name, sensor set, ODD label).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LogBundle {
    pub approaches: Vec<ApproachTrace>,
    pub segments: Vec<ClearSegment>,
    pub meta: BTreeMap<String, String>,
}

impl LogBundle {
    pub fn new(
        approaches: Vec<ApproachTrace>,
        segments: Vec<ClearSegment>,
        meta: BTreeMap<String, String>,
    ) -> Result<Self, DomainError> {
        let mut seen = std::collections::HashSet::new();
        for trace in &approaches {
            if !seen.insert(trace.id.as_str()) {
                return Err(DomainError::DuplicateId(trace.id.clone()));
            }
        }
        seen.clear();
        for segment in &segments {
            if !seen.insert(segment.id.as_str()) {
                return Err(DomainError::DuplicateId(segment.id.clone()));
            }
        }
        Ok(LogBundle {
            approaches,
            segments,
            meta,
        })
    }

    /// Total obstacle-free exposure in hours.
    pub fn total_clear_hours(&self) -> f64 {
        self.segments.iter().map(|s| s.duration_h).sum()
    }
}

/// One measurement row from the call-for-data format: a system name, the
/// chosen X, its false-positive rate and its X%-detection distance.
#[derive(Debug, Clone, PartialEq)]
pub struct SubmissionRecord {
    pub system_name: String,
    pub x_percent: f64,
    pub fp_rate_per_h: f64,
    pub min_distance_m: f64,
}

/// Outcome of validating one submission record. Violations are data, not
/// faults: a bad record yields a report, never an error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks a submission record against the submetric's constraints.
pub fn validate_submission(record: &SubmissionRecord) -> ValidationReport {
    let mut violations = Vec::new();
    if record.system_name.is_empty() {
        violations.push("system name is empty".to_string());
    }
    if !record.x_percent.is_finite() || record.x_percent <= 0.0 || record.x_percent > 100.0 {
        violations.push("x_percent out of (0,100]".to_string());
    }
    if !record.fp_rate_per_h.is_finite() {
        violations.push("fp_rate_per_h not finite".to_string());
    } else if record.fp_rate_per_h < 0.0 {
        violations.push("negative rate".to_string());
    }
    if !record.min_distance_m.is_finite() {
        violations.push("min_distance_m not finite".to_string());
    } else if record.min_distance_m < 0.0 {
        violations.push("negative distance".to_string());
    }
    ValidationReport { violations }
}

/// Performance minima for the two train reactions: a minimum X%-detection
/// distance and a maximum false-positive rate for emergency braking, and the
/// same pair for the warning horn. A zero rate cap means the rate gate is
/// not constrained (an all-zero tuple imposes nothing).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinimaTuple {
    pub braking_min_distance_m: f64,
    pub braking_max_fp_per_h: f64,
    pub horn_min_distance_m: f64,
    pub horn_max_fp_per_h: f64,
}

impl MinimaTuple {
    pub fn new(
        braking_min_distance_m: f64,
        braking_max_fp_per_h: f64,
        horn_min_distance_m: f64,
        horn_max_fp_per_h: f64,
    ) -> Result<Self, DomainError> {
        check_non_negative("braking_min_distance_m", braking_min_distance_m)?;
        check_non_negative("braking_max_fp_per_h", braking_max_fp_per_h)?;
        check_non_negative("horn_min_distance_m", horn_min_distance_m)?;
        check_non_negative("horn_max_fp_per_h", horn_max_fp_per_h)?;
        Ok(MinimaTuple {
            braking_min_distance_m,
            braking_max_fp_per_h,
            horn_min_distance_m,
            horn_max_fp_per_h,
        })
    }
}
