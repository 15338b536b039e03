//! Evaluation toolkit for driver-replacing rail perception systems.
//!
//! Takes line-delimited logs of obstacle approaches and obstacle-free
//! operating time, sweeps detection thresholds into performance curves
//! (X%-detection distance vs. hourly false-positive rate), selects
//! operating points under rate budgets, and propagates them through a
//! braking/warning-horn model into explicit-risk and human-reference
//! safety checks. A seeded simulator with a closed-form detector provides
//! the oracle for testing the whole pipeline.

pub mod benchmark;
pub mod domain;
pub mod kinematics;
pub mod logio;
pub mod metric;
pub mod risk;
pub mod simgen;
pub mod stats;
pub mod units;

pub use benchmark::{Bound, Condition, HumanBenchmark};
pub use domain::{
    validate_submission, AlarmEvent, ApproachTrace, ClearSegment, DomainError, Frame, LogBundle,
    MinimaTuple, ObstacleClass, SubmissionRecord, ValidationReport,
};
pub use kinematics::{CollisionAvoided, HazardAreaTable, KinematicParams};
pub use logio::{log_to_string, parse_log, parse_submissions, write_log, ParseError, ParseMode};
pub use metric::{
    build_curve, check_minima, compare_systems, detection_distance, fp_ordinate, fp_rate,
    quantile_distance, select_operating_point, ComparisonReport, CurvePoint, Dominance,
    FunctionWinner, MetricError, MinimaVerdict, OperatingPoint, PerformanceCurve,
};
pub use risk::{
    design_goal_check, hourly_fatality_rates, reference_compare, scenario_outcome,
    DesignGoalVerdict, FatalityRates, OddConfig, ReferenceVerdict, RiskError, Scenario,
    ScenarioOutcome, MULTI_FATALITY_GOAL_PER_H, SINGLE_FATALITY_GOAL_PER_H,
};
pub use simgen::{simulate_log, true_curve, DetectorModel, SimConfig, SimError};
pub use stats::{fp_rate_interval, RateInterval};
pub use units::{kmh_to_ms, ms_to_kmh};

/// Default false-positive budget for emergency braking: at most 1e-4
/// unneeded brakings per operating hour.
pub const DEFAULT_BRAKING_FP_BUDGET_PER_H: f64 = 1e-4;

/// Default false-positive budget for the warning horn: at most 1e-2
/// unneeded horn soundings per operating hour.
pub const DEFAULT_HORN_FP_BUDGET_PER_H: f64 = 1e-2;
