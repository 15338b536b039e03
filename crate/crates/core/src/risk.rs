//! Explicit risk assessment and reference-system comparison.
//!
//! Two independent safety arguments are supported. The explicit route turns
//! a system's empirical detection distances into hourly fatality rates via
//! the braking model and checks them against the harmonized design goals
//! (single-fatality accidents below 1e-7 per hour, multi-fatality below
//! 1e-9, both strict). The reference route compares the system's per-class
//! median detection distances against the embedded human benchmark.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::benchmark::{BenchmarkLookupError, Bound, Condition, HumanBenchmark};
use crate::domain::ObstacleClass;
use crate::kinematics::{HazardAreaTable, KinematicParams};

/// Harmonized design goal for accidents with a single fatality, per hour.
pub const SINGLE_FATALITY_GOAL_PER_H: f64 = 1e-7;
/// Harmonized design goal for accidents with more than one fatality, per hour.
pub const MULTI_FATALITY_GOAL_PER_H: f64 = 1e-9;

/// Default scenario mix of fatal accidents: persons dominate, passenger
/// cars second, everything else residual.
pub const DEFAULT_SCENARIO_WEIGHTS: [(Scenario, f64); 3] = [
    (Scenario::Person, 0.70),
    (Scenario::Car, 0.24),
    (Scenario::Other, 0.06),
];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RiskError {
    #[error("scenario weights must sum to 1 (got {0})")]
    WeightsDoNotSumToOne(f64),
    #[error("scenario weight for {0:?} out of [0,1]")]
    BadWeight(Scenario),
    #[error("appearance rate for {0:?} must be non-negative and finite")]
    BadRate(Scenario),
    #[error("no appearance rate configured for {0:?} (positive weight)")]
    MissingRate(Scenario),
    #[error("escape time must be positive and finite")]
    BadEscapeTime,
    #[error("max sensor penetration must be positive and finite")]
    BadPenetration,
    #[error("no detection distances for scenario {0:?} with positive appearance rate")]
    MissingScenarioData(Scenario),
    #[error(transparent)]
    BenchmarkLookup(#[from] BenchmarkLookupError),
}

/// Consequence scenario an obstacle class falls into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Scenario {
    Person,
    Car,
    Other,
}

impl Scenario {
    pub fn label(&self) -> &'static str {
        match self {
            Scenario::Person => "person",
            Scenario::Car => "car",
            Scenario::Other => "other",
        }
    }

    pub fn from_class(class: &ObstacleClass) -> Self {
        match class {
            ObstacleClass::Person | ObstacleClass::PersonSafetyJacket => Scenario::Person,
            ObstacleClass::PassengerCar => Scenario::Car,
            _ => Scenario::Other,
        }
    }
}

/// Operational design domain data consumed by the risk model: the braking
/// kinematics, how often each scenario appears, the car driver's escape
/// time, the sensor-range cap of the route, and the derailment flag.
#[derive(Debug, Clone, PartialEq)]
pub struct OddConfig {
    pub kinematics: KinematicParams,
    pub scenario_rates_per_h: BTreeMap<Scenario, f64>,
    pub scenario_weights: BTreeMap<Scenario, f64>,
    /// Seconds the car driver needs to leave the car after hearing the
    /// horn. No default exists; it must come from configuration.
    pub escape_time_s: f64,
    /// Route-dependent sensor-range cap; detections beyond it are credited
    /// only up to the cap. `None` leaves distances uncapped.
    pub max_sensor_penetration_m: Option<f64>,
    pub hazard_table: HazardAreaTable,
    pub multi_fatality_on_derail: bool,
}

impl OddConfig {
    pub fn new(
        kinematics: KinematicParams,
        scenario_rates_per_h: BTreeMap<Scenario, f64>,
        scenario_weights: BTreeMap<Scenario, f64>,
        escape_time_s: f64,
        max_sensor_penetration_m: Option<f64>,
        hazard_table: HazardAreaTable,
        multi_fatality_on_derail: bool,
    ) -> Result<Self, RiskError> {
        let mut weight_sum = 0.0;
        for (scenario, weight) in &scenario_weights {
            if !weight.is_finite() || !(0.0..=1.0).contains(weight) {
                return Err(RiskError::BadWeight(*scenario));
            }
            weight_sum += weight;
        }
        if (weight_sum - 1.0).abs() > 1e-9 {
            return Err(RiskError::WeightsDoNotSumToOne(weight_sum));
        }
        for (scenario, rate) in &scenario_rates_per_h {
            if !rate.is_finite() || *rate < 0.0 {
                return Err(RiskError::BadRate(*scenario));
            }
        }
        for (scenario, weight) in &scenario_weights {
            if *weight > 0.0 && !scenario_rates_per_h.contains_key(scenario) {
                return Err(RiskError::MissingRate(*scenario));
            }
        }
        if !escape_time_s.is_finite() || escape_time_s <= 0.0 {
            return Err(RiskError::BadEscapeTime);
        }
        if let Some(cap) = max_sensor_penetration_m {
            if !cap.is_finite() || cap <= 0.0 {
                return Err(RiskError::BadPenetration);
            }
        }
        Ok(OddConfig {
            kinematics,
            scenario_rates_per_h,
            scenario_weights,
            escape_time_s,
            max_sensor_penetration_m,
            hazard_table,
            multi_fatality_on_derail,
        })
    }

    pub fn default_weights() -> BTreeMap<Scenario, f64> {
        DEFAULT_SCENARIO_WEIGHTS.iter().copied().collect()
    }
}

/// Fatality probabilities for one detection distance in one scenario.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioOutcome {
    pub scenario: Scenario,
    pub p_fatal_single: f64,
    pub p_fatal_multi: f64,
    pub expected_impact_speed_ms: f64,
}

/// Consequences of detecting an obstacle `detection_distance_m` before it.
///
/// A person struck by a train dies at any impact speed. A car driver dies
/// if the impact is above the car-fatality speed and the horn-to-impact
/// time is shorter than the escape time; otherwise the driver leaves the
/// car in time. Other obstacles cause no direct fatality. Any impact at or
/// above the derailment speed is a multi-fatality event when the ODD flags
/// derailment consequences.
pub fn scenario_outcome(
    detection_distance_m: f64,
    scenario: Scenario,
    odd: &OddConfig,
) -> ScenarioOutcome {
    let k = &odd.kinematics;
    let impact = k.collision_speed_ms(detection_distance_m);
    let p_fatal_single = match scenario {
        Scenario::Person => {
            if impact > 0.0 {
                1.0
            } else {
                0.0
            }
        }
        Scenario::Car => {
            if impact > k.fatal_speed_car_ms {
                // an impact implies the distance is inside the avoidance
                // distance, so the horn time is defined
                let horn_time = k
                    .horn_reaction_time_s(detection_distance_m)
                    .expect("impact implies collision");
                if horn_time < odd.escape_time_s {
                    1.0
                } else {
                    0.0
                }
            } else {
                0.0
            }
        }
        Scenario::Other => 0.0,
    };
    let p_fatal_multi = if odd.multi_fatality_on_derail && impact > 0.0 && impact >= k.derail_speed_ms
    {
        1.0
    } else {
        0.0
    };
    ScenarioOutcome {
        scenario,
        p_fatal_single,
        p_fatal_multi,
        expected_impact_speed_ms: impact,
    }
}

/// Hourly rates of single- and multi-fatality accidents.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FatalityRates {
    pub single_per_h: f64,
    pub multi_per_h: f64,
}

// Kahan-compensated accumulator, so sums do not depend on evaluation order
// beyond f64 determinism.
struct Compensated {
    sum: f64,
    carry: f64,
}

impl Compensated {
    fn new() -> Self {
        Compensated { sum: 0.0, carry: 0.0 }
    }

    fn add(&mut self, value: f64) {
        let y = value - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }
}

/// Folds the empirical per-scenario detection distances (measured at the
/// chosen operating point) into hourly fatality rates:
/// `rate = sum over scenarios of appearance_rate * mean fatality
/// probability`, with each distance first capped at the route's sensor
/// penetration. Scenarios with zero appearance rate contribute nothing and
/// need no data.
pub fn hourly_fatality_rates(
    detection_distances: &BTreeMap<Scenario, Vec<f64>>,
    odd: &OddConfig,
) -> Result<FatalityRates, RiskError> {
    let mut single = Compensated::new();
    let mut multi = Compensated::new();
    for (&scenario, &rate) in &odd.scenario_rates_per_h {
        if rate == 0.0 {
            continue;
        }
        let distances = detection_distances
            .get(&scenario)
            .filter(|d| !d.is_empty())
            .ok_or(RiskError::MissingScenarioData(scenario))?;
        let mut p_single = Compensated::new();
        let mut p_multi = Compensated::new();
        for &d in distances {
            let capped = match odd.max_sensor_penetration_m {
                Some(cap) => d.min(cap),
                None => d,
            };
            let outcome = scenario_outcome(capped, scenario, odd);
            p_single.add(outcome.p_fatal_single);
            p_multi.add(outcome.p_fatal_multi);
        }
        let n = distances.len() as f64;
        single.add(rate * (p_single.sum / n));
        multi.add(rate * (p_multi.sum / n));
    }
    Ok(FatalityRates {
        single_per_h: single.sum,
        multi_per_h: multi.sum,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GoalCheck {
    pub rate_per_h: f64,
    pub goal_per_h: f64,
    pub pass: bool,
    /// Decades of headroom below the goal; negative when violated,
    /// infinite for a zero rate.
    pub margin_decades: f64,
}

impl GoalCheck {
    fn new(rate_per_h: f64, goal_per_h: f64) -> Self {
        let margin_decades = if rate_per_h == 0.0 {
            f64::INFINITY
        } else {
            (goal_per_h / rate_per_h).log10()
        };
        GoalCheck {
            rate_per_h,
            goal_per_h,
            // strict: a rate exactly at the goal fails
            pass: rate_per_h < goal_per_h,
            margin_decades,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DesignGoalVerdict {
    pub single: GoalCheck,
    pub multi: GoalCheck,
}

impl DesignGoalVerdict {
    pub fn pass(&self) -> bool {
        self.single.pass && self.multi.pass
    }
}

/// Checks rates against the harmonized design goals (strictly below
/// 1e-7/h and 1e-9/h).
pub fn design_goal_check(rates: &FatalityRates) -> DesignGoalVerdict {
    DesignGoalVerdict {
        single: GoalCheck::new(rates.single_per_h, SINGLE_FATALITY_GOAL_PER_H),
        multi: GoalCheck::new(rates.multi_per_h, MULTI_FATALITY_GOAL_PER_H),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassVerdict {
    pub object: String,
    pub condition: Condition,
    pub system_median_m: f64,
    pub human_median_m: f64,
    pub bound: Bound,
    pub pass: bool,
    /// True when the human value is only known as a lower bound, so a pass
    /// against it does not prove superiority over the human.
    pub bound_limited: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceVerdict {
    pub classes: Vec<ClassVerdict>,
}

impl ReferenceVerdict {
    pub fn pass(&self) -> bool {
        self.classes.iter().all(|c| c.pass)
    }
}

/// Compares the system's per-class median detection distances against the
/// human benchmark under one condition filter. Passing requires matching or
/// beating the human median for every requested class; bound-only rows are
/// compared against their bound value.
pub fn reference_compare(
    system_medians: &BTreeMap<String, f64>,
    benchmark: &HumanBenchmark,
    condition: Condition,
) -> Result<ReferenceVerdict, RiskError> {
    let mut classes = Vec::with_capacity(system_medians.len());
    for (object, &system_median) in system_medians {
        let row = benchmark.find(object, condition)?;
        classes.push(ClassVerdict {
            object: object.clone(),
            condition,
            system_median_m: system_median,
            human_median_m: row.median_m,
            bound: row.bound,
            pass: system_median >= row.median_m,
            bound_limited: row.bound == Bound::AtLeast,
        });
    }
    Ok(ReferenceVerdict { classes })
}
