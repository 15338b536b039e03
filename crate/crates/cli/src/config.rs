//! Run configuration: a single TOML document with explicit unit suffixes.
//!
//! Speeds, distances and times are strings like `"130 km/h"`, `"652 m"`,
//! `"10 s"`; unitless values for those fields are rejected. Rates are plain
//! numbers whose field names carry the `_per_h` basis. Unknown keys are
//! errors everywhere except in `[risk]`, where extra operational-design
//! items are accepted and ignored with a warning.
//!
//! ```toml
//! [kinematics]
//! line_speed = "130 km/h"
//! deceleration = "1 m/s^2"
//! horn_audible = "350 m"
//!
//! [metric]
//! x_percent = 50.0
//! fp_budget_braking_per_h = 1e-4
//! fp_budget_horn_per_h = 1e-2
//!
//! [risk]
//! escape_time = "10 s"
//! scenario_rates_per_h = { person = 1e-4, car = 3e-5, other = 1e-5 }
//! condition = "day"
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde::Deserialize;

use railgauge_core::benchmark::Condition;
use railgauge_core::domain::{MinimaTuple, ObstacleClass};
use railgauge_core::kinematics::{
    HazardAreaTable, KinematicParams, DEFAULT_DERAIL_SPEED_MS, DEFAULT_FATAL_SPEED_CAR_MS,
};
use railgauge_core::risk::{OddConfig, Scenario};
use railgauge_core::simgen::{DetectorModel, SimConfig};
use railgauge_core::units::{
    parse_acceleration_ms2, parse_distance_m, parse_duration_s, parse_speed_ms,
};
use railgauge_core::{DEFAULT_BRAKING_FP_BUDGET_PER_H, DEFAULT_HORN_FP_BUDGET_PER_H};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    kinematics: RawKinematics,
    #[serde(default)]
    metric: RawMetric,
    minima: Option<RawMinima>,
    risk: Option<RawRisk>,
    simulate: Option<RawSimulate>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawKinematics {
    line_speed: String,
    deceleration: String,
    horn_audible: String,
    fatal_speed_car: Option<String>,
    derail_speed: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMetric {
    x_percent: Option<f64>,
    persistence: Option<u32>,
    merge_window: Option<String>,
    fp_budget_braking_per_h: Option<f64>,
    fp_budget_horn_per_h: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMinima {
    braking_min_distance: String,
    braking_max_fp_per_h: f64,
    horn_min_distance: String,
    horn_max_fp_per_h: f64,
}

#[derive(Debug, Deserialize)]
struct RawRisk {
    escape_time: String,
    max_sensor_penetration: Option<String>,
    #[serde(default)]
    multi_fatality_on_derail: bool,
    scenario_weights: Option<BTreeMap<String, f64>>,
    scenario_rates_per_h: BTreeMap<String, f64>,
    hazard_table: Option<Vec<RawHazardStep>>,
    condition: String,
    class_map: Option<BTreeMap<String, String>>,
    // Extra ODD items (schedule, route geometry, load, ...) are allowed
    // here; they are reported as warnings and otherwise ignored.
    #[serde(flatten)]
    extras: BTreeMap<String, toml::Value>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawHazardStep {
    speed: String,
    clearance: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSimulate {
    seed: Option<u64>,
    n_approaches: usize,
    clear_hours: f64,
    approach_speed: String,
    frame_interval: String,
    max_range: String,
    d50: String,
    slope: String,
    fp_rate_per_h: f64,
    #[serde(default)]
    noise_amplitude: f64,
    scenario_mix: BTreeMap<String, f64>,
}

/// Metric knobs after defaults and CLI overrides.
#[derive(Debug, Clone, Copy)]
pub struct MetricSettings {
    pub x_percent: f64,
    pub persistence: u32,
    pub merge_window_s: f64,
    pub fp_budget_braking_per_h: f64,
    pub fp_budget_horn_per_h: f64,
}

/// Risk settings resolved to core types.
#[derive(Debug, Clone)]
pub struct RiskSettings {
    pub odd: OddConfig,
    pub condition: Condition,
    pub class_map: BTreeMap<ObstacleClass, String>,
}

/// Fully resolved run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub kinematics: KinematicParams,
    pub metric: MetricSettings,
    pub minima: MinimaTuple,
    /// True when `[minima]` was absent and the distance floors were
    /// derived from the kinematics (and sensor-penetration cap).
    pub minima_derived: bool,
    pub risk: Option<RiskSettings>,
    pub simulate: Option<(DetectorModel, SimConfig)>,
    pub warnings: Vec<String>,
}

fn default_class_map() -> BTreeMap<ObstacleClass, String> {
    [
        (ObstacleClass::Person, "person"),
        (ObstacleClass::PersonSafetyJacket, "person in safety jacket"),
        (ObstacleClass::PassengerCar, "passenger car"),
        (ObstacleClass::Tree, "trees"),
        (ObstacleClass::Rock, "fallen rocks"),
    ]
    .into_iter()
    .map(|(class, object)| (class, object.to_string()))
    .collect()
}

fn scenario_from_key(key: &str) -> Result<Scenario> {
    match key {
        "person" => Ok(Scenario::Person),
        "car" => Ok(Scenario::Car),
        "other" => Ok(Scenario::Other),
        _ => bail!("unknown scenario {key:?} (expected person, car or other)"),
    }
}

fn scenario_map(raw: &BTreeMap<String, f64>) -> Result<BTreeMap<Scenario, f64>> {
    raw.iter()
        .map(|(key, value)| Ok((scenario_from_key(key)?, *value)))
        .collect()
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        Self::from_toml(&text).with_context(|| format!("in config {}", path.display()))
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| anyhow!("{e}"))?;
        let mut warnings = Vec::new();

        let k = &raw.kinematics;
        let kinematics = KinematicParams::with_thresholds(
            parse_speed_ms(&k.line_speed)?,
            parse_acceleration_ms2(&k.deceleration)?,
            parse_distance_m(&k.horn_audible)?,
            match &k.fatal_speed_car {
                Some(s) => parse_speed_ms(s)?,
                None => DEFAULT_FATAL_SPEED_CAR_MS,
            },
            match &k.derail_speed {
                Some(s) => parse_speed_ms(s)?,
                None => DEFAULT_DERAIL_SPEED_MS,
            },
        )?;

        let metric = MetricSettings {
            x_percent: raw.metric.x_percent.unwrap_or(50.0),
            persistence: raw.metric.persistence.unwrap_or(1),
            merge_window_s: match &raw.metric.merge_window {
                Some(s) => parse_duration_s(s)?,
                None => 0.0,
            },
            fp_budget_braking_per_h: raw
                .metric
                .fp_budget_braking_per_h
                .unwrap_or(DEFAULT_BRAKING_FP_BUDGET_PER_H),
            fp_budget_horn_per_h: raw
                .metric
                .fp_budget_horn_per_h
                .unwrap_or(DEFAULT_HORN_FP_BUDGET_PER_H),
        };
        if metric.persistence == 0 {
            bail!("persistence must be at least 1");
        }
        if !(metric.x_percent > 0.0 && metric.x_percent <= 100.0) {
            bail!("x_percent must be in (0,100]");
        }
        if metric.merge_window_s < 0.0 {
            bail!("merge_window must be non-negative");
        }

        let risk = match &raw.risk {
            None => None,
            Some(r) => {
                for key in r.extras.keys() {
                    warnings.push(format!(
                        "config: ignoring unused ODD item [risk].{key} (not consumed by the consequence model)"
                    ));
                }
                let weights = match &r.scenario_weights {
                    Some(w) => scenario_map(w)?,
                    None => OddConfig::default_weights(),
                };
                let rates = scenario_map(&r.scenario_rates_per_h)?;
                let hazard_table = match &r.hazard_table {
                    None => HazardAreaTable::empty(),
                    Some(steps) => HazardAreaTable::new(
                        steps
                            .iter()
                            .map(|s| {
                                Ok((parse_speed_ms(&s.speed)?, parse_distance_m(&s.clearance)?))
                            })
                            .collect::<Result<Vec<_>>>()?,
                    )?,
                };
                let odd = OddConfig::new(
                    kinematics,
                    rates,
                    weights,
                    parse_duration_s(&r.escape_time)?,
                    match &r.max_sensor_penetration {
                        Some(s) => Some(parse_distance_m(s)?),
                        None => None,
                    },
                    hazard_table,
                    r.multi_fatality_on_derail,
                )?;
                let condition = match r.condition.as_str() {
                    "day" => Condition::Day,
                    "night" => Condition::Night,
                    other => bail!("unknown condition {other:?} (expected day or night)"),
                };
                let class_map = match &r.class_map {
                    None => default_class_map(),
                    Some(map) => map
                        .iter()
                        .map(|(class, object)| {
                            (ObstacleClass::from_label(class), object.clone())
                        })
                        .collect(),
                };
                Some(RiskSettings {
                    odd,
                    condition,
                    class_map,
                })
            }
        };

        // Distance floors default to what the kinematics demand: the full
        // braking avoidance distance and the horn audibility range, both
        // capped at the route's sensor penetration when one is configured.
        let (minima, minima_derived) = match &raw.minima {
            Some(m) => (
                MinimaTuple::new(
                    parse_distance_m(&m.braking_min_distance)?,
                    m.braking_max_fp_per_h,
                    parse_distance_m(&m.horn_min_distance)?,
                    m.horn_max_fp_per_h,
                )?,
                false,
            ),
            None => {
                let cap = risk
                    .as_ref()
                    .and_then(|r| r.odd.max_sensor_penetration_m)
                    .unwrap_or(f64::INFINITY);
                (
                    MinimaTuple::new(
                        kinematics.braking_avoidance_distance_m().min(cap),
                        metric.fp_budget_braking_per_h,
                        kinematics.horn_audible_m.min(cap),
                        metric.fp_budget_horn_per_h,
                    )?,
                    true,
                )
            }
        };

        let simulate = match &raw.simulate {
            None => None,
            Some(s) => {
                let model = DetectorModel::new(
                    parse_distance_m(&s.d50)?,
                    parse_distance_m(&s.slope)?,
                    parse_distance_m(&s.max_range)?,
                    s.fp_rate_per_h,
                    s.noise_amplitude,
                )?;
                let mix = s
                    .scenario_mix
                    .iter()
                    .map(|(class, weight)| (ObstacleClass::from_label(class), *weight))
                    .collect();
                let cfg = SimConfig {
                    seed: s.seed.unwrap_or(0),
                    n_approaches: s.n_approaches,
                    clear_hours: s.clear_hours,
                    approach_speed_ms: parse_speed_ms(&s.approach_speed)?,
                    frame_interval_m: parse_distance_m(&s.frame_interval)?,
                    scenario_mix: mix,
                };
                cfg.validate()?;
                Some((model, cfg))
            }
        };

        Ok(RunConfig {
            kinematics,
            metric,
            minima,
            minima_derived,
            risk,
            simulate,
            warnings,
        })
    }
}
