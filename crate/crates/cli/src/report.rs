//! Structured JSON reports mirroring the verdict types.
//!
//! Infinite ordinates and margins are serialized as the string `"inf"`,
//! never as a placeholder number.

use serde_json::{json, Map, Value};

use railgauge_core::benchmark::Bound;
use railgauge_core::domain::MinimaTuple;
use railgauge_core::kinematics::KinematicParams;
use railgauge_core::metric::{
    ComparisonReport, Dominance, FunctionWinner, GateCheck, MinimaVerdict, OperatingPoint,
    PerformanceCurve,
};
use railgauge_core::risk::{DesignGoalVerdict, FatalityRates, GoalCheck, ReferenceVerdict};

/// A number, or `"inf"` when it is not finite.
pub fn num_or_inf(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else if x > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

/// Scientific notation with 3 significant digits, e.g. `2.40e-8`.
pub fn sci3(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.2e}")
    } else if x > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

pub fn operating_point_json(point: &OperatingPoint) -> Value {
    json!({
        "threshold": point.threshold,
        "d_x_m": point.d_x_m,
        "fp_per_h": point.fp_per_h,
        "fp_ordinate": num_or_inf(railgauge_core::fp_ordinate(point.fp_per_h)),
        "fp_budget_per_h": point.fp_budget_per_h,
    })
}

fn gate_json(gate: &GateCheck) -> Value {
    json!({
        "pass": gate.pass,
        "distance_ok": gate.distance_ok,
        "rate_ok": gate.rate_ok,
        "distance_margin_m": gate.distance_margin_m,
        "fp_margin_per_h": num_or_inf(gate.fp_margin_per_h),
    })
}

fn minima_json(minima: &MinimaTuple, derived: bool) -> Value {
    json!({
        "braking_min_distance_m": minima.braking_min_distance_m,
        "braking_max_fp_per_h": minima.braking_max_fp_per_h,
        "horn_min_distance_m": minima.horn_min_distance_m,
        "horn_max_fp_per_h": minima.horn_max_fp_per_h,
        "derived_from_kinematics": derived,
    })
}

fn kinematics_json(k: &KinematicParams) -> Value {
    json!({
        "line_speed_ms": k.v_ms,
        "deceleration_ms2": k.a_ms2,
        "horn_audible_m": k.horn_audible_m,
        "braking_avoidance_distance_m": k.braking_avoidance_distance_m(),
        "car_fatal_detection_threshold_m": k.car_fatal_detection_threshold_m(),
    })
}

pub struct FunctionOutcome {
    pub point: Option<OperatingPoint>,
    /// Set when no curve point met the budget.
    pub infeasible: Option<String>,
}

/// The `eval` report: curve context, both operating points, gate verdicts.
/// The overall pass flag is the minima verdict when both points exist;
/// a missing operating point is a failure.
pub fn eval_report(
    curve: &PerformanceCurve,
    kinematics: &KinematicParams,
    minima: &MinimaTuple,
    minima_derived: bool,
    braking: &FunctionOutcome,
    horn: &FunctionOutcome,
    verdict: Option<&MinimaVerdict>,
) -> Value {
    let pass = verdict.map(|v| v.pass()).unwrap_or(false);
    let function_json = |outcome: &FunctionOutcome, gate: Option<&GateCheck>| -> Value {
        let mut map = Map::new();
        map.insert(
            "operating_point".into(),
            outcome
                .point
                .as_ref()
                .map(operating_point_json)
                .unwrap_or(Value::Null),
        );
        if let Some(reason) = &outcome.infeasible {
            map.insert("infeasible".into(), json!(reason));
        }
        if let Some(gate) = gate {
            map.insert("gate".into(), gate_json(gate));
        }
        Value::Object(map)
    };
    json!({
        "x_percent": curve.x_percent,
        "n_approaches": curve.n_approaches,
        "clear_hours": curve.clear_hours,
        "n_curve_points": curve.points.len(),
        "kinematics": kinematics_json(kinematics),
        "minima": minima_json(minima, minima_derived),
        "braking": function_json(braking, verdict.map(|v| &v.braking)),
        "horn": function_json(horn, verdict.map(|v| &v.horn)),
        "pass": pass,
    })
}

fn winner_label(winner: FunctionWinner) -> &'static str {
    match winner {
        FunctionWinner::A => "a",
        FunctionWinner::B => "b",
        FunctionWinner::Tie => "tie",
        FunctionWinner::Neither => "neither",
    }
}

pub fn dominance_label(dominance: Dominance) -> &'static str {
    match dominance {
        Dominance::ADominates => "a-dominates",
        Dominance::BDominates => "b-dominates",
        Dominance::Equivalent => "no-preference",
        Dominance::Mixed => "mixed",
        Dominance::NoOverlap => "no-overlap",
    }
}

/// The `compare` report.
pub fn compare_report(report: &ComparisonReport, name_a: &str, name_b: &str) -> Value {
    let function_json = |cmp: &railgauge_core::metric::FunctionComparison| {
        json!({
            "winner": winner_label(cmp.winner),
            "a_point": cmp.a_point.as_ref().map(operating_point_json).unwrap_or(Value::Null),
            "b_point": cmp.b_point.as_ref().map(operating_point_json).unwrap_or(Value::Null),
        })
    };
    json!({
        "x_percent": report.x_percent,
        "system_a": name_a,
        "system_b": name_b,
        "braking": function_json(&report.braking),
        "horn": function_json(&report.horn),
        "dominance": dominance_label(report.dominance),
    })
}

fn goal_json(check: &GoalCheck) -> Value {
    json!({
        "rate_per_h": check.rate_per_h,
        "rate": sci3(check.rate_per_h),
        "goal_per_h": check.goal_per_h,
        "pass": check.pass,
        "margin_decades": num_or_inf(check.margin_decades),
    })
}

/// The `risk` report: rates, design-goal verdict, reference verdict.
pub fn risk_report(
    rates: &FatalityRates,
    goals: &DesignGoalVerdict,
    reference: Option<&ReferenceVerdict>,
    operating_point: Option<&OperatingPoint>,
    pass: bool,
) -> Value {
    let reference_json = reference.map(|verdict| {
        json!({
            "pass": verdict.pass(),
            "classes": verdict.classes.iter().map(|c| json!({
                "object": c.object,
                "condition": c.condition.label(),
                "system_median_m": c.system_median_m,
                "human_median_m": c.human_median_m,
                "bound": match c.bound {
                    Bound::Exact => "exact",
                    Bound::AtMost => "at-most",
                    Bound::AtLeast => "at-least",
                },
                "bound_limited": c.bound_limited,
                "pass": c.pass,
            })).collect::<Vec<_>>(),
        })
    });
    json!({
        "rates": {
            "single_per_h": rates.single_per_h,
            "single": sci3(rates.single_per_h),
            "multi_per_h": rates.multi_per_h,
            "multi": sci3(rates.multi_per_h),
        },
        "design_goals": {
            "pass": goals.pass(),
            "single": goal_json(&goals.single),
            "multi": goal_json(&goals.multi),
        },
        "reference": reference_json.unwrap_or(Value::Null),
        "operating_point": operating_point.map(operating_point_json).unwrap_or(Value::Null),
        "pass": pass,
    })
}

/// Serializes a report deterministically (sorted keys come from the
/// Value construction order; serde_json preserves insertion order).
pub fn to_pretty_string(value: &Value) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("report serializes");
    out.push('\n');
    out
}
