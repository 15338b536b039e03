//! Subcommand implementations. Each returns the process exit code:
//! 0 = success / all gates pass, 1 = a performance or safety gate failed,
//! 2 = input or configuration error (mapped from `Err` by `main`).

use std::collections::BTreeMap;
use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};

use railgauge_core::domain::{LogBundle, ObstacleClass};
use railgauge_core::logio::{log_to_string, parse_log, parse_submissions, ParseMode};
use railgauge_core::metric::{
    build_curve, check_minima, compare_systems, detection_distance, quantile_distance,
    select_operating_point, PerformanceCurve,
};
use railgauge_core::risk::{design_goal_check, hourly_fatality_rates, reference_compare, Scenario};
use railgauge_core::simgen::simulate_log;
use railgauge_core::{validate_submission, HumanBenchmark};

use crate::config::{MetricSettings, RunConfig};
use crate::plot::{render_curve_svg, CurveSeries};
use crate::report::{self, FunctionOutcome};

/// Metric knobs that may be overridden on the command line.
#[derive(Debug, Default, Clone, Copy)]
pub struct MetricOverrides {
    pub x_percent: Option<f64>,
    pub fp_budget_braking: Option<f64>,
    pub fp_budget_horn: Option<f64>,
    pub merge_window_s: Option<f64>,
    pub persistence: Option<u32>,
}

impl MetricOverrides {
    fn apply(&self, settings: &mut MetricSettings) -> Result<()> {
        if let Some(x) = self.x_percent {
            if !(x > 0.0 && x <= 100.0) {
                bail!("--x must be in (0,100]");
            }
            settings.x_percent = x;
        }
        if let Some(b) = self.fp_budget_braking {
            if !b.is_finite() || b <= 0.0 {
                bail!("--fp-budget-braking must be positive");
            }
            settings.fp_budget_braking_per_h = b;
        }
        if let Some(b) = self.fp_budget_horn {
            if !b.is_finite() || b <= 0.0 {
                bail!("--fp-budget-horn must be positive");
            }
            settings.fp_budget_horn_per_h = b;
        }
        if let Some(w) = self.merge_window_s {
            if w < 0.0 {
                bail!("--merge-window must be non-negative");
            }
            settings.merge_window_s = w;
        }
        if let Some(p) = self.persistence {
            if p == 0 {
                bail!("--persistence must be at least 1");
            }
            settings.persistence = p;
        }
        Ok(())
    }
}

pub fn parse_mode(lenient: bool) -> ParseMode {
    if lenient {
        ParseMode::Lenient
    } else {
        ParseMode::Strict
    }
}

fn load_log(path: &Path, mode: ParseMode) -> Result<LogBundle> {
    let file = fs::File::open(path).with_context(|| format!("opening log {}", path.display()))?;
    let outcome = parse_log(BufReader::new(file), mode)
        .map_err(|e| anyhow!("{}: {e}", path.display()))?;
    for warning in &outcome.warnings {
        eprintln!("warning: {}: line {}: {}", path.display(), warning.line, warning.message);
    }
    Ok(outcome.bundle)
}

fn load_config(path: &Path, overrides: &MetricOverrides) -> Result<RunConfig> {
    let mut config = RunConfig::load(path)?;
    overrides.apply(&mut config.metric)?;
    for warning in &config.warnings {
        eprintln!("warning: {warning}");
    }
    Ok(config)
}

fn write_artifact(out_dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    fs::create_dir_all(out_dir)
        .with_context(|| format!("creating output directory {}", out_dir.display()))?;
    let path = out_dir.join(name);
    fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

fn select_outcome(curve: &PerformanceCurve, budget: f64) -> FunctionOutcome {
    match select_operating_point(curve, budget) {
        Ok(point) => FunctionOutcome {
            point: Some(point),
            infeasible: None,
        },
        Err(e) => FunctionOutcome {
            point: None,
            infeasible: Some(e.to_string()),
        },
    }
}

fn describe_point(name: &str, outcome: &FunctionOutcome, gate_pass: Option<bool>) -> String {
    match (&outcome.point, gate_pass) {
        (Some(p), gate) => {
            let gate_text = match gate {
                Some(true) => " | gate PASS",
                Some(false) => " | gate FAIL",
                None => "",
            };
            format!(
                "{name}: dX = {:.1} m at threshold {:.6}, fp {} /h (budget {}){gate_text}",
                p.d_x_m,
                p.threshold,
                report::sci3(p.fp_per_h),
                report::sci3(p.fp_budget_per_h),
            )
        }
        (None, _) => format!(
            "{name}: {}",
            outcome.infeasible.as_deref().unwrap_or("not selected")
        ),
    }
}

pub fn cmd_eval(
    log: &Path,
    config_path: &Path,
    overrides: &MetricOverrides,
    mode: ParseMode,
    out_dir: &Path,
) -> Result<i32> {
    let config = load_config(config_path, overrides)?;
    let bundle = load_log(log, mode)?;
    let m = &config.metric;
    let curve = build_curve(&bundle, m.x_percent, m.persistence, m.merge_window_s)?;

    let braking = select_outcome(&curve, m.fp_budget_braking_per_h);
    let horn = select_outcome(&curve, m.fp_budget_horn_per_h);
    let verdict = match (&braking.point, &horn.point) {
        (Some(b), Some(h)) => Some(check_minima(b, h, &config.minima)),
        _ => None,
    };
    let pass = verdict.as_ref().map(|v| v.pass()).unwrap_or(false);

    let csv_path = write_artifact(out_dir, "curve.csv", &curve.to_csv())?;
    let svg = render_curve_svg(
        &[CurveSeries {
            label: "system",
            curve: &curve,
            color: "#1f6fb2",
            dashed: false,
        }],
        &config.minima,
    );
    let svg_path = write_artifact(out_dir, "curve.svg", &svg)?;
    let report = report::eval_report(
        &curve,
        &config.kinematics,
        &config.minima,
        config.minima_derived,
        &braking,
        &horn,
        verdict.as_ref(),
    );
    let report_path = write_artifact(out_dir, "report.json", &report::to_pretty_string(&report))?;

    println!(
        "curve: {} points over {} approaches, {:.1} clear hours (X = {}%)",
        curve.points.len(),
        curve.n_approaches,
        curve.clear_hours,
        curve.x_percent
    );
    println!(
        "{}",
        describe_point("braking", &braking, verdict.as_ref().map(|v| v.braking.pass))
    );
    println!(
        "{}",
        describe_point("horn", &horn, verdict.as_ref().map(|v| v.horn.pass))
    );
    println!("verdict: {}", if pass { "PASS" } else { "FAIL" });
    println!(
        "wrote {}, {}, {}",
        csv_path.display(),
        svg_path.display(),
        report_path.display()
    );
    Ok(if pass { 0 } else { 1 })
}

fn system_name<'a>(bundle: &'a LogBundle, path: &'a Path, fallback: &'a str) -> String {
    bundle
        .meta
        .get("system")
        .cloned()
        .or_else(|| path.file_stem().map(|s| s.to_string_lossy().into_owned()))
        .unwrap_or_else(|| fallback.to_string())
}

pub fn cmd_compare(
    log_a: &Path,
    log_b: &Path,
    config_path: &Path,
    config_b_path: Option<&Path>,
    overrides: &MetricOverrides,
    mode: ParseMode,
    out_dir: &Path,
) -> Result<i32> {
    let config = load_config(config_path, overrides)?;
    let config_b = match config_b_path {
        Some(path) => load_config(path, overrides)?,
        None => config.clone(),
    };
    if config_b.metric.x_percent != config.metric.x_percent {
        bail!(
            "x_percent mismatch between configs: {} vs {}",
            config.metric.x_percent,
            config_b.metric.x_percent
        );
    }

    let bundle_a = load_log(log_a, mode)?;
    let bundle_b = load_log(log_b, mode)?;
    let m_a = &config.metric;
    let m_b = &config_b.metric;
    let curve_a = build_curve(&bundle_a, m_a.x_percent, m_a.persistence, m_a.merge_window_s)?;
    let curve_b = build_curve(&bundle_b, m_b.x_percent, m_b.persistence, m_b.merge_window_s)?;
    let comparison = compare_systems(&curve_a, &curve_b, &config.minima)?;

    let name_a = system_name(&bundle_a, log_a, "A");
    let name_b = system_name(&bundle_b, log_b, "B");
    let report = report::compare_report(&comparison, &name_a, &name_b);

    write_artifact(out_dir, "curve_a.csv", &curve_a.to_csv())?;
    write_artifact(out_dir, "curve_b.csv", &curve_b.to_csv())?;
    let svg = render_curve_svg(
        &[
            CurveSeries {
                label: &name_a,
                curve: &curve_a,
                color: "#1f6fb2",
                dashed: false,
            },
            CurveSeries {
                label: &name_b,
                curve: &curve_b,
                color: "#b26f1f",
                dashed: true,
            },
        ],
        &config.minima,
    );
    write_artifact(out_dir, "compare.svg", &svg)?;
    let report_path =
        write_artifact(out_dir, "compare.json", &report::to_pretty_string(&report))?;

    println!("comparing {name_a} vs {name_b} at X = {}%", comparison.x_percent);
    println!("braking winner: {}", report["braking"]["winner"].as_str().unwrap_or("?"));
    println!("horn winner: {}", report["horn"]["winner"].as_str().unwrap_or("?"));
    println!("dominance: {}", report::dominance_label(comparison.dominance));
    println!("wrote {}", report_path.display());
    Ok(0)
}

pub fn cmd_risk(
    log: &Path,
    config_path: &Path,
    overrides: &MetricOverrides,
    mode: ParseMode,
    out_dir: &Path,
) -> Result<i32> {
    let config = load_config(config_path, overrides)?;
    let risk = config
        .risk
        .as_ref()
        .ok_or_else(|| anyhow!("config has no [risk] section"))?;
    let bundle = load_log(log, mode)?;
    let m = &config.metric;
    let curve = build_curve(&bundle, m.x_percent, m.persistence, m.merge_window_s)?;

    // All risk quantities are evaluated at the braking operating point:
    // emergency braking is the reaction whose threshold is deployed.
    let operating = match select_operating_point(&curve, m.fp_budget_braking_per_h) {
        Ok(point) => point,
        Err(e) => {
            println!("verdict: FAIL ({e})");
            return Ok(1);
        }
    };

    let mut by_scenario: BTreeMap<Scenario, Vec<f64>> = BTreeMap::new();
    let mut by_class: BTreeMap<ObstacleClass, Vec<f64>> = BTreeMap::new();
    for trace in &bundle.approaches {
        let d = detection_distance(trace, operating.threshold, m.persistence);
        by_scenario
            .entry(Scenario::from_class(&trace.obstacle_class))
            .or_default()
            .push(d);
        by_class
            .entry(trace.obstacle_class.clone())
            .or_default()
            .push(d);
    }

    let rates = hourly_fatality_rates(&by_scenario, &risk.odd)?;
    let goals = design_goal_check(&rates);

    let benchmark = HumanBenchmark::default();
    let mut system_medians = BTreeMap::new();
    for (class, object) in &risk.class_map {
        if let Some(distances) = by_class.get(class) {
            let median = quantile_distance(distances, 50.0)?;
            system_medians.insert(object.clone(), median);
        }
    }
    let reference = if system_medians.is_empty() {
        eprintln!("warning: no approaches matched the reference class map; skipping reference comparison");
        None
    } else {
        Some(reference_compare(&system_medians, &benchmark, risk.condition)?)
    };

    let reference_pass = reference.as_ref().map(|r| r.pass()).unwrap_or(true);
    let pass = goals.pass() && reference_pass;

    let report = report::risk_report(&rates, &goals, reference.as_ref(), Some(&operating), pass);
    let report_path = write_artifact(out_dir, "risk.json", &report::to_pretty_string(&report))?;

    println!(
        "single-fatality rate {} /h (goal {}, margin {} decades): {}",
        report::sci3(rates.single_per_h),
        report::sci3(goals.single.goal_per_h),
        if goals.single.margin_decades.is_finite() {
            format!("{:.2}", goals.single.margin_decades)
        } else {
            "inf".to_string()
        },
        if goals.single.pass { "PASS" } else { "FAIL" }
    );
    println!(
        "multi-fatality rate {} /h (goal {}, margin {} decades): {}",
        report::sci3(rates.multi_per_h),
        report::sci3(goals.multi.goal_per_h),
        if goals.multi.margin_decades.is_finite() {
            format!("{:.2}", goals.multi.margin_decades)
        } else {
            "inf".to_string()
        },
        if goals.multi.pass { "PASS" } else { "FAIL" }
    );
    match &reference {
        Some(verdict) => {
            for class in &verdict.classes {
                println!(
                    "reference {} ({}): system {:.1} m vs human {:.1} m: {}",
                    class.object,
                    class.condition.label(),
                    class.system_median_m,
                    class.human_median_m,
                    if class.pass { "PASS" } else { "FAIL" }
                );
            }
        }
        None => println!("reference: skipped (no mapped classes in log)"),
    }
    println!("verdict: {}", if pass { "PASS" } else { "FAIL" });
    println!("wrote {}", report_path.display());
    Ok(if pass { 0 } else { 1 })
}

pub fn cmd_simulate(
    config_path: &Path,
    seed: Option<u64>,
    out: Option<&Path>,
    out_dir: &Path,
) -> Result<i32> {
    let config = load_config(config_path, &MetricOverrides::default())?;
    let (model, mut sim) = config
        .simulate
        .clone()
        .ok_or_else(|| anyhow!("config has no [simulate] section"))?;
    if let Some(seed) = seed {
        sim.seed = seed;
    }
    let bundle = simulate_log(&model, &sim)?;
    let text = log_to_string(&bundle);
    let path = match out {
        Some(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                fs::create_dir_all(parent)
                    .with_context(|| format!("creating {}", parent.display()))?;
            }
            fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?;
            path.to_path_buf()
        }
        None => write_artifact(out_dir, "simulated.jsonl", &text)?,
    };
    println!(
        "simulated {} approaches, {} alarms over {} clear hours (seed {})",
        bundle.approaches.len(),
        bundle.segments.iter().map(|s| s.alarms.len()).sum::<usize>(),
        bundle.total_clear_hours(),
        sim.seed
    );
    println!("wrote {}", path.display());
    Ok(0)
}

pub fn cmd_validate(submissions: &Path, mode: ParseMode) -> Result<i32> {
    let file = fs::File::open(submissions)
        .with_context(|| format!("opening submissions {}", submissions.display()))?;
    let records = parse_submissions(BufReader::new(file), mode)
        .map_err(|e| anyhow!("{}: {e}", submissions.display()))?;
    if records.is_empty() {
        bail!("no submission records found");
    }
    let mut all_pass = true;
    for (i, record) in records.iter().enumerate() {
        let result = validate_submission(record);
        if result.passed() {
            println!("record {} ({}): PASS", i + 1, record.system_name);
        } else {
            all_pass = false;
            println!(
                "record {} ({}): FAIL: {}",
                i + 1,
                record.system_name,
                result.violations.join("; ")
            );
        }
    }
    Ok(if all_pass { 0 } else { 1 })
}
