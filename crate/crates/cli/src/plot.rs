//! Static SVG rendering of performance curves with minima lines.
//!
//! Distance on the abscissa, negative decimal log of the hourly
//! false-positive rate on the ordinate (up = quieter). Curves are drawn as
//! staircases between swept thresholds; zero-rate points are clamped to the
//! top edge. Output is plain deterministic SVG text.

use std::fmt::Write;

use railgauge_core::domain::MinimaTuple;
use railgauge_core::metric::{fp_ordinate, PerformanceCurve};

pub struct CurveSeries<'a> {
    pub label: &'a str,
    pub curve: &'a PerformanceCurve,
    pub color: &'a str,
    pub dashed: bool,
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 560.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 30.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 70.0;

fn nice_step(span: f64, target_ticks: f64) -> f64 {
    let raw = span / target_ticks;
    let magnitude = 10f64.powf(raw.log10().floor());
    let residual = raw / magnitude;
    let factor = if residual <= 1.0 {
        1.0
    } else if residual <= 2.0 {
        2.0
    } else if residual <= 5.0 {
        5.0
    } else {
        10.0
    };
    factor * magnitude
}

struct Axes {
    x_max: f64,
    y_max: f64,
}

impl Axes {
    fn x(&self, distance_m: f64) -> f64 {
        LEFT + (distance_m / self.x_max).clamp(0.0, 1.0) * (WIDTH - LEFT - RIGHT)
    }

    fn y(&self, ordinate: f64) -> f64 {
        let clamped = ordinate.clamp(0.0, self.y_max);
        HEIGHT - BOTTOM - (clamped / self.y_max) * (HEIGHT - TOP - BOTTOM)
    }
}

/// Renders one or two curves plus the minima gates into an SVG document.
pub fn render_curve_svg(series: &[CurveSeries<'_>], minima: &MinimaTuple) -> String {
    let mut x_max: f64 = 100.0;
    let mut y_max: f64 = 4.0;
    for s in series {
        for p in &s.curve.points {
            x_max = x_max.max(p.d_x_m);
            if p.fp_ordinate.is_finite() {
                y_max = y_max.max(p.fp_ordinate);
            }
        }
    }
    x_max = x_max.max(minima.braking_min_distance_m).max(minima.horn_min_distance_m);
    for cap in [minima.braking_max_fp_per_h, minima.horn_max_fp_per_h] {
        if cap > 0.0 {
            y_max = y_max.max(fp_ordinate(cap));
        }
    }
    let x_step = nice_step(x_max, 6.0);
    x_max = (x_max / x_step).ceil() * x_step;
    y_max = y_max.ceil() + 1.0;
    let axes = Axes { x_max, y_max };

    let mut svg = String::new();
    let _ = write!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="13">
<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>
"#
    );

    // grid and ticks
    let mut x_tick = 0.0;
    while x_tick <= x_max + 1e-9 {
        let x = axes.x(x_tick);
        let _ = writeln!(
            svg,
            r##"<line x1="{x:.1}" y1="{top:.1}" x2="{x:.1}" y2="{bottom:.1}" stroke="#dddddd"/>"##,
            top = TOP,
            bottom = HEIGHT - BOTTOM
        );
        let _ = writeln!(
            svg,
            r#"<text x="{x:.1}" y="{y:.1}" text-anchor="middle">{x_tick:.0}</text>"#,
            y = HEIGHT - BOTTOM + 20.0
        );
        x_tick += x_step;
    }
    let mut y_tick = 0.0;
    while y_tick <= y_max + 1e-9 {
        let y = axes.y(y_tick);
        let _ = writeln!(
            svg,
            r##"<line x1="{left:.1}" y1="{y:.1}" x2="{right:.1}" y2="{y:.1}" stroke="#dddddd"/>"##,
            left = LEFT,
            right = WIDTH - RIGHT
        );
        let _ = writeln!(
            svg,
            r#"<text x="{x:.1}" y="{y:.1}" text-anchor="end">1e-{y_tick:.0}</text>"#,
            x = LEFT - 8.0,
            y = y + 4.0
        );
        y_tick += 1.0;
    }

    // axes
    let _ = writeln!(
        svg,
        r#"<line x1="{LEFT:.1}" y1="{y0:.1}" x2="{x1:.1}" y2="{y0:.1}" stroke="black" stroke-width="1.5"/>
<line x1="{LEFT:.1}" y1="{TOP:.1}" x2="{LEFT:.1}" y2="{y0:.1}" stroke="black" stroke-width="1.5"/>
<text x="{xc:.1}" y="{yl:.1}" text-anchor="middle">X%-detection distance (m)</text>
<text x="20" y="{ym:.1}" text-anchor="middle" transform="rotate(-90 20 {ym:.1})">false positives per hour</text>"#,
        y0 = HEIGHT - BOTTOM,
        x1 = WIDTH - RIGHT,
        xc = LEFT + (WIDTH - LEFT - RIGHT) / 2.0,
        yl = HEIGHT - 20.0,
        ym = TOP + (HEIGHT - TOP - BOTTOM) / 2.0,
    );

    // minima gates: distance floors as vertical lines, rate caps as
    // horizontal lines at their ordinates
    let gate_line = |svg: &mut String, label: &str, color: &str, vertical: Option<f64>, cap: Option<f64>| {
        if let Some(d) = vertical {
            if d > 0.0 {
                let x = axes.x(d);
                let _ = writeln!(
                    svg,
                    r#"<line x1="{x:.1}" y1="{TOP:.1}" x2="{x:.1}" y2="{y0:.1}" stroke="{color}" stroke-dasharray="6 4"/>
<text x="{x:.1}" y="{yt:.1}" fill="{color}" text-anchor="middle">{label} min dist</text>"#,
                    y0 = HEIGHT - BOTTOM,
                    yt = TOP - 8.0,
                );
            }
        }
        if let Some(rate) = cap {
            if rate > 0.0 {
                let y = axes.y(fp_ordinate(rate));
                let _ = writeln!(
                    svg,
                    r#"<line x1="{LEFT:.1}" y1="{y:.1}" x2="{x1:.1}" y2="{y:.1}" stroke="{color}" stroke-dasharray="6 4"/>
<text x="{x1:.1}" y="{yt:.1}" fill="{color}" text-anchor="end">{label} max rate</text>"#,
                    x1 = WIDTH - RIGHT,
                    yt = y - 6.0,
                );
            }
        }
    };
    gate_line(
        &mut svg,
        "braking",
        "#b22222",
        Some(minima.braking_min_distance_m),
        Some(minima.braking_max_fp_per_h),
    );
    gate_line(
        &mut svg,
        "horn",
        "#d2691e",
        Some(minima.horn_min_distance_m),
        Some(minima.horn_max_fp_per_h),
    );

    // curves as staircases in sweep order (descending threshold)
    for s in series {
        let dash = if s.dashed { r#" stroke-dasharray="8 4""# } else { "" };
        let mut path = String::new();
        let mut prev: Option<(f64, f64)> = None;
        for p in &s.curve.points {
            let x = axes.x(p.d_x_m);
            let y = axes.y(if p.fp_ordinate.is_finite() {
                p.fp_ordinate
            } else {
                y_max
            });
            match prev {
                None => {
                    let _ = write!(path, "M {x:.1} {y:.1}");
                }
                Some((_, py)) => {
                    let _ = write!(path, " L {x:.1} {py:.1} L {x:.1} {y:.1}");
                }
            }
            prev = Some((x, y));
            let _ = writeln!(
                svg,
                r#"<circle cx="{x:.1}" cy="{y:.1}" r="3" fill="{color}"/>"#,
                color = s.color
            );
        }
        let _ = writeln!(
            svg,
            r#"<path d="{path}" fill="none" stroke="{color}" stroke-width="2"{dash}/>"#,
            color = s.color
        );
    }

    // legend
    for (i, s) in series.iter().enumerate() {
        let y = TOP + 20.0 + i as f64 * 20.0;
        let dash = if s.dashed { r#" stroke-dasharray="8 4""# } else { "" };
        let _ = writeln!(
            svg,
            r#"<line x1="{x0:.1}" y1="{y:.1}" x2="{x1:.1}" y2="{y:.1}" stroke="{color}" stroke-width="2"{dash}/>
<text x="{xt:.1}" y="{yt:.1}">{label}</text>"#,
            x0 = LEFT + 16.0,
            x1 = LEFT + 56.0,
            xt = LEFT + 64.0,
            yt = y + 4.0,
            color = s.color,
            label = s.label,
        );
    }

    svg.push_str("</svg>\n");
    svg
}
