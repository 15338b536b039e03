//! Unit-suffixed quantity parsing and canonicalization.
//!
//! Internal units are SI throughout: meters, seconds, m/s, m/s². Exposure
//! times are the one exception and stay in hours, since every rate in the
//! toolkit is per operating hour. Config values carry explicit unit
//! suffixes ("130 km/h", "652 m", "0 s"); unitless speeds are rejected so a
//! kilometers-per-hour value can never be mistaken for meters per second.

use thiserror::Error;

/// Converts km/h to m/s with the exact factor 1/3.6, applied as a single
/// division so no rounding beyond the one inherent operation occurs.
pub fn kmh_to_ms(v_kmh: f64) -> f64 {
    v_kmh / 3.6
}

/// Converts m/s back to km/h.
pub fn ms_to_kmh(v_ms: f64) -> f64 {
    v_ms * 3.6
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UnitError {
    #[error("empty quantity")]
    Empty,
    #[error("malformed quantity {0:?}: expected \"<number> <unit>\"")]
    Malformed(String),
    #[error("unitless value {0:?}: a unit suffix is required")]
    MissingUnit(String),
    #[error("unknown {kind} unit {unit:?} in {input:?}")]
    UnknownUnit {
        kind: &'static str,
        unit: String,
        input: String,
    },
    #[error("non-finite value in {0:?}")]
    NonFinite(String),
}

fn split_quantity(input: &str) -> Result<(f64, &str), UnitError> {
    let s = input.trim();
    if s.is_empty() {
        return Err(UnitError::Empty);
    }
    // The numeric part is the longest prefix that parses as f64.
    let mut split_at = 0;
    let mut value: Option<f64> = None;
    for (i, _) in s.char_indices().skip(1).chain([(s.len(), ' ')]) {
        if let Ok(v) = s[..i].parse::<f64>() {
            split_at = i;
            value = Some(v);
        }
    }
    let value = value.ok_or_else(|| UnitError::Malformed(input.to_string()))?;
    if !value.is_finite() {
        return Err(UnitError::NonFinite(input.to_string()));
    }
    Ok((value, s[split_at..].trim()))
}

type Convert = fn(f64) -> f64;

fn parse_with_units(
    input: &str,
    kind: &'static str,
    units: &[(&str, Convert)],
) -> Result<f64, UnitError> {
    let (value, unit) = split_quantity(input)?;
    if unit.is_empty() {
        return Err(UnitError::MissingUnit(input.to_string()));
    }
    for (name, convert) in units {
        if unit == *name {
            return Ok(convert(value));
        }
    }
    Err(UnitError::UnknownUnit {
        kind,
        unit: unit.to_string(),
        input: input.to_string(),
    })
}

/// Parses a speed with an explicit unit ("km/h" or "m/s") into m/s.
pub fn parse_speed_ms(input: &str) -> Result<f64, UnitError> {
    parse_with_units(input, "speed", &[("km/h", kmh_to_ms), ("m/s", |v| v)])
}

/// Parses a distance ("m" or "km") into meters.
pub fn parse_distance_m(input: &str) -> Result<f64, UnitError> {
    parse_with_units(input, "distance", &[("m", |v| v), ("km", |v| v * 1000.0)])
}

/// Parses a duration ("s", "min" or "h") into seconds.
pub fn parse_duration_s(input: &str) -> Result<f64, UnitError> {
    parse_with_units(
        input,
        "duration",
        &[("s", |v| v), ("min", |v| v * 60.0), ("h", |v| v * 3600.0)],
    )
}

/// Parses a duration ("h", "min" or "s") into hours.
pub fn parse_duration_h(input: &str) -> Result<f64, UnitError> {
    parse_with_units(
        input,
        "duration",
        &[("h", |v| v), ("min", |v| v / 60.0), ("s", |v| v / 3600.0)],
    )
}

/// Parses an acceleration ("m/s^2" or "m/s2") into m/s².
pub fn parse_acceleration_ms2(input: &str) -> Result<f64, UnitError> {
    parse_with_units(input, "acceleration", &[("m/s^2", |v| v), ("m/s2", |v| v)])
}
