//! Line-delimited log format: parsing, validation and serialization.
//!
//! One JSON object per line, discriminated by a `"type"` field:
//!
//! ```text
//! {"type":"approach","id":"a1","class":"person","contacted":false,"frames":[{"d":400,"t":0,"s":0.9}]}
//! {"type":"clear","id":"s1","hours":300,"alarms":[{"t":5,"s":0.8}]}
//! {"type":"meta","key":"system","value":"prototype-7"}
//! ```
//!
//! `meta` records carry the bundle's key-value metadata so that a serialized
//! bundle parses back identically. In strict mode (the default) unknown
//! fields and record types are rejected; in lenient mode unknown fields are
//! dropped with a warning. Parsing stops at the first violation and reports
//! its line number.

use std::collections::BTreeMap;
use std::io::BufRead;

use serde_json::{Map, Value};
use thiserror::Error;

use crate::domain::{
    AlarmEvent, ApproachTrace, ClearSegment, DomainError, Frame, LogBundle, ObstacleClass,
    SubmissionRecord,
};

/// Unknown-field handling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ParseMode {
    /// Unknown fields are errors.
    #[default]
    Strict,
    /// Unknown fields are dropped; each produces a [`ParseWarning`].
    Lenient,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseWarning {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Error)]
pub enum ParseErrorKind {
    #[error("malformed JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("record is not an object")]
    NotAnObject,
    #[error("missing field {0:?}")]
    MissingField(&'static str),
    #[error("field {field:?} has wrong type: expected {expected}")]
    WrongType {
        field: &'static str,
        expected: &'static str,
    },
    #[error("unknown field {0:?}")]
    UnknownField(String),
    #[error("unknown record type {0:?}")]
    UnknownRecordType(String),
    #[error("{0}")]
    Invariant(#[from] DomainError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

/// A parsed bundle plus any lenient-mode warnings.
#[derive(Debug)]
pub struct ParseOutcome {
    pub bundle: LogBundle,
    pub warnings: Vec<ParseWarning>,
}

struct FieldReader<'a> {
    object: &'a Map<String, Value>,
    line: usize,
}

impl<'a> FieldReader<'a> {
    fn str_field(&self, name: &'static str) -> Result<&'a str, ParseError> {
        match self.object.get(name) {
            Some(Value::String(s)) => Ok(s),
            Some(_) => Err(self.err(ParseErrorKind::WrongType {
                field: name,
                expected: "string",
            })),
            None => Err(self.err(ParseErrorKind::MissingField(name))),
        }
    }

    fn num_field(&self, name: &'static str) -> Result<f64, ParseError> {
        match self.object.get(name) {
            Some(Value::Number(n)) => n.as_f64().ok_or_else(|| {
                self.err(ParseErrorKind::WrongType {
                    field: name,
                    expected: "finite number",
                })
            }),
            Some(_) => Err(self.err(ParseErrorKind::WrongType {
                field: name,
                expected: "number",
            })),
            None => Err(self.err(ParseErrorKind::MissingField(name))),
        }
    }

    fn bool_field(&self, name: &'static str) -> Result<bool, ParseError> {
        match self.object.get(name) {
            Some(Value::Bool(b)) => Ok(*b),
            Some(_) => Err(self.err(ParseErrorKind::WrongType {
                field: name,
                expected: "boolean",
            })),
            None => Err(self.err(ParseErrorKind::MissingField(name))),
        }
    }

    fn array_field(&self, name: &'static str) -> Result<&'a [Value], ParseError> {
        match self.object.get(name) {
            Some(Value::Array(items)) => Ok(items),
            Some(_) => Err(self.err(ParseErrorKind::WrongType {
                field: name,
                expected: "array",
            })),
            None => Err(self.err(ParseErrorKind::MissingField(name))),
        }
    }

    fn check_unknown(
        &self,
        known: &[&str],
        mode: ParseMode,
        warnings: &mut Vec<ParseWarning>,
    ) -> Result<(), ParseError> {
        for key in self.object.keys() {
            if !known.contains(&key.as_str()) {
                match mode {
                    ParseMode::Strict => {
                        return Err(self.err(ParseErrorKind::UnknownField(key.clone())))
                    }
                    ParseMode::Lenient => warnings.push(ParseWarning {
                        line: self.line,
                        message: format!("ignoring unknown field {key:?}"),
                    }),
                }
            }
        }
        Ok(())
    }

    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            line: self.line,
            kind,
        }
    }
}

fn as_object<'a>(value: &'a Value, line: usize) -> Result<FieldReader<'a>, ParseError> {
    match value {
        Value::Object(map) => Ok(FieldReader { object: map, line }),
        _ => Err(ParseError {
            line,
            kind: ParseErrorKind::NotAnObject,
        }),
    }
}

/// Parses a line-delimited log into a [`LogBundle`], enforcing all domain
/// invariants. The first violation aborts parsing with its line number.
pub fn parse_log(reader: impl BufRead, mode: ParseMode) -> Result<ParseOutcome, ParseError> {
    let mut approaches = Vec::new();
    let mut segments = Vec::new();
    let mut meta = BTreeMap::new();
    let mut warnings = Vec::new();

    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let at = |kind: ParseErrorKind| ParseError {
            line: line_no,
            kind,
        };
        let text = line.map_err(|e| at(e.into()))?;
        if text.trim().is_empty() {
            continue;
        }
        let value: Value = serde_json::from_str(&text).map_err(|e| at(e.into()))?;
        let record = as_object(&value, line_no)?;
        match record.str_field("type")? {
            "approach" => {
                record.check_unknown(
                    &["type", "id", "class", "contacted", "frames"],
                    mode,
                    &mut warnings,
                )?;
                let id = record.str_field("id")?;
                let class = ObstacleClass::from_label(record.str_field("class")?);
                let contacted = record.bool_field("contacted")?;
                let mut frames = Vec::new();
                for item in record.array_field("frames")? {
                    let frame = as_object(item, line_no)?;
                    frame.check_unknown(&["d", "t", "s"], mode, &mut warnings)?;
                    frames.push(
                        Frame::new(
                            frame.num_field("d")?,
                            frame.num_field("t")?,
                            frame.num_field("s")?,
                        )
                        .map_err(|e| at(e.into()))?,
                    );
                }
                approaches.push(
                    ApproachTrace::new(id, class, frames, contacted).map_err(|e| at(e.into()))?,
                );
            }
            "clear" => {
                record.check_unknown(&["type", "id", "hours", "alarms"], mode, &mut warnings)?;
                let id = record.str_field("id")?;
                let hours = record.num_field("hours")?;
                let mut alarms = Vec::new();
                for item in record.array_field("alarms")? {
                    let alarm = as_object(item, line_no)?;
                    alarm.check_unknown(&["t", "s"], mode, &mut warnings)?;
                    alarms.push(
                        AlarmEvent::new(alarm.num_field("t")?, alarm.num_field("s")?)
                            .map_err(|e| at(e.into()))?,
                    );
                }
                segments.push(ClearSegment::new(id, hours, alarms).map_err(|e| at(e.into()))?);
            }
            "meta" => {
                record.check_unknown(&["type", "key", "value"], mode, &mut warnings)?;
                meta.insert(
                    record.str_field("key")?.to_string(),
                    record.str_field("value")?.to_string(),
                );
            }
            other => return Err(at(ParseErrorKind::UnknownRecordType(other.to_string()))),
        }
    }

    let bundle = LogBundle::new(approaches, segments, meta).map_err(|e| ParseError {
        line: 0,
        kind: e.into(),
    })?;
    Ok(ParseOutcome { bundle, warnings })
}

fn frame_value(frame: &Frame) -> Value {
    let mut map = Map::new();
    map.insert("d".into(), frame.distance_m.into());
    map.insert("t".into(), frame.time_s.into());
    map.insert("s".into(), frame.score.into());
    Value::Object(map)
}

/// Serializes a bundle back into the line-delimited format. `parse_log` on
/// the output reproduces the bundle exactly; runs are byte-identical.
pub fn write_log(bundle: &LogBundle, out: &mut impl std::io::Write) -> std::io::Result<()> {
    for (key, value) in &bundle.meta {
        let mut map = Map::new();
        map.insert("type".into(), "meta".into());
        map.insert("key".into(), key.as_str().into());
        map.insert("value".into(), value.as_str().into());
        writeln!(out, "{}", Value::Object(map))?;
    }
    for trace in &bundle.approaches {
        let mut map = Map::new();
        map.insert("type".into(), "approach".into());
        map.insert("id".into(), trace.id.as_str().into());
        map.insert("class".into(), trace.obstacle_class.label().into());
        map.insert("contacted".into(), trace.contacted.into());
        map.insert(
            "frames".into(),
            Value::Array(trace.frames.iter().map(frame_value).collect()),
        );
        writeln!(out, "{}", Value::Object(map))?;
    }
    for segment in &bundle.segments {
        let mut map = Map::new();
        map.insert("type".into(), "clear".into());
        map.insert("id".into(), segment.id.as_str().into());
        map.insert("hours".into(), segment.duration_h.into());
        map.insert(
            "alarms".into(),
            Value::Array(
                segment
                    .alarms
                    .iter()
                    .map(|a| {
                        let mut m = Map::new();
                        m.insert("t".into(), a.time_s.into());
                        m.insert("s".into(), a.score.into());
                        Value::Object(m)
                    })
                    .collect(),
            ),
        );
        writeln!(out, "{}", Value::Object(map))?;
    }
    Ok(())
}

/// Serializes a bundle to a string in the line-delimited format.
pub fn log_to_string(bundle: &LogBundle) -> String {
    let mut buf = Vec::new();
    write_log(bundle, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("log output is UTF-8")
}

/// Parses one submission file: `{"system":str,"x":num,"fp_per_h":num,"dist_m":num}`
/// per line. Constraint violations are NOT parse errors; run
/// [`crate::domain::validate_submission`] on the records afterwards.
pub fn parse_submissions(
    reader: impl BufRead,
    mode: ParseMode,
) -> Result<Vec<SubmissionRecord>, ParseError> {
    let mut records = Vec::new();
    let mut warnings = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let at = |kind: ParseErrorKind| ParseError {
            line: line_no,
            kind,
        };
        let text = line.map_err(|e| at(e.into()))?;
        if text.trim().is_empty() {
            continue;
        }
        let value: Value = serde_json::from_str(&text).map_err(|e| at(e.into()))?;
        let record = as_object(&value, line_no)?;
        record.check_unknown(&["system", "x", "fp_per_h", "dist_m"], mode, &mut warnings)?;
        records.push(SubmissionRecord {
            system_name: record.str_field("system")?.to_string(),
            x_percent: record.num_field("x")?,
            fp_rate_per_h: record.num_field("fp_per_h")?,
            min_distance_m: record.num_field("dist_m")?,
        });
    }
    Ok(records)
}
