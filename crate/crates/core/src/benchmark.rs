//! Embedded human train-driver detection benchmark.
//!
//! Median distances (in meters) at which human drivers detect objects on
//! the track, compiled from published visibility studies, a fluorescent
//! test-object study and accident statistics. Rows reported only as a bound
//! ("<60", ">750") carry the bound direction so comparisons can stay
//! conservative.

use thiserror::Error;

/// Lighting condition a benchmark row was measured under. `Any` rows match
/// every filter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Condition {
    Day,
    Night,
    Any,
}

impl Condition {
    pub fn label(&self) -> &'static str {
        match self {
            Condition::Day => "day",
            Condition::Night => "night",
            Condition::Any => "any",
        }
    }

    pub fn matches(&self, filter: Condition) -> bool {
        *self == Condition::Any || *self == filter
    }
}

/// How a row's median is to be read.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    /// The median itself.
    Exact,
    /// Only "median < value" is known; `value` is an upper bound on the
    /// human performance, so beating it beats the human for sure.
    AtMost,
    /// Only "median > value" is known; the human may be better than the
    /// bound, so a comparison against it is bound-limited.
    AtLeast,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchmarkRow {
    pub object: &'static str,
    pub condition: Condition,
    pub bound: Bound,
    pub median_m: f64,
    pub source: &'static str,
}

const VISIBILITY: &str = "visibility-study";
const FLUORESCENT: &str = "fluorescent-object-study";
const MULTI_SENSOR: &str = "multi-sensor-study";
const ACCIDENTS: &str = "accident-statistics";

/// The full embedded table.
pub const HUMAN_BENCHMARK_ROWS: &[BenchmarkRow] = &[
    BenchmarkRow {
        object: "0.4 m2 and 2 m2 object, 30% contrast",
        condition: Condition::Day,
        bound: Bound::AtLeast,
        median_m: 750.0,
        source: VISIBILITY,
    },
    BenchmarkRow {
        object: "2 m2 object, 8% contrast",
        condition: Condition::Day,
        bound: Bound::Exact,
        median_m: 500.0,
        source: VISIBILITY,
    },
    BenchmarkRow {
        object: "0.4 m2 object, 8% contrast",
        condition: Condition::Day,
        bound: Bound::Exact,
        median_m: 240.0,
        source: VISIBILITY,
    },
    BenchmarkRow {
        object: "2 m2 object, 30% contrast",
        condition: Condition::Night,
        bound: Bound::Exact,
        median_m: 180.0,
        source: VISIBILITY,
    },
    BenchmarkRow {
        object: "0.4 m2 object, 30% contrast",
        condition: Condition::Night,
        bound: Bound::Exact,
        median_m: 60.0,
        source: VISIBILITY,
    },
    BenchmarkRow {
        object: "0.4 m2 and 2 m2 object, 8% contrast",
        condition: Condition::Night,
        bound: Bound::AtMost,
        median_m: 60.0,
        source: VISIBILITY,
    },
    BenchmarkRow {
        object: "fluorescent object 40x40x40 cm",
        condition: Condition::Night,
        bound: Bound::Exact,
        median_m: 250.0,
        source: FLUORESCENT,
    },
    BenchmarkRow {
        object: "fluorescent object 20x20x20 cm",
        condition: Condition::Night,
        bound: Bound::Exact,
        median_m: 175.0,
        source: FLUORESCENT,
    },
    BenchmarkRow {
        object: "fluorescent object 10x10x10 cm",
        condition: Condition::Night,
        bound: Bound::Exact,
        median_m: 50.0,
        source: FLUORESCENT,
    },
    BenchmarkRow {
        object: "fluorescent object 5x5x5 cm",
        condition: Condition::Night,
        bound: Bound::AtMost,
        median_m: 25.0,
        source: FLUORESCENT,
    },
    BenchmarkRow {
        object: "person in safety jacket",
        condition: Condition::Day,
        bound: Bound::Exact,
        median_m: 400.0,
        source: MULTI_SENSOR,
    },
    BenchmarkRow {
        object: "passenger car",
        condition: Condition::Day,
        bound: Bound::Exact,
        median_m: 300.0,
        source: MULTI_SENSOR,
    },
    BenchmarkRow {
        object: "person",
        condition: Condition::Day,
        bound: Bound::Exact,
        median_m: 240.0,
        source: MULTI_SENSOR,
    },
    BenchmarkRow {
        object: "passenger car",
        condition: Condition::Night,
        bound: Bound::AtMost,
        median_m: 60.0,
        source: MULTI_SENSOR,
    },
    BenchmarkRow {
        object: "person in safety jacket",
        condition: Condition::Night,
        bound: Bound::AtMost,
        median_m: 60.0,
        source: MULTI_SENSOR,
    },
    BenchmarkRow {
        object: "person",
        condition: Condition::Night,
        bound: Bound::AtMost,
        median_m: 60.0,
        source: MULTI_SENSOR,
    },
    BenchmarkRow {
        object: "trees",
        condition: Condition::Any,
        bound: Bound::Exact,
        median_m: 60.0,
        source: ACCIDENTS,
    },
    BenchmarkRow {
        object: "fallen rocks",
        condition: Condition::Any,
        bound: Bound::Exact,
        median_m: 30.0,
        source: ACCIDENTS,
    },
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("no benchmark row for object {object:?} under condition {condition:?}")]
pub struct BenchmarkLookupError {
    pub object: String,
    pub condition: String,
}

/// The preloaded human reference table.
#[derive(Debug, Clone)]
pub struct HumanBenchmark {
    rows: Vec<BenchmarkRow>,
}

impl Default for HumanBenchmark {
    fn default() -> Self {
        HumanBenchmark {
            rows: HUMAN_BENCHMARK_ROWS.to_vec(),
        }
    }
}

impl HumanBenchmark {
    pub fn rows(&self) -> &[BenchmarkRow] {
        &self.rows
    }

    /// The row for `object` under the condition filter. `Any` rows match
    /// either filter value.
    pub fn find(
        &self,
        object: &str,
        condition: Condition,
    ) -> Result<&BenchmarkRow, BenchmarkLookupError> {
        self.rows
            .iter()
            .find(|row| row.object == object && row.condition.matches(condition))
            .ok_or_else(|| BenchmarkLookupError {
                object: object.to_string(),
                condition: condition.label().to_string(),
            })
    }
}
