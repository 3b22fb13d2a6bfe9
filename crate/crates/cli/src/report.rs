//! Verification reports and their serialized forms.
//!
//! JSON objects carry `command`, `checked`, `counterexamples`, `elapsed_ms`
//! and `config`, in that order. Every number is written as a decimal string.
//! CSV output lists counterexamples only, under an `input,expected,actual`
//! header that is always present.

use std::io;
use std::time::Duration;

use serde::{Serialize, Serializer};

use collatz_lab::Counterexample;

use crate::args::Format;

fn decimal<S: Serializer, T: ToString>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CounterexampleRow {
    #[serde(serialize_with = "decimal")]
    pub input: u64,
    pub expected: String,
    pub actual: String,
}

impl From<&Counterexample> for CounterexampleRow {
    fn from(c: &Counterexample) -> Self {
        CounterexampleRow {
            input: c.input,
            expected: c.expected.clone(),
            actual: c.actual.clone(),
        }
    }
}

/// The settings a sweep ran with, echoed into its report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConfigEcho {
    pub target: String,
    #[serde(serialize_with = "decimal")]
    pub start: u64,
    #[serde(serialize_with = "decimal")]
    pub max: u64,
    #[serde(serialize_with = "decimal")]
    pub step_limit: u64,
    #[serde(serialize_with = "decimal")]
    pub workers: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub command: String,
    #[serde(serialize_with = "decimal")]
    pub checked: u64,
    pub counterexamples: Vec<CounterexampleRow>,
    #[serde(serialize_with = "decimal")]
    pub elapsed_ms: u128,
    pub config: ConfigEcho,
}

impl VerificationReport {
    pub fn new(
        command: impl Into<String>,
        sweep: &collatz_lab::SweepReport,
        elapsed: Duration,
        config: ConfigEcho,
    ) -> Self {
        VerificationReport {
            command: command.into(),
            checked: sweep.checked,
            counterexamples: sweep.counterexamples.iter().map(Into::into).collect(),
            elapsed_ms: elapsed.as_millis(),
            config,
        }
    }

    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

// Text output lists at most this many counterexamples.
const TEXT_SHOWN: usize = 20;

pub fn export_report(r: &VerificationReport, format: Format) -> io::Result<Vec<u8>> {
    match format {
        Format::Json => {
            let mut out = serde_json::to_vec_pretty(r).map_err(io::Error::other)?;
            out.push(b'\n');
            Ok(out)
        }
        Format::Csv => {
            let mut w = csv::WriterBuilder::new()
                .has_headers(false)
                .from_writer(Vec::new());
            w.write_record(["input", "expected", "actual"])?;
            for c in &r.counterexamples {
                w.serialize(c).map_err(io::Error::other)?;
            }
            w.into_inner().map_err(|e| io::Error::other(e.to_string()))
        }
        Format::Text => {
            let mut s = format!(
                "{}: checked {}, counterexamples {}: {}\n",
                r.command,
                r.checked,
                r.counterexamples.len(),
                if r.passed() { "PASS" } else { "FAIL" }
            );
            for c in r.counterexamples.iter().take(TEXT_SHOWN) {
                s.push_str(&format!(
                    "  {}: expected {}, got {}\n",
                    c.input, c.expected, c.actual
                ));
            }
            if r.counterexamples.len() > TEXT_SHOWN {
                s.push_str(&format!(
                    "  ... {} more\n",
                    r.counterexamples.len() - TEXT_SHOWN
                ));
            }
            Ok(s.into_bytes())
        }
    }
}
