//! The JSON run record and the exit-code mapping.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use coha_core::Error;
use serde::Serialize;
use serde_json::Value;

pub const TOOL: &str = "coha";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    Precondition,
    CheckFailed,
    Infeasible,
    Error,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Error => 1,
            Status::Precondition => 2,
            Status::CheckFailed => 3,
            Status::Infeasible => 4,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ErrorObject {
    pub kind: Status,
    pub message: String,
}

impl From<&Error> for ErrorObject {
    fn from(e: &Error) -> Self {
        let kind = match e {
            Error::Precondition(_) | Error::Missing(_) => Status::Precondition,
            Error::Infeasible(_) => Status::Infeasible,
            Error::CheckFailed(_) => Status::CheckFailed,
            Error::OutsideWindow { .. } => Status::Error,
        };
        ErrorObject {
            kind,
            message: e.to_string(),
        }
    }
}

/// What a subcommand hands back to the dispatcher.
pub struct Outcome {
    pub outputs: Value,
    /// Header and rows, for commands with a flat table.
    pub table: Option<(Vec<&'static str>, Vec<Vec<String>>)>,
    /// Set when a checked identity did not hold; the record is still emitted.
    pub failed_check: Option<String>,
}

impl Outcome {
    pub fn new(outputs: impl Serialize) -> Self {
        Outcome {
            outputs: serde_json::to_value(outputs).expect("outputs serialize"),
            table: None,
            failed_check: None,
        }
    }

    pub fn check(mut self, holds: bool, message: impl Into<String>) -> Self {
        if !holds {
            self.failed_check = Some(message.into());
        }
        self
    }
}

#[derive(Debug, Serialize)]
pub struct Record {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub inputs: Value,
    pub options: Value,
    pub status: Status,
    pub exit_code: i32,
    pub outputs: Option<Value>,
    pub error: Option<ErrorObject>,
    pub wall_time_seconds: f64,
}

impl Record {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("record serializes");
        s.push('\n');
        s
    }
}

pub fn write_to(path: Option<&Path>, text: &str) -> io::Result<()> {
    match path {
        Some(p) => fs::write(p, text),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()
        }
    }
}

pub fn csv_text(header: &[&str], rows: &[Vec<String>]) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv of utf-8 fields"))
}
