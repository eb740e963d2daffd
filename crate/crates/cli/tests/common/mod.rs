#![allow(dead_code)]

use std::process::Command;

use jsonschema::{Draft, JSONSchema};
use serde_json::Value;

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Run {
    pub fn record(&self) -> Value {
        serde_json::from_str(&self.stdout).unwrap_or_else(|e| panic!("stdout is not json ({e}): {}", self.stdout))
    }

    pub fn outputs(&self) -> Value {
        self.record()["outputs"].clone()
    }
}

pub fn coha(args: &str) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_coha"))
        .args(args.split_whitespace())
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().expect("exited"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

pub fn schema() -> JSONSchema {
    let text = include_str!("../../schemas/record.schema.json");
    let value: Value = serde_json::from_str(text).unwrap();
    JSONSchema::options()
        .with_draft(Draft::Draft202012)
        .compile(&value)
        .expect("schema compiles")
}

pub fn schema_errors(schema: &JSONSchema, record: &Value) -> Vec<String> {
    match schema.validate(record) {
        Ok(()) => Vec::new(),
        Err(errors) => errors.map(|e| format!("{} at {}", e, e.instance_path)).collect(),
    }
}

/// The record text without the wall-time line.
pub fn without_wall_time(text: &str) -> String {
    text.lines()
        .filter(|l| !l.trim_start().starts_with("\"wall_time_seconds\""))
        .collect::<Vec<_>>()
        .join("\n")
}
