//! `coha`: runs the workbench computations and emits one JSON record per run.

mod commands;
mod record;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use commands::{CommvarCmd, HallCmd, McCmd, SeriesCmd};
use record::{csv_text, write_to, ErrorObject, Outcome, Record, Status, TOOL, VERSION};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "coha", version, about = "Exact counts for commuting varieties, Hall algebras and Maurer-Cartan groupoids")]
struct Cli {
    /// csv is available for flat tables only (counts and structure constants).
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Write the payload here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Size of the worker pool.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    #[command(subcommand)]
    Commvar(CommvarCmd),
    #[command(subcommand)]
    Series(SeriesCmd),
    #[command(subcommand)]
    Hall(HallCmd),
    #[command(subcommand)]
    Mc(McCmd),
}

fn inputs_of<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("arguments serialize")
}

impl Command {
    fn describe(&self) -> (String, Value) {
        use commands::*;
        let (group, name, inputs) = match self {
            Command::Commvar(c) => match c {
                CommvarCmd::Count(a) => ("commvar", "count", inputs_of(a)),
                CommvarCmd::Interpolate(a) => ("commvar", "interpolate", inputs_of(a)),
            },
            Command::Series(c) => match c {
                SeriesCmd::Feitfine(a) => ("series", "feitfine", inputs_of(a)),
                SeriesCmd::Pbw(a) => ("series", "pbw", inputs_of(a)),
                SeriesCmd::PowerStructure(a) => ("series", "power-structure", inputs_of(a)),
            },
            Command::Hall(c) => match c {
                HallCmd::Table(a) => ("hall", "table", inputs_of(a)),
                HallCmd::Product(a) => ("hall", "product", inputs_of(a)),
                HallCmd::Assoc(a) => ("hall", "assoc", inputs_of(a)),
                HallCmd::Commutators(a) => ("hall", "commutators", inputs_of(a)),
            },
            Command::Mc(c) => match c {
                McCmd::Card(a) => ("mc", "card", inputs_of(a)),
                McCmd::Compare(a) => ("mc", "compare", inputs_of(a)),
                McCmd::Fibration(a) => ("mc", "fibration", inputs_of(a)),
            },
        };
        (format!("{group} {name}"), inputs)
    }

    fn run(&self) -> coha_core::Result<Outcome> {
        match self {
            Command::Commvar(c) => commands::commvar(c),
            Command::Series(c) => commands::series(c),
            Command::Hall(c) => commands::hall(c),
            Command::Mc(c) => commands::mc(c),
        }
    }
}

fn error_record(command: String, inputs: Value, options: Value, error: ErrorObject, started: Instant) -> Record {
    Record {
        tool: TOOL,
        version: VERSION,
        command,
        inputs,
        options,
        status: error.kind,
        exit_code: error.kind.exit_code(),
        outputs: None,
        error: Some(error),
        wall_time_seconds: started.elapsed().as_secs_f64(),
    }
}

fn finish(record: &Record, path: Option<&std::path::Path>) -> ExitCode {
    if let Err(e) = write_to(path, &record.to_json()) {
        eprintln!("coha: cannot write output: {e}");
        return ExitCode::from(1);
    }
    ExitCode::from(record.exit_code as u8)
}

fn main() -> ExitCode {
    let started = Instant::now();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion)
                || e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand
            {
                e.exit();
            }
            let args: Vec<String> = std::env::args().skip(1).collect();
            let err = ErrorObject {
                kind: Status::Precondition,
                message: e.render().to_string().trim().to_string(),
            };
            return finish(&error_record(String::new(), json!({ "argv": args }), Value::Null, err, started), None);
        }
    };
    let (command, inputs) = cli.command.describe();
    let options = json!({ "format": cli.format, "threads": cli.threads });
    let path = cli.output.as_deref();
    let fail = |kind: Status, message: String| {
        let err = ErrorObject { kind, message };
        finish(&error_record(command.clone(), inputs.clone(), options.clone(), err, started), path)
    };

    if let Some(n) = cli.threads {
        if n == 0 {
            return fail(Status::Precondition, "--threads must be positive".into());
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            return fail(Status::Error, format!("cannot start the worker pool: {e}"));
        }
    }

    let outcome = match cli.command.run() {
        Ok(o) => o,
        Err(e) => {
            let err = ErrorObject::from(&e);
            return fail(err.kind, err.message);
        }
    };
    let (status, error) = match &outcome.failed_check {
        None => (Status::Ok, None),
        Some(m) => (
            Status::CheckFailed,
            Some(ErrorObject {
                kind: Status::CheckFailed,
                message: m.clone(),
            }),
        ),
    };
    let csv = match (cli.format, &outcome.table) {
        (Format::Json, _) => None,
        (Format::Csv, Some((header, rows))) => match csv_text(header, rows) {
            Ok(t) => Some(t),
            Err(e) => return fail(Status::Error, format!("cannot format csv: {e}")),
        },
        (Format::Csv, None) => {
            return fail(
                Status::Precondition,
                format!("{command} has no flat table; csv is available for counts and structure constants"),
            )
        }
    };
    let record = Record {
        tool: TOOL,
        version: VERSION,
        command,
        inputs,
        options,
        status,
        exit_code: status.exit_code(),
        outputs: Some(outcome.outputs),
        error,
        wall_time_seconds: started.elapsed().as_secs_f64(),
    };
    match csv {
        None => finish(&record, path),
        Some(table) => {
            // the table is the payload; the run record goes to stderr
            eprint!("{}", record.to_json());
            if let Err(e) = write_to(path, &table) {
                eprintln!("coha: cannot write output: {e}");
                return ExitCode::from(1);
            }
            ExitCode::from(record.exit_code as u8)
        }
    }
}
