//! `germdyn`: classify germs, walk blow-ups and compute normal forms from the shell.

mod job;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use germdyn::{Error, Germ};
use job::{check_expectations, Command, Format, JobSpec, DEFAULT_TRUNC};

const EXIT_HELP: &str = "\
Exit status:
  0  success
  1  other failure (I/O, step limit, arithmetic)
  2  parse error in a germ, scalar, step list or job file
  3  precondition failure (wrong germ type, point not fixed, not prepared)
  4  truncation exhausted; raise -N
  5  unsupported or undecidable in the given coordinates
  6  a job's expectations did not hold";

#[derive(Parser)]
#[command(name = "germdyn", version, about = "Exact local dynamics of holomorphic germs of (C^2, 0)", after_help = EXIT_HELP)]
struct Cli {
    /// Truncation order N.
    #[arg(short = 'N', global = true, value_name = "ORDER")]
    order: Option<u32>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Blow-up limit for rigidify.
    #[arg(long, global = true, value_name = "K")]
    max_steps: Option<u32>,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args)]
struct GermArg {
    /// A germ such as "(2z + w^2, z w)", or a file containing one.
    germ: String,
}

#[derive(Subcommand)]
enum Cmd {
    /// Germ type, eigenvalue position, rigid class and first attraction rates.
    Classify(GermArg),
    /// Attraction rates c(f^n), checked against c_inf when an eigen-weight exists.
    Rates {
        #[command(flatten)]
        g: GermArg,
        #[arg(long, default_value_t = 4)]
        iterates: u32,
    },
    /// Eigen-weight of a germ whose components are monomials times units.
    Eigen(GermArg),
    /// Induced map on the exceptional line of the blow-up at the origin.
    Exceptional(GermArg),
    /// Lift through a list of blow-ups, e.g. --steps z:0,w:0.
    Walk {
        #[command(flatten)]
        g: GermArg,
        #[arg(long)]
        steps: String,
    },
    /// Prepare a semi-superattracting germ and blow up until it is rigid.
    Rigidify(GermArg),
    /// Stable and unstable invariant curves.
    Curves(GermArg),
    /// Conjugate the first component to its one-variable normal form.
    FirstAction(GermArg),
    /// Full normal form with conjugacy records and divergence summaries.
    NormalForm(GermArg),
    /// Run job files.
    Run {
        #[arg(required = true)]
        jobs: Vec<PathBuf>,
    },
}

#[derive(Debug)]
pub enum CliError {
    Io(String),
    Parse(String),
    Core(Error),
    Expectations(Vec<String>),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            e @ Error::Parse { .. } => CliError::Parse(e.to_string()),
            other => CliError::Core(other),
        }
    }
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Expectations(_) => 6,
            CliError::Core(e) => match e {
                Error::Parse { .. } => 2,
                Error::Precondition(_)
                | Error::NotDominant(_)
                | Error::NotPrepared(_)
                | Error::NonzeroConstantTerm
                | Error::PointNotFixed { .. }
                | Error::IndeterminateLift(_)
                | Error::CommonZero(_)
                | Error::IncompatibleFields { .. } => 3,
                Error::TruncationExhausted(_) => 4,
                Error::Unsupported(_) | Error::Undecidable(_) => 5,
                _ => 1,
            },
        }
    }

    fn kind(&self) -> &'static str {
        match self.code() {
            2 => "parse",
            3 => "precondition",
            4 => "truncation",
            5 => "unsupported",
            6 => "expectation",
            _ => "error",
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Io(m) | CliError::Parse(m) => m.clone(),
            CliError::Core(e) => e.to_string(),
            CliError::Expectations(f) => f.join("; "),
        }
    }
}

/// Inline text, or the contents of a file when the argument names one.
fn germ_source(arg: &str) -> Result<String, CliError> {
    let p = Path::new(arg);
    if !arg.trim_start().starts_with('(') && !arg.contains('=') && p.is_file() {
        return std::fs::read_to_string(p)
            .map(|s| s.trim().to_string())
            .map_err(|e| CliError::Io(format!("{arg}: {e}")));
    }
    Ok(arg.to_string())
}

fn execute(job: &JobSpec) -> (Value, Result<(), CliError>) {
    let mut out = Map::new();
    out.insert("command".into(), json!(job.command.name()));
    out.insert("germ".into(), json!(job.germ));
    out.insert("N".into(), json!(job.trunc));
    if let Some(c) = &job.claim {
        out.insert("claim".into(), json!(c));
    }
    let outcome = Germ::parse(&job.germ, job.trunc)
        .map_err(CliError::from)
        .and_then(|g| report::run(job, &g));
    let status = match outcome {
        Ok(result) => {
            let failures = job.expect.as_ref().map(|e| check_expectations(e, &result)).unwrap_or_default();
            if job.expect.is_some() {
                out.insert("expectations_hold".into(), json!(failures.is_empty()));
            }
            out.insert("result".into(), result);
            if failures.is_empty() {
                Ok(())
            } else {
                Err(CliError::Expectations(failures))
            }
        }
        Err(e) => {
            out.insert("error".into(), json!({"kind": e.kind(), "message": e.message()}));
            Err(e)
        }
    };
    (Value::Object(out), status)
}

fn render_text(v: &Value) -> String {
    let mut lines = Vec::new();
    let Value::Object(top) = v else { return v.to_string() };
    for key in ["claim", "command", "germ", "N"] {
        if let Some(x) = top.get(key) {
            lines.push(format!("{key}: {}", plain(x)));
        }
    }
    for section in ["result", "error"] {
        if let Some(Value::Object(m)) = top.get(section) {
            for (k, x) in m {
                lines.push(format!("  {k}: {}", plain(x)));
            }
        }
    }
    if let Some(x) = top.get("expectations_hold") {
        lines.push(format!("expectations_hold: {x}"));
    }
    lines.join("\n")
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn emit(v: &Value, format: Format) {
    use std::io::Write;
    let text = match format {
        Format::Json => serde_json::to_string_pretty(v).expect("plain JSON"),
        Format::Text => render_text(v),
    };
    // a closed pipe downstream is not an error of ours
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let trunc = cli.order.unwrap_or(DEFAULT_TRUNC);
    let inline = |command: Command, g: &GermArg| -> Result<JobSpec, CliError> {
        Ok(JobSpec::inline(command, germ_source(&g.germ)?, trunc))
    };
    let jobs: Result<Vec<JobSpec>, CliError> = match &cli.command {
        Cmd::Classify(g) => inline(Command::Classify, g).map(|j| vec![j]),
        Cmd::Rates { g, iterates } => inline(Command::Rates, g).map(|mut j| {
            j.iterates = Some(*iterates);
            vec![j]
        }),
        Cmd::Eigen(g) => inline(Command::Eigen, g).map(|j| vec![j]),
        Cmd::Exceptional(g) => inline(Command::Exceptional, g).map(|j| vec![j]),
        Cmd::Walk { g, steps } => inline(Command::Walk, g).map(|mut j| {
            j.steps = Some(steps.clone());
            vec![j]
        }),
        Cmd::Rigidify(g) => inline(Command::Rigidify, g).map(|j| vec![j]),
        Cmd::Curves(g) => inline(Command::Curves, g).map(|j| vec![j]),
        Cmd::FirstAction(g) => inline(Command::FirstAction, g).map(|j| vec![j]),
        Cmd::NormalForm(g) => inline(Command::NormalForm, g).map(|j| vec![j]),
        Cmd::Run { jobs } => jobs.iter().map(|p| JobSpec::load(p)).collect(),
    };
    let jobs = match jobs {
        Ok(j) => j,
        Err(e) => {
            eprintln!("error: {}", e.message());
            return ExitCode::from(e.code());
        }
    };
    let mut code = 0u8;
    for mut job in jobs {
        // flags given on the command line override the job file
        if let Some(n) = cli.order {
            job.trunc = n;
        }
        if let Some(k) = cli.max_steps {
            job.max_steps = Some(k);
        }
        let format = cli.format.or(job.format).unwrap_or(Format::Text);
        if let Err(e) = job.validate() {
            eprintln!("error: {}", e.message());
            return ExitCode::from(e.code());
        }
        let (report, status) = execute(&job);
        emit(&report, format);
        if let Err(e) = status {
            eprintln!("error: {}", e.message());
            if code == 0 {
                code = e.code();
            }
        }
    }
    ExitCode::from(code)
}
