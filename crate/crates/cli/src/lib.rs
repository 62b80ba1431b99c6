//! JSON front end for the `ramify` tool.
//!
//! A job is a JSON object naming a command (`filtration`, `herbrand`,
//! `swan`, `bound`, `verify`, `enum`) with its inputs. The result is a
//! canonical report: sorted keys, integers and `{"num","den"}` rationals
//! only, so that identical jobs give byte-identical output.

pub mod commands;
pub mod corpus;
pub mod encode;
pub mod job;
pub mod verify;

use std::collections::BTreeMap;

use ramify_core::algebra::PrecisionPolicy;
use serde_json::{json, Value};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Schema(String),
    #[error("unknown suite {0:?}")]
    UnknownSuite(String),
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Module(#[from] ramify_core::Error),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Schema(_) => "InputSchemaError",
            CliError::UnknownSuite(_) => "UnknownSuite",
            CliError::Io(_) => "IoError",
            CliError::Module(e) => e.name(),
        }
    }
}

/// Command-line settings that override or complement the job's `params`.
#[derive(Clone, Debug, Default)]
pub struct Options {
    pub precision: Option<i64>,
    pub precision_cap: Option<i64>,
    pub seed: Option<u64>,
    pub jordan_table: Option<BTreeMap<String, u64>>,
    pub exhaustive: bool,
}

impl Options {
    fn to_json(&self) -> Value {
        json!({
            "precision": self.precision,
            "precision_cap": self.precision_cap,
            "seed": self.seed,
            "jordan_table": self.jordan_table,
            "exhaustive": self.exhaustive,
        })
    }
}

/// Settings resolved from the job and the options.
#[derive(Clone, Debug)]
pub struct Context {
    pub policy: PrecisionPolicy,
    pub seed: u64,
    pub jordan: BTreeMap<String, u64>,
    pub exhaustive: bool,
}

impl Context {
    pub fn new(job: &job::JobSpec, opts: &Options) -> Result<Self, CliError> {
        let mut policy = PrecisionPolicy::default();
        if let Some(cap) = opts.precision_cap {
            policy.cap = cap;
        }
        if let Some(p) = opts.precision.or(job.params.precision) {
            policy.initial = p;
        }
        if policy.initial < 1 || policy.cap < policy.initial {
            return Err(CliError::Schema(format!(
                "precision {} must be positive and at most the cap {}",
                policy.initial, policy.cap
            )));
        }
        let mut jordan = job.params.jordan.clone().unwrap_or_default();
        if let Some(t) = &opts.jordan_table {
            jordan.extend(t.clone());
        }
        Ok(Context {
            policy,
            seed: opts.seed.or(job.params.seed).unwrap_or(0),
            jordan,
            exhaustive: opts.exhaustive || job.params.exhaustive.unwrap_or(false),
        })
    }
}

/// A finished run: the JSON to print and the process exit code.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub report: Value,
    pub exit_code: i32,
}

impl Outcome {
    pub fn text(&self) -> String {
        encode::canonical(&self.report)
    }

    fn error(e: &CliError) -> Self {
        Outcome {
            report: json!({"error": {"kind": e.kind(), "message": e.to_string()}}),
            exit_code: 1,
        }
    }
}

/// Runs a job given as JSON text.
pub fn run_text(input: &str, opts: &Options) -> Outcome {
    match serde_json::from_str::<Value>(input) {
        Ok(v) => run_value(v, opts),
        Err(e) => Outcome::error(&CliError::Schema(format!("malformed JSON: {e}"))),
    }
}

pub fn run_value(input: Value, opts: &Options) -> Outcome {
    let job: job::JobSpec = match serde_json::from_value(input.clone()) {
        Ok(j) => j,
        Err(e) => return Outcome::error(&CliError::Schema(e.to_string())),
    };
    let digest = encode::digest(&json!({"job": input, "options": opts.to_json()}));
    match run_job(&job, opts) {
        Ok((results, warnings, failed)) => Outcome {
            report: json!({
                "command": job.command,
                "inputs_digest": digest,
                "results": results,
                "warnings": warnings,
                "version": VERSION,
            }),
            exit_code: if failed { 2 } else { 0 },
        },
        Err(e) => Outcome::error(&e),
    }
}

/// Runs one verification suite over the built-in corpus.
pub fn run_suite(suite: &str, opts: &Options) -> Outcome {
    run_value(json!({"command": "verify", "suite": suite}), opts)
}

type JobResult = (Value, Vec<String>, bool);

fn run_job(job: &job::JobSpec, opts: &Options) -> Result<JobResult, CliError> {
    let ctx = Context::new(job, opts)?;
    let mut warnings = Vec::new();
    let (results, failed) = match job.command.as_str() {
        "filtration" => (commands::filtration(job, &ctx)?, false),
        "herbrand" => (commands::herbrand(job, &ctx)?, false),
        "swan" => (commands::swan(job, &ctx, &mut warnings)?, false),
        "bound" => (commands::bound(job, &ctx, &mut warnings)?, false),
        "enum" => (commands::enumerate(job, &ctx)?, false),
        "verify" => {
            let suite = job
                .suite
                .as_deref()
                .ok_or_else(|| CliError::Schema("verify needs a suite".into()))?;
            let (v, passed) = verify::run(suite, &ctx, &mut warnings)?;
            (v, !passed)
        }
        other => return Err(CliError::Schema(format!("unknown command {other:?}"))),
    };
    Ok((results, warnings, failed))
}
