use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ramify_cli::{run_suite, run_text, Options, Outcome};

#[derive(Parser)]
#[command(
    name = "ramify",
    version,
    about = "Ramification filtrations, Swan conductors and inertia bounds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a JSON job read from a file or stdin.
    Run {
        /// Job file; stdin when omitted.
        #[arg(long)]
        input: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Run a property suite over the built-in corpus.
    Verify {
        /// lemma_pullback, hasse_arf, transitivity, claim1, claim2, counts or all.
        suite: String,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    /// Report file; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Initial series precision.
    #[arg(long)]
    precision: Option<i64>,
    #[arg(long)]
    seed: Option<u64>,
    /// JSON object mapping ranks to Jordan constants.
    #[arg(long)]
    jordan_table: Option<PathBuf>,
    /// Enumerate beyond the default sizes.
    #[arg(long)]
    exhaustive: bool,
}

impl Common {
    fn options(&self) -> Result<Options, String> {
        let precision_cap = match std::env::var("RAMIFY_PRECISION_CAP") {
            Ok(v) => Some(
                v.parse()
                    .map_err(|_| format!("RAMIFY_PRECISION_CAP={v:?} is not an integer"))?,
            ),
            Err(_) => None,
        };
        let jordan_table = match &self.jordan_table {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| format!("{}: {e}", path.display()))?;
                Some(
                    serde_json::from_str::<BTreeMap<String, u64>>(&text)
                        .map_err(|e| format!("{}: {e}", path.display()))?,
                )
            }
            None => None,
        };
        Ok(Options {
            precision: self.precision,
            precision_cap,
            seed: self.seed,
            jordan_table,
            exhaustive: self.exhaustive,
        })
    }
}

fn write_atomic(path: &Path, text: &str) -> std::io::Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    let mut f = std::fs::File::create(&tmp)?;
    f.write_all(text.as_bytes())?;
    f.write_all(b"\n")?;
    f.sync_all()?;
    std::fs::rename(&tmp, path)
}

fn emit(outcome: &Outcome, output: Option<&Path>) -> ExitCode {
    let text = outcome.text();
    let written = match output {
        Some(path) => write_atomic(path, &text),
        None => writeln!(std::io::stdout(), "{text}"),
    };
    if let Err(e) = written {
        eprintln!("ramify: cannot write report: {e}");
        return ExitCode::from(1);
    }
    ExitCode::from(outcome.exit_code as u8)
}

fn usage_error(msg: &str) -> ExitCode {
    let report = serde_json::json!({"error": {"kind": "InputSchemaError", "message": msg}});
    println!("{report}");
    ExitCode::from(1)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { input, common } => {
            let opts = match common.options() {
                Ok(o) => o,
                Err(e) => return usage_error(&e),
            };
            let text = match &input {
                Some(path) => {
                    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
                }
                None => {
                    let mut s = String::new();
                    std::io::stdin()
                        .read_to_string(&mut s)
                        .map(|_| s)
                        .map_err(|e| format!("stdin: {e}"))
                }
            };
            match text {
                Ok(t) => emit(&run_text(&t, &opts), common.output.as_deref()),
                Err(e) => usage_error(&e),
            }
        }
        Command::Verify { suite, common } => match common.options() {
            Ok(opts) => emit(&run_suite(&suite, &opts), common.output.as_deref()),
            Err(e) => usage_error(&e),
        },
    }
}
