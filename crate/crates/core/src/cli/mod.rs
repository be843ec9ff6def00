//! Command-line front end.
//!
//! Every verb runs a [`Scenario`], either the built-in defaults or a JSON
//! config given with `--config`. All artifacts are computed before anything
//! is written, and the files appear together or not at all.
//!
//! Exit codes: 0 success, 2 invalid arguments or config, 3 solver or I/O
//! failure. Failures print a JSON object on stderr.

pub mod output;
pub mod presets;
pub mod scenario;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::Error;
use crate::propagation::Arrangement;
pub use output::{config_hash, write_artifacts, Artifact};
pub use presets::PresetName;
pub use scenario::{Command, OutputFormat, Scenario};

#[derive(Debug, Parser)]
#[command(name = "eit-bleach", version, about = "Photon-assisted bleaching in Λ media")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
    /// Scenario config (JSON). Without it the built-in defaults run.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    /// Noise seed (mb-filter).
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ArrangementArg {
    Uniform,
    Copropagating,
}

impl From<ArrangementArg> for Arrangement {
    fn from(a: ArrangementArg) -> Self {
        match a {
            ArrangementArg::Uniform => Arrangement::UniformPump,
            ArrangementArg::Copropagating => Arrangement::Copropagating,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Verb {
    /// Steady-state absorption spectra versus two-photon detuning.
    Spectrum,
    /// Normalised absorption versus signal intensity.
    BleachCurve,
    /// Intensity profiles through the medium.
    Propagate {
        #[arg(long, value_enum)]
        arrangement: Option<ArrangementArg>,
    },
    /// Transmittance versus input intensity.
    Transmittance {
        #[arg(long, value_enum)]
        arrangement: Option<ArrangementArg>,
    },
    /// Maxwell–Bloch propagation of a noisy pulse.
    MbFilter,
    /// Material constants and required length for a filter.
    Design {
        #[arg(long, value_enum)]
        preset: Option<PresetName>,
    },
}

impl Verb {
    fn command(&self) -> Command {
        match self {
            Verb::Spectrum => Command::Spectrum,
            Verb::BleachCurve => Command::BleachCurve,
            Verb::Propagate { .. } => Command::Propagate,
            Verb::Transmittance { .. } => Command::Transmittance,
            Verb::MbFilter => Command::MbFilter,
            Verb::Design { .. } => Command::Design,
        }
    }
}

/// Machine-readable failure report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CliError {
    #[serde(skip)]
    pub code: i32,
    pub error: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    pub message: String,
}

impl CliError {
    fn schema(field: Option<String>, message: impl Into<String>) -> Self {
        Self { code: 2, error: "invalid_config", field, message: message.into() }
    }

    fn from_error(e: Error) -> Self {
        match e {
            Error::Config { field, message } => Self::schema(Some(field), message),
            other => Self { code: 3, error: "solver_failure", field: None, message: other.to_string() },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("error report serialises")
    }
}

/// Parses a JSON config for `command`. A missing `"command"` is filled in;
/// a different one is rejected.
pub fn parse_scenario(command: Command, text: &str) -> Result<Scenario, CliError> {
    let mut value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| CliError::schema(None, format!("config is not valid JSON: {e}")))?;
    let obj = value
        .as_object_mut()
        .ok_or_else(|| CliError::schema(None, "config must be a JSON object"))?;
    match obj.get("command") {
        None => {
            obj.insert("command".into(), command.tag().into());
        }
        Some(serde_json::Value::String(c)) if c == command.tag() => {}
        Some(other) => {
            return Err(CliError::schema(
                Some("command".into()),
                format!("config is for {other}, not {}", command.tag()),
            ))
        }
    }
    serde_json::from_value(value).map_err(|e| CliError::schema(None, e.to_string()))
}

/// Applies command-line overrides on top of the config.
fn apply_overrides(scenario: &mut Scenario, verb: &Verb, seed: Option<u64>) {
    match (scenario, verb) {
        (Scenario::Propagate(s), Verb::Propagate { arrangement: Some(a) }) => s.arrangement = (*a).into(),
        (Scenario::Transmittance(s), Verb::Transmittance { arrangement: Some(a) }) => s.arrangement = (*a).into(),
        (Scenario::Design(s), Verb::Design { preset: Some(p) }) => s.preset = *p,
        (Scenario::MbFilter(s), _) => {
            if let Some(seed) = seed {
                s.signal.seed = seed;
            }
        }
        _ => {}
    }
}

/// Canonical config bytes: the scenario after overrides, compact JSON.
pub fn canonical_bytes(scenario: &Scenario) -> Vec<u8> {
    serde_json::to_vec(scenario).expect("scenario serialises")
}

fn run_parsed(cli: Cli) -> Result<Vec<PathBuf>, CliError> {
    let command = cli.verb.command();
    let mut scenario = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                CliError::schema(Some("config".into()), format!("cannot read {}: {e}", path.display()))
            })?;
            parse_scenario(command, &text)?
        }
        None => Scenario::default_for(command),
    };
    apply_overrides(&mut scenario, &cli.verb, cli.seed);
    scenario.validate().map_err(|e| match e {
        Error::Config { field, message } => CliError::schema(Some(field), message),
        other => CliError::schema(None, other.to_string()),
    })?;
    let hash = config_hash(&canonical_bytes(&scenario));
    let artifacts = scenario.execute(&hash, cli.format).map_err(CliError::from_error)?;
    write_artifacts(&cli.out, &artifacts).map_err(CliError::from_error)
}

/// Runs the CLI on `args` (including the program name) and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return 0;
        }
        Err(e) => {
            let err = CliError::schema(None, e.to_string().trim_end().to_string());
            eprintln!("{}", err.to_json());
            return err.code;
        }
    };
    match run_parsed(cli) {
        Ok(paths) => {
            let written: Vec<String> = paths.iter().map(|p| p.display().to_string()).collect();
            println!("{}", serde_json::json!({ "written": written }));
            0
        }
        Err(e) => {
            eprintln!("{}", e.to_json());
            e.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn command_is_filled_in() {
        let s = parse_scenario(Command::Design, r#"{"preset":"rb","arrangement":"uniform_pump"}"#).unwrap();
        assert_eq!(s.command(), Command::Design);
    }

    #[test]
    fn mismatched_command_is_schema_error() {
        let e = parse_scenario(Command::Design, r#"{"command":"spectrum"}"#).unwrap_err();
        assert_eq!(e.code, 2);
        assert_eq!(e.field.as_deref(), Some("command"));
    }

    #[test]
    fn overrides_apply() {
        let mut s = Scenario::default_for(Command::MbFilter);
        apply_overrides(&mut s, &Verb::MbFilter, Some(7));
        match s {
            Scenario::MbFilter(m) => assert_eq!(m.signal.seed, 7),
            _ => unreachable!(),
        }
        let mut p = Scenario::default_for(Command::Propagate);
        apply_overrides(&mut p, &Verb::Propagate { arrangement: Some(ArrangementArg::Copropagating) }, None);
        match p {
            Scenario::Propagate(p) => assert_eq!(p.arrangement, Arrangement::Copropagating),
            _ => unreachable!(),
        }
    }

    #[test]
    fn bad_flag_exits_two() {
        assert_eq!(run(["eit-bleach", "design", "--preset", "xenon"]), 2);
    }
}
