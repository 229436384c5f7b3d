//! `weylcm` command line runner.
//!
//! Exit codes: 0 success, 1 domain error (JSON on stderr with a `code`
//! field naming the library error), 2 usage or configuration error.
//! Nothing is written to `--output` unless the run succeeds.

mod commands;
mod config;
mod selftest;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use commands::{Failure, Payload};
use config::{Command, ExperimentConfig, Params};

const VERSION: &str = env!("CARGO_PKG_VERSION");

const CSV_HELP: &str = "CSV output starts with two `#` lines holding the version stamp and the \
config as JSON.\n  census columns:   p, signed_type, split\n  equidist columns: n, gamma, \
family_size, family_ramified, group_nonregular, tv_regular, tv_regular_exact, tv_unconditioned, \
family_split_mass";

#[derive(Parser)]
#[command(name = "weylcm", version, about = "Weyl CM fields from a hyperelliptic family", after_help = CSV_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Zeta numerator of one curve.
    Zeta(RunArgs),
    /// Weyl certificate for a polynomial.
    Certify(RunArgs),
    /// Split-prime census up to a bound.
    #[command(after_help = CSV_HELP)]
    Census(RunArgs),
    /// Signed cycle types over a symplectic similitude coset.
    Haar(RunArgs),
    /// Family versus coset type distributions across n.
    #[command(after_help = CSV_HELP)]
    Equidist(RunArgs),
    /// Family scan under local conditions, one record per line.
    Forge(RunArgs),
    /// Per-n selection of a certified candidate.
    Sequence(RunArgs),
    /// Library checks against hand-derived values.
    Selftest(RunArgs),
    /// Run the command named in a config file.
    Run(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Canonical TOML config; flags given alongside override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Print the canonical config for this invocation and exit.
    #[arg(long)]
    print_config: bool,
    #[command(flatten)]
    params: Params,
}

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("{}", json!({ "error": { "code": "Usage", "message": msg.to_string() } }));
    ExitCode::from(2)
}

fn resolve(sub: Sub) -> Result<(ExperimentConfig, bool), String> {
    let (command, args) = match sub {
        Sub::Zeta(a) => (Some(Command::Zeta), a),
        Sub::Certify(a) => (Some(Command::Certify), a),
        Sub::Census(a) => (Some(Command::Census), a),
        Sub::Haar(a) => (Some(Command::Haar), a),
        Sub::Equidist(a) => (Some(Command::Equidist), a),
        Sub::Forge(a) => (Some(Command::Forge), a),
        Sub::Sequence(a) => (Some(Command::Sequence), a),
        Sub::Selftest(a) => (Some(Command::Selftest), a),
        Sub::Run(a) => (None, a),
    };
    let mut cfg = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            ExperimentConfig::from_toml(&text)?
        }
        None => match command {
            Some(c) => ExperimentConfig { command: c, params: Params::default() },
            None => return Err("`run` needs --config".into()),
        },
    };
    if let Some(c) = command {
        if args.config.is_some() && c != cfg.command {
            return Err(format!("config is for `{}`, not `{}`", cfg.command.name(), c.name()));
        }
    }
    cfg.params.overlay(&args.params);
    Ok((cfg, args.print_config))
}

/// The embedded config leaves out `output`, so artifacts do not depend on
/// where they are written.
fn render(cfg: &ExperimentConfig, payload: Payload) -> String {
    let mut embedded = cfg.clone();
    embedded.params.output = None;
    let config = serde_json::to_value(&embedded).expect("config serializes");
    let stamp = |v: Value| json!({ "weylcm_version": VERSION, "command": cfg.command.name(), "config": config, "result": v });
    match payload {
        Payload::Document(v) => {
            let mut s = serde_json::to_string_pretty(&stamp(v)).expect("json");
            s.push('\n');
            s
        }
        Payload::Lines(rows) => {
            let mut header = stamp(Value::Null);
            header.as_object_mut().unwrap().remove("result");
            let mut s = serde_json::to_string(&header).expect("json");
            s.push('\n');
            for row in rows {
                s.push_str(&serde_json::to_string(&row).expect("json"));
                s.push('\n');
            }
            s
        }
        Payload::Table(columns, rows) => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&columns).expect("csv");
            for row in rows {
                w.write_record(&row).expect("csv");
            }
            let body = String::from_utf8(w.into_inner().expect("csv")).expect("utf8");
            format!("# weylcm {VERSION} {}\n# config {}\n{body}", cfg.command.name(), config)
        }
    }
}

/// Write through a temporary sibling so a failed write leaves nothing behind.
fn write_output(path: &Path, text: &str) -> std::io::Result<()> {
    let tmp = path.with_extension("partial");
    std::fs::write(&tmp, text)?;
    std::fs::rename(&tmp, path)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (cfg, print_config) = match resolve(cli.command) {
        Ok(r) => r,
        Err(msg) => return usage(msg),
    };
    if print_config {
        print!("{}", cfg.to_toml());
        return ExitCode::SUCCESS;
    }
    let result = match commands::run(&cfg) {
        Ok(r) => r,
        Err(Failure::Usage(msg)) => return usage(msg),
        Err(Failure::Domain(e)) => {
            eprintln!("{}", json!({ "error": { "code": e.code(), "message": e.to_string() } }));
            return ExitCode::from(1);
        }
    };
    let text = render(&cfg, result.payload);
    match &cfg.params.output {
        Some(path) => {
            if let Err(e) = write_output(Path::new(path), &text) {
                return usage(format!("{path}: {e}"));
            }
        }
        None => {
            let mut out = std::io::stdout().lock();
            if out.write_all(text.as_bytes()).is_err() {
                return ExitCode::from(1);
            }
        }
    }
    if result.all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
