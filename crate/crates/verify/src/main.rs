use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qhr_verify::{Config, Envelope, ParamValue, Params, Registry, SuiteError};

#[derive(Parser)]
#[command(name = "qhr-verify", version, about = "Run verification suites for quantum Hamiltonian reduction numerators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List registered suites.
    List {
        #[arg(long)]
        module: Option<String>,
    },
    /// Run one suite.
    Run {
        suite: String,
        #[arg(long)]
        order: Option<i64>,
        /// Evaluation point(s) `RE,IM[;RE,IM...]`.
        #[arg(long)]
        tau: Option<String>,
        #[arg(long)]
        tol: Option<f64>,
        /// Any other parameter, `KEY=VALUE` (repeatable).
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Run every suite.
    All {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<i32, SuiteError> {
    let registry = Registry::default();
    match cli.command {
        Command::List { module } => {
            let specs = match &module {
                Some(m) => registry.list_module(m),
                None => registry.list(),
            };
            let mut text = String::new();
            for s in specs {
                let params: Vec<String> = s.parameters.0.iter().map(|(k, v)| format!("{k}={v}")).collect();
                text.push_str(&format!(
                    "{:<26} {:<10} {:<8} {}  [{}]\n",
                    s.name,
                    s.module,
                    s.mode,
                    s.description,
                    params.join(" ")
                ));
            }
            emit(&text);
            Ok(0)
        }
        Command::Run { suite, order, tau, tol, set, json } => {
            let mut o = Params::default();
            for kv in &set {
                let (k, v) = kv
                    .split_once('=')
                    .ok_or_else(|| SuiteError::Config(format!("`--set {kv}` is not KEY=VALUE")))?;
                let default = registry.get(&suite).and_then(|s| s.spec.parameters.0.get(k));
                o.0.insert(k.to_string(), typed(default, v));
            }
            if let Some(n) = order {
                o.0.insert("order".into(), ParamValue::Int(n));
            }
            if let Some(t) = tau {
                o.0.insert("tau".into(), ParamValue::Text(t));
            }
            if let Some(t) = tol {
                o.0.insert("tolerance".into(), ParamValue::Float(t));
            }
            let env = Envelope::new(vec![registry.run_suite(&suite, &o)?]);
            finish(&env, json)
        }
        Command::All { config, jobs, json } => {
            let cfg = match &config {
                Some(p) => Config::load(p, &registry)?,
                None => Config::default(),
            };
            let env = Envelope::new(registry.run_all(&cfg, jobs)?);
            finish(&env, json)
        }
    }
}

/// Writes to stdout; a closed pipe (e.g. `| head`) is not an error.
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

/// Parses `v` as the type of the parameter's default (text when unknown).
fn typed(default: Option<&ParamValue>, v: &str) -> ParamValue {
    match default {
        Some(ParamValue::Int(_)) => v.parse().map(ParamValue::Int).unwrap_or_else(|_| ParamValue::Text(v.into())),
        Some(ParamValue::Float(_)) => v.parse().map(ParamValue::Float).unwrap_or_else(|_| ParamValue::Text(v.into())),
        _ => ParamValue::Text(v.into()),
    }
}

fn finish(env: &Envelope, json: Option<PathBuf>) -> Result<i32, SuiteError> {
    emit(&env.table());
    if let Some(p) = json {
        env.write(&p)?;
    }
    Ok(env.summary.exit_code())
}
