//! `brenier`: envelope tables, 1D and entropic transports, concentration
//! profiles and the acceptance suite, with JSON reports and CSV tables.
//!
//! Exit codes: 0 all checks pass, 1 a check failed, 2 configuration error,
//! 3 numerical non-convergence.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use brenier_core::verify::Status;
use clap::{Parser, Subcommand};
use toml::Table;

use commands::{Failure, Outcome};

#[derive(Parser)]
#[command(name = "brenier", version, about = "Transport-map regularity experiments")]
struct Cli {
    /// TOML config file; command-line settings override it.
    #[arg(long, global = false)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

/// Settings after the command are `--key value` or `--section.key=value`.
/// Undotted keys address the command's own section; `seed`, `out`, `jobs`
/// and `svg` are global.
#[derive(Subcommand)]
enum Command {
    /// Tabulate f_{p,a} next to its shooting solution.
    Envelope {
        #[arg(trailing_var_arg = true, allow_hyphen_values = true)]
        settings: Vec<String>,
    },
    /// Exact 1D transport with Hölder and second-derivative reports.
    Transport1d {
        #[arg(trailing_var_arg = true, allow_hyphen_values = true)]
        settings: Vec<String>,
    },
    /// Entropic transport in dimension d with the envelope checks.
    Transportnd {
        #[arg(trailing_var_arg = true, allow_hyphen_values = true)]
        settings: Vec<String>,
    },
    /// Enlargement profiles and the functional-inequality reports.
    Concentrate {
        #[arg(trailing_var_arg = true, allow_hyphen_values = true)]
        settings: Vec<String>,
    },
    /// Run the acceptance battery.
    Suite {
        #[arg(trailing_var_arg = true, allow_hyphen_values = true)]
        settings: Vec<String>,
    },
    /// Summarize report JSON files.
    Report {
        #[arg(trailing_var_arg = true, allow_hyphen_values = true)]
        settings: Vec<String>,
    },
}

fn load(config: Option<PathBuf>, section: &str, settings: &[String]) -> Result<config::ExperimentConfig, config::ConfigError> {
    let mut overrides = Table::new();
    let (positionals, inline_config) = config::apply_settings(&mut overrides, section, settings)?;
    let mut table = match config.or(inline_config) {
        Some(p) => config::read_table(&p)?,
        None => Table::new(),
    };
    merge(&mut table, overrides);
    if !positionals.is_empty() {
        if section != "report" {
            return Err(config::ConfigError(format!("unexpected argument `{}`", positionals[0])));
        }
        let inputs = positionals.into_iter().map(toml::Value::String).collect();
        let report = table.entry("report").or_insert_with(|| toml::Value::Table(Table::new()));
        if let toml::Value::Table(t) = report {
            t.insert("inputs".into(), toml::Value::Array(inputs));
        }
    }
    config::build(table)
}

fn merge(base: &mut Table, over: Table) {
    for (k, v) in over {
        match (base.get_mut(&k), v) {
            (Some(toml::Value::Table(b)), toml::Value::Table(o)) => merge(b, o),
            (_, v) => {
                base.insert(k, v);
            }
        }
    }
}

fn exit_code(out: &Outcome) -> u8 {
    if out.extra_failures > 0 || out.reports.iter().any(|r| r.status == Status::Fail) {
        1
    } else if out.reports.iter().any(|r| r.status == Status::Inconclusive) {
        3
    } else {
        0
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (section, settings) = match &cli.command {
        Command::Envelope { settings } => ("envelope", settings),
        Command::Transport1d { settings } => ("transport1d", settings),
        Command::Transportnd { settings } => ("transportnd", settings),
        Command::Concentrate { settings } => ("concentrate", settings),
        Command::Suite { settings } => ("suite", settings),
        Command::Report { settings } => ("report", settings),
    };
    let cfg = match load(cli.config.clone(), section, settings) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("brenier: {e}");
            return ExitCode::from(2);
        }
    };
    let result = match section {
        "envelope" => commands::envelope(&cfg),
        "transport1d" => commands::transport1d(&cfg),
        "transportnd" => commands::transportnd(&cfg),
        "concentrate" => commands::concentrate(&cfg),
        "suite" => commands::suite(&cfg),
        _ => commands::report(&cfg),
    };
    match result {
        Ok(out) => {
            if section != "suite" && section != "report" {
                for r in &out.reports {
                    println!("{:<12} {:<36} empirical {:.6e}  bound {:.6e} × {}", format!("{:?}", r.status).to_lowercase(), r.check_id, r.empirical, r.theoretical, r.slack);
                }
            }
            println!("artifacts in {}", cfg.out_dir().display());
            ExitCode::from(exit_code(&out))
        }
        Err(Failure::Config(e)) => {
            eprintln!("brenier: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(e)) => {
            eprintln!("brenier: numerical failure: {e}");
            ExitCode::from(3)
        }
        Err(Failure::Io(e)) => {
            eprintln!("brenier: cannot write artifacts: {e}");
            ExitCode::from(2)
        }
    }
}
