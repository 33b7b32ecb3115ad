//! Batch front door: bound calculators, verification suites and figure data,
//! with JSON/CSV reports.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

mod commands;
mod report;

use report::Report;

#[derive(Parser)]
#[command(name = "qtb", version, about = "Transport and entropy bound toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Clone)]
struct OutputOpts {
    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: Format,
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a closed-form bound.
    Bound {
        #[command(subcommand)]
        which: commands::BoundCmd,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Run a verification suite against exact simulation.
    Verify {
        #[command(subcommand)]
        which: commands::VerifyCmd,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Emit curve data for a figure.
    Figure {
        #[command(subcommand)]
        which: commands::FigureCmd,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Execute a JSON job config (same commands, batch form).
    Run {
        #[arg(long)]
        config: PathBuf,
    },
    /// List every available command with a short description.
    List,
}

fn write_output(opts: &OutputOpts, report: &Report) -> anyhow::Result<()> {
    let text = match opts.format {
        Format::Json => serde_json::to_string_pretty(report)? + "\n",
        Format::Csv => report.to_csv(),
    };
    match &opts.out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn exit_code_for(err: &anyhow::Error) -> u8 {
    if let Some(core) = err.downcast_ref::<qtb_core::Error>() {
        return match core {
            qtb_core::Error::Precondition(_) => 3,
            qtb_core::Error::Convergence(_) => 4,
            qtb_core::Error::StepSize(_) => 4,
            _ => 2,
        };
    }
    2
}

fn run_job(path: &PathBuf) -> anyhow::Result<()> {
    let raw = std::fs::read_to_string(path)?;
    let job: serde_json::Value = serde_json::from_str(&raw)
        .map_err(|e| anyhow::anyhow!("config is not valid JSON: {e}"))?;
    let obj = job
        .as_object()
        .ok_or_else(|| anyhow::anyhow!("config must be a JSON object"))?;
    let command = obj
        .get("command")
        .and_then(|v| v.as_str())
        .ok_or_else(|| anyhow::anyhow!("missing string field: command"))?;
    let params = obj
        .get("parameters")
        .cloned()
        .unwrap_or_else(|| json!({}));
    if !params.is_object() {
        anyhow::bail!("field `parameters` must be an object");
    }
    let seed = obj.get("seed").and_then(|v| v.as_u64()).unwrap_or(0);
    let format = match obj.get("format").and_then(|v| v.as_str()).unwrap_or("json") {
        "json" => Format::Json,
        "csv" => Format::Csv,
        other => anyhow::bail!("unknown format: {other}"),
    };
    let out = obj
        .get("out")
        .and_then(|v| v.as_str())
        .map(PathBuf::from);
    for key in obj.keys() {
        if !["command", "parameters", "seed", "format", "out"].contains(&key.as_str()) {
            anyhow::bail!("unknown config field: {key}");
        }
    }
    let report = commands::dispatch_named(command, &params, seed)?;
    write_output(
        &OutputOpts {
            out,
            format,
            seed,
        },
        &report,
    )
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Bound { which, output } => which
            .run()
            .and_then(|r| write_output(&output, &r)),
        Command::Verify { which, output } => which
            .run(output.seed)
            .and_then(|r| write_output(&output, &r)),
        Command::Figure { which, output } => which
            .run()
            .and_then(|r| write_output(&output, &r)),
        Command::Run { config } => run_job(&config),
        Command::List => {
            print!("{}", commands::catalog());
            Ok(())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
