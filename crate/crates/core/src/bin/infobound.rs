use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use infobound::experiment::{emit, run, ExperimentConfig, ExperimentKind, OutputFormat};
use infobound::Error;
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "infobound",
    version,
    about = "Generalization-bound experiments"
)]
struct Cli {
    /// JSON config file; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output path (stdout when omitted).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Per-site contraction coefficients of a regularized network.
    Sdpi,
    /// KL and Wasserstein bound profiles over rotation stacks.
    Bound,
    #[command(subcommand)]
    Casestudy(CaseStudy),
    #[command(subcommand)]
    Sweep(Sweep),
}

#[derive(Subcommand)]
enum CaseStudy {
    /// Funnel layer for each funnel index.
    Table1,
    /// Generalization error against the KL and Wasserstein bounds.
    Genbound,
}

#[derive(Subcommand)]
enum Sweep {
    /// Insert a hidden layer of varying width after the input.
    AddLayer,
    /// Split the first hidden layer in two.
    SplitLayer,
}

fn kind_of(cmd: &Command) -> ExperimentKind {
    match cmd {
        Command::Sdpi => ExperimentKind::SdpiTable,
        Command::Bound => ExperimentKind::BoundProfile,
        Command::Casestudy(CaseStudy::Table1) => ExperimentKind::Table1,
        Command::Casestudy(CaseStudy::Genbound) => ExperimentKind::Genbound,
        Command::Sweep(Sweep::AddLayer) => ExperimentKind::AddLayerSweep,
        Command::Sweep(Sweep::SplitLayer) => ExperimentKind::SplitLayerSweep,
    }
}

fn one_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn fail(code: u8, body: serde_json::Value) -> ExitCode {
    eprintln!("{body}");
    ExitCode::from(code)
}

fn execute(cli: Cli) -> infobound::Result<()> {
    let kind = kind_of(&cli.command);
    let mut cfg = match &cli.config {
        Some(path) => ExperimentConfig::from_path(path)?,
        None => ExperimentConfig::default(),
    };
    match cfg.kind {
        Some(k) if k != kind => {
            return Err(Error::Config {
                field: "kind".into(),
                message: format!(
                    "config is for `{}` but the command runs `{}`",
                    k.as_str(),
                    kind.as_str()
                ),
            })
        }
        _ => cfg.kind = Some(kind),
    }
    if let Some(seed) = cli.seed {
        cfg.seed = Some(seed);
    }
    if let Some(f) = cli.format {
        cfg.format = Some(match f {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
        });
    }
    let report = run(&cfg)?;
    emit(&report, cfg.format(), cli.out.as_deref())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            return fail(
                2,
                json!({"error": "usage", "message": one_line(&e.to_string())}),
            )
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Error::Config { field, message }) => fail(
            2,
            json!({"error": "config", "field": field, "message": one_line(&message)}),
        ),
        Err(e) => fail(
            3,
            json!({"error": e.kind(), "message": one_line(&e.to_string())}),
        ),
    }
}
