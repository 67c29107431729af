use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use smi_tactile::config::RunConfig;
use smi_tactile::pipeline::{run_pipeline, Command, PipelineOptions};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Sub {
    Simulate,
    Analyze,
    Spectrum,
    Fringes,
    DecisionMap,
    Validate,
}

/// Simulate and analyze SMI fingertip signals.
#[derive(Debug, Parser)]
#[command(version)]
struct Cli {
    #[arg(value_enum)]
    command: Sub,
    /// TOML run configuration.
    #[arg(long, conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Built-in scenario (speaker, stepper500, cable, pencil, ...).
    #[arg(long)]
    preset: Option<String>,
    /// Output directory (default: $SMI_TACTILE_OUT or ./out).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Trace to analyze instead of simulating (CSV or .wav).
    #[arg(long)]
    input: Option<PathBuf>,
    /// Microphone trace accompanying --input for `analyze`.
    #[arg(long)]
    mic_input: Option<PathBuf>,
    /// Experiment-record CSV for `decision-map`.
    #[arg(long)]
    records: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match (&cli.config, &cli.preset) {
        (Some(path), _) => RunConfig::load(path),
        (None, Some(name)) => RunConfig::preset(name),
        (None, None) => Ok(RunConfig::default()),
    };
    let command = match cli.command {
        Sub::Simulate => Command::Simulate,
        Sub::Analyze => Command::Analyze,
        Sub::Spectrum => Command::Spectrum,
        Sub::Fringes => Command::Fringes,
        Sub::DecisionMap => Command::DecisionMap,
        Sub::Validate => Command::Validate,
    };
    let opts = PipelineOptions {
        out_dir: cli.out,
        input: cli.input,
        mic_input: cli.mic_input,
        records: cli.records,
    };
    match cfg.and_then(|cfg| run_pipeline(&cfg, command, &opts)) {
        Ok(outcome) => {
            println!(
                "{}",
                serde_json::to_string_pretty(&outcome).expect("outcome serializes")
            );
            ExitCode::SUCCESS
        }
        Err(e) => {
            let record = serde_json::json!({ "error": e.kind(), "message": e.to_string() });
            eprintln!("{record}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
