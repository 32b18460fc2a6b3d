//! `verbprobe`: command-line entry point for perturbation, probing,
//! training and dataset diagnosis.

mod common;
mod diagnose;
mod gen_contrast;
mod negate;
mod probe;
mod report;
mod train;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use verbprobe::report::TableFormat;

use common::Warnings;

#[derive(Parser, Debug)]
#[command(name = "verbprobe", version, about = "Verb-negation probing for extractive QA readers")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalArgs {
    /// Root seed; every random choice derives from it.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for per-question processing.
    #[arg(long, global = true, default_value_t = 1)]
    pub workers: usize,
    /// Directory receiving all outputs.
    #[arg(long, global = true, default_value = "verbprobe-out")]
    pub out_dir: PathBuf,
    /// WordNet 3.0 dict directory holding index.verb and data.verb.
    #[arg(long, global = true, env = "VERBPROBE_WORDNET_DIR")]
    pub wordnet_dir: Option<PathBuf>,
    /// Format of tabular outputs.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl From<Format> for TableFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => TableFormat::Csv,
            Format::Json => TableFormat::Json,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Perturb every question of a dataset by reversing its verb meaning.
    Negate(negate::NegateArgs),
    /// Run original and perturbed questions through a checkpoint and analyze.
    Probe(probe::ProbeArgs),
    /// Train the reference reader.
    Train(train::TrainArgs),
    /// Compare analytic and finite-difference gradients.
    GradCheck(train::GradCheckArgs),
    /// Measure per-context noun uniqueness of a dataset.
    Diagnose(diagnose::DiagnoseArgs),
    /// Generate the unique-noun and contrast synthetic corpora.
    GenContrast(gen_contrast::GenContrastArgs),
    /// Rebuild tables and figures from saved probe traces.
    Report(report::ReportArgs),
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let mut warnings = Warnings::default();
    let result = match cli.command {
        Command::Negate(a) => negate::run(&cli.global, a, &mut warnings),
        Command::Probe(a) => probe::run(&cli.global, a, &mut warnings),
        Command::Train(a) => train::run(&cli.global, a, &mut warnings),
        Command::GradCheck(a) => train::run_grad_check(&cli.global, a, &mut warnings),
        Command::Diagnose(a) => diagnose::run(&cli.global, a, &mut warnings),
        Command::GenContrast(a) => gen_contrast::run(&cli.global, a, &mut warnings),
        Command::Report(a) => report::run(&cli.global, a, &mut warnings),
    };
    let flushed = warnings.write(&cli.global.out_dir);
    match (result, flushed) {
        (Ok(()), Ok(())) => ExitCode::SUCCESS,
        (Err(e), _) | (Ok(()), Err(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
