use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use padic_cf::engine::AlgorithmKind;
use padic_cf::harness::{self, HarnessError, Mode, OutputFormat, RunConfig};
use padic_cf::padic::Branch;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum AlgArg {
    Browkin1,
    Browkin2,
    Mr,
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
enum BranchArg {
    #[default]
    Default,
    Alternate,
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
enum FormatArg {
    #[default]
    Csv,
    Json,
    Markdown,
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
enum ModeArg {
    Single,
    #[default]
    Table,
    Stochastics,
}

/// Exact p-adic continued fractions of √D: expansions, sweeps and statistics.
#[derive(Debug, Parser)]
#[command(name = "padic-cf", version)]
struct Cli {
    /// Odd prime p.
    #[arg(long, default_value_t = 5)]
    prime: u64,
    /// Radicand D (repeatable).
    #[arg(long = "d")]
    d: Vec<u64>,
    /// Inclusive radicand range LO:HI.
    #[arg(long = "d-range", value_name = "LO:HI")]
    d_range: Option<String>,
    #[arg(long, value_enum, default_value = "browkin1")]
    alg: AlgArg,
    /// Partial quotients computed per expansion.
    #[arg(long, default_value_t = 1000)]
    max_steps: usize,
    /// Significant digits of squared values.
    #[arg(long, default_value_t = 6)]
    digits: u32,
    #[arg(long, value_enum, default_value_t)]
    branch: BranchArg,
    #[arg(long, value_enum, default_value_t)]
    format: FormatArg,
    /// Seed for the Monte-Carlo sampler.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, value_enum, default_value_t)]
    mode: ModeArg,
    /// Monte-Carlo draws in stochastics mode.
    #[arg(long, default_value_t = 1_000_000)]
    samples: usize,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Cli {
    fn config(&self) -> Result<RunConfig, HarnessError> {
        let mut d_values = self.d.clone();
        if let Some(range) = &self.d_range {
            d_values.extend(harness::parse_d_range(range)?);
        }
        Ok(RunConfig {
            prime: self.prime,
            d_values,
            algorithm: match self.alg {
                AlgArg::Browkin1 => AlgorithmKind::BrowkinI,
                AlgArg::Browkin2 => AlgorithmKind::BrowkinII,
                AlgArg::Mr => AlgorithmKind::Mr,
            },
            max_steps: self.max_steps,
            report_digits: self.digits,
            branch: match self.branch {
                BranchArg::Default => Branch::Default,
                BranchArg::Alternate => Branch::Alternate,
            },
            format: match self.format {
                FormatArg::Csv => OutputFormat::Csv,
                FormatArg::Json => OutputFormat::Json,
                FormatArg::Markdown => OutputFormat::Markdown,
            },
            seed: self.seed,
            mode: match self.mode {
                ModeArg::Single => Mode::Single,
                ModeArg::Table => Mode::Table,
                ModeArg::Stochastics => Mode::Stochastics,
            },
            samples: self.samples,
            ..RunConfig::default()
        })
    }
}

fn execute(cli: &Cli) -> Result<(), HarnessError> {
    let cfg = cli.config()?;
    let text = harness::run(&cfg)?;
    match &cli.out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("padic-cf: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
