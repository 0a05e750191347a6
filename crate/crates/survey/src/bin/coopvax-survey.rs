use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use coopvax_survey::{load_dataset, quality_score, Instrument, SdKind, Weights};
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "coopvax-survey", version, about = "Score likert questionnaire responses")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute statistics and the quality score for a response CSV.
    Score {
        #[arg(long)]
        csv: PathBuf,
        /// Instrument JSON; the bundled 32-question instrument if omitted.
        #[arg(long)]
        instrument: Option<PathBuf>,
        #[arg(long, default_value_t = 1.0)]
        alpha_px: f64,
        #[arg(long, default_value_t = 1.0)]
        alpha_us: f64,
        /// Divide SDs by n - 1 instead of n.
        #[arg(long)]
        sample_sd: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> Result<()> {
    let Cmd::Score { csv, instrument, alpha_px, alpha_us, sample_sd, out } = Cli::parse().cmd;
    let instrument = match instrument {
        Some(path) => Instrument::load(&path).with_context(|| format!("loading {}", path.display()))?,
        None => Instrument::bundled(),
    };
    let data = load_dataset(&csv, &instrument).with_context(|| format!("loading {}", csv.display()))?;
    let sd = if sample_sd { SdKind::Sample } else { SdKind::Population };
    let report = quality_score(&data, &instrument, Weights { alpha_px, alpha_us }, sd)?;
    eprintln!(
        "{} respondents, {} missing cells; quality score {:.2} ({})",
        report.respondents,
        report.missing.len(),
        report.quality_score,
        report.classification
    );
    let json = report.to_json();
    match out {
        Some(path) => std::fs::write(&path, json + "\n").with_context(|| format!("writing {}", path.display()))?,
        None => println!("{json}"),
    }
    Ok(())
}
