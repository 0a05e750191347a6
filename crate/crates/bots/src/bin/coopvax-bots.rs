use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use coopvax_bots::headless::{run_headless, DEFAULT_MAX_TICKS};
use coopvax_bots::policy::parse_policies;
use coopvax_bots::{run_networked, NetOptions};
use coopvax_core::maps::{load_campaign, stages_dir};
use std::net::SocketAddr;
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "coopvax-bots", version, about = "Bot runs against the simulation or a live server")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Headless,
    Networked,
}

#[derive(Subcommand)]
enum Cmd {
    /// Play games and write a JSON report.
    Run {
        #[arg(long, value_enum, default_value = "headless")]
        mode: Mode,
        /// Comma-separated policies, one per bot: greedy, random, scripted:FILE.
        #[arg(long, default_value = "greedy,greedy,greedy,greedy")]
        policies: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        reps: usize,
        /// Stage directory; defaults to $COOPVAX_STAGES or the bundled stages.
        #[arg(long)]
        campaign: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Server TCP address for networked mode.
        #[arg(long, default_value = "127.0.0.1:8081")]
        addr: SocketAddr,
        #[arg(long, default_value = "bots")]
        room: String,
        #[arg(long, default_value_t = DEFAULT_MAX_TICKS)]
        max_ticks: u64,
    },
}

fn main() -> Result<()> {
    let Cmd::Run { mode, policies, seed, reps, campaign, out, addr, room, max_ticks } = Cli::parse().cmd;
    let policies = parse_policies(&policies)?;
    if !(1..=4).contains(&policies.len()) {
        bail!("need 1 to 4 policies, got {}", policies.len());
    }
    let report = match mode {
        Mode::Headless => {
            let dir = campaign.unwrap_or_else(stages_dir);
            let stages = load_campaign(&dir).with_context(|| format!("loading {}", dir.display()))?;
            run_headless(&stages, &policies, seed, reps, max_ticks)?
        }
        Mode::Networked => {
            let rt = tokio::runtime::Builder::new_multi_thread().enable_all().build()?;
            let opts = NetOptions { max_ticks, ..NetOptions::default() };
            let mut games = Vec::new();
            for i in 0..reps {
                let name = if reps == 1 { room.clone() } else { format!("{room}-{i}") };
                let run = rt.block_on(run_networked(addr, &name, &policies, seed + i as u64, &opts))?;
                games.extend(run.report.games);
            }
            coopvax_bots::report::RunReport::new("networked", policies.iter().map(|p| p.to_string()).collect(), games)
        }
    };
    let json = report.to_json();
    match out {
        Some(path) => std::fs::write(&path, json + "\n").with_context(|| format!("writing {}", path.display()))?,
        None => println!("{json}"),
    }
    Ok(())
}
