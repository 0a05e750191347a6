use anyhow::Result;
use clap::Parser;
use coopvax_server::ServerConfig;
use std::net::SocketAddr;
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(name = "coopvax-server", version, about = "Cooperative game room server")]
struct Args {
    /// WebSocket listen address (serves /ws)
    #[arg(long, default_value = "127.0.0.1:8080")]
    listen: SocketAddr,
    /// Newline-delimited TCP listen address
    #[arg(long, default_value = "127.0.0.1:8081")]
    tcp_listen: SocketAddr,
    #[arg(long, env = "COOPVAX_STAGES")]
    stages_dir: Option<PathBuf>,
    #[arg(long, default_value_t = 20)]
    tick_rate: u32,
    #[arg(long, default_value_t = 10)]
    snapshot_rate: u32,
    /// Seconds a disconnected player may take to rejoin
    #[arg(long, default_value_t = 60)]
    grace_secs: u64,
    /// Seconds before a room with no running game and no traffic is closed; 0 disables
    #[arg(long, default_value_t = 600)]
    room_idle_secs: u64,
    /// Structured log file (JSON lines); stdout when omitted
    #[arg(long)]
    log: Option<PathBuf>,
    /// Append-only game results file
    #[arg(long, default_value = "results.jsonl")]
    results: PathBuf,
    /// Tick only once every connected player has sent an input
    #[arg(long)]
    lockstep: bool,
    /// Use this seed for every game
    #[arg(long)]
    seed: Option<u64>,
}

fn init_logging(path: Option<&PathBuf>) -> Result<()> {
    let filter = tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| "info".into());
    let builder = tracing_subscriber::fmt().json().with_env_filter(filter).with_current_span(false);
    match path {
        Some(p) => {
            let file = std::fs::OpenOptions::new().create(true).append(true).open(p)?;
            builder.with_writer(std::sync::Mutex::new(file)).init();
        }
        None => builder.init(),
    }
    Ok(())
}

#[tokio::main]
async fn main() -> Result<()> {
    let args = Args::parse();
    init_logging(args.log.as_ref())?;
    let config = ServerConfig {
        listen: Some(args.listen),
        tcp_listen: Some(args.tcp_listen),
        stages_dir: args.stages_dir.unwrap_or_else(coopvax_core::maps::stages_dir),
        tick_rate: args.tick_rate,
        snapshot_rate: args.snapshot_rate,
        grace_secs: args.grace_secs,
        room_idle_secs: args.room_idle_secs,
        results: Some(args.results),
        lockstep: args.lockstep,
        seed: args.seed,
    };
    let server = coopvax_server::start(config).await?;
    tokio::select! {
        _ = tokio::signal::ctrl_c() => tracing::info!(event = "shutdown"),
        _ = server.wait() => {}
    }
    Ok(())
}
