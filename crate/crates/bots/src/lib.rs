//! Bot harness: policies, headless runs against the simulation, and
//! networked runs against a live server.

pub mod headless;
pub mod networked;
pub mod policy;
pub mod report;

pub use headless::{run_game, run_headless, run_headless_sequential, HeadlessGame, DEFAULT_MAX_TICKS};
#[cfg(feature = "parallel")]
pub use headless::run_headless_parallel;
pub use networked::{run_networked, BotResult, NetError, NetOptions, NetworkedRun};
pub use policy::{parse_policies, Bot, PolicyKind};
pub use report::{Aggregate, GameReport, Outcome, RunReport};
