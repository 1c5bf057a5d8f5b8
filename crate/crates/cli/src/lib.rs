//! Configuration, schedule specs and experiment drivers behind the
//! `localsgd` binary.

pub mod commands;
pub mod config;
pub mod spec;

pub use commands::{cmd_bound, cmd_run, cmd_speedup};
pub use config::{parse_config, Config, ConfigError, RawConfig};
pub use spec::ScheduleSpec;
