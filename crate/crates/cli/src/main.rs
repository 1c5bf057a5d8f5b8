use std::fs;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use localsgd_cli::{cmd_bound, cmd_run, cmd_speedup, config::keys_help, RawConfig};

#[derive(Parser, Debug)]
#[command(name = "localsgd", version, about = "Local SGD communication-schedule experiments", after_long_help = keys_help())]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Configuration file (`key = value` lines).
    #[arg(long, global = true, env = "LOCALSGD_CONFIG")]
    config: Option<PathBuf>,

    /// Override any configuration key, e.g. `--set T=500`.
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    set: Vec<String>,

    /// Schedule spec: sync | oneshot | fixed:H | growing:R[:a] | custom:t1,t2,...
    /// (repeatable; replaces `schedules`).
    #[arg(long, value_name = "SPEC", global = true)]
    schedule: Vec<String>,

    #[arg(long, value_name = "U64", global = true, env = "LOCALSGD_SEED")]
    seed: Option<u64>,

    #[arg(long, value_name = "N", global = true, env = "LOCALSGD_TRIALS")]
    trials: Option<usize>,

    /// Output directory (run) or file (speedup, bound).
    #[arg(long, value_name = "PATH", global = true, env = "LOCALSGD_OUT")]
    out: Option<PathBuf>,

    /// LIBSVM data file for the logistic objective.
    #[arg(long, value_name = "PATH", global = true, env = "LOCALSGD_DATA")]
    data: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Simulate every schedule and write one CSV trace per schedule.
    Run,
    /// Final error versus worker count with R = n growing schedules.
    Speedup,
    /// Admissibility and closed-form bounds for every schedule.
    Bound,
}

fn load(cli: &Cli) -> Result<localsgd_cli::Config> {
    let mut raw = match &cli.config {
        Some(path) => {
            let text =
                fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            RawConfig::parse(&text).with_context(|| format!("in {}", path.display()))?
        }
        None => RawConfig::default(),
    };
    for kv in &cli.set {
        let (k, v) = kv
            .split_once('=')
            .with_context(|| format!("--set expects KEY=VALUE, got `{kv}`"))?;
        raw.set(k.trim(), v.trim())?;
    }
    if !cli.schedule.is_empty() {
        raw.set("schedules", cli.schedule.join(";"))?;
    }
    if let Some(seed) = cli.seed {
        raw.set("seed", seed.to_string())?;
    }
    if let Some(trials) = cli.trials {
        raw.set("trials", trials.to_string())?;
    }
    if let Some(out) = &cli.out {
        raw.set("out", out.display().to_string())?;
    }
    if let Some(data) = &cli.data {
        raw.set("data", data.display().to_string())?;
    }
    Ok(raw.resolve()?)
}

fn emit(cfg: &localsgd_cli::Config, text: &str) -> Result<()> {
    match &cfg.out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    let cfg = load(&cli)?;
    match cli.command {
        Command::Run => {
            for path in cmd_run(&cfg)? {
                println!("{}", path.display());
            }
        }
        Command::Speedup => emit(&cfg, &cmd_speedup(&cfg)?)?,
        Command::Bound => emit(&cfg, &cmd_bound(&cfg)?)?,
    }
    Ok(())
}
