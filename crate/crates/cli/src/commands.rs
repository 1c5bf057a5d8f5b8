//! `run`, `speedup` and `bound`.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use anyhow::{Context, Result};
use localsgd::bounds::BoundReport;
use localsgd::engine::AggregateTrace;
use localsgd::objectives::read_libsvm;
use localsgd::schedules::{self, min_beta};
use localsgd::{
    LocalSgd, LogisticL2, NoiseParams, Objective, ProblemParams, QuadraticStrongGrowth, Schedule,
};

use crate::config::{Beta, Config, ObjectiveConfig};
use crate::spec::ScheduleSpec;

pub const RUN_HEADER: &str = "t,mean_subopt,std_subopt,mean_consensus,comm_count";
pub const SPEEDUP_HEADER: &str = "n,rounds,mean_final_subopt,std_final_subopt,reference";

pub enum Problem {
    Quadratic(QuadraticStrongGrowth),
    Logistic(LogisticL2),
}

impl Problem {
    pub fn from_config(cfg: &Config) -> Result<Self> {
        match &cfg.objective {
            ObjectiveConfig::Quadratic { dim, c1, c2 } => {
                Ok(Self::Quadratic(QuadraticStrongGrowth::new(*dim, *c1, *c2)?))
            }
            ObjectiveConfig::Logistic {
                data,
                features,
                lambda,
                batch,
                fstar,
                fstar_tol,
            } => {
                let ds = read_libsvm(data, *features)?;
                let obj = LogisticL2::new(ds, *lambda, *batch)?;
                let fstar = match fstar {
                    Some(f) => *f,
                    None => obj
                        .estimate_fstar(*fstar_tol)
                        .context("estimating F* for the logistic objective")?,
                };
                Ok(Self::Logistic(obj.with_f_star(fstar)))
            }
        }
    }

    pub fn objective(&self) -> &dyn Objective {
        match self {
            Self::Quadratic(q) => q,
            Self::Logistic(l) => l,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Quadratic(_) => "quadratic",
            Self::Logistic(_) => "logistic",
        }
    }
}

/// Configured noise constants, falling back to the objective's own.
pub fn noise_params(cfg: &Config, problem: &Problem) -> Result<Option<NoiseParams>> {
    let derived = problem.objective().noise();
    let c = cfg.noise_c.or(derived.map(|n| n.c()));
    let s = cfg.noise_sigma2.or(derived.map(|n| n.sigma2()));
    match (c, s) {
        (Some(c), Some(s)) => Ok(Some(NoiseParams::new(c, s)?)),
        _ => Ok(None),
    }
}

fn require_noise(cfg: &Config, problem: &Problem, what: &str) -> Result<NoiseParams> {
    noise_params(cfg, problem)?.with_context(|| {
        format!(
            "{what} needs the noise constants; set `noise_c` and `noise_sigma2` for the {} objective",
            problem.name()
        )
    })
}

/// Problem constants for one schedule, resolving `beta = auto`.
pub fn problem_params(
    cfg: &Config,
    problem: &Problem,
    workers: usize,
    rounds: Option<usize>,
) -> Result<ProblemParams> {
    let obj = problem.objective();
    let beta = match cfg.beta {
        Beta::Value(b) => b,
        Beta::Auto => {
            let noise = require_noise(cfg, problem, "beta = auto")?;
            let kappa = obj.smoothness() / obj.mu();
            min_beta(kappa, workers, cfg.horizon, &noise, rounds)
        }
    };
    Ok(ProblemParams::new(
        obj.mu(),
        obj.smoothness(),
        workers,
        cfg.horizon,
        beta,
    )?)
}

fn simulate(
    cfg: &Config,
    problem: &Problem,
    schedule: &Schedule,
    params: ProblemParams,
) -> Result<AggregateTrace> {
    let obj = problem.objective();
    let mut sgd =
        LocalSgd::new(obj, schedule, params)?.with_initial_point(cfg.x0.vector(obj.dim()))?;
    if let Some(stride) = cfg.stride {
        sgd = sgd.with_stride(stride)?;
    }
    Ok(sgd.run_trials(cfg.seed, cfg.trials)?)
}

fn header(kind: &str, cfg: &Config, extra: &[(&str, String)]) -> String {
    let mut out = format!("# localsgd {kind}\n");
    for (k, v) in extra {
        writeln!(out, "# {k} = {v}").unwrap();
    }
    for line in cfg.echo() {
        writeln!(out, "# config: {line}").unwrap();
    }
    out
}

/// One simulated schedule of `run`.
pub struct RunOutput {
    pub spec: ScheduleSpec,
    pub label: String,
    pub csv: String,
}

/// Runs every configured schedule and renders one CSV per schedule.
pub fn run_csvs(cfg: &Config) -> Result<Vec<RunOutput>> {
    let problem = Problem::from_config(cfg)?;
    let mut outputs: Vec<RunOutput> = Vec::new();
    for spec in &cfg.schedules {
        let schedule = spec
            .build(cfg.horizon)
            .with_context(|| format!("schedule `{spec}`"))?;
        let params = problem_params(cfg, &problem, cfg.workers, spec.growing_rounds())?;
        let agg = simulate(cfg, &problem, &schedule, params)
            .with_context(|| format!("schedule `{spec}`"))?;

        let mut csv = header(
            "run",
            cfg,
            &[
                ("schedule", spec.to_string()),
                ("rounds", schedule.rounds().to_string()),
                ("beta_used", format!("{:e}", params.beta())),
                ("f_star", format!("{:e}", problem.objective().f_star())),
            ],
        );
        csv.push_str(RUN_HEADER);
        csv.push('\n');
        for r in &agg.records {
            writeln!(
                csv,
                "{},{:e},{:e},{:e},{}",
                r.t, r.suboptimality.mean, r.suboptimality.std, r.consensus_error.mean, r.comms
            )
            .unwrap();
        }

        let mut label = spec.label();
        let clashes = outputs
            .iter()
            .filter(|o| o.label.starts_with(&label))
            .count();
        if clashes > 0 {
            label = format!("{label}_{}", clashes + 1);
        }
        outputs.push(RunOutput {
            spec: spec.clone(),
            label,
            csv,
        });
    }
    Ok(outputs)
}

/// `run`: writes `<out>/<objective>_<schedule>.csv` for every schedule.
pub fn cmd_run(cfg: &Config) -> Result<Vec<PathBuf>> {
    let dir = cfg
        .out
        .clone()
        .context("`run` needs an output directory (`out` key or --out)")?;
    fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    let objective = match cfg.objective {
        ObjectiveConfig::Quadratic { .. } => "quadratic",
        ObjectiveConfig::Logistic { .. } => "logistic",
    };
    let mut written = Vec::new();
    for out in run_csvs(cfg)? {
        let path = dir.join(format!("{objective}_{}.csv", out.label));
        fs::write(&path, out.csv).with_context(|| format!("writing {}", path.display()))?;
        written.push(path);
    }
    Ok(written)
}

/// One row of the speedup table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpeedupRow {
    pub workers: usize,
    pub rounds: usize,
    pub mean_final: f64,
    pub std_final: f64,
    /// `sigma^2 / (mu n T)`.
    pub reference: f64,
}

/// Final suboptimality for each worker count with `R = n` growing
/// schedules.
pub fn speedup_rows(cfg: &Config) -> Result<Vec<SpeedupRow>> {
    let problem = Problem::from_config(cfg)?;
    let noise = require_noise(cfg, &problem, "speedup")?;
    let mu = problem.objective().mu();
    cfg.speedup_workers
        .iter()
        .map(|&n| {
            let schedule = schedules::growing(cfg.horizon, n)
                .with_context(|| format!("growing schedule with R = n = {n}"))?;
            let params = problem_params(cfg, &problem, n, Some(n))?;
            let agg = simulate(cfg, &problem, &schedule, params)?;
            let last = agg.last().expect("trace has a final record");
            Ok(SpeedupRow {
                workers: n,
                rounds: schedule.rounds(),
                mean_final: last.suboptimality.mean,
                std_final: last.suboptimality.std,
                reference: noise.sigma2() / (mu * n as f64 * cfg.horizon as f64),
            })
        })
        .collect()
}

pub fn cmd_speedup(cfg: &Config) -> Result<String> {
    let rows = speedup_rows(cfg)?;
    let mut csv = header("speedup", cfg, &[]);
    csv.push_str(SPEEDUP_HEADER);
    csv.push('\n');
    for r in rows {
        writeln!(
            csv,
            "{},{},{:e},{:e},{:e}",
            r.workers, r.rounds, r.mean_final, r.std_final, r.reference
        )
        .unwrap();
    }
    Ok(csv)
}

fn verdict(report: &BoundReport) -> String {
    let failing = report.admissibility.failures().count();
    let total = report.admissibility.intervals.len();
    let mut reasons = Vec::new();
    if !report.admissibility.beta_ok {
        reasons.push("β < 2κ²".to_string());
    }
    if failing > 0 {
        reasons.push(format!("{failing} of {total} intervals fail"));
    }
    if reasons.is_empty() {
        "yes".into()
    } else {
        format!("no ({})", reasons.join("; "))
    }
}

/// `bound`: admissibility, `min_beta`, lag sum and every applicable bound
/// for each configured schedule.
pub fn cmd_bound(cfg: &Config) -> Result<String> {
    let problem = Problem::from_config(cfg)?;
    let noise = require_noise(cfg, &problem, "bound")?;
    let obj = problem.objective();
    let xi0 = match cfg.xi0 {
        Some(x) => x,
        None => obj.suboptimality(&cfg.x0.vector(obj.dim())),
    };

    let mut out = header("bound", cfg, &[]);
    writeln!(
        out,
        "mu = {:e}\nL = {:e}\nkappa = {:e}\nc = {:e}\nsigma2 = {:e}\nxi0 = {:e}",
        obj.mu(),
        obj.smoothness(),
        obj.smoothness() / obj.mu(),
        noise.c(),
        noise.sigma2(),
        xi0
    )
    .unwrap();

    for spec in &cfg.schedules {
        let schedule = spec
            .build(cfg.horizon)
            .with_context(|| format!("schedule `{spec}`"))?;
        let params = problem_params(cfg, &problem, cfg.workers, spec.growing_rounds())?;
        let report = BoundReport::new(xi0, &schedule, spec.kind(), &params, &noise);
        let qualifier = if report.admissibility.admissible() {
            ""
        } else {
            " (formula value only)"
        };

        writeln!(out, "\nschedule = {spec}\nrounds = {}", schedule.rounds()).unwrap();
        writeln!(out, "beta = {:e}", params.beta()).unwrap();
        writeln!(out, "min_beta = {:e}", report.min_beta).unwrap();
        writeln!(out, "admissible: {}", verdict(&report)).unwrap();
        writeln!(out, "interval,tau,H,lhs,pass").unwrap();
        for c in &report.admissibility.intervals {
            writeln!(
                out,
                "{},{},{},{:e},{}",
                c.index,
                c.start,
                c.length,
                c.lhs,
                if c.pass { "yes" } else { "no" }
            )
            .unwrap();
        }
        writeln!(out, "lag_sum = {:e}", report.lag_sum).unwrap();
        writeln!(out, "bound_general = {:e}{qualifier}", report.general).unwrap();
        if let Some(b) = report.fixed {
            writeln!(out, "bound_fixed = {b:e}{qualifier}").unwrap();
        }
        if let Some(b) = report.growing {
            writeln!(out, "bound_growing = {b:e}{qualifier}").unwrap();
        }
    }
    Ok(out)
}
