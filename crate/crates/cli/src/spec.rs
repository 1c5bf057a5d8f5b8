//! Schedule specifications: `sync | oneshot | fixed:H | growing:R[:a] | custom:t1,t2,...`.

use std::fmt;
use std::str::FromStr;

use localsgd::bounds::ScheduleKind;
use localsgd::{schedules, Schedule};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScheduleSpec {
    Sync,
    OneShot,
    Fixed(usize),
    Growing {
        rounds: usize,
        factor: Option<usize>,
    },
    Custom(Vec<usize>),
}

impl ScheduleSpec {
    pub fn build(&self, horizon: usize) -> localsgd::Result<Schedule> {
        match self {
            Self::Sync => schedules::synchronous(horizon),
            Self::OneShot => schedules::one_shot(horizon),
            Self::Fixed(h) => schedules::fixed_interval(horizon, *h),
            Self::Growing {
                rounds,
                factor: None,
            } => schedules::growing(horizon, *rounds),
            Self::Growing {
                rounds,
                factor: Some(a),
            } => schedules::growing_with_factor(horizon, *rounds, *a),
            Self::Custom(times) => Schedule::new(horizon, times.clone()),
        }
    }

    pub fn kind(&self) -> ScheduleKind {
        match self {
            Self::Sync => ScheduleKind::Synchronous,
            Self::OneShot => ScheduleKind::OneShot,
            Self::Fixed(h) => ScheduleKind::Fixed { interval: *h },
            // An overridden growth factor voids the growing-schedule bound.
            Self::Growing {
                rounds,
                factor: None,
            } => ScheduleKind::Growing { rounds: *rounds },
            Self::Growing { .. } | Self::Custom(_) => ScheduleKind::Custom,
        }
    }

    /// `R` to use for the sharper `beta = auto` rule, if any.
    pub fn growing_rounds(&self) -> Option<usize> {
        match self {
            Self::Growing {
                rounds,
                factor: None,
            } => Some(*rounds),
            _ => None,
        }
    }

    /// File-name friendly label.
    pub fn label(&self) -> String {
        match self {
            Self::Sync => "sync".into(),
            Self::OneShot => "oneshot".into(),
            Self::Fixed(h) => format!("fixed-{h}"),
            Self::Growing {
                rounds,
                factor: None,
            } => format!("growing-{rounds}"),
            Self::Growing {
                rounds,
                factor: Some(a),
            } => format!("growing-{rounds}-a{a}"),
            Self::Custom(times) => format!("custom-{}", times.len()),
        }
    }
}

impl fmt::Display for ScheduleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Sync => write!(f, "sync"),
            Self::OneShot => write!(f, "oneshot"),
            Self::Fixed(h) => write!(f, "fixed:{h}"),
            Self::Growing {
                rounds,
                factor: None,
            } => write!(f, "growing:{rounds}"),
            Self::Growing {
                rounds,
                factor: Some(a),
            } => write!(f, "growing:{rounds}:{a}"),
            Self::Custom(times) => {
                let list: Vec<String> = times.iter().map(|t| t.to_string()).collect();
                write!(f, "custom:{}", list.join(","))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid schedule spec `{spec}`: {reason}")]
pub struct SpecError {
    pub spec: String,
    pub reason: String,
}

impl FromStr for ScheduleSpec {
    type Err = SpecError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let fail = |reason: &str| SpecError {
            spec: s.to_string(),
            reason: reason.to_string(),
        };
        let int = |tok: &str| {
            tok.trim()
                .parse::<usize>()
                .map_err(|_| fail(&format!("`{}` is not a nonnegative integer", tok.trim())))
        };
        let (head, rest) = match s.split_once(':') {
            Some((h, r)) => (h, Some(r)),
            None => (s, None),
        };
        match (head, rest) {
            ("sync", None) => Ok(Self::Sync),
            ("oneshot", None) => Ok(Self::OneShot),
            ("fixed", Some(h)) => Ok(Self::Fixed(int(h)?)),
            ("growing", Some(r)) => match r.split_once(':') {
                None => Ok(Self::Growing {
                    rounds: int(r)?,
                    factor: None,
                }),
                Some((r, a)) => Ok(Self::Growing {
                    rounds: int(r)?,
                    factor: Some(int(a)?),
                }),
            },
            ("custom", Some(list)) => Ok(Self::Custom(
                list.split(',').map(int).collect::<Result<_, _>>()?,
            )),
            _ => Err(fail(
                "expected sync | oneshot | fixed:H | growing:R[:a] | custom:t1,t2,...",
            )),
        }
    }
}
