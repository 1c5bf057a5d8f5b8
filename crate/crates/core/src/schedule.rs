//! Communication-time sets `I = {tau_1 < ... < tau_R = T}`.
//!
//! `tau_0 = 0` is implicit: every worker starts from the same point.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Schedule {
    horizon: usize,
    comm_times: Vec<usize>,
}

impl Schedule {
    /// Builds a schedule from an explicit list of communication times.
    ///
    /// The list must be strictly increasing, start at `>= 1` and end at
    /// exactly `horizon`.
    pub fn new(horizon: usize, comm_times: Vec<usize>) -> Result<Self> {
        if horizon == 0 {
            return Err(Error::InvalidSchedule("horizon must be at least 1".into()));
        }
        match comm_times.first() {
            None => return Err(Error::InvalidSchedule("no communication times".into())),
            Some(0) => {
                return Err(Error::InvalidSchedule(
                    "communication times start at 1".into(),
                ))
            }
            Some(_) => {}
        }
        if let Some(w) = comm_times.windows(2).find(|w| w[1] <= w[0]) {
            return Err(Error::InvalidSchedule(format!(
                "times must be strictly increasing ({} then {})",
                w[0], w[1]
            )));
        }
        let last = *comm_times.last().unwrap();
        if last != horizon {
            return Err(Error::InvalidSchedule(format!(
                "last communication time {last} differs from horizon {horizon}"
            )));
        }
        Ok(Self {
            horizon,
            comm_times,
        })
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn comm_times(&self) -> &[usize] {
        &self.comm_times
    }

    /// Number of communication rounds `R`.
    pub fn rounds(&self) -> usize {
        self.comm_times.len()
    }

    pub fn is_comm_time(&self, t: usize) -> bool {
        self.comm_times.binary_search(&t).is_ok()
    }

    /// Most recent communication time at or before `t`, or 0 before the
    /// first one.
    pub fn last_comm(&self, t: usize) -> Result<usize> {
        if t > self.horizon {
            return Err(Error::OutOfRange {
                t,
                limit: self.horizon + 1,
            });
        }
        Ok(self.last_comm_unchecked(t))
    }

    pub(crate) fn last_comm_unchecked(&self, t: usize) -> usize {
        match self.comm_times.binary_search(&t) {
            Ok(i) => self.comm_times[i],
            Err(0) => 0,
            Err(i) => self.comm_times[i - 1],
        }
    }

    /// Interval lengths `H_i = tau_{i+1} - tau_i`, starting from `tau_0 = 0`.
    pub fn interval_lengths(&self) -> Vec<usize> {
        self.intervals().map(|(_, h)| h).collect()
    }

    /// `(tau_i, H_i)` pairs for `i = 0..R`.
    pub fn intervals(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        std::iter::once(0)
            .chain(self.comm_times.iter().copied())
            .zip(self.comm_times.iter().copied())
            .map(|(start, end)| (start, end - start))
    }

    pub fn max_interval(&self) -> usize {
        self.intervals().map(|(_, h)| h).max().unwrap_or(0)
    }
}

impl fmt::Display for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let times: Vec<String> = self.comm_times.iter().map(|t| t.to_string()).collect();
        write!(f, "{}", times.join(","))
    }
}
