/// Metrics of one run at iteration `t`, measured on the (virtual) average
/// of the workers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Record {
    pub t: usize,
    /// `F(x_bar) - F*`.
    pub suboptimality: f64,
    /// `sum_i ||x_i - x_bar||^2`.
    pub consensus_error: f64,
    /// `(1/n) sum_i ||grad F(x_i)||^2`.
    pub avg_grad_sqnorm: f64,
    /// Communication rounds performed up to and including `t`.
    pub comms: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trace {
    pub records: Vec<Record>,
}

impl Trace {
    pub fn last(&self) -> Option<&Record> {
        self.records.last()
    }

    pub fn at(&self, t: usize) -> Option<&Record> {
        self.records
            .binary_search_by_key(&t, |r| r.t)
            .ok()
            .map(|i| &self.records[i])
    }
}

/// Sample mean and standard deviation (denominator `k - 1`; zero for a
/// single trial).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Summary {
    pub mean: f64,
    pub std: f64,
}

impl Summary {
    pub fn of(values: impl Iterator<Item = f64> + Clone) -> Self {
        let k = values.clone().count();
        if k == 0 {
            return Self::default();
        }
        let mean = values.clone().sum::<f64>() / k as f64;
        let std = if k > 1 {
            let ss: f64 = values.map(|v| (v - mean) * (v - mean)).sum();
            (ss / (k - 1) as f64).sqrt()
        } else {
            0.0
        };
        Self { mean, std }
    }

    /// Standard error of the mean over `trials` samples.
    pub fn std_err(&self, trials: usize) -> f64 {
        self.std / (trials as f64).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AggregateRecord {
    pub t: usize,
    pub suboptimality: Summary,
    pub consensus_error: Summary,
    pub avg_grad_sqnorm: Summary,
    pub comms: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AggregateTrace {
    pub trials: usize,
    pub records: Vec<AggregateRecord>,
}

impl AggregateTrace {
    /// Pointwise summary across traces recorded at identical iterations.
    pub fn from_traces(traces: &[Trace]) -> Self {
        let first = &traces[0];
        debug_assert!(traces
            .iter()
            .all(|tr| tr.records.len() == first.records.len()));
        let records = first
            .records
            .iter()
            .enumerate()
            .map(|(k, rec)| {
                let column = |f: fn(&Record) -> f64| traces.iter().map(move |tr| f(&tr.records[k]));
                AggregateRecord {
                    t: rec.t,
                    suboptimality: Summary::of(column(|r| r.suboptimality)),
                    consensus_error: Summary::of(column(|r| r.consensus_error)),
                    avg_grad_sqnorm: Summary::of(column(|r| r.avg_grad_sqnorm)),
                    comms: rec.comms,
                }
            })
            .collect();
        Self {
            trials: traces.len(),
            records,
        }
    }

    pub fn last(&self) -> Option<&AggregateRecord> {
        self.records.last()
    }

    pub fn at(&self, t: usize) -> Option<&AggregateRecord> {
        self.records
            .binary_search_by_key(&t, |r| r.t)
            .ok()
            .map(|i| &self.records[i])
    }
}
