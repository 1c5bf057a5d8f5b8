//! Trace-level invariants of the Local SGD engine.

use localsgd::rng::StreamRng;
use localsgd::{
    schedules, LocalSgd, Objective, ProblemParams, QuadraticStrongGrowth, Schedule, Trace,
};

fn all_schedules(horizon: usize) -> Vec<Schedule> {
    vec![
        schedules::synchronous(horizon).unwrap(),
        schedules::one_shot(horizon).unwrap(),
        schedules::fixed_interval(horizon, 7).unwrap(),
        schedules::growing(horizon, 10).unwrap(),
    ]
}

fn run(obj: &QuadraticStrongGrowth, s: &Schedule, n: usize, seed: u64) -> Trace {
    let p = ProblemParams::new(1.0, 1.0, n, s.horizon(), 1.0).unwrap();
    LocalSgd::new(obj, s, p)
        .unwrap()
        .with_initial_point(vec![1.0; obj.dim()])
        .unwrap()
        .with_stride(1)
        .unwrap()
        .run(seed, 0)
        .unwrap()
}

/// Records at `t` for every `t` in `0..=T`, ignoring comm counts.
fn values(trace: &Trace) -> Vec<(usize, u64, u64, u64)> {
    trace
        .records
        .iter()
        .map(|r| {
            (
                r.t,
                r.suboptimality.to_bits(),
                r.consensus_error.to_bits(),
                r.avg_grad_sqnorm.to_bits(),
            )
        })
        .collect()
}

#[test]
fn seed_replay_is_bit_exact() {
    let obj = QuadraticStrongGrowth::new(3, 9.0, 0.25).unwrap();
    let s = schedules::growing(200, 12).unwrap();
    assert_eq!(run(&obj, &s, 6, 99), run(&obj, &s, 6, 99));
    assert_ne!(
        values(&run(&obj, &s, 6, 99)),
        values(&run(&obj, &s, 6, 100))
    );
}

#[test]
fn zero_noise_is_schedule_invariant() {
    let obj = QuadraticStrongGrowth::new(3, 0.0, 0.0).unwrap();
    let traces: Vec<_> = all_schedules(120)
        .iter()
        .map(|s| values(&run(&obj, s, 8, 5)))
        .collect();
    for tr in &traces[1..] {
        assert_eq!(tr, &traces[0]);
    }
    let sync = run(&obj, &all_schedules(120)[0], 8, 5);
    assert!(sync.records.iter().all(|r| r.consensus_error == 0.0));
}

#[test]
fn single_worker_is_schedule_invariant() {
    let obj = QuadraticStrongGrowth::new(3, 9.0, 0.25).unwrap();
    let traces: Vec<_> = all_schedules(150)
        .iter()
        .map(|s| values(&run(&obj, s, 1, 6)))
        .collect();
    for tr in &traces[1..] {
        assert_eq!(tr, &traces[0]);
    }
}

#[test]
fn synchronous_equals_minibatch_sgd() {
    let obj = QuadraticStrongGrowth::new(3, 9.0, 0.25).unwrap();
    let (n, horizon, seed) = (5usize, 100usize, 21u64);
    let trace = run(&obj, &schedules::synchronous(horizon).unwrap(), n, seed);

    let p = ProblemParams::new(1.0, 1.0, n, horizon, 1.0).unwrap();
    let mut x = vec![1.0; 3];
    let mut g = vec![0.0; 3];
    for t in 0..horizon {
        let mut avg = vec![0.0; 3];
        for i in 0..n {
            let mut rng = StreamRng::new(seed, 0, i as u64, t as u64);
            obj.sample_grad_into(&x, &mut rng, &mut g);
            for (a, v) in avg.iter_mut().zip(&g) {
                *a += v / n as f64;
            }
        }
        let eta = p.step_size(t).unwrap();
        for (xi, a) in x.iter_mut().zip(&avg) {
            *xi -= eta * a;
        }
        let rec = trace.at(t + 1).unwrap();
        let expected = obj.suboptimality(&x);
        assert!(
            (rec.suboptimality - expected).abs() <= 1e-12 * expected.max(1e-300),
            "t={}: {} vs {}",
            t + 1,
            rec.suboptimality,
            expected
        );
    }
}

#[test]
fn comm_counts_and_sync_invariant() {
    let obj = QuadraticStrongGrowth::new(3, 9.0, 0.25).unwrap();
    for s in all_schedules(90) {
        let trace = run(&obj, &s, 4, 8);
        let comms: Vec<usize> = trace.records.iter().map(|r| r.comms).collect();
        assert!(comms.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(*comms.last().unwrap(), s.rounds());
        assert_eq!(trace.records[0].consensus_error, 0.0);
        for t in s.comm_times() {
            assert_eq!(trace.at(*t).unwrap().consensus_error, 0.0);
        }
    }
}

#[cfg(feature = "parallel")]
#[test]
fn thread_count_does_not_change_aggregates() {
    let obj = QuadraticStrongGrowth::new(3, 9.0, 0.25).unwrap();
    let s = schedules::fixed_interval(200, 5).unwrap();
    let p = ProblemParams::new(1.0, 1.0, 10, 200, 1.0).unwrap();
    let sgd = LocalSgd::new(&obj, &s, p)
        .unwrap()
        .with_initial_point(vec![1.0; 3])
        .unwrap();
    let reference = sgd.run_trials_sequential(3, 24).unwrap();
    for threads in [1, 4, 8] {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        let agg = pool.install(|| sgd.run_trials_parallel(3, 24)).unwrap();
        assert_eq!(agg, reference);
    }
}

/// Exact `E[F(x̄_T)]` for the quadratic with `x0 = c·1`, from the recursion on
/// per-coordinate moments `a = E[x_i²]`, `b = E[x_i x_j]`.
fn exact_final_subopt(
    obj: &QuadraticStrongGrowth,
    c1: f64,
    c2: f64,
    s: &Schedule,
    p: &ProblemParams,
    x0: f64,
) -> f64 {
    let n = p.workers() as f64;
    let (mut a, mut b) = (x0 * x0, x0 * x0);
    for t in 0..s.horizon() {
        let eta = p.step_size(t).unwrap();
        let keep = (1.0 - eta) * (1.0 - eta);
        a = a * (keep + eta * eta * c1) + eta * eta * c2;
        b *= keep;
        if s.is_comm_time(t + 1) {
            a = (a + (n - 1.0) * b) / n;
            b = a;
        }
    }
    0.5 * obj.dim() as f64 * (a + (n - 1.0) * b) / n
}

#[test]
fn monte_carlo_matches_exact_second_moments() {
    let (c1, c2) = (9.0, 0.25);
    let obj = QuadraticStrongGrowth::new(3, c1, c2).unwrap();
    let horizon = 300;
    let trials = 2000;
    for s in [
        schedules::synchronous(horizon).unwrap(),
        schedules::fixed_interval(horizon, 5).unwrap(),
        schedules::growing(horizon, 12).unwrap(),
    ] {
        let p = ProblemParams::new(1.0, 1.0, 10, horizon, 1.0).unwrap();
        let exact = exact_final_subopt(&obj, c1, c2, &s, &p, 1.0);
        let agg = LocalSgd::new(&obj, &s, p)
            .unwrap()
            .with_initial_point(vec![1.0; 3])
            .unwrap()
            .with_stride(horizon)
            .unwrap()
            .run_trials(7, trials)
            .unwrap();
        let last = agg.last().unwrap().suboptimality;
        let se = last.std_err(trials);
        assert!(
            (last.mean - exact).abs() <= 4.0 * se,
            "{s}: mc {} vs exact {exact} (se {se})",
            last.mean
        );
    }
}
