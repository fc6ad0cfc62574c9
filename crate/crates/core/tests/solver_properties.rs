use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sts_core::{
    DataSample, DataSource, Dataset, FeasibleSet, Logistic, LossModel, ReluMlp, RiskParams,
    SolverParams, StepSchedule, Sts, Telemetry, UniformSampler,
};

fn bounded_logistic_data(n: usize, d: usize, seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = (0..n)
        .map(|_| {
            let a: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let label = if rng.gen_bool(0.4) { 1.0 } else { -1.0 };
            DataSample::new(a, label)
        })
        .collect();
    Dataset::new(samples, d, Some(vec![-1.0, 1.0]), "bounded").unwrap()
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

#[test]
fn same_seed_same_trajectory() {
    let ds = bounded_logistic_data(150, 4, 1);
    let model = Logistic::new(4);
    let set = FeasibleSet::cube(5, 10.0).unwrap();
    let run = |seed| {
        let params = SolverParams::new(RiskParams::new(0.7).unwrap(), 3000, seed);
        let sts = Sts::new(params, StepSchedule::default(), &set, &model).unwrap();
        let mut s = UniformSampler::new(&ds, seed).unwrap();
        sts.run(&mut s, Telemetry::exact(100, ds.samples()), None)
            .unwrap()
    };
    let (a, b, c) = (run(4), run(4), run(5));
    assert_eq!(a.state, b.state);
    assert_eq!(a.records, b.records);
    assert_ne!(a.state.x, c.state.x);
}

#[test]
fn averaged_direction_stays_bounded() {
    // Every composite draw has norm at most (1 + 2κ)·max‖(a, 1)‖, and z is a
    // running convex combination of such draws.
    let d = 6;
    let ds = bounded_logistic_data(200, d, 2);
    let bound_grad = ds
        .samples()
        .iter()
        .map(|s| (norm(&s.features).powi(2) + 1.0).sqrt())
        .fold(0.0, f64::max);
    let model = Logistic::new(d);
    let set = FeasibleSet::cube(d + 1, 1e3).unwrap();
    for kappa in [0.0, 0.5, 1.0] {
        for batch in [1, 3] {
            let mut params = SolverParams::new(RiskParams::new(kappa).unwrap(), 1, 9);
            params.batch = batch;
            let sts = Sts::new(params, StepSchedule::default(), &set, &model).unwrap();
            let mut s = UniformSampler::new(&ds, 9).unwrap();
            let mut state = sts.init_state(&mut s, None).unwrap();
            let limit = (1.0 + 2.0 * kappa) * bound_grad + 1e-12;
            for _ in 0..5000 {
                sts.iterate(&mut state, &mut s).unwrap();
                assert!(
                    norm(&state.z) <= limit,
                    "‖z‖ = {} > {limit}",
                    norm(&state.z)
                );
            }
        }
    }
}

#[test]
fn iterates_stay_feasible() {
    let d = 3;
    let ds = bounded_logistic_data(100, d, 3);
    let model = Logistic::without_bias(d);
    for set in [
        FeasibleSet::cube(d, 0.2).unwrap(),
        FeasibleSet::ball(vec![0.5, 0.0, -0.5], 0.3).unwrap(),
        FeasibleSet::simplex(d, 1.0).unwrap(),
    ] {
        let params = SolverParams::new(RiskParams::new(0.5).unwrap(), 1, 0);
        let sts = Sts::new(params, StepSchedule::default(), &set, &model).unwrap();
        let mut s = UniformSampler::new(&ds, 0).unwrap();
        let mut state = sts.init_state(&mut s, None).unwrap();
        for _ in 0..2000 {
            let info = sts.iterate(&mut state, &mut s).unwrap();
            assert!(set.contains(&state.x, 1e-9));
            assert!(info.eta <= 0.0);
        }
    }
}

#[test]
fn telemetry_counts_samples_monotonically() {
    let ds = bounded_logistic_data(80, 2, 4);
    let model = Logistic::new(2);
    let set = FeasibleSet::cube(3, 1e3).unwrap();
    let params = SolverParams::new(RiskParams::new(0.5).unwrap(), 1234, 1);
    let sts = Sts::new(params, StepSchedule::default(), &set, &model).unwrap();
    let mut s = UniformSampler::new(&ds, 1).unwrap();
    let run = sts.run(&mut s, Telemetry::estimated(100), None).unwrap();
    let ks: Vec<usize> = run.records.iter().map(|r| r.k).collect();
    assert_eq!(ks.len(), 13);
    assert_eq!(*ks.last().unwrap(), 1234);
    assert!(run.records.windows(2).all(|w| w[0].samples < w[1].samples));
    assert_eq!(
        run.records.last().unwrap().samples,
        run.state.samples_consumed
    );
    assert_eq!(s.draws(), run.state.samples_consumed);
}

#[test]
fn mlp_run_is_finite() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let samples = (0..120)
        .map(|i| {
            let c = i % 3;
            let mut a: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
            a[c] += 2.0;
            DataSample::new(a, c as f64)
        })
        .collect();
    let ds = Dataset::new(samples, 4, None, "blobs").unwrap();
    let model = ReluMlp::new(vec![4, 5, 3]).unwrap();
    let set = FeasibleSet::cube(model.dimension(), 1e3).unwrap();
    let x0: Vec<f64> = (0..model.dimension())
        .map(|_| rng.gen_range(-0.5..0.5))
        .collect();
    let params = SolverParams::new(RiskParams::new(0.5).unwrap(), 3000, 2);
    let sts = Sts::new(params, StepSchedule::default(), &set, &model).unwrap();
    let mut s = UniformSampler::new(&ds, 2).unwrap();
    let run = sts
        .run(&mut s, Telemetry::exact(500, ds.samples()), Some(&x0))
        .unwrap();
    let first = run.records.first().unwrap().robust_obj;
    let last = run.records.last().unwrap().robust_obj;
    assert!(last.is_finite() && last < first, "{first} -> {last}");
}
