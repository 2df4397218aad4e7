use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use discovery_core::estimators::bnp_discovery_value;
use discovery_core::intervals::{TiltedStable, TiltedStats, ZPosteriorSampler};
use discovery_core::numeric::gen_factorial_row;
use discovery_core::pyp::fit_empirical_bayes;
use discovery_core::{fixtures, FitConfig, PdParams, StreamPlan};

fn aerobic_params() -> PdParams {
    PdParams::new(0.66850, 46.2411).unwrap()
}

fn bench_gen_factorial(c: &mut Criterion) {
    c.bench_function("gen_factorial_row m=60", |b| b.iter(|| gen_factorial_row(black_box(60), 0.6685, 47.0).unwrap()));
}

fn bench_discovery(c: &mut Criterion) {
    let s = fixtures::aerobic().unwrap();
    let p = aerobic_params();
    let mut g = c.benchmark_group("bnp_discovery");
    for mult in [0u64, 1, 100] {
        g.bench_function(format!("m={mult}n l=3"), |b| {
            b.iter(|| bnp_discovery_value(&p, &s, black_box(mult * s.n()), 3).unwrap())
        });
    }
    g.finish();
}

fn bench_fit(c: &mut Criterion) {
    let s = fixtures::anaerobic().unwrap();
    c.bench_function("fit_empirical_bayes anaerobic", |b| {
        b.iter(|| fit_empirical_bayes(black_box(&s), &FitConfig::default()).unwrap())
    });
}

fn bench_samplers(c: &mut Criterion) {
    let ts = TiltedStable::new(0.6).unwrap();
    let mut g = c.benchmark_group("samplers");
    for t in [1.0, 30.0] {
        g.bench_function(format!("tilted t={t}"), |b| {
            let mut rng = StreamPlan::new(1).rng(0);
            let mut stats = TiltedStats::default();
            b.iter(|| ts.sample_scaled(black_box(t), &mut rng, &mut stats).unwrap())
        });
    }
    let s = fixtures::aerobic().unwrap();
    let z = ZPosteriorSampler::new(aerobic_params(), s.n(), s.k()).unwrap();
    g.sample_size(10);
    g.bench_function("posterior Z x1000 aerobic", |b| {
        let mut rng = StreamPlan::new(2).rng(0);
        b.iter(|| z.sample(1000, &mut rng).unwrap())
    });
    g.finish();
}

criterion_group!(numeric, bench_gen_factorial, bench_discovery);
criterion_group!(inference, bench_fit, bench_samplers);
criterion_main!(numeric, inference);
