use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use oh_core::conditions::{minimal_constant, ConditionContext, ConditionGrid, ConditionId};
use oh_core::funcspace::{ConeConfig, GridFunction, Weight};
use oh_core::harness::{empirical_norm_constant, Operator, Problem};
use oh_core::operators::Classical;

fn pools() -> Vec<(String, rayon::ThreadPool)> {
    let default = rayon::current_num_threads();
    let mut sizes = vec![1];
    if default > 1 {
        sizes.push(default);
    }
    sizes
        .into_iter()
        .map(|n| {
            let label = if n == 1 { "sequential".to_string() } else { format!("parallel-{n}") };
            (label, rayon::ThreadPoolBuilder::new().num_threads(n).build().expect("pool"))
        })
        .collect()
}

fn cone_constant(c: &mut Criterion) {
    let problem = Problem::power_unit(Operator::Classical(Classical::HardyAvg), 2.0).expect("problem");
    let cone = ConeConfig { seed: 1, size: 32, ..ConeConfig::default() };
    let mut group = c.benchmark_group("empirical_norm_constant");
    group.sample_size(10);
    for (label, pool) in pools() {
        group.bench_function(BenchmarkId::from_parameter(&label), |b| {
            b.iter(|| pool.install(|| black_box(empirical_norm_constant(&problem, &cone))))
        });
    }
    group.finish();
}

fn condition_sweep(c: &mut Criterion) {
    let ctx = ConditionContext::power(2.0, Weight::unit(), Weight::unit(), GridFunction::constant(1.0)).expect("context");
    let grid = ConditionGrid::square(0.01, 100.0, 12);
    let mut group = c.benchmark_group("minimal_constant");
    group.sample_size(10);
    for (label, pool) in pools() {
        group.bench_function(BenchmarkId::from_parameter(&label), |b| {
            b.iter(|| pool.install(|| black_box(minimal_constant(&ctx, ConditionId::T21C1, &grid).expect("sweep"))))
        });
    }
    group.finish();
}

criterion_group!(benches, cone_constant, condition_sweep);
criterion_main!(benches);
