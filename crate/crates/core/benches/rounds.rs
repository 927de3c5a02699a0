use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use flockcd::dynamics::{aggregate_runs, DynParams};
use flockcd::generators::{planted_partition, PlantedSpec};
use flockcd::{detect, DetectorConfig, Exec, Removal, StopRule};
use std::hint::black_box;

fn execs() -> [(&'static str, Exec); 2] {
    [
        ("sequential", Exec::Sequential),
        ("parallel", Exec::Parallel),
    ]
}

fn one_round(c: &mut Criterion) {
    let mut group = c.benchmark_group("aggregate_10_runs");
    group.sample_size(10);
    for size in [100usize, 200] {
        let (g, _) = planted_partition(&PlantedSpec::balanced(size, 10, 0.66, 7)).unwrap();
        let params = DynParams::default();
        for (name, exec) in execs() {
            group.bench_with_input(BenchmarkId::new(name, g.edge_count()), &g, |b, g| {
                b.iter(|| aggregate_runs(black_box(g), &params, 10, 1, exec).unwrap())
            });
        }
    }
    group.finish();
}

fn short_detection(c: &mut Criterion) {
    let mut group = c.benchmark_group("detect_fraction_5pct");
    group.sample_size(10);
    let (g, _) = planted_partition(&PlantedSpec::balanced(50, 10, 0.8, 3)).unwrap();
    for (name, exec) in execs() {
        let cfg = DetectorConfig {
            removal: Removal::Fraction(0.05),
            stop: StopRule::Patience(3),
            exec,
            ..DetectorConfig::default()
        };
        group.bench_function(name, |b| b.iter(|| detect(black_box(&g), &cfg).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, one_round, short_detection);
criterion_main!(benches);
