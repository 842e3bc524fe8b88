use criterion::{criterion_group, criterion_main, Criterion};
use netfuncap_bench::bound_cases;
use netfuncap_core::bounds::{bounds_report, min_cut_f, steiner_packing};
use netfuncap_core::{Budget, DEFAULT_TOL};

fn cut_set(c: &mut Criterion) {
    let budget = Budget::default();
    let mut group = c.benchmark_group("min_cut_f");
    for (name, net, f) in bound_cases() {
        group.bench_function(name, |b| b.iter(|| min_cut_f(&net, &f, &budget).unwrap()));
    }
    group.finish();
}

fn packing(c: &mut Criterion) {
    let budget = Budget::default();
    let mut group = c.benchmark_group("steiner_packing");
    for (name, net, _) in bound_cases() {
        group.bench_function(name, |b| b.iter(|| steiner_packing(&net, &budget).unwrap()));
    }
    group.finish();
}

fn report(c: &mut Criterion) {
    let budget = Budget::default();
    let mut group = c.benchmark_group("bounds_report");
    group.sample_size(20);
    for (name, net, f) in bound_cases() {
        group.bench_function(name, |b| {
            b.iter(|| bounds_report(&net, &f, &budget, DEFAULT_TOL).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, cut_set, packing, report);
criterion_main!(benches);
