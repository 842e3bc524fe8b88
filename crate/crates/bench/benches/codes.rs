use criterion::{criterion_group, criterion_main, Criterion};
use netfuncap_bench::with_sum;
use netfuncap_core::catalog;
use netfuncap_core::codes::{diamond_code, search_code, tree_code, verify_code};
use netfuncap_core::Budget;

fn diamond(c: &mut Criterion) {
    let budget = Budget::default();
    let (net, f) = with_sum(catalog::diamond());
    let mut group = c.benchmark_group("diamond");
    for k in [2, 4] {
        group.bench_function(format!("build_k{k}"), |b| {
            b.iter(|| diamond_code(k, &budget).unwrap())
        });
        let code = diamond_code(k, &budget).unwrap();
        group.bench_function(format!("verify_k{k}"), |b| {
            b.iter(|| verify_code(&net, &f, &code, &budget).unwrap())
        });
    }
    group.finish();
}

fn trees(c: &mut Criterion) {
    let budget = Budget::default();
    let (net, f) = with_sum(catalog::line(4));
    c.bench_function("tree_code_line4_k1_n2", |b| {
        b.iter(|| tree_code(&net, &f, 1, 2, &budget).unwrap())
    });
}

fn search(c: &mut Criterion) {
    let budget = Budget::default();
    let (net, f) = with_sum(catalog::diamond());
    c.bench_function("search_diamond_k1_n1", |b| {
        b.iter(|| search_code(&net, &f, 1, 1, &budget).unwrap())
    });
}

criterion_group!(benches, diamond, trees, search);
criterion_main!(benches);
