use criterion::{criterion_group, criterion_main, Criterion};

use lieleib_core::algebra::sl2_trace_form;
use lieleib_core::bar::check_bar;
use lieleib_core::homotopy::verify_shll_square;
use lieleib_core::quadratic::{check_distributive, orthogonal_complement, quotient_dim};
use lieleib_core::zoo::{delta_rules, presentation};

fn quadratic(c: &mut Criterion) {
    let ll = presentation("LL").unwrap();
    c.bench_function("quotient_dim LL(4)", |b| b.iter(|| quotient_dim(&ll, 4).unwrap()));
    c.bench_function("orthogonal_complement LL", |b| b.iter(|| orthogonal_complement(&ll).unwrap()));
    let (lie, sleib) = (presentation("Lie").unwrap(), presentation("sLeib").unwrap());
    let delta = delta_rules("Lie", "sLeib").unwrap();
    c.bench_function("check_distributive Lie sLeib", |b| b.iter(|| check_distributive(&lie, &sleib, &delta).unwrap()));
}

fn bar(c: &mut Criterion) {
    let alg = sl2_trace_form();
    c.bench_function("check_bar sl2 weight 3", |b| b.iter(|| check_bar(&alg, 3).unwrap()));
}

fn homotopy(c: &mut Criterion) {
    let mut g = c.benchmark_group("shll");
    g.sample_size(10);
    g.bench_function("verify_shll_square N=4", |b| b.iter(|| verify_shll_square(4, &[0; 4]).unwrap()));
    g.finish();
}

criterion_group!(benches, quadratic, bar, homotopy);
criterion_main!(benches);
