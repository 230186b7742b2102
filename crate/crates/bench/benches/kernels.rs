use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use kcmp_bench::{random_tensor, uniform_product_profile};
use kcmp_core::comparison::{ball_volume, product_ball_volume};
use kcmp_core::geodesic::riccati_delta_r;
use kcmp_core::series::{g_coefficients, g_eval_closed};
use kcmp_core::{ModelSpace, SymOperator};

fn spectrum(c: &mut Criterion) {
    let mut group = c.benchmark_group("sym_operator");
    for n in [2usize, 4, 6] {
        let r = random_tensor(n, 11);
        group.bench_with_input(BenchmarkId::from_parameter(n), &r, |b, r| b.iter(|| SymOperator::build(black_box(r)).unwrap()));
    }
    group.finish();
}

fn riccati(c: &mut Criterion) {
    let profile = uniform_product_profile(2);
    c.bench_function("riccati_delta_r/r=1", |b| b.iter(|| riccati_delta_r(black_box(&profile), 1.0, 1e-3).unwrap()));
}

fn series(c: &mut Criterion) {
    c.bench_function("g_coefficients/100", |b| b.iter(|| g_coefficients(black_box(100)).unwrap()));
    c.bench_function("g_eval_closed", |b| b.iter(|| g_eval_closed(black_box(1.3)).unwrap()));
}

fn volume(c: &mut Criterion) {
    let factors = ModelSpace::cp1_product(2).unwrap().space_form_factors().unwrap();
    c.bench_function("ball_volume/n=3", |b| b.iter(|| ball_volume(3, 1.0, black_box(1.5)).unwrap()));
    c.bench_function("product_ball_volume/cp1xcp1", |b| b.iter(|| product_ball_volume(&factors, black_box(1.5)).unwrap()));
}

criterion_group!(benches, spectrum, riccati, series, volume);
criterion_main!(benches);
