use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use nevlab_core::{
    ac_parameters, anderson_clunie_zeros, cauchy_derivatives, characteristic_sample, derivative_at_zero, eval_product,
    lindelof_zeros, max_modulus_on_circle, separation_scan, CanonicalProduct, CauchyOptions, LogComplex, QuadOptions,
    Weight,
};

fn lindelof(rho: f64) -> CanonicalProduct {
    CanonicalProduct::new(lindelof_zeros(rho).unwrap()).unwrap()
}

fn ac(rho: f64, n: usize) -> CanonicalProduct {
    CanonicalProduct::new(anderson_clunie_zeros(ac_parameters(rho, n).unwrap())).unwrap()
}

fn evaluation(c: &mut Criterion) {
    let l = lindelof(0.75);
    let a = ac(3.0, 4);
    let mut g = c.benchmark_group("eval");
    g.bench_function("lindelof_r1e6", |b| {
        b.iter(|| eval_product(&l, black_box(LogComplex::new(13.8, 2.0))))
    });
    g.bench_function("lindelof_near_axis", |b| {
        b.iter(|| eval_product(&l, black_box(LogComplex::new(9.2, 3.1))))
    });
    g.bench_function("ac_on_circle_4", |b| {
        b.iter(|| eval_product(&a, black_box(LogComplex::new(324.0, 0.5))))
    });
    g.finish();
}

fn quadrature(c: &mut Criterion) {
    let l = lindelof(0.75);
    let mut g = c.benchmark_group("quadrature");
    g.sample_size(10);
    g.bench_function("characteristic_lindelof_r1e3", |b| {
        b.iter(|| characteristic_sample(&l, black_box(1e3f64.ln()), &QuadOptions::default(), true))
    });
    g.bench_function("max_modulus_ac_4096", |b| {
        let a = ac(3.0, 4);
        b.iter(|| max_modulus_on_circle(&a, black_box(59.3), 4096))
    });
    g.finish();
}

fn derivatives(c: &mut Criterion) {
    let l = lindelof(0.75);
    let mut g = c.benchmark_group("derivatives");
    g.sample_size(20);
    g.bench_function("cauchy_order2_lindelof", |b| {
        b.iter(|| cauchy_derivatives(&l, black_box(LogComplex::new(5.0, 1.0)), 2, &CauchyOptions::default()))
    });
    g.bench_function("derivative_at_zero_k40", |b| {
        b.iter(|| derivative_at_zero(&l, black_box(40)))
    });
    g.bench_function("separation_scan_k200", |b| {
        b.iter(|| separation_scan(&l, Weight::Refined { rho: 0.75 }, 8.0, black_box(200)))
    });
    g.finish();
}

criterion_group!(benches, evaluation, quadrature, derivatives);
criterion_main!(benches);
