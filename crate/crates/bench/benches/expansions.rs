use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use maasslab::hecke::{eigen_check, expected_eigenvalue, HeckeOp};
use maasslab::numeric::{eval_form, laplacian_residual};
use maasslab::padic::padic_l_int;
use maasslab::qexp::{eisenstein_p, maass_g, maass_g_p, maass_h, maass_h_p};
use maasslab::zagier::verify_zagier;
use maasslab::DirichletChar;
use maasslab_bench::{forms, POINTS};

fn constructors(c: &mut Criterion) {
    c.bench_function("maass_g k=2 n=200", |b| b.iter(|| maass_g(black_box(2), 200).unwrap()));
    c.bench_function("maass_h r=2 n=200", |b| b.iter(|| maass_h(black_box(2), 200).unwrap()));
    c.bench_function("eisenstein_p 6 p=5 n=200", |b| {
        b.iter(|| eisenstein_p(black_box(6), 5, 200).unwrap())
    });
    c.bench_function("maass_g_p k=1 p=5 n=100", |b| {
        b.iter(|| maass_g_p(black_box(1), 5, 100, 10).unwrap())
    });
    c.bench_function("maass_h_p r=1 p=5 n=50", |b| {
        b.iter(|| maass_h_p(black_box(1), 5, 50, 10).unwrap())
    });
}

fn checks(c: &mut Criterion) {
    let (g, h) = forms(2, 2, 225);
    c.bench_function("eigen_check T(3) on G", |b| {
        b.iter(|| eigen_check(&g, HeckeOp::Tp(3), &expected_eigenvalue(3, 2), 75).unwrap())
    });
    c.bench_function("eigen_check T(9) on H", |b| {
        b.iter(|| eigen_check(&h, HeckeOp::Tp2(3), &expected_eigenvalue(3, 2), 25).unwrap())
    });
    c.bench_function("verify_zagier n=5 M=50", |b| {
        b.iter(|| verify_zagier(black_box(5), 2, 50, 1e-8, false).unwrap())
    });
    let chi = DirichletChar::kronecker(-4).unwrap();
    c.bench_function("padic_l_int chi_-4 p=5", |b| {
        b.iter(|| padic_l_int(black_box(3), &chi, 5, 10).unwrap())
    });
}

fn numerics(c: &mut Criterion) {
    let (g, h) = forms(1, 1, 40);
    c.bench_function("eval_form G 40 terms", |b| {
        b.iter(|| eval_form(&g, black_box(POINTS[0]), 40).unwrap())
    });
    c.bench_function("laplacian_residual H", |b| {
        b.iter(|| laplacian_residual(&h, black_box(POINTS[1]), 1e-3, 40).unwrap())
    });
}

criterion_group!(benches, constructors, checks, numerics);
criterion_main!(benches);
