use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rpcholqr::algorithms::{cholesky_qr, cholesky_qr2, rp_cholesky_qr};
use rpcholqr::kernels::householder_qr;
use rpcholqr::transforms::dct_columns;
use rpcholqr_bench::{moderate_input, singular_input, SHAPES};

fn factorizations(c: &mut Criterion) {
    let mut group = c.benchmark_group("factorize");
    group.sample_size(10);
    for (m, n) in SHAPES {
        let id = format!("{m}x{n}");
        let moderate = moderate_input(m, n);
        let singular = singular_input(m, n);
        group.bench_with_input(BenchmarkId::new("cholesky_qr", &id), &moderate, |b, a| {
            b.iter(|| cholesky_qr(a).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("cholesky_qr2", &id), &moderate, |b, a| {
            b.iter(|| cholesky_qr2(a).unwrap())
        });
        group.bench_with_input(
            BenchmarkId::new("rp_cholesky_qr", &id),
            &singular,
            |b, a| b.iter(|| rp_cholesky_qr(a, 3 * n, 7).unwrap()),
        );
        group.bench_with_input(
            BenchmarkId::new("householder_qr", &id),
            &moderate,
            |b, a| b.iter(|| householder_qr(a).unwrap()),
        );
    }
    group.finish();
}

fn dct(c: &mut Criterion) {
    let mut group = c.benchmark_group("dct_columns");
    for m in [1000, 4096, 6000] {
        let a = moderate_input(m, 100);
        group.bench_with_input(BenchmarkId::from_parameter(m), &a, |b, a| {
            b.iter(|| dct_columns(a))
        });
    }
    group.finish();
}

criterion_group!(benches, factorizations, dct);
criterion_main!(benches);
