use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use turanlab::norms::{lq_norm, ratio, sup_norm, Norm, NormTarget};
use turanlab_bench::{domain, poly};

fn norms(c: &mut Criterion) {
    let mut g = c.benchmark_group("lq_norm");
    for name in ["disk", "heptagon"] {
        let d = domain(name);
        for n in [4usize, 16, 64] {
            let p = poly(&d, n);
            g.bench_with_input(BenchmarkId::new(name, n), &p, |b, p| {
                b.iter(|| lq_norm(NormTarget::P, black_box(p), d.boundary(), 2.0).unwrap())
            });
        }
    }
    g.finish();

    let mut g = c.benchmark_group("sup_norm");
    let d = domain("truncated_disk");
    for n in [4usize, 16, 64] {
        let p = poly(&d, n);
        g.bench_with_input(BenchmarkId::from_parameter(n), &p, |b, p| {
            b.iter(|| sup_norm(black_box(p), d.boundary()))
        });
    }
    g.finish();

    let d = domain("heptagon");
    let p = poly(&d, 16);
    c.bench_function("ratio_q1_heptagon_n16", |b| {
        b.iter(|| ratio(black_box(&p), d.boundary(), Norm::Lq(1.0)).unwrap())
    });
}

criterion_group!(benches, norms);
criterion_main!(benches);
