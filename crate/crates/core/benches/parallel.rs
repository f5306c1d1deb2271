use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use gaugelab::exec::{par, seq};
use gaugelab::C64;

// five-point stencil on an n×n torus, the shape of every Hamiltonian apply
fn stencil(x: &[C64], n: usize, i: usize) -> C64 {
    let (ix, iy) = (i / n, i % n);
    let up = ((ix + 1) % n) * n + iy;
    let dn = ((ix + n - 1) % n) * n + iy;
    let rt = ix * n + (iy + 1) % n;
    let lt = ix * n + (iy + n - 1) % n;
    x[i] * 4.0 - x[up] - x[dn] - x[rt] - x[lt]
}

fn field(n: usize) -> Vec<C64> {
    (0..n * n)
        .map(|i| C64::new((i as f64 * 0.37).sin(), (i as f64 * 0.11).cos()))
        .collect()
}

fn bench_fill(c: &mut Criterion) {
    let mut group = c.benchmark_group("stencil_fill");
    for n in [128usize, 512] {
        let x = field(n);
        let mut y = vec![C64::new(0.0, 0.0); n * n];
        group.bench_with_input(BenchmarkId::new("seq", n), &n, |b, &n| {
            b.iter(|| seq::fill(&mut y, |i| stencil(&x, n, i)))
        });
        group.bench_with_input(BenchmarkId::new("par", n), &n, |b, &n| {
            b.iter(|| par::fill(&mut y, |i| stencil(&x, n, i)))
        });
    }
    group.finish();
}

fn bench_sum(c: &mut Criterion) {
    let mut group = c.benchmark_group("inner_product");
    for n in [128usize, 512] {
        let x = field(n);
        group.bench_with_input(BenchmarkId::new("seq", n), &n, |b, _| {
            b.iter(|| black_box(seq::sum(x.len(), |i| x[i].conj() * x[i])))
        });
        group.bench_with_input(BenchmarkId::new("par", n), &n, |b, _| {
            b.iter(|| black_box(par::sum(x.len(), |i| x[i].conj() * x[i])))
        });
    }
    group.finish();
}

criterion_group!(benches, bench_fill, bench_sum);
criterion_main!(benches);
