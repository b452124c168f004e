use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use qdf_bench::{generator, initial_state, params, test_vector};
use qdf_core::{evolve_expm, evolve_rk4, Generator, Rk4Options, SectorLayout, C64};

fn assembly(c: &mut Criterion) {
    let p = params(4);
    c.bench_function("assemble reduced N=4", |b| b.iter(|| Generator::assemble_reduced(black_box(&p)).unwrap()));
    c.bench_function("assemble full N=4", |b| b.iter(|| Generator::assemble(black_box(&p)).unwrap()));
}

fn apply(c: &mut Criterion) {
    let mut group = c.benchmark_group("apply N=4");
    for layout in [SectorLayout::SpinReduced, SectorLayout::Full] {
        let g = generator(4, layout);
        let v = test_vector(g.dim());
        let mut out = vec![C64::default(); g.dim()];
        let sparse = g.with_sparse_kernel();
        group.bench_function(format!("structured dim {}", g.dim()), |b| {
            b.iter(|| g.apply(black_box(&v), &mut out).unwrap())
        });
        group.bench_function(format!("sparse dim {}", g.dim()), |b| {
            b.iter(|| sparse.apply(black_box(&v), &mut out).unwrap())
        });
    }
    group.finish();
}

fn integrate(c: &mut Criterion) {
    let g = generator(4, SectorLayout::SpinReduced);
    let rho = initial_state(4, SectorLayout::SpinReduced);
    let opts = Rk4Options::new(1.0, 1e-3, 1.0);
    c.bench_function("rk4 1000 steps N=4", |b| b.iter(|| evolve_rk4(&g, black_box(&rho), &opts).unwrap()));

    let g = generator(2, SectorLayout::SpinReduced);
    let rho = initial_state(2, SectorLayout::SpinReduced);
    c.bench_function("expm t=50 N=2", |b| b.iter(|| evolve_expm(&g, black_box(&rho), 50.0).unwrap()));
}

criterion_group!(benches, assembly, apply, integrate);
criterion_main!(benches);
