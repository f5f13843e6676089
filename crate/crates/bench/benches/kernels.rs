use std::hint::black_box;

use beltrami_core::dirichlet::{BoundaryData, SchwarzEvaluator};
use beltrami_core::modulus::{discrete_modulus, CurveFamily};
use beltrami_core::solver::{mrm_solve, SolverOptions, Spectral};
use beltrami_core::{make_grid, BBox, DomainSpec, MuGenerator, C64};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn beurling(c: &mut Criterion) {
    let mut group = c.benchmark_group("beurling");
    for n in [128, 256, 512] {
        let grid = make_grid(BBox::square(C64::new(0.0, 0.0), 2.0), n).unwrap();
        let spectral = Spectral::new(grid);
        let values: Vec<C64> = (0..n * n).map(|k| C64::new((k % 7) as f64, (k % 5) as f64)).collect();
        group.bench_with_input(BenchmarkId::from_parameter(n), &values, |b, v| {
            b.iter(|| spectral.beurling(black_box(v)))
        });
    }
    group.finish();
}

fn solver(c: &mut Criterion) {
    let mut group = c.benchmark_group("mrm_solve");
    group.sample_size(10);
    for n in [128, 256] {
        let grid = make_grid(BBox::square(C64::new(0.0, 0.0), 2.0), n).unwrap();
        let mu = MuGenerator::Constant(C64::new(0.3, 0.0))
            .sample(grid, &DomainSpec::UnitDisk)
            .unwrap();
        let opts = SolverOptions::default();
        group.bench_with_input(BenchmarkId::from_parameter(n), &mu, |b, mu| {
            b.iter(|| mrm_solve(black_box(mu), &opts).unwrap())
        });
    }
    group.finish();
}

fn modulus(c: &mut Criterion) {
    let mut group = c.benchmark_group("annulus_modulus");
    group.sample_size(10);
    for n in [64, 128] {
        let grid = make_grid(BBox::square(C64::new(0.0, 0.0), 1.05), n).unwrap();
        let family = CurveFamily::radial_segments(grid, C64::new(0.0, 0.0), 0.25, 1.0).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &family, |b, f| {
            b.iter(|| discrete_modulus(black_box(f), 1e-3).unwrap())
        });
    }
    group.finish();
}

fn schwarz(c: &mut Criterion) {
    let mut group = c.benchmark_group("schwarz");
    for n in [1024, 4096] {
        let phi = BoundaryData::on_circle(n, |t| (3.0 * t).cos()).unwrap();
        group.bench_with_input(BenchmarkId::new("build", n), &phi, |b, phi| {
            b.iter(|| SchwarzEvaluator::new(black_box(phi), n, 0.0).unwrap())
        });
        let h = SchwarzEvaluator::new(&phi, n, 0.0).unwrap();
        group.bench_with_input(BenchmarkId::new("eval", n), &h, |b, h| {
            b.iter(|| h.eval(black_box(C64::new(0.3, 0.4))))
        });
    }
    group.finish();
}

criterion_group!(benches, beurling, solver, modulus, schwarz);
criterion_main!(benches);
