use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hlvqe_core::*;

fn hamiltonians(c: &mut Criterion) {
    let mut g = c.benchmark_group("hamiltonian");
    for n in [30, 64, 128] {
        let p = ModelParams::with_vbar(n, 1.0, 2.0).unwrap();
        g.bench_with_input(BenchmarkId::new("full", n), &p, |b, p| b.iter(|| build_full_hamiltonian(black_box(p))));
        g.bench_with_input(BenchmarkId::new("effective_l8", n), &p, |b, p| {
            b.iter(|| build_effective_hamiltonian(black_box(p), 0.9, 8).unwrap())
        });
    }
    g.finish();
}

fn rotations(c: &mut Criterion) {
    let mut g = c.benchmark_group("wigner_d");
    for two_j in [30u32, 64, 128] {
        g.bench_with_input(BenchmarkId::from_parameter(two_j), &two_j, |b, &tj| b.iter(|| wigner_d_matrix(tj, black_box(0.9))));
    }
    g.finish();
}

fn solver(c: &mut Criterion) {
    let p = ModelParams::with_vbar(30, 1.0, 2.0).unwrap();
    let opts = SolverOptions::default();
    let mut g = c.benchmark_group("solve_effective");
    for lambda in [2, 8, 20] {
        g.bench_with_input(BenchmarkId::from_parameter(lambda), &lambda, |b, &l| b.iter(|| solve_effective(&p, l, &opts).unwrap()));
    }
    g.finish();
}

fn hlvqe(c: &mut Criterion) {
    let p = ModelParams::with_vbar(30, 1.0, 2.0).unwrap();
    let opts = HlvqeOptions::default();
    let mut g = c.benchmark_group("hlvqe_run");
    g.sample_size(20);
    for lambda in [2, 4] {
        g.bench_with_input(BenchmarkId::new("analytic", lambda), &lambda, |b, &l| b.iter(|| run(&p, l, &opts).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, hamiltonians, rotations, solver, hlvqe);
criterion_main!(benches);
