use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use polyvol::poly::{Convention, Degree, GeneralizedPolynomial};
use polyvol::solvers::{solve_p1, solve_p3, SolveConfig};
use polyvol::volume::{moment_table, volume, EngineConfig};
use std::hint::black_box;

fn figure_one() -> GeneralizedPolynomial {
    GeneralizedPolynomial::from_dense(
        2,
        Degree::integer(4).unwrap(),
        1,
        Convention::Monomial,
        &[1.0, 0.0, -1.925, 0.0, 1.0],
    )
    .unwrap()
}

fn backends(c: &mut Criterion) {
    let g = figure_one();
    let mut group = c.benchmark_group("volume");
    group.bench_function("spherical", |b| {
        b.iter(|| volume(black_box(&g), &EngineConfig::spherical()).unwrap())
    });
    group.bench_function("mc_65536", |b| {
        b.iter(|| volume(black_box(&g), &EngineConfig::monte_carlo(1 << 16, 1)).unwrap())
    });
    group.bench_function("grid_256", |b| {
        b.iter(|| volume(black_box(&g), &EngineConfig::grid(256, 1)).unwrap())
    });
    group.finish();

    let l4 = GeneralizedPolynomial::lp_ball(3, Degree::integer(4).unwrap(), 1).unwrap();
    c.bench_function("moment_table_3d_quartic_mc", |b| {
        b.iter(|| moment_table(black_box(&l4), &EngineConfig::monte_carlo(1 << 16, 1)).unwrap())
    });
}

fn solvers(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve");
    group.sample_size(10);
    group.bench_function("p1_quartic", |b| {
        b.iter_batched(
            SolveConfig::default,
            |cfg| solve_p1(2, Degree::integer(4).unwrap(), 1, None, &cfg).unwrap(),
            BatchSize::SmallInput,
        )
    });
    group.bench_function("p3_quartic", |b| {
        b.iter_batched(
            SolveConfig::default,
            |cfg| solve_p3(2, 4, None, &cfg).unwrap(),
            BatchSize::SmallInput,
        )
    });
    group.finish();
}

criterion_group!(benches, backends, solvers);
criterion_main!(benches);
