use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use bvlab_core::shapes::{cusp, rectangle};
use bvlab_core::variational::{solve_obstacle_set, variational_capacity};
use bvlab_core::{ball, build_grid, coarea_check, min_cut, CellSet, CutProblem, GridFunction, WeightSpec};

fn min_cut_disc(c: &mut Criterion) {
    let mut group = c.benchmark_group("min_cut");
    group.sample_size(10);
    for n in [64, 128, 256] {
        let g = build_grid(2, 1.0, n, WeightSpec::Uniform).unwrap();
        let window = ball(&g, [0.0, 0.0], 0.8).unwrap();
        let a = rectangle(&g, [-0.3, 0.3], [-0.05, 0.05]).union(&ball(&g, [0.2, 0.3], 0.15).unwrap());
        let p = CutProblem::new(&g, a.clone(), window.complement(), window.difference(&a)).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &p, |b, p| b.iter(|| min_cut(black_box(p)).unwrap()));
    }
    group.finish();
}

fn obstacle_power_law(c: &mut Criterion) {
    let mut group = c.benchmark_group("obstacle_power_law");
    group.sample_size(10);
    for n in [128, 256] {
        let g = build_grid(2, 1.0, n, WeightSpec::PowerLaw(-1.5)).unwrap();
        let window = ball(&g, [0.0, 0.0], 0.9).unwrap();
        let a = cusp(&g, [0.0, 0.0], 0.4, 0.5);
        group.bench_function(BenchmarkId::from_parameter(n), |b| {
            b.iter(|| solve_obstacle_set(&g, black_box(&a), &window).unwrap())
        });
    }
    group.finish();
}

fn capacity_annulus(c: &mut Criterion) {
    let g = build_grid(2, 1.0, 256, WeightSpec::Uniform).unwrap();
    let inner = ball(&g, [0.0, 0.0], 0.2).unwrap();
    let window = ball(&g, [0.0, 0.0], 0.6).unwrap();
    c.bench_function("capacity_disc_256", |b| {
        b.iter(|| variational_capacity(&g, black_box(&inner), &window).unwrap())
    });
}

fn coarea(c: &mut Criterion) {
    let g = build_grid(2, 1.0, 128, WeightSpec::PowerLaw(-0.5)).unwrap();
    let u = GridFunction::from_fn(&g, |i| ((i * 2_654_435_761) % 16) as f64).unwrap();
    let region = CellSet::full(&g);
    c.bench_function("coarea_128_16_levels", |b| b.iter(|| coarea_check(&g, black_box(&u), &region).unwrap()));
}

criterion_group!(benches, min_cut_disc, obstacle_power_law, capacity_annulus, coarea);
criterion_main!(benches);
