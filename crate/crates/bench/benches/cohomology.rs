use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use gkm_bench::{default_polarization, graphs};
use gkm_core::crosssection::{compose_transfer, regular_values, thom_by_transfer};
use gkm_core::gkm::validate;
use gkm_core::thom::Thom;

fn bench_validate(c: &mut Criterion) {
    let mut group = c.benchmark_group("validate");
    for (name, g) in graphs() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &g, |b, g| b.iter(|| validate(g)));
    }
    group.finish();
}

fn bench_thom_classes(c: &mut Criterion) {
    let mut group = c.benchmark_group("thom_classes");
    group.sample_size(10);
    for (name, g) in graphs() {
        let th = Thom::new(&g, default_polarization(&g));
        group.bench_function(BenchmarkId::new("paths", name), |b| {
            b.iter(|| g.vertices().map(|p| th.thom_plus_paths(p).unwrap()).collect::<Vec<_>>())
        });
        group.bench_function(BenchmarkId::new("inductive", name), |b| {
            b.iter(|| g.vertices().map(|p| th.thom_plus_inductive(p).unwrap()).collect::<Vec<_>>())
        });
        group.bench_function(BenchmarkId::new("transfer", name), |b| {
            b.iter(|| g.vertices().map(|p| thom_by_transfer(&g, th.polarization(), p).unwrap()).collect::<Vec<_>>())
        });
    }
    group.finish();
}

fn bench_structure_constants(c: &mut Criterion) {
    let mut group = c.benchmark_group("structure_constants");
    group.sample_size(10);
    for (name, g) in graphs().into_iter().filter(|(_, g)| g.num_vertices() <= 6) {
        let th = Thom::new(&g, default_polarization(&g));
        group.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| th.structure_constants().unwrap()));
    }
    group.finish();
}

fn bench_transfer(c: &mut Criterion) {
    let mut group = c.benchmark_group("full_sweep_transfer");
    group.sample_size(10);
    for (name, g) in graphs() {
        let pol = default_polarization(&g);
        let levels = regular_values(&pol);
        let (lo, hi) = (&levels[1], &levels[levels.len() - 2]);
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| compose_transfer(&g, &pol, lo, hi).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_validate, bench_thom_classes, bench_structure_constants, bench_transfer);
criterion_main!(benches);
