use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use mconvex::barrier::{build_barrier, BarrierOptions};
use mconvex::mpsh::{grid_verdict, GridSpec};
use mconvex::surfaces::{CatalogEntry, SurfaceKind};
use mconvex::tubular::{collar_samples, signed_distance};
use mconvex::Exec;

fn strategies() -> Vec<(&'static str, Exec)> {
    let mut v = vec![("sequential", Exec::Sequential)];
    if Exec::available() == Exec::Parallel {
        v.push(("parallel", Exec::Parallel));
    }
    v
}

fn projections(c: &mut Criterion) {
    let e = CatalogEntry::new(SurfaceKind::Catenoid { scale: 1.0 }, 1.5).unwrap();
    let d = e.domain().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let b = e.boundary_samples(2000, &mut rng);
    let pts: Vec<_> = collar_samples(d, &b, (0.0, 0.4), &mut rng).unwrap().into_iter().map(|s| s.point).collect();
    let mut g = c.benchmark_group("catenoid_projection");
    g.sample_size(10);
    for (name, exec) in strategies() {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |bch, exec| {
            bch.iter(|| exec.try_map(&pts, |x| signed_distance(d, x).map(|p| p.delta)).unwrap())
        });
    }
    g.finish();
}

fn barrier_grid(c: &mut Criterion) {
    let e = CatalogEntry::new(SurfaceKind::Sphere { n: 3, radius: 1.0 }, 1.0).unwrap();
    let d = e.domain().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let opts = BarrierOptions { reach: Some(1.0), boundary: e.boundary_samples(64, &mut rng), ..Default::default() };
    let bf = build_barrier(d, 2, 1.0, &opts).unwrap();
    let pts: Vec<_> = GridSpec::cube(3, 1.0, 16).points().into_iter().filter(|x| x.norm() < 1.0).collect();
    let mut g = c.benchmark_group("ball_barrier_grid_verdict");
    g.sample_size(10);
    for (name, exec) in strategies() {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |bch, exec| {
            bch.iter(|| black_box(grid_verdict(&bf, &pts, 2, Some(1e-8), *exec).unwrap()))
        });
    }
    g.finish();
}

criterion_group!(benches, projections, barrier_grid);
criterion_main!(benches);
