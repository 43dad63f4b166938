//! Data-parallel core against a single worker on the same workloads.
//!
//! Build with `--no-default-features` to time the sequential fallback itself.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use selfsim::geometry::Point;
use selfsim::kernels::{HomogeneousKernel, OmegaSpec};
use selfsim::measure::{integrate, mc_integrate, FnIntegrand, ModulusSpec};
use selfsim::presets;
use selfsim::sio::pv_trace;
use selfsim::symbolic::{EpWord, Word};

fn pools() -> Vec<(&'static str, rayon::ThreadPool)> {
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let all = rayon::ThreadPoolBuilder::new().build().unwrap();
    vec![("1-thread", one), ("all-threads", all)]
}

fn bench(c: &mut Criterion) {
    let fc = presets::four_corner();
    let mt = presets::middle_thirds();
    let f = FnIntegrand::new(|p: &Point| (p.0[0] * 3.0).sin() * p.0[1], ModulusSpec::Lipschitz { l: 4.0 });
    let sign = HomogeneousKernel::new(mt.geometry(), mt.dim(), OmegaSpec::Sign).unwrap();
    let ones = EpWord::periodic(Word::new(&[1])).unwrap();

    let mut group = c.benchmark_group("core");
    group.sample_size(10);
    for (name, pool) in pools() {
        group.bench_with_input(BenchmarkId::new("integrate_depth9", name), &pool, |b, pool| {
            b.iter(|| pool.install(|| integrate(&fc, &f, 9).unwrap()))
        });
        group.bench_with_input(BenchmarkId::new("pv_trace_k6_depth12", name), &pool, |b, pool| {
            b.iter(|| pool.install(|| pv_trace(&mt, &sign, &ones, 6, 12).unwrap()))
        });
        group.bench_with_input(BenchmarkId::new("mc_integrate_1e5", name), &pool, |b, pool| {
            b.iter(|| pool.install(|| mc_integrate(&mt, |p| p.0[0] * p.0[0], 100_000, 42).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, bench);
criterion_main!(benches);
