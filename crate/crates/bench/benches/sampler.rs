use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use sphdpp::sampler::sample_projection_dpp;
use sphdpp::KernelSpec;

fn sample(c: &mut Criterion) {
    let mut g = c.benchmark_group("sample");
    g.sample_size(20);
    let specs = [
        ("harmonic_d2", KernelSpec::harmonic(2, 3).unwrap(), 16),
        ("harmonic_d2", KernelSpec::harmonic(2, 12).unwrap(), 169),
        ("harmonic_d3", KernelSpec::harmonic(3, 4).unwrap(), 55),
        ("spherical", KernelSpec::spherical(64).unwrap(), 64),
        ("cue", KernelSpec::cue(50).unwrap(), 101),
    ];
    for (name, spec, n) in specs {
        let mut replica = 0u64;
        g.bench_with_input(BenchmarkId::new(name, n), &spec, |b, spec| {
            b.iter(|| {
                replica += 1;
                sample_projection_dpp(spec, 1, replica).unwrap()
            })
        });
    }
    g.finish();
}

criterion_group!(benches, sample);
criterion_main!(benches);
