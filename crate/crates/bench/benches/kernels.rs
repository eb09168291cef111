use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use sphdpp::geom::s2_from_polar;
use sphdpp::kernels::{harmonic_kernel_sum, limit_bessel_kernel, HarmonicKernel, SphericalEnsembleKernel};
use sphdpp::specfun::{bessel_j, JacobiRecurrence};

fn harmonic(c: &mut Criterion) {
    let u = s2_from_polar(0.4, 1.0).unwrap();
    let v = s2_from_polar(2.1, 4.0).unwrap();
    let mut g = c.benchmark_group("harmonic_kernel");
    for n in [3, 12, 30, 100] {
        let k = HarmonicKernel::new(2, n).unwrap();
        g.bench_with_input(BenchmarkId::new("closed_form", n), &n, |b, _| {
            b.iter(|| k.eval_real(black_box(&u), black_box(&v)))
        });
        if n <= 30 {
            g.bench_with_input(BenchmarkId::new("zonal_sum", n), &n, |b, &n| {
                b.iter(|| harmonic_kernel_sum(2, n, black_box(&u), black_box(&v)).unwrap())
            });
        }
    }
    g.finish();
}

fn spherical(c: &mut Criterion) {
    let u = s2_from_polar(0.4, 1.0).unwrap();
    let v = s2_from_polar(2.1, 4.0).unwrap();
    let k = SphericalEnsembleKernel::new(64).unwrap();
    c.bench_function("spherical_ensemble_kernel/64", |b| {
        b.iter(|| k.eval_probability(black_box(&u), black_box(&v)))
    });
}

fn special(c: &mut Criterion) {
    let rec = JacobiRecurrence::new(400, 1.0, 0.0).unwrap();
    c.bench_function("jacobi_recurrence/400", |b| b.iter(|| rec.q(black_box(0.3))));
    let mut g = c.benchmark_group("bessel_j");
    for x in [0.5, 5.0, 40.0] {
        g.bench_with_input(BenchmarkId::from_parameter(x), &x, |b, &x| {
            b.iter(|| bessel_j(1.5, black_box(x)).unwrap())
        });
    }
    g.finish();
    c.bench_function("limit_bessel_kernel/d3", |b| {
        b.iter(|| limit_bessel_kernel(3, black_box(2.0)).unwrap())
    });
}

criterion_group!(benches, harmonic, spherical, special);
criterion_main!(benches);
