//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

use std::f64::consts::PI;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sphdpp::geom::{to_embedding, uniform_sample};
use sphdpp::kernels::{
    harmonic_kernel, harmonic_kernel_sum, limit_bessel_kernel, n_points, HarmonicKernel, OddLimitKernel,
    SphericalEnsembleKernel,
};
use sphdpp::limits::{
    bin_edges, count_statistics, cue_closed_form, cue_sinc_table, doubling_grid, fourier_identity_check,
    ginibre_limit_table, kernel_limit_table, mehler_heine_table, pair_correlation_estimate, tangent_intensity,
};
use sphdpp::sampler::sample_projection_dpp;
use sphdpp::specfun::{binom_real, gegenbauer_c, jacobi_q};
use sphdpp::{Complex64, KernelSpec, SpherePoint};

const SEED: u64 = 20240611;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn run(id: &str, title: &str, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let o = f();
    let secs = start.elapsed().as_secs_f64();
    println!(
        "{} criterion {id}: {title} ({secs:.1}s) {}",
        if o.pass { "PASS" } else { "FAIL" },
        o.detail
    );
    o.pass
}

fn cardinality() -> Outcome {
    let cases = [((1, 4), 9), ((2, 3), 16), ((3, 2), 14)];
    let mut bad = Vec::new();
    for ((d, n), want) in cases {
        assert_eq!(n_points(d, n), want);
        let spec = KernelSpec::harmonic(d, n).unwrap();
        for seed in 0..100 {
            match sample_projection_dpp(&spec, seed, 0) {
                Ok(c) if c.len() == want as usize => {}
                Ok(c) => bad.push(format!("d={d} n={n} seed={seed}: {} points", c.len())),
                Err(e) => bad.push(format!("d={d} n={n} seed={seed}: {e}")),
            }
        }
    }
    outcome(
        bad.is_empty(),
        format!("counts 9/16/14 over 300 samples; {} mismatches {:?}", bad.len(), bad),
    )
}

fn two_path() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst: f64 = 0.0;
    for d in 1..=4 {
        for n in 0..=30 {
            for _ in 0..100 {
                let u = uniform_sample(d, &mut rng);
                let v = uniform_sample(d, &mut rng);
                let a = harmonic_kernel(d, n, &u, &v).unwrap();
                let b = harmonic_kernel_sum(d, n, &u, &v).unwrap();
                worst = worst.max((a - b).abs());
            }
        }
    }
    outcome(worst <= 1e-8, format!("max abs diff {worst:.2e} (tol 1e-8)"))
}

fn gegen2jacobi() -> Outcome {
    let mut worst_abs: f64 = 0.0;
    let mut worst_scaled: f64 = 0.0;
    for lambda in [0.5, 1.0, 1.5, 2.5] {
        for n in 0..=30usize {
            let nf = n as f64;
            let factor = (2.0 * nf + 2.0 * lambda + 1.0) / (2.0 * lambda + 1.0) * binom_real(2.0 * lambda + nf, n);
            let lhs = |x: f64| -> f64 {
                (0..=n)
                    .map(|l| (l as f64 + lambda) / lambda * gegenbauer_c(l, lambda, x).unwrap())
                    .sum()
            };
            // both sides peak at x = 1
            let scale = lhs(1.0).max(1.0);
            for i in 0..=200 {
                let x = -1.0 + i as f64 / 100.0;
                let diff = (lhs(x) - factor * jacobi_q(n, lambda + 0.5, lambda - 0.5, x).unwrap()).abs();
                worst_abs = worst_abs.max(diff);
                worst_scaled = worst_scaled.max(diff / scale);
            }
        }
    }
    outcome(
        worst_scaled <= 1e-9,
        format!("max diff relative to value at x=1 {worst_scaled:.2e} (tol 1e-9); max abs {worst_abs:.2e}"),
    )
}

fn mehler_heine() -> Outcome {
    let t = mehler_heine_table(1.0, 0.0, 1.0, &doubling_grid(10, 640)).unwrap();
    let (e10, e640) = (t.error_at(10).unwrap(), t.error_at(640).unwrap());
    outcome(
        e640 < 1e-2 && e640 < e10,
        format!("error n=10 {e10:.2e}, n=640 {e640:.2e}"),
    )
}

fn bessel_limit() -> Outcome {
    let grid = doubling_grid(25, 400);
    let mut ok = true;
    let mut parts = Vec::new();
    for d in 1..=3 {
        for r in [0.5, 1.0, 2.0] {
            let t = kernel_limit_table(d, r, &grid).unwrap();
            let good = t.final_below(1e-2) && t.monotone() && t.decreasing();
            ok &= good;
            parts.push(format!(
                "d={d} r={r}: {:.1e}{}",
                t.final_error(),
                if good { "" } else { " !" }
            ));
        }
    }
    outcome(ok, format!("n=400 errors [{}]", parts.join(", ")))
}

fn cue_anchor() -> Outcome {
    let mut worst: f64 = 0.0;
    for (x, y) in [(1.0, -0.5), (0.3, 2.0), (-4.0, 3.5), (0.0, 6.0)] {
        let t = cue_sinc_table(x, y, &doubling_grid(1, 4096)).unwrap();
        for row in &t.rows {
            worst = worst.max((row.value - Complex64::new(cue_closed_form(row.n, x, y), 0.0)).norm());
        }
    }
    outcome(worst <= 1e-12, format!("max diff {worst:.2e} (tol 1e-12)"))
}

fn ginibre() -> Outcome {
    let t = ginibre_limit_table(
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 0.0),
        &doubling_grid(64, 4096),
    )
    .unwrap();
    outcome(
        t.final_below(1e-2) && t.decreasing(),
        format!("error N=64 {:.2e}, N=4096 {:.2e}", t.initial_error(), t.final_error()),
    )
}

fn fourier() -> Outcome {
    let mut worst: f64 = 0.0;
    for r in [0.5, 1.0, 3.0] {
        worst = worst.max(fourier_identity_check(1, &[r], &[0.0]).unwrap());
        let (s, c) = 0.9f64.sin_cos();
        worst = worst.max(fourier_identity_check(2, &[0.2 + r * c, -0.1 + r * s], &[0.2, -0.1]).unwrap());
    }
    outcome(worst <= 1e-6, format!("max diff {worst:.2e} (tol 1e-6)"))
}

fn statistics() -> Outcome {
    let replicas = 100_000;
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, spec, bins) in [
        ("cue(2)", KernelSpec::cue(2).unwrap(), 12),
        ("harmonic(2,3)", KernelSpec::harmonic(2, 3).unwrap(), 12),
    ] {
        let rep = pair_correlation_estimate(&spec, replicas, &bin_edges(0.0, PI, bins), SEED).unwrap();
        let z = rep.z_scores().into_iter().fold(0.0f64, |m, z| m.max(z.abs()));
        ok &= rep.all_within(3.0);
        parts.push(format!("{name} paircorr max |z| {z:.2}"));
    }
    // mu(cap(pi/3)) = (1 - cos(pi/3)) / 2 = 1/4
    let spec = KernelSpec::harmonic(2, 3).unwrap();
    let rep = count_statistics(&spec, PI / 3.0, replicas, SEED).unwrap();
    let z = rep.z_scores()[0];
    let (mean, var) = (rep.estimate[0], rep.estimate[1]);
    ok &= z.abs() <= 3.0 && var < mean;
    parts.push(format!(
        "quarter cap mean {mean:.4} vs {:.4} (z {z:.2}), variance {var:.4} (pred {:.4})",
        rep.prediction[0], rep.prediction[1]
    ));
    outcome(ok, parts.join("; "))
}

fn s2_rule(n_theta: usize, n_phi: usize) -> Vec<(SpherePoint, f64)> {
    let gl = sphdpp::quadrature::GaussLegendre::new(n_theta);
    let mut out = Vec::new();
    for (c, w) in gl.nodes_on(-1.0, 1.0) {
        for j in 0..n_phi {
            let phi = 2.0 * PI * j as f64 / n_phi as f64;
            out.push((to_embedding(&[phi, c.acos()]).unwrap(), w / (2.0 * n_phi as f64)));
        }
    }
    out
}

fn projection() -> Outcome {
    let rule = s2_rule(32, 64);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst: f64 = 0.0;
    for _ in 0..5 {
        let u = uniform_sample(2, &mut rng);
        let v = uniform_sample(2, &mut rng);
        for n in 0..=10 {
            let k = HarmonicKernel::new(2, n).unwrap();
            let acc: f64 = rule
                .iter()
                .map(|(w, wt)| wt * k.eval_real(&u, w) * k.eval_real(w, &v))
                .sum();
            worst = worst.max((acc - k.eval_real(&u, &v)).abs());
        }
        for big_n in 1..=8 {
            let k = SphericalEnsembleKernel::new(big_n).unwrap();
            let acc: Complex64 = rule
                .iter()
                .map(|(w, wt)| k.eval_probability(&u, w) * k.eval_probability(w, &v) * *wt)
                .sum();
            worst = worst.max((acc - k.eval_probability(&u, &v)).norm());
        }
    }
    outcome(worst <= 1e-6, format!("max diff {worst:.2e} (tol 1e-6)"))
}

fn odd_closed_forms() -> Outcome {
    let mut worst: f64 = 0.0;
    for d in [1, 3, 5] {
        let k = OddLimitKernel::new(d).unwrap();
        for i in 1..=400 {
            let r = 0.05 * i as f64;
            worst = worst.max((k.eval(r) - limit_bessel_kernel(d, r).unwrap()).abs());
        }
    }
    outcome(
        worst <= 1e-10,
        format!("r = 0.05..20, max diff {worst:.2e} (tol 1e-10)"),
    )
}

fn tangent(c_of_n: fn(f64) -> f64, label: &str) -> Outcome {
    let n = 12;
    let spec = KernelSpec::harmonic(2, n).unwrap();
    let rep = tangent_intensity(&spec, c_of_n(n as f64), 1.0, 10_000, SEED).unwrap();
    let z = rep.z_scores()[0];
    outcome(
        z.abs() <= 3.0,
        format!(
            "{label}: intensity {:.5} +- {:.5} vs 1/(4 pi) = {:.5} (z {z:.2}); finite-n mean {:.5}",
            rep.estimate[0], rep.standard_error[0], rep.prediction[0], rep.prediction_alt[0]
        ),
    )
}

fn main() {
    let mut all = true;
    all &= run("1", "cardinality", cardinality);
    all &= run("2", "harmonic kernel two-path identity", two_path);
    all &= run("3", "Gegenbauer sum to Jacobi identity", gegen2jacobi);
    all &= run("4", "Mehler-Heine convergence", mehler_heine);
    all &= run("5", "Bessel kernel limit", bessel_limit);
    all &= run("6", "CUE anchor", cue_anchor);
    all &= run("7", "Ginibre limit", ginibre);
    all &= run("8", "Fourier identity", fourier);
    all &= run("9", "statistics vs determinant formula", statistics);
    all &= run("10", "projection property by quadrature", projection);
    all &= run("11", "odd-d closed forms", odd_closed_forms);
    all &= run("12", "tangent intensity, scale n", || tangent(|n| n, "S_n"));
    // not a criterion: the same pullback with scale sqrt(N) = n + 1
    let _ = run("12b", "tangent intensity, scale sqrt(N) (supplementary)", || {
        tangent(|n| n + 1.0, "S_(n+1)")
    });
    if !all {
        std::process::exit(1);
    }
}
