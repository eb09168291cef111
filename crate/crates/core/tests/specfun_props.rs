use proptest::prelude::*;
use sphdpp::specfun::{binom_real, gegenbauer_c, jacobi_q, ultraspherical_p, ultraspherical_p_series};

const LAMBDAS: [f64; 4] = [0.5, 1.0, 1.5, 2.5];

fn grid(points: usize) -> impl Iterator<Item = f64> {
    (0..=points).map(move |i| -1.0 + 2.0 * i as f64 / points as f64)
}

/// Both sides of the Gegenbauer-to-Jacobi summation.
fn gegen2jacobi_sides(n: usize, lambda: f64, x: f64) -> (f64, f64) {
    let lhs: f64 = (0..=n)
        .map(|l| (l as f64 + lambda) / lambda * gegenbauer_c(l, lambda, x).unwrap())
        .sum();
    let nf = n as f64;
    let rhs = (2.0 * nf + 2.0 * lambda + 1.0) / (2.0 * lambda + 1.0)
        * binom_real(2.0 * lambda + nf, n)
        * jacobi_q(n, lambda + 0.5, lambda - 0.5, x).unwrap();
    (lhs, rhs)
}

#[test]
fn gegen2jacobi_on_grid() {
    for &lambda in &LAMBDAS {
        for n in 0..=30 {
            // scale is the value at x = 1, where every term is positive
            let (_, top) = gegen2jacobi_sides(n, lambda, 1.0);
            for x in grid(200) {
                let (lhs, rhs) = gegen2jacobi_sides(n, lambda, x);
                assert!(
                    (lhs - rhs).abs() <= 1e-9 * top.max(1.0),
                    "n={n} lambda={lambda} x={x}: {lhs} vs {rhs}"
                );
            }
        }
    }
}

#[test]
fn zonal_bound_on_grid() {
    for lambda in [0.25, 0.5, 1.0, 1.5, 2.5, 7.0] {
        for l in 0..=40 {
            for s in grid(400) {
                let p = ultraspherical_p(l, lambda, s).unwrap();
                assert!(p.abs() <= 1.0 + 1e-12, "l={l} lambda={lambda} s={s}: {p}");
            }
        }
    }
}

proptest! {
    #[test]
    fn contiguous_relation(n in 1usize..=30, alpha in 0.0f64..4.0, beta in -0.9f64..4.0, x in -1.0f64..=1.0) {
        let nf = n as f64;
        let lhs = (2.0 * nf + alpha + beta + 1.0) * jacobi_q(n, alpha, beta, x).unwrap();
        let rhs = (nf + alpha + beta + 1.0) * jacobi_q(n, alpha, beta + 1.0, x).unwrap()
            + nf * jacobi_q(n - 1, alpha, beta + 1.0, x).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-10, "{} vs {}", lhs, rhs);
    }

    #[test]
    fn gegenbauer_recurrence(n in 2usize..=30, li in 0usize..4, x in -1.0f64..=1.0) {
        let lambda = LAMBDAS[li];
        let lhs = (n as f64 + lambda) * gegenbauer_c(n, lambda, x).unwrap();
        let rhs = lambda
            * (gegenbauer_c(n, lambda + 1.0, x).unwrap() - gegenbauer_c(n - 2, lambda + 1.0, x).unwrap());
        let scale = gegenbauer_c(n, lambda + 1.0, 1.0).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-10 * scale.max(1.0), "{} vs {}", lhs, rhs);
    }

    #[test]
    fn ultraspherical_two_paths(l in 0usize..=30, lambda in 0.05f64..6.0, s in -1.0f64..=1.0) {
        let a = ultraspherical_p(l, lambda, s).unwrap();
        let b = ultraspherical_p_series(l, lambda, s).unwrap();
        prop_assert!((a - b).abs() <= 1e-10, "{} vs {}", a, b);
    }
}
