//! Orthogonal polynomials on `[-1, 1]`.
//!
//! Production evaluation goes through the Jacobi three-term recurrence.
//! The terminating hypergeometric sum is kept as an independent path and is
//! what the Jacobi and ultraspherical polynomials are defined by.

use qd::Quad;

use crate::error::{domain, parameter, Result};

/// Parameters of the polynomial families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolyParams {
    pub alpha: f64,
    pub beta: f64,
    pub lambda: f64,
    pub degree: usize,
}

impl PolyParams {
    pub fn jacobi(degree: usize, alpha: f64, beta: f64) -> Self {
        Self {
            alpha,
            beta,
            lambda: alpha + 0.5,
            degree,
        }
    }

    /// Ultraspherical parameter `lambda`, mapped to `alpha = beta = lambda - 1/2`.
    pub fn ultraspherical(degree: usize, lambda: f64) -> Result<Self> {
        check_lambda("ultraspherical_p", lambda)?;
        Ok(Self {
            alpha: lambda - 0.5,
            beta: lambda - 0.5,
            lambda,
            degree,
        })
    }
}

/// Rising factorial `(a)_k = a (a+1) ... (a+k-1)`, with `(a)_0 = 1`.
pub fn pochhammer(a: f64, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (a + i as f64))
}

/// Binomial coefficient with real upper argument, `binom(top, k)`, as a
/// product of `k` factors.
pub fn binom_real(top: f64, k: usize) -> f64 {
    (1..=k).fold(1.0, |acc, i| acc * (top - k as f64 + i as f64) / i as f64)
}

/// `2F1(-n, b; c; z)`, summed over its `n + 1` terms.
///
/// Terms and partial sums are carried in double-double arithmetic: the sum
/// alternates with terms far larger than the result (about `1e17` at
/// `n = 30` near `z = 1`), which plain `f64` summation cannot resolve.
pub fn gauss_2f1_terminating(n: usize, b: f64, c: f64, z: f64) -> Result<f64> {
    hypergeometric_sum(n, b, c, Quad::from(z))
}

fn hypergeometric_sum(n: usize, b: f64, c: f64, z: Quad) -> Result<f64> {
    if c <= 0.0 && c.fract() == 0.0 && (-c) < n as f64 {
        return Err(parameter(
            "gauss_2f1_terminating",
            format!("c = {c} hits a pole before the series terminates at degree {n}"),
        ));
    }
    let mut term = Quad::from(1.0);
    let mut sum = Quad::from(1.0);
    for k in 0..n {
        let kf = k as f64;
        let num = Quad::from(kf - n as f64) * (Quad::from(b) + Quad::from(kf));
        let den = (Quad::from(c) + Quad::from(kf)) * Quad::from(kf + 1.0);
        term = term * num / den * z;
        sum += term;
    }
    Ok(sum.0 + sum.1)
}

/// `(1 - x) / 2`, exact in double-double.
fn half_complement(x: f64) -> Quad {
    (Quad::from(1.0) - Quad::from(x)) / Quad::from(2.0)
}

fn check_unit_interval(func: &'static str, x: f64) -> Result<()> {
    if !(x.abs() <= 1.0) {
        return Err(domain(func, format!("argument {x} outside [-1, 1]")));
    }
    Ok(())
}

fn check_jacobi_params(func: &'static str, alpha: f64, beta: f64) -> Result<()> {
    if !(alpha > -1.0 && beta > -1.0) {
        return Err(parameter(
            func,
            format!("alpha = {alpha}, beta = {beta}; both must exceed -1"),
        ));
    }
    Ok(())
}

fn check_lambda(func: &'static str, lambda: f64) -> Result<()> {
    if !(lambda > -0.5) {
        return Err(parameter(func, format!("lambda = {lambda} must exceed -1/2")));
    }
    Ok(())
}

/// Coefficients `(a, b, c)` of `P_(k+1) = (a x + b) P_k - c P_(k-1)`, valid
/// for `k >= 1` and `alpha, beta > -1`.
#[inline]
fn recurrence_step(k: usize, alpha: f64, beta: f64) -> (f64, f64, f64) {
    let k = k as f64;
    let s = 2.0 * k + alpha + beta;
    let den = 2.0 * (k + 1.0) * (k + alpha + beta + 1.0) * s;
    let a = (s + 1.0) * (s + 2.0) * s / den;
    let b = (s + 1.0) * (alpha * alpha - beta * beta) / den;
    let c = 2.0 * (k + alpha) * (k + beta) * (s + 2.0) / den;
    (a, b, c)
}

/// Jacobi polynomial `P_n^(alpha, beta)(x)` by upward recurrence.
pub fn jacobi_p(n: usize, alpha: f64, beta: f64, x: f64) -> Result<f64> {
    check_jacobi_params("jacobi_p", alpha, beta)?;
    check_unit_interval("jacobi_p", x)?;
    Ok(jacobi_p_unchecked(n, alpha, beta, x))
}

fn jacobi_p_unchecked(n: usize, alpha: f64, beta: f64, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = (alpha + 1.0) + 0.5 * (alpha + beta + 2.0) * (x - 1.0);
    for k in 1..n {
        let (a, b, c) = recurrence_step(k, alpha, beta);
        let next = (a * x + b) * cur - c * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `P_n^(alpha, beta)(1) = (alpha + 1)_n / n!`.
pub fn jacobi_p_at_one(n: usize, alpha: f64) -> f64 {
    (1..=n).fold(1.0, |acc, i| acc * (alpha + i as f64) / i as f64)
}

/// Jacobi polynomial normalized to one at `x = 1`.
pub fn jacobi_q(n: usize, alpha: f64, beta: f64, x: f64) -> Result<f64> {
    check_jacobi_params("jacobi_q", alpha, beta)?;
    check_unit_interval("jacobi_q", x)?;
    Ok(jacobi_p_unchecked(n, alpha, beta, x) / jacobi_p_at_one(n, alpha))
}

/// Jacobi `P_n` through its hypergeometric definition; an independent path
/// to [`jacobi_p`], at `O(n)` double-double cost.
pub fn jacobi_p_series(n: usize, alpha: f64, beta: f64, x: f64) -> Result<f64> {
    check_jacobi_params("jacobi_p_series", alpha, beta)?;
    check_unit_interval("jacobi_p_series", x)?;
    let f = hypergeometric_sum(n, n as f64 + alpha + beta + 1.0, alpha + 1.0, half_complement(x))?;
    Ok(pochhammer(alpha + 1.0, n) / factorial(n) * f)
}

fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, i| acc * i as f64)
}

/// Precomputed recurrence for repeated evaluation of `Q_n^(alpha, beta)` at a
/// fixed degree.
#[derive(Debug, Clone)]
pub struct JacobiRecurrence {
    degree: usize,
    alpha: f64,
    beta: f64,
    steps: Vec<(f64, f64, f64)>,
    at_one: f64,
}

impl JacobiRecurrence {
    pub fn new(degree: usize, alpha: f64, beta: f64) -> Result<Self> {
        check_jacobi_params("JacobiRecurrence", alpha, beta)?;
        let steps = (1..degree).map(|k| recurrence_step(k, alpha, beta)).collect();
        Ok(Self {
            degree,
            alpha,
            beta,
            steps,
            at_one: jacobi_p_at_one(degree, alpha),
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// `P_n(x)`. The caller guarantees `|x| <= 1`.
    #[inline]
    pub fn p(&self, x: f64) -> f64 {
        if self.degree == 0 {
            return 1.0;
        }
        let mut prev = 1.0;
        let mut cur = (self.alpha + 1.0) + 0.5 * (self.alpha + self.beta + 2.0) * (x - 1.0);
        for &(a, b, c) in &self.steps {
            let next = (a * x + b) * cur - c * prev;
            prev = cur;
            cur = next;
        }
        cur
    }

    /// `Q_n(x) = P_n(x) / P_n(1)`.
    #[inline]
    pub fn q(&self, x: f64) -> f64 {
        self.p(x) / self.at_one
    }
}

/// Ultraspherical polynomial `P^lambda_l(s) = 2F1(-l, l + 2 lambda; lambda + 1/2; (1 - s)/2)`,
/// normalized so that `P^lambda_l(1) = 1`.
pub fn ultraspherical_p(l: usize, lambda: f64, s: f64) -> Result<f64> {
    check_lambda("ultraspherical_p", lambda)?;
    check_unit_interval("ultraspherical_p", s)?;
    jacobi_q(l, lambda - 0.5, lambda - 0.5, s)
}

/// Ultraspherical polynomial through its terminating hypergeometric sum.
pub fn ultraspherical_p_series(l: usize, lambda: f64, s: f64) -> Result<f64> {
    check_lambda("ultraspherical_p_series", lambda)?;
    check_unit_interval("ultraspherical_p_series", s)?;
    hypergeometric_sum(l, l as f64 + 2.0 * lambda, lambda + 0.5, half_complement(s))
}

/// Gegenbauer polynomial `C^lambda_l(s) = binom(l + 2 lambda - 1, l) P^lambda_l(s)`.
pub fn gegenbauer_c(l: usize, lambda: f64, s: f64) -> Result<f64> {
    check_lambda("gegenbauer_c", lambda)?;
    if lambda == 0.0 {
        return Err(parameter("gegenbauer_c", "lambda = 0 is excluded"));
    }
    let p = ultraspherical_p(l, lambda, s)?;
    Ok(binom_real(l as f64 + 2.0 * lambda - 1.0, l) * p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hypergeometric_small_cases() {
        assert_eq!(gauss_2f1_terminating(0, 3.3, 1.7, 0.4).unwrap(), 1.0);
        let (b, c, z) = (2.5, 1.25, 0.3);
        let v = gauss_2f1_terminating(1, b, c, z).unwrap();
        assert!((v - (1.0 - b / c * z)).abs() < 1e-15);
        for l in 0..8 {
            let v = gauss_2f1_terminating(l, l as f64 + 3.0, 2.0, 0.0).unwrap();
            assert_eq!(v, 1.0);
        }
    }

    #[test]
    fn hypergeometric_pole() {
        assert!(gauss_2f1_terminating(3, 1.0, -1.0, 0.5).is_err());
        assert!(gauss_2f1_terminating(3, 1.0, 0.0, 0.5).is_err());
        // c = -3 is only reached at k = 3, beyond the last term of degree 3.
        assert!(gauss_2f1_terminating(3, 1.0, -3.0, 0.5).is_ok());
    }

    #[test]
    fn jacobi_examples() {
        assert_eq!(jacobi_p(0, 0.3, -0.2, 0.1).unwrap(), 1.0);
        // (alpha + 1)_1 2F1(-1, 3; 2; 1/4) = 2 (1 - 3/8)
        assert!((jacobi_p(1, 1.0, 0.0, 0.5).unwrap() - 1.25).abs() < 1e-15);
        assert!((jacobi_q(1, 1.0, 0.0, 0.5).unwrap() - 0.625).abs() < 1e-15);
        for n in 0..20 {
            let want = pochhammer(1.7, n) / factorial(n);
            let got = jacobi_p(n, 0.7, 0.2, 1.0).unwrap();
            assert!((got - want).abs() <= 1e-12 * want, "n={n}");
            assert!((jacobi_q(n, 0.7, 0.2, 1.0).unwrap() - 1.0).abs() < 1e-13);
            assert_eq!(jacobi_q(0, 0.7, 0.2, -0.4).unwrap(), 1.0);
        }
    }

    #[test]
    fn jacobi_recurrence_matches_series() {
        let params = [
            (0.0, 0.0),
            (1.0, 0.0),
            (0.5, -0.5),
            (-0.5, -0.5),
            (2.5, 1.5),
            (-0.3, 0.8),
        ];
        for &(a, b) in &params {
            for n in 0..=30 {
                for i in 0..=20 {
                    let x = -1.0 + 0.1 * i as f64;
                    let r = jacobi_p(n, a, b, x).unwrap();
                    let s = jacobi_p_series(n, a, b, x).unwrap();
                    let scale = jacobi_p_at_one(n, a.max(b)).max(1.0);
                    assert!((r - s).abs() <= 1e-9 * scale, "n={n} a={a} b={b} x={x}: {r} {s}");
                }
            }
        }
    }

    #[test]
    fn precomputed_recurrence_matches() {
        let rec = JacobiRecurrence::new(17, 1.0, 0.0).unwrap();
        for i in 0..=10 {
            let x = -1.0 + 0.2 * i as f64;
            assert_eq!(rec.q(x), jacobi_q(17, 1.0, 0.0, x).unwrap());
        }
    }

    #[test]
    fn ultraspherical_examples() {
        for l in 0..10 {
            assert!((ultraspherical_p(l, 1.3, 1.0).unwrap() - 1.0).abs() < 1e-14);
            assert_eq!(ultraspherical_p(0, 1.3, 0.2).unwrap(), 1.0);
        }
        // 2F1(-2, 4; 3/2; 1/2) = 1 - 8/3 + 4/3
        assert!((ultraspherical_p(2, 1.0, 0.0).unwrap() + 1.0 / 3.0).abs() < 1e-15);
        assert!((ultraspherical_p_series(2, 1.0, 0.0).unwrap() + 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn gegenbauer_examples() {
        for &lam in &[0.25, 0.5, 1.0, 2.5] {
            for i in 0..=10 {
                let x = -1.0 + 0.2 * i as f64;
                assert!((gegenbauer_c(0, lam, x).unwrap() - 1.0).abs() < 1e-15);
                assert!((gegenbauer_c(1, lam, x).unwrap() - 2.0 * lam * x).abs() < 1e-14);
            }
        }
        // C^lambda_2(x) = 2 lambda (lambda + 1) x^2 - lambda
        assert!(gegenbauer_c(2, 1.0, 0.5).unwrap().abs() < 1e-15);
        assert!((gegenbauer_c(2, 1.5, 0.5).unwrap() - 0.375).abs() < 1e-15);
    }

    #[test]
    fn gegenbauer_generating_function_at_small_z() {
        // (1 - 2 s z + z^2)^(-lambda) truncated at degree 40, z = 0.1
        let z: f64 = 0.1;
        for &lam in &[0.5, 1.0, 1.5] {
            let s = 0.5;
            let sum: f64 = (0..=40)
                .map(|l| gegenbauer_c(l, lam, s).unwrap() * z.powi(l as i32))
                .sum();
            let closed = (1.0 - 2.0 * s * z + z * z).powf(-lam);
            assert!((sum - closed).abs() < 1e-14);
        }
    }

    #[test]
    fn parameter_errors() {
        assert!(jacobi_p(2, -1.0, 0.0, 0.0).is_err());
        assert!(jacobi_p(2, 0.0, 0.0, 1.1).is_err());
        assert!(jacobi_q(2, 0.0, 0.0, f64::NAN).is_err());
        assert!(ultraspherical_p(2, -0.5, 0.0).is_err());
        assert!(gegenbauer_c(2, 0.0, 0.0).is_err());
        assert!(PolyParams::ultraspherical(3, -0.7).is_err());
    }
}
