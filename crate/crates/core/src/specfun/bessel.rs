//! Bessel functions of the first kind for real order and non-negative argument.
//!
//! Two evaluation paths:
//!
//! * `x <= SERIES_MAX_X`: the defining power series
//!   `J_a(x) = sum_k (-1)^k / (k! Gamma(k+a+1)) (x/2)^(2k+a)`.
//!   At `x = 8` the largest term is a few hundred times the result, so the
//!   series keeps roughly 13 significant digits.
//! * `x > SERIES_MAX_X`: Miller's backward recurrence started well above
//!   `max(x, a)`, normalized with the Neumann sum
//!   `(x/2)^v = sum_k (v+2k) Gamma(v+k)/k! J_(v+2k)(x)` where `v` is the
//!   fractional part of the order.
//!
//! Both paths are exercised on the overlap `x <= 10` by the unit tests.

use super::gamma;
use crate::error::{domain, parameter, Result};

/// Largest argument evaluated by the power series.
pub const SERIES_MAX_X: f64 = 8.0;

const RESCALE_LIMIT: f64 = 1e250;

/// Bessel function of the first kind `J_alpha(x)`.
///
/// Requires `alpha > -1` and `x >= 0`. For negative non-integer order the
/// value at `x = 0` is infinite and reported as a domain error.
pub fn bessel_j(alpha: f64, x: f64) -> Result<f64> {
    if !(alpha > -1.0) || !alpha.is_finite() {
        return Err(parameter("bessel_j", format!("order {alpha} must be > -1")));
    }
    if !(x >= 0.0) || !x.is_finite() {
        return Err(domain("bessel_j", format!("argument {x} must be finite and >= 0")));
    }
    if x == 0.0 {
        return if alpha == 0.0 {
            Ok(1.0)
        } else if alpha > 0.0 {
            Ok(0.0)
        } else {
            Err(domain("bessel_j", "J_a(0) is unbounded for a < 0"))
        };
    }
    if x <= SERIES_MAX_X {
        Ok(bessel_j_series(alpha, x))
    } else {
        Ok(bessel_j_miller(alpha, x))
    }
}

/// Power-series evaluation. Accurate for small and moderate `x`.
pub(crate) fn bessel_j_series(alpha: f64, x: f64) -> f64 {
    let half = 0.5 * x;
    let q = -half * half;
    let mut term = half.powf(alpha) / gamma(alpha + 1.0);
    let mut sum = term;
    let mut k = 1.0;
    loop {
        term *= q / (k * (k + alpha));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() && k > half {
            break;
        }
        if k > 500.0 {
            break;
        }
        k += 1.0;
    }
    sum
}

fn bessel_j_miller(alpha: f64, x: f64) -> f64 {
    let nu = if alpha >= 0.0 { alpha.fract() } else { alpha };
    let order_offset = (alpha - nu).round() as usize;

    let top = (order_offset as f64).max(x);
    let mut start = (top + 12.0 * top.cbrt() + 30.0) as usize;
    if start % 2 == 1 {
        start += 1;
    }

    // f[k] is proportional to J_(nu+k)(x)
    let mut f = vec![0.0_f64; start + 2];
    f[start] = 1e-30;
    for k in (1..=start).rev() {
        let next = 2.0 * (nu + k as f64) / x * f[k] - f[k + 1];
        f[k - 1] = next;
        if next.abs() > RESCALE_LIMIT {
            for v in f.iter_mut().skip(k - 1) {
                *v /= RESCALE_LIMIT;
            }
        }
    }

    let gamma_nu1 = gamma(nu + 1.0);
    let mut norm = gamma_nu1 * f[0];
    let mut g = gamma_nu1; // Gamma(nu + k) / k!
    let mut k = 1usize;
    while 2 * k <= start {
        norm += (nu + 2.0 * k as f64) * g * f[2 * k];
        g *= (nu + k as f64) / (k as f64 + 1.0);
        k += 1;
    }

    f[order_offset] * (0.5 * x).powf(nu) / norm
}

/// Spherical Bessel function `j_m(x) = sqrt(pi / 2x) J_(m+1/2)(x)`, with the
/// removable singularity at `x = 0` filled in (`j_0(0) = 1`, `j_m(0) = 0`).
pub fn spherical_bessel_j(m: usize, x: f64) -> Result<f64> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(domain(
            "spherical_bessel_j",
            format!("argument {x} must be finite and >= 0"),
        ));
    }
    if x == 0.0 {
        return Ok(if m == 0 { 1.0 } else { 0.0 });
    }
    let j = bessel_j(m as f64 + 0.5, x)?;
    Ok((std::f64::consts::PI / (2.0 * x)).sqrt() * j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    // mpmath besselj at 40 digits.
    #[allow(clippy::excessive_precision)]
    const REFERENCE: &[(f64, f64, f64)] = &[
        (-0.5, 0.1, 2.510_527_368_958_509_3),
        (-0.5, 5.0, 0.101_217_709_185_108_4),
        (-0.5, 30.0, 0.022_470_290_598_831_025),
        (-0.5, 99.5, 0.041_113_491_569_648_075),
        (0.0, 1.0, 0.765_197_686_557_966_6),
        (0.0, 8.5, 0.041_939_251_842_934_504),
        (0.0, 15.0, -0.014_224_472_826_780_773),
        (0.0, 60.0, -0.091_471_804_089_061_87),
        (0.5, 15.0, 0.133_967_688_822_439_35),
        (1.0, 0.1, 0.049_937_526_036_241_998),
        (1.0, 5.0, -0.327_579_137_591_465_2),
        (1.0, 30.0, -0.118_751_062_616_622_94),
        (1.0, 99.5, -0.077_663_198_243_076_94),
        (2.5, 8.5, -0.151_301_602_771_690_86),
        (2.5, 60.0, 0.036_276_530_818_286_875),
        (3.7, 1.0, 0.004_726_869_882_950_52),
        (3.7, 15.0, -0.175_783_152_762_519_98),
        (3.7, 30.0, 0.009_477_823_366_441_105),
        (10.0, 0.1, 2.690_532_895_434_215_6e-20),
        (10.0, 5.0, 0.001_467_802_647_310_474_1),
        (10.0, 8.5, 0.089_432_858_880_587_37),
        (10.0, 15.0, -0.090_071_811_047_659_05),
        (10.0, 99.5, -0.020_312_174_484_561_79),
    ];

    #[test]
    fn trivial_values() {
        assert_eq!(bessel_j(0.0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j(1.0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn half_order_at_half_pi() {
        let v = bessel_j(0.5, PI / 2.0).unwrap();
        assert!((v - 2.0 / PI).abs() < 1e-14);
    }

    #[test]
    fn matches_reference_table() {
        for &(a, x, want) in REFERENCE {
            let got = bessel_j(a, x).unwrap();
            let rel = (got - want).abs() / want.abs();
            assert!(rel < 1e-10, "J_{a}({x}) = {got}, want {want}, rel {rel:e}");
        }
    }

    #[test]
    fn half_integer_closed_forms_on_wide_range() {
        // J_{1/2} and J_{3/2} in closed form; error measured against the
        // local amplitude sqrt(2 / (pi x)) so zeros do not blow up the ratio.
        for i in 1..=1000 {
            let x = 0.1 * i as f64;
            let amp = (2.0 / (PI * x)).sqrt();
            let j12 = amp * x.sin();
            let j32 = amp * (x.sin() / x - x.cos());
            let e12 = (bessel_j(0.5, x).unwrap() - j12).abs();
            let e32 = (bessel_j(1.5, x).unwrap() - j32).abs();
            assert!(e12 <= 1e-10 * amp.max(j12.abs()), "x={x} e={e12:e}");
            assert!(e32 <= 1e-10 * amp.max(j32.abs()), "x={x} e={e32:e}");
        }
    }

    #[test]
    fn paths_agree_on_overlap() {
        for &a in &[0.0, 0.5, 1.0, 1.5, 3.2, 7.0] {
            for i in 0..=40 {
                let x = 4.0 + 0.15 * i as f64;
                let s = bessel_j_series(a, x);
                let m = bessel_j_miller(a, x);
                assert!((s - m).abs() < 1e-12, "a={a} x={x} {s} {m}");
            }
        }
    }

    #[test]
    fn errors() {
        assert!(bessel_j(0.0, -1.0).is_err());
        assert!(bessel_j(-1.0, 1.0).is_err());
        assert!(bessel_j(-0.5, 0.0).is_err());
        assert!(spherical_bessel_j(0, -0.1).is_err());
    }

    #[test]
    fn spherical_bessel_values() {
        assert!(spherical_bessel_j(0, PI).unwrap().abs() < 1e-15);
        assert_eq!(spherical_bessel_j(0, 0.0).unwrap(), 1.0);
        assert_eq!(spherical_bessel_j(2, 0.0).unwrap(), 0.0);
        assert!((spherical_bessel_j(0, 1e-8).unwrap() - 1.0).abs() < 1e-14);
        let j1 = spherical_bessel_j(1, 1.0).unwrap();
        assert!((j1 - 0.301_168_678_939_756_8).abs() < 1e-14);
    }

    #[test]
    fn spherical_bessel_matches_rayleigh_forms() {
        // below x ~ 0.5 the m = 3 closed form cancels catastrophically
        for i in 10..=400 {
            let x = 0.05 * i as f64;
            let (s, c) = x.sin_cos();
            let rayleigh = [
                s / x,
                s / (x * x) - c / x,
                (3.0 / (x * x) - 1.0) * s / x - 3.0 * c / (x * x),
                (15.0 / x.powi(3) - 6.0 / x) * s / x - (15.0 / (x * x) - 1.0) * c / x,
            ];
            for (m, want) in rayleigh.iter().enumerate() {
                let got = spherical_bessel_j(m, x).unwrap();
                assert!((got - want).abs() < 1e-10, "m={m} x={x} {got} {want}");
            }
        }
    }
}
