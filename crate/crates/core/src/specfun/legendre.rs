//! Associated Legendre functions and spherical harmonics on `S^2`.
//!
//! Convention: Condon-Shortley phase is included in `P_l^m`, so
//! `P_1^1(x) = -sqrt(1 - x^2)`, and the spherical harmonics
//!
//! ```text
//! Y_l^m(theta, phi) = sqrt((2l+1)/(4 pi) (l-m)!/(l+m)!) P_l^m(cos theta) e^(i m phi)
//! ```
//!
//! are orthonormal for the surface measure `sin(theta) dtheta dphi`
//! (total mass `4 pi`). The zonal kernels in [`crate::kernels`] are
//! normalized against the probability measure instead, so
//! `Z_l(u, v) = 4 pi sum_m Y_l^m(u) conj(Y_l^m(v))`.

use num_complex::Complex64;

use crate::error::{domain, Error, Result};

/// Associated Legendre function `P_l^m(x)` with Condon-Shortley phase,
/// for `|m| <= l` and `|x| <= 1`. Negative orders use
/// `P_l^(-m) = (-1)^m (l-m)!/(l+m)! P_l^m`.
pub fn assoc_legendre(l: usize, m: i64, x: f64) -> Result<f64> {
    if m.unsigned_abs() as usize > l {
        return Err(Error::Index { l, m });
    }
    if !(x.abs() <= 1.0) {
        return Err(domain("assoc_legendre", format!("argument {x} outside [-1, 1]")));
    }
    let mu = m.unsigned_abs() as usize;
    let p = legendre_nonneg(l, mu, x);
    if m >= 0 {
        Ok(p)
    } else {
        let sign = if mu.is_multiple_of(2) { 1.0 } else { -1.0 };
        Ok(sign * factorial_ratio(l, mu) * p)
    }
}

fn legendre_nonneg(l: usize, m: usize, x: f64) -> f64 {
    let somx2 = ((1.0 - x) * (1.0 + x)).sqrt();
    let mut pmm = 1.0;
    let mut odd = 1.0;
    for _ in 0..m {
        pmm *= -odd * somx2;
        odd += 2.0;
    }
    if l == m {
        return pmm;
    }
    let mut pm1 = x * (2 * m + 1) as f64 * pmm;
    for ll in (m + 2)..=l {
        let next = (x * (2 * ll - 1) as f64 * pm1 - (ll + m - 1) as f64 * pmm) / (ll - m) as f64;
        pmm = pm1;
        pm1 = next;
    }
    pm1
}

/// `(l - m)! / (l + m)!`
fn factorial_ratio(l: usize, m: usize) -> f64 {
    ((l - m + 1)..=(l + m)).fold(1.0, |acc, k| acc / k as f64)
}

/// Spherical harmonic `Y_l^m(theta, phi)`, with `theta` the colatitude and
/// `phi` the azimuth.
pub fn spherical_harmonic(l: usize, m: i64, theta: f64, phi: f64) -> Result<Complex64> {
    let p = assoc_legendre(l, m, theta.cos().clamp(-1.0, 1.0))?;
    let norm = if m >= 0 {
        ((2 * l + 1) as f64 / (4.0 * std::f64::consts::PI) * factorial_ratio(l, m as usize)).sqrt()
    } else {
        // the (l-m)!/(l+m)! factor with negative m
        let mu = m.unsigned_abs() as usize;
        ((2 * l + 1) as f64 / (4.0 * std::f64::consts::PI) / factorial_ratio(l, mu)).sqrt()
    };
    Ok(Complex64::from_polar(norm * p, m as f64 * phi))
}
