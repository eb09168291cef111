//! Special functions.
//!
//! | Function | Notes |
//! |----------|-------|
//! | [`bessel_j`] | `J_a(x)`, `a > -1`, `x >= 0`; series below 8, Miller above |
//! | [`spherical_bessel_j`] | `j_m(x)` |
//! | [`gauss_2f1_terminating`] | `2F1(-n, b; c; z)` |
//! | [`jacobi_p`], [`jacobi_q`] | Jacobi polynomials, plain and normalized at 1 |
//! | [`ultraspherical_p`] | `P^lambda_l`, normalized at 1 |
//! | [`gegenbauer_c`] | `C^lambda_l` |
//! | [`assoc_legendre`] | `P_l^m`, Condon-Shortley phase |
//!
//! All functions are pure and thread-safe.

mod bessel;
mod legendre;
mod poly;

pub use bessel::{bessel_j, spherical_bessel_j, SERIES_MAX_X};
pub use legendre::{assoc_legendre, spherical_harmonic};
pub use poly::{
    binom_real, gauss_2f1_terminating, gegenbauer_c, jacobi_p, jacobi_p_at_one, jacobi_p_series, jacobi_q, pochhammer,
    ultraspherical_p, ultraspherical_p_series, JacobiRecurrence, PolyParams,
};

/// Gamma function for real arguments.
#[inline]
pub fn gamma(x: f64) -> f64 {
    statrs::function::gamma::gamma(x)
}

/// Volume of the unit ball in `R^d`.
pub fn unit_ball_volume(d: usize) -> f64 {
    let h = 0.5 * d as f64;
    std::f64::consts::PI.powf(h) / gamma(h + 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ball_volumes() {
        use std::f64::consts::PI;
        assert!((unit_ball_volume(1) - 2.0).abs() < 1e-13);
        assert!((unit_ball_volume(2) - PI).abs() < 1e-13);
        assert!((unit_ball_volume(3) - 4.0 * PI / 3.0).abs() < 1e-13);
    }
}
