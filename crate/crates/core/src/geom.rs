//! Geometry of `S^d`: polar coordinates, measures, uniform sampling, the
//! exponential map at the north pole and the stereographic chart of `S^2`.
//!
//! Polar coordinates follow
//!
//! ```text
//! u_1     = sin t_d ... sin t_2 sin t_1
//! u_k     = sin t_d ... sin t_k cos t_(k-1)     (2 <= k <= d)
//! u_(d+1) = cos t_d
//! ```
//!
//! with `t_1` in `[0, 2 pi)` and `t_k` in `[0, pi]` for `k >= 2`. On `S^2`
//! the colatitude is `t_2` and the azimuth is `t_1`. For `d = 1` the single
//! angle gives `u = (sin t_1, cos t_1)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::specfun::gamma;

const UNIT_NORM_TOL: f64 = 1e-10;

/// A point of `S^d`, held both as polar angles and as a unit vector of
/// `R^(d+1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpherePoint {
    angles: Vec<f64>,
    embedding: Vec<f64>,
}

impl SpherePoint {
    /// Builds a point from polar angles `[t_1, ..., t_d]`.
    pub fn from_angles(angles: &[f64]) -> Result<Self> {
        to_embedding(angles)
    }

    /// Builds a point from a vector of `R^(d+1)` with unit norm (to within
    /// `1e-10`). The vector is renormalized.
    pub fn from_embedding(u: &[f64]) -> Result<Self> {
        if u.len() < 2 {
            return Err(domain("SpherePoint::from_embedding", "need at least 2 coordinates"));
        }
        let norm = u.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !((norm - 1.0).abs() <= UNIT_NORM_TOL) {
            return Err(domain(
                "SpherePoint::from_embedding",
                format!("vector norm {norm} is not 1"),
            ));
        }
        let embedding: Vec<f64> = u.iter().map(|x| x / norm).collect();
        let angles = angles_of(&embedding);
        Ok(Self { angles, embedding })
    }

    /// Unit vector with unchecked norm; used after exact constructions.
    fn from_unit_vector(embedding: Vec<f64>) -> Self {
        let angles = angles_of(&embedding);
        Self { angles, embedding }
    }

    /// The north pole `e_(d+1)`.
    pub fn north_pole(d: usize) -> Self {
        let mut embedding = vec![0.0; d + 1];
        embedding[d] = 1.0;
        Self {
            angles: vec![0.0; d],
            embedding,
        }
    }

    pub fn dim(&self) -> usize {
        self.angles.len()
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn embedding(&self) -> &[f64] {
        &self.embedding
    }

    /// Last polar angle `t_d`, the geodesic distance to the north pole.
    pub fn colatitude(&self) -> f64 {
        self.angles[self.dim() - 1]
    }

    /// First polar angle `t_1`.
    pub fn azimuth(&self) -> f64 {
        self.angles[0]
    }

    /// Inner product of embeddings. Panics on dimension mismatch.
    #[inline]
    pub fn dot(&self, other: &SpherePoint) -> f64 {
        assert_eq!(self.embedding.len(), other.embedding.len(), "dimension mismatch");
        self.embedding.iter().zip(&other.embedding).map(|(a, b)| a * b).sum()
    }

    /// Applies a linear map (row-major `(d+1) x (d+1)` matrix) to the embedding.
    /// The matrix is expected to be orthogonal.
    pub fn transform(&self, matrix: &[f64]) -> Result<Self> {
        let n = self.embedding.len();
        if matrix.len() != n * n {
            return Err(Error::DimensionMismatch {
                left: matrix.len(),
                right: n * n,
            });
        }
        let v: Vec<f64> = (0..n)
            .map(|i| (0..n).map(|j| matrix[i * n + j] * self.embedding[j]).sum())
            .collect();
        Self::from_embedding(&v)
    }
}

fn angles_of(u: &[f64]) -> Vec<f64> {
    let d = u.len() - 1;
    let mut angles = vec![0.0; d];
    let mut partial = u[0] * u[0];
    for k in 2..=d {
        partial += u[k - 1] * u[k - 1];
        // ||(u_1..u_k)|| = sin t_d ... sin t_k and u_(k+1) = sin t_d ... sin t_(k+1) cos t_k
        angles[k - 1] = partial.sqrt().atan2(u[k]);
    }
    let mut t1 = u[0].atan2(u[1]);
    if t1 < 0.0 {
        t1 += 2.0 * PI;
    }
    if t1 >= 2.0 * PI {
        t1 = 0.0;
    }
    angles[0] = t1;
    angles
}

/// Maps polar angles onto the embedding in `R^(d+1)`.
pub fn to_embedding(angles: &[f64]) -> Result<SpherePoint> {
    let d = angles.len();
    if d == 0 {
        return Err(domain("to_embedding", "need at least one angle"));
    }
    let t1 = angles[0];
    if !(0.0..2.0 * PI).contains(&t1) {
        return Err(domain("to_embedding", format!("t_1 = {t1} outside [0, 2 pi)")));
    }
    for (k, &t) in angles.iter().enumerate().skip(1) {
        if !(0.0..=PI).contains(&t) {
            return Err(domain("to_embedding", format!("t_{} = {t} outside [0, pi]", k + 1)));
        }
    }
    let mut u = vec![0.0; d + 1];
    // running product sin t_d ... sin t_k
    let mut sin_prod = 1.0;
    u[d] = angles[d - 1].cos();
    for k in (2..=d).rev() {
        sin_prod *= angles[k - 1].sin();
        u[k - 1] = sin_prod * angles[k - 2].cos();
    }
    u[0] = sin_prod * angles[0].sin();
    Ok(SpherePoint {
        angles: angles.to_vec(),
        embedding: u,
    })
}

/// Total surface measure `omega_d = 2 pi^((d+1)/2) / Gamma((d+1)/2)`.
pub fn sphere_total_measure(d: usize) -> f64 {
    let h = 0.5 * (d as f64 + 1.0);
    2.0 * PI.powf(h) / gamma(h)
}

/// Draws a point from the normalized surface measure on `S^d` by
/// normalizing a standard Gaussian vector.
pub fn uniform_sample<R: Rng + ?Sized>(d: usize, rng: &mut R) -> SpherePoint {
    loop {
        let v: Vec<f64> = (0..=d).map(|_| rng.sample(StandardNormal)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-300 {
            return SpherePoint::from_unit_vector(v.into_iter().map(|x| x / norm).collect());
        }
    }
}

/// A vector of the tangent space at the north pole, `T_(e_(d+1)) S^d = R^d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TangentPoint {
    pub coords: Vec<f64>,
}

impl TangentPoint {
    pub fn new(coords: Vec<f64>) -> Self {
        Self { coords }
    }

    pub fn origin(d: usize) -> Self {
        Self { coords: vec![0.0; d] }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn norm(&self) -> f64 {
        self.coords.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            coords: self.coords.iter().map(|x| c * x).collect(),
        }
    }

    pub fn distance(&self, other: &TangentPoint) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }
}

/// Exponential map at the north pole: `t Omega -> ((sin t) Omega, cos t)`.
pub fn exp_map(x: &TangentPoint) -> SpherePoint {
    let d = x.dim();
    let t = x.norm();
    if t == 0.0 {
        return SpherePoint::north_pole(d);
    }
    let s = t.sin() / t;
    let mut u: Vec<f64> = x.coords.iter().map(|c| c * s).collect();
    u.push(t.cos());
    SpherePoint::from_unit_vector(u)
}

/// Inverse of [`exp_map`] on the sphere minus the south pole.
pub fn log_map(u: &SpherePoint) -> Result<TangentPoint> {
    let e = u.embedding();
    let d = u.dim();
    let r = e[..d].iter().map(|x| x * x).sum::<f64>().sqrt();
    let t = r.atan2(e[d]);
    if r == 0.0 {
        if e[d] > 0.0 {
            return Ok(TangentPoint::origin(d));
        }
        return Err(Error::Excluded("log_map is undefined at the south pole"));
    }
    let s = t / r;
    Ok(TangentPoint::new(e[..d].iter().map(|x| x * s).collect()))
}

/// Geodesic distance in `[0, pi]`.
///
/// Evaluated as `2 atan2(|u - v|, |u + v|)`, which equals the arccosine of
/// the inner product but keeps full relative accuracy for nearby points.
pub fn geodesic_angle(u: &SpherePoint, v: &SpherePoint) -> Result<f64> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch {
            left: u.dim(),
            right: v.dim(),
        });
    }
    let (mut diff, mut sum) = (0.0, 0.0);
    for (a, b) in u.embedding().iter().zip(v.embedding()) {
        diff += (a - b) * (a - b);
        sum += (a + b) * (a + b);
    }
    Ok(2.0 * diff.sqrt().atan2(sum.sqrt()))
}

/// Point of `S^2` with colatitude `theta` and azimuth `phi`.
pub fn s2_from_polar(theta: f64, phi: f64) -> Result<SpherePoint> {
    to_embedding(&[phi.rem_euclid(2.0 * PI), theta])
}

/// Stereographic chart `z = tan(theta / 2) e^(i phi)`, sending `0` to the
/// north pole and the unit circle to the equator.
pub fn stereographic(z: Complex64) -> Result<SpherePoint> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(domain("stereographic", "z must be finite"));
    }
    let theta = 2.0 * z.norm().atan();
    let phi = if z.norm() == 0.0 { 0.0 } else { z.arg() };
    s2_from_polar(theta, phi)
}

/// Inverse stereographic chart; the south pole has no image.
pub fn inverse_stereographic(u: &SpherePoint) -> Result<Complex64> {
    if u.dim() != 2 {
        return Err(Error::DimensionMismatch {
            left: u.dim(),
            right: 2,
        });
    }
    let e = u.embedding();
    if e[2] <= -1.0 + 1e-300 || (e[0] == 0.0 && e[1] == 0.0 && e[2] < 0.0) {
        return Err(Error::Excluded("stereographic chart excludes the south pole"));
    }
    // tan(theta / 2) = sin(theta) / (1 + cos(theta))
    let r = (e[0] * e[0] + e[1] * e[1]).sqrt() / (1.0 + e[2]);
    Ok(Complex64::from_polar(r, u.azimuth()))
}

/// Identifies `z = t e^(i phi)` with the tangent vector at `e_3` whose image
/// under [`exp_map`] has colatitude `t` and azimuth `phi`.
pub fn complex_to_tangent(z: Complex64) -> TangentPoint {
    let (t, phi) = (z.norm(), z.arg());
    TangentPoint::new(vec![t * phi.sin(), t * phi.cos()])
}

/// Inverse of [`complex_to_tangent`].
pub fn tangent_to_complex(x: &TangentPoint) -> Complex64 {
    Complex64::new(x.coords[1], x.coords[0])
}
