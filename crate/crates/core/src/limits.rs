//! Scaling limits as convergence tables, and Monte Carlo statistics
//! against determinantal predictions.
//!
//! Monte Carlo estimators run replica `r` on stream `r` of the run seed (see
//! [`replica_rng`]). Per-replica results are gathered in index order, so a
//! report does not depend on the number of threads.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{parameter, Error, Result};
use crate::geom::{complex_to_tangent, exp_map, geodesic_angle, sphere_total_measure, to_embedding, SpherePoint};
use crate::kernels::{
    ginibre_kernel, limit_bessel_kernel, limit_intensity, CueKernel, HarmonicKernel, KernelSpec,
    SphericalEnsembleKernel,
};
use crate::quadrature::{integrate_adaptive, GaussLegendre};
use crate::sampler::{replica_rng, restrict_and_pullback, scale_config, Configuration, SamplerKernel, Space};
use crate::specfun::{bessel_j, gamma, jacobi_q, unit_ball_volume};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub n: u64,
    pub value: Complex64,
    pub limit: Complex64,
    pub error: f64,
    /// Error no larger than in the previous row (true for the first row).
    pub improved: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceTable {
    pub label: String,
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceTable {
    fn from_values(
        label: String,
        grid: &[u64],
        mut f: impl FnMut(u64) -> Result<(Complex64, Complex64)>,
    ) -> Result<Self> {
        check_grid(grid)?;
        let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(grid.len());
        for &n in grid {
            let (value, limit) = f(n)?;
            let error = (value - limit).norm();
            let improved = rows.last().is_none_or(|r| error <= r.error);
            rows.push(ConvergenceRow {
                n,
                value,
                limit,
                error,
                improved,
            });
        }
        Ok(Self { label, rows })
    }

    pub fn grid(&self) -> Vec<u64> {
        self.rows.iter().map(|r| r.n).collect()
    }

    pub fn initial_error(&self) -> f64 {
        self.rows.first().map_or(f64::NAN, |r| r.error)
    }

    pub fn final_error(&self) -> f64 {
        self.rows.last().map_or(f64::NAN, |r| r.error)
    }

    pub fn final_below(&self, tol: f64) -> bool {
        self.final_error() < tol
    }

    /// Final error strictly below the initial one.
    pub fn decreasing(&self) -> bool {
        self.final_error() < self.initial_error()
    }

    /// Every row at least as accurate as the one before.
    pub fn monotone(&self) -> bool {
        self.rows.iter().all(|r| r.improved)
    }

    pub fn error_at(&self, n: u64) -> Option<f64> {
        self.rows.iter().find(|r| r.n == n).map(|r| r.error)
    }
}

fn check_grid(grid: &[u64]) -> Result<()> {
    if grid.is_empty() {
        return Err(parameter("ConvergenceTable", "empty grid"));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(parameter("ConvergenceTable", "grid must be strictly increasing"));
    }
    if grid[0] == 0 {
        return Err(parameter("ConvergenceTable", "grid must start at n >= 1"));
    }
    Ok(())
}

/// `start, 2 start, 4 start, ...` up to `stop`.
pub fn doubling_grid(start: u64, stop: u64) -> Vec<u64> {
    std::iter::successors(Some(start.max(1)), |&n| Some(2 * n))
        .take_while(|&n| n <= stop)
        .collect()
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `Gamma(alpha + 1) (z/2)^(-alpha) J_alpha(z)`, equal to one at `z = 0`.
pub fn mehler_heine_limit(alpha: f64, z: f64) -> Result<f64> {
    if z == 0.0 {
        return Ok(1.0);
    }
    Ok(gamma(alpha + 1.0) * (0.5 * z).powf(-alpha) * bessel_j(alpha, z)?)
}

/// Rows `Q_n^(alpha, beta)(cos(z/n))` against the Mehler-Heine limit.
pub fn mehler_heine_table(alpha: f64, beta: f64, z: f64, grid: &[u64]) -> Result<ConvergenceTable> {
    if !(z >= 0.0) || !z.is_finite() {
        return Err(parameter(
            "mehler_heine_table",
            format!("z = {z} must be finite and >= 0"),
        ));
    }
    let limit = mehler_heine_limit(alpha, z)?;
    ConvergenceTable::from_values(format!("mehler-heine alpha={alpha} beta={beta} z={z}"), grid, |n| {
        let q = jacobi_q(n as usize, alpha, beta, (z / n as f64).cos())?;
        Ok((real(q), real(limit)))
    })
}

/// Point at geodesic angle `t` from the north pole of `S^d`.
pub(crate) fn point_at_angle(d: usize, t: f64) -> Result<SpherePoint> {
    let mut angles = vec![0.0; d];
    if d == 1 {
        angles[0] = t.rem_euclid(2.0 * PI);
    } else {
        angles[d - 1] = t;
    }
    to_embedding(&angles)
}

/// Rows `K_n(u_n, v_n) / (n^d omega_d)` with `u_n` the north pole and
/// `u_n . v_n = cos(r/n)`, against `k^(d)(r)`.
pub fn kernel_limit_table(d: usize, r: f64, grid: &[u64]) -> Result<ConvergenceTable> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(parameter("kernel_limit_table", format!("r = {r} must be > 0")));
    }
    let limit = limit_bessel_kernel(d, r)?;
    let omega = sphere_total_measure(d);
    let pole = SpherePoint::north_pole(d);
    ConvergenceTable::from_values(format!("bessel-limit d={d} r={r}"), grid, |n| {
        let k = HarmonicKernel::new(d, n as usize)?;
        let v = point_at_angle(d, r / n as f64)?;
        let scaled = k.eval_real(&pole, &v) / ((n as f64).powi(d as i32) * omega);
        Ok((real(scaled), real(limit)))
    })
}

/// `(1/n) K~_n(x/n, y/n)`, the CUE kernel with `n` modes gauged to real form
/// and scaled.
pub fn cue_scaled(n: u64, x: f64, y: f64) -> Complex64 {
    let cue = CueKernel::new(n as usize);
    let (s, t) = (x / n as f64, y / n as f64);
    let gauged = cue.gauge_phase(s).conj() * cue.at_angles(s, t) * cue.gauge_phase(t);
    gauged / n as f64
}

/// `sin((x - y)/2) / (n sin((x - y)/(2n)))`.
pub fn cue_closed_form(n: u64, x: f64, y: f64) -> f64 {
    let h = 0.5 * (x - y);
    let nf = n as f64;
    if h == 0.0 {
        return 1.0;
    }
    h.sin() / (nf * (h / nf).sin())
}

/// Rows `(1/n) K~_n(x/n, y/n)` against the sinc kernel.
pub fn cue_sinc_table(x: f64, y: f64, grid: &[u64]) -> Result<ConvergenceTable> {
    let limit = crate::kernels::sinc_kernel(x, y);
    ConvergenceTable::from_values(format!("cue-sinc x={x} y={y}"), grid, |n| {
        Ok((cue_scaled(n, x, y), real(limit)))
    })
}

/// Rows `N^(-1) K_N(exp(z/sqrt N), exp(w/sqrt N))` for the spherical
/// ensemble against the Ginibre kernel of density `1/(4 pi)` in flat form.
pub fn ginibre_limit_table(z: Complex64, w: Complex64, grid: &[u64]) -> Result<ConvergenceTable> {
    let value_limit = ginibre_kernel(1.0 / (4.0 * PI), z, w)?.flat;
    ConvergenceTable::from_values(format!("ginibre z={z} w={w}"), grid, |big_n| {
        let k = SphericalEnsembleKernel::new(big_n as usize)?;
        let s = (big_n as f64).sqrt();
        let u = exp_map(&complex_to_tangent(z / s));
        let v = exp_map(&complex_to_tangent(w / s));
        Ok((k.eval_probability(&u, &v) / (4.0 * PI * big_n as f64), value_limit))
    })
}

/// `abs((2 pi)^(-d) int_(B_1) e^(i u.(x-y)) du - k^(d)(abs(x - y)))` by
/// nested adaptive quadrature in polar coordinates.
pub fn fourier_identity_check(d: usize, x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != d || y.len() != d {
        return Err(Error::DimensionMismatch {
            left: x.len().max(y.len()),
            right: d,
        });
    }
    let r: f64 = x.iter().zip(y).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
    if r == 0.0 {
        return Err(parameter("fourier_identity_check", "x = y is excluded"));
    }
    let tol = 1e-13;
    let depth = 14;
    // imaginary parts cancel over the symmetric ball
    let integral = match d {
        1 => integrate_adaptive(-1.0, 1.0, tol, depth, |s| (s * r).cos())?,
        2 | 3 => {
            let mut failure = None;
            let outer = integrate_adaptive(0.0, 1.0, tol, depth, |rho| {
                let inner = if d == 2 {
                    integrate_adaptive(0.0, 2.0 * PI, tol, depth, |phi| (rho * r * phi.cos()).cos()).map(|v| rho * v)
                } else {
                    integrate_adaptive(0.0, PI, tol, depth, |t| t.sin() * (rho * r * t.cos()).cos())
                        .map(|v| 2.0 * PI * rho * rho * v)
                };
                inner.unwrap_or_else(|e| {
                    failure.get_or_insert(e);
                    0.0
                })
            })?;
            if let Some(e) = failure {
                return Err(e);
            }
            outer
        }
        _ => {
            return Err(parameter(
                "fourier_identity_check",
                format!("d = {d} not in {{1, 2, 3}}"),
            ))
        }
    };
    let lhs = integral / (2.0 * PI).powi(d as i32);
    Ok((lhs - limit_bessel_kernel(d, r)?).abs())
}

/// Monte Carlo statistic with its determinantal prediction.
///
/// `prediction_alt` carries a second reference column: the bin-midpoint
/// value for pair correlations, and the exact finite-`n` mean for tangent
/// intensities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimatorReport {
    pub statistic: String,
    pub spec: KernelSpec,
    pub labels: Vec<String>,
    pub bin_centers: Vec<f64>,
    pub bin_edges: Vec<f64>,
    pub estimate: Vec<f64>,
    pub standard_error: Vec<f64>,
    pub prediction: Vec<f64>,
    pub prediction_alt: Vec<f64>,
    pub replicas: usize,
    /// Run seeds; replica `r` of a run uses stream `r`.
    pub seeds: Vec<u64>,
}

impl EstimatorReport {
    /// `(estimate - prediction) / standard_error`; zero when both the SE and
    /// the difference vanish.
    pub fn z_scores(&self) -> Vec<f64> {
        self.estimate
            .iter()
            .zip(&self.prediction)
            .zip(&self.standard_error)
            .map(|((e, p), s)| {
                let diff = e - p;
                if *s > 0.0 {
                    diff / s
                } else if diff.abs() <= 1e-9 {
                    0.0
                } else {
                    f64::INFINITY
                }
            })
            .collect()
    }

    pub fn within(&self, k: f64) -> Vec<bool> {
        self.z_scores().iter().map(|z| z.abs() <= k).collect()
    }

    pub fn all_within(&self, k: f64) -> bool {
        self.within(k).into_iter().all(|b| b)
    }
}

fn check_replicas(replicas: usize) -> Result<()> {
    if replicas < 2 {
        return Err(Error::InsufficientReplicas(replicas));
    }
    Ok(())
}

fn mean_and_se(samples: &[f64]) -> (f64, f64) {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Runs `f` on every replica's sample, in replica order.
fn per_replica<T: Send>(
    kernel: &SamplerKernel,
    seed: u64,
    replicas: usize,
    f: impl Fn(&[SpherePoint]) -> Result<T> + Sync,
) -> Result<Vec<T>> {
    (0..replicas as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = replica_rng(seed, r);
            let pts = kernel.sample(&mut rng)?;
            f(&pts)
        })
        .collect()
}

/// `omega_(d-1) / omega_d sin^(d-1)(t)`, the density of the angle between
/// two independent uniform points of `S^d`.
fn separation_density(d: usize, t: f64) -> f64 {
    let ratio = if d == 1 {
        1.0 / PI
    } else {
        sphere_total_measure(d - 1) / sphere_total_measure(d)
    };
    ratio * t.sin().powi(d as i32 - 1)
}

/// Evenly spaced bin edges on `[lo, hi]`.
pub fn bin_edges(lo: f64, hi: f64, bins: usize) -> Vec<f64> {
    (0..=bins).map(|i| lo + (hi - lo) * i as f64 / bins as f64).collect()
}

/// Histogram estimate of the two-point correlation `rho_2` (relative to
/// `mu_d x mu_d`) over geodesic separation.
///
/// Pairs of replica `r` with separation in bin `B` give
/// `count / int_B f`, with `f` the separation density of independent uniform
/// points; its expectation is the `f`-weighted average of
/// `K(u,u) K(v,v) - abs(K(u,v))^2` over `B`, which is the reported prediction.
/// Standard errors come from the spread across replicas.
pub fn pair_correlation_estimate(
    spec: &KernelSpec,
    replicas: usize,
    edges: &[f64],
    seed: u64,
) -> Result<EstimatorReport> {
    check_replicas(replicas)?;
    if edges.len() < 2 || edges.windows(2).any(|w| w[0] >= w[1]) || edges[0] < 0.0 || edges[edges.len() - 1] > PI {
        return Err(parameter(
            "pair_correlation_estimate",
            "bin edges must increase within [0, pi]",
        ));
    }
    let kernel = SamplerKernel::from_spec(spec)?;
    let d = kernel.sphere_dim();
    let nf = kernel.rank() as f64;
    let pole = SpherePoint::north_pole(d);
    let rho2 = |t: f64| -> Result<f64> {
        let v = point_at_angle(d, t)?;
        Ok(nf * nf - kernel.eval_mu(&pole, &v).norm_sqr())
    };
    let gl = GaussLegendre::new(32);
    let bins = edges.len() - 1;
    let mut mass = Vec::with_capacity(bins);
    let mut prediction = Vec::with_capacity(bins);
    let mut midpoint = Vec::with_capacity(bins);
    let mut centers = Vec::with_capacity(bins);
    for w in edges.windows(2) {
        let mut m = 0.0;
        let mut p = 0.0;
        for (t, wt) in gl.nodes_on(w[0], w[1]) {
            let f = separation_density(d, t);
            m += wt * f;
            p += wt * f * rho2(t)?;
        }
        let c = 0.5 * (w[0] + w[1]);
        mass.push(m);
        prediction.push(p / m);
        midpoint.push(rho2(c)?);
        centers.push(c);
    }
    let counts = per_replica(&kernel, seed, replicas, |pts| {
        let mut c = vec![0.0; bins];
        for (i, u) in pts.iter().enumerate() {
            for v in &pts[i + 1..] {
                let t = geodesic_angle(u, v)?;
                if t < edges[0] || t > edges[bins] {
                    continue;
                }
                let k = edges.partition_point(|&e| e <= t).clamp(1, bins);
                // ordered pairs
                c[k - 1] += 2.0;
            }
        }
        Ok(c)
    })?;
    let mut estimate = Vec::with_capacity(bins);
    let mut se = Vec::with_capacity(bins);
    for b in 0..bins {
        let ys: Vec<f64> = counts.iter().map(|c| c[b] / mass[b]).collect();
        let (m, s) = mean_and_se(&ys);
        estimate.push(m);
        se.push(s);
    }
    Ok(EstimatorReport {
        statistic: "paircorr".into(),
        spec: *spec,
        labels: (0..bins).map(|b| format!("bin{b}")).collect(),
        bin_centers: centers,
        bin_edges: edges.to_vec(),
        estimate,
        standard_error: se,
        prediction,
        prediction_alt: midpoint,
        replicas,
        seeds: vec![seed],
    })
}

/// `mu_d` of the closed cap of geodesic radius `a` around a point.
pub fn cap_measure(d: usize, a: f64) -> f64 {
    let a = a.clamp(0.0, PI);
    match d {
        1 => a / PI,
        2 => 0.5 * (1.0 - a.cos()),
        _ => {
            let gl = GaussLegendre::new(64);
            gl.integrate_composite(0.0, a, 4, |t| separation_density(d, t))
        }
    }
}

/// `int_cap int_cap abs(K(u, v))^2 mu_d(du) mu_d(dv)` for a cap of radius
/// `a` around the north pole of a rotation-invariant kernel.
///
/// For `d >= 2` the pair `(u, v)` is parametrized by the two colatitudes and
/// the angle `psi` between their horizontal directions, whose density is
/// proportional to `sin^(d-2)(psi)`; 48 Gauss-Legendre nodes per variable. On
/// the circle a 2-D rule with 96 nodes per side on `[-a, a]^2`.
pub fn cap_pair_integral(kernel: &SamplerKernel, a: f64) -> Result<f64> {
    let d = kernel.sphere_dim();
    let pole = SpherePoint::north_pole(d);
    let ksq_at = |t: f64| -> Result<f64> { Ok(kernel.eval_mu(&pole, &point_at_angle(d, t)?).norm_sqr()) };
    if d == 1 {
        let gl = GaussLegendre::new(96);
        let nodes: Vec<(f64, f64)> = gl.nodes_on(-a, a).collect();
        let mut acc = 0.0;
        for &(s, ws) in &nodes {
            for &(t, wt) in &nodes {
                acc += ws * wt * ksq_at(s - t)?;
            }
        }
        return Ok(acc / (4.0 * PI * PI));
    }
    let gl = GaussLegendre::new(48);
    let theta: Vec<(f64, f64)> = gl.nodes_on(0.0, a).collect();
    let psi: Vec<(f64, f64)> = gl.nodes_on(0.0, PI).collect();
    let c = sphere_total_measure(d - 1) / sphere_total_measure(d);
    let g = if d == 2 {
        1.0 / PI
    } else {
        sphere_total_measure(d - 2) / sphere_total_measure(d - 1)
    };
    let mut acc = 0.0;
    for &(t1, w1) in &theta {
        let (s1, c1) = t1.sin_cos();
        for &(t2, w2) in &theta {
            let (s2, c2) = t2.sin_cos();
            let mut inner = 0.0;
            for &(p, wp) in &psi {
                let cosang = (c1 * c2 + s1 * s2 * p.cos()).clamp(-1.0, 1.0);
                inner += wp * p.sin().powi(d as i32 - 2) * ksq_at(cosang.acos())?;
            }
            acc += w1 * w2 * (s1 * s2).powi(d as i32 - 1) * g * inner;
        }
    }
    Ok(c * c * acc)
}

/// Mean and variance of the number of points in the closed cap of radius
/// `cap_radius` around the north pole. Predictions: `N mu(cap)` and
/// `N mu(cap) - int int_(cap^2) abs(K)^2`.
pub fn count_statistics(spec: &KernelSpec, cap_radius: f64, replicas: usize, seed: u64) -> Result<EstimatorReport> {
    check_replicas(replicas)?;
    if !(cap_radius > 0.0 && cap_radius <= PI) {
        return Err(parameter(
            "count_statistics",
            format!("cap radius {cap_radius} outside (0, pi]"),
        ));
    }
    let kernel = SamplerKernel::from_spec(spec)?;
    let d = kernel.sphere_dim();
    let nf = kernel.rank() as f64;
    let pole = SpherePoint::north_pole(d);
    let counts = per_replica(&kernel, seed, replicas, |pts| {
        let mut c = 0.0;
        for p in pts {
            if geodesic_angle(&pole, p)? <= cap_radius {
                c += 1.0;
            }
        }
        Ok(c)
    })?;
    let mean_pred = nf * cap_measure(d, cap_radius);
    let var_pred = if cap_radius >= PI {
        0.0
    } else {
        (mean_pred - cap_pair_integral(&kernel, cap_radius)?).max(0.0)
    };

    let r = counts.len() as f64;
    let (mean, mean_se) = mean_and_se(&counts);
    let var = counts.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (r - 1.0);
    let m4 = counts.iter().map(|x| (x - mean).powi(4)).sum::<f64>() / r;
    let var_se = ((m4 - var * var).max(0.0) / r).sqrt();
    Ok(EstimatorReport {
        statistic: "counts".into(),
        spec: *spec,
        labels: vec!["mean".into(), "variance".into()],
        bin_centers: vec![cap_radius, cap_radius],
        bin_edges: vec![0.0, cap_radius],
        estimate: vec![mean, var],
        standard_error: vec![mean_se, var_se],
        prediction: vec![mean_pred, var_pred],
        prediction_alt: vec![mean_pred, var_pred],
        replicas,
        seeds: vec![seed],
    })
}

/// Intensity of `S_c` applied to the pullback of a sphere ensemble, in the
/// ball of radius `radius` around the tangent origin.
///
/// `prediction` is the limit intensity `V_d / (2 pi)^d`; `prediction_alt` is
/// the exact expected intensity of the finite ensemble in that ball,
/// `N mu(cap(radius / c)) / vol(B_radius)`.
pub fn tangent_intensity(
    spec: &KernelSpec,
    c: f64,
    radius: f64,
    replicas: usize,
    seed: u64,
) -> Result<EstimatorReport> {
    check_replicas(replicas)?;
    let kernel = SamplerKernel::from_spec(spec)?;
    let d = kernel.sphere_dim();
    if !(radius > 0.0) || !(c > 0.0) || radius / c >= PI {
        return Err(parameter(
            "tangent_intensity",
            "need radius > 0, c > 0 and radius / c < pi",
        ));
    }
    let eps = (2.0 * radius / c).min(PI);
    let vol = unit_ball_volume(d) * radius.powi(d as i32);
    let counts = per_replica(&kernel, seed, replicas, |pts| {
        let config = Configuration {
            space: Space::Sphere(d),
            points: pts.iter().map(|p| p.embedding().to_vec()).collect(),
            seed,
            replica: 0,
            scale: 1.0,
        };
        let scaled = scale_config(&restrict_and_pullback(&config, eps)?, c)?;
        let k = scaled
            .points
            .iter()
            .filter(|x| x.iter().map(|v| v * v).sum::<f64>().sqrt() < radius)
            .count();
        Ok(k as f64 / vol)
    })?;
    let (mean, se) = mean_and_se(&counts);
    let exact = kernel.rank() as f64 * cap_measure(d, radius / c) / vol;
    Ok(EstimatorReport {
        statistic: "tangent-intensity".into(),
        spec: *spec,
        labels: vec!["intensity".into()],
        bin_centers: vec![0.0],
        bin_edges: vec![0.0, radius],
        estimate: vec![mean],
        standard_error: vec![se],
        prediction: vec![limit_intensity(d)],
        prediction_alt: vec![exact],
        replicas,
        seeds: vec![seed],
    })
}
