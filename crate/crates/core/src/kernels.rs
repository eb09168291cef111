//! Correlation kernels and the transformations that leave a DPP unchanged.
//!
//! Every kernel carries the background measure its values pair with:
//!
//! | Kernel | Space | Background |
//! |--------|-------|------------|
//! | [`HarmonicKernel`] | `S^d` | normalized surface measure `mu_d` |
//! | [`SphericalEnsembleKernel`] | `S^2` | surface measure `sigma` (mass `4 pi`) |
//! | [`CueKernel`] | `S^1` | `dtheta / 2 pi` |
//! | [`LimitBesselKernel`] | `R^d` | Lebesgue `dx` |
//! | [`SincKernel`] | `R` | `dx / 2 pi` |
//! | [`GinibreKernel`] | `C` | `rho e^(-pi rho abs(z)^2) dz`, or `dz` in flat form |

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, parameter, Error, Result};
use crate::geom::{sphere_total_measure, SpherePoint, TangentPoint};
use crate::quadrature::GaussLegendre;
use crate::specfun::{bessel_j, gamma, ultraspherical_p, unit_ball_volume, JacobiRecurrence};

/// Below this distance the removable singularities of the Bessel and sinc
/// kernels are evaluated from their Taylor series.
pub const SERIES_THRESHOLD: f64 = 1e-4;

/// Reference measure paired with a correlation kernel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Background {
    /// Normalized surface measure `mu_d` on `S^d`.
    SphereProbability { d: usize },
    /// Unnormalized surface measure `sigma_d` on `S^d`.
    SphereSurface { d: usize },
    /// `density * dx` on `R^d`.
    Lebesgue { d: usize, density: f64 },
    /// `rho e^(-pi rho abs(z)^2) dz` on `C`.
    GaussianWeight { rho: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum KernelFamily {
    /// Projection onto spherical harmonics of degree `<= n` on `S^d`.
    HarmonicEnsemble {
        d: usize,
        n: usize,
    },
    /// `points`-point spherical ensemble on `S^2`.
    SphericalEnsemble {
        points: usize,
    },
    /// CUE eigenvalues on `S^1`, with `2n + 1` points (Fourier modes `|k| <= n`).
    Cue {
        n: usize,
    },
    LimitBessel {
        d: usize,
    },
    Sinc,
    Ginibre {
        rho: f64,
    },
}

/// A kernel family together with its background measure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    pub family: KernelFamily,
    pub background: Background,
}

impl KernelSpec {
    pub fn new(family: KernelFamily) -> Result<Self> {
        let background = match family {
            KernelFamily::HarmonicEnsemble { d, .. } => {
                if d == 0 {
                    return Err(parameter("KernelSpec", "sphere dimension must be >= 1"));
                }
                Background::SphereProbability { d }
            }
            KernelFamily::SphericalEnsemble { points } => {
                if points == 0 {
                    return Err(parameter("KernelSpec", "spherical ensemble needs N >= 1"));
                }
                Background::SphereSurface { d: 2 }
            }
            KernelFamily::Cue { .. } => Background::SphereProbability { d: 1 },
            KernelFamily::LimitBessel { d } => {
                if d == 0 {
                    return Err(parameter("KernelSpec", "dimension must be >= 1"));
                }
                Background::Lebesgue { d, density: 1.0 }
            }
            KernelFamily::Sinc => Background::Lebesgue {
                d: 1,
                density: 1.0 / (2.0 * PI),
            },
            KernelFamily::Ginibre { rho } => {
                if !(rho > 0.0) {
                    return Err(parameter("KernelSpec", "Ginibre density must be > 0"));
                }
                Background::GaussianWeight { rho }
            }
        };
        Ok(Self { family, background })
    }

    pub fn harmonic(d: usize, n: usize) -> Result<Self> {
        Self::new(KernelFamily::HarmonicEnsemble { d, n })
    }

    pub fn spherical(points: usize) -> Result<Self> {
        Self::new(KernelFamily::SphericalEnsemble { points })
    }

    pub fn cue(n: usize) -> Result<Self> {
        Self::new(KernelFamily::Cue { n })
    }

    /// Number of points for the finite projection families.
    pub fn rank(&self) -> Option<usize> {
        match self.family {
            KernelFamily::HarmonicEnsemble { d, n } => Some(n_points(d, n) as usize),
            KernelFamily::SphericalEnsemble { points } => Some(points),
            KernelFamily::Cue { n } => Some(2 * n + 1),
            _ => None,
        }
    }

    /// Dimension of the sphere for the finite families.
    pub fn sphere_dim(&self) -> Option<usize> {
        match self.family {
            KernelFamily::HarmonicEnsemble { d, .. } => Some(d),
            KernelFamily::SphericalEnsemble { .. } => Some(2),
            KernelFamily::Cue { .. } => Some(1),
            _ => None,
        }
    }
}

/// A correlation kernel evaluated on points of some space.
pub trait CorrelationKernel {
    type Point;

    fn eval(&self, x: &Self::Point, y: &Self::Point) -> Complex64;

    fn background(&self) -> Background;
}

/// `d_l`, the dimension of degree-`l` spherical harmonics on `S^d`.
///
/// For `d >= 2` this is `(2l + d - 1)/(d - 1) binom(l + d - 2, l)`; on the
/// circle `d_0 = 1` and `d_l = 2` (the modes `e^(+-i l t)`).
///
/// Panics if `d == 0`.
pub fn dim_harmonics(d: usize, l: usize) -> u64 {
    assert!(d >= 1, "sphere dimension must be >= 1");
    if d == 1 {
        return if l == 0 { 1 } else { 2 };
    }
    let num = (2 * l + d - 1) as u128 * binom_u128(l + d - 2, l);
    (num / (d - 1) as u128) as u64
}

/// `N_n^(d) = (d + 2n)/d binom(d + n - 1, n)`, the rank of the harmonic
/// ensemble. Panics if `d == 0`.
pub fn n_points(d: usize, n: usize) -> u64 {
    assert!(d >= 1, "sphere dimension must be >= 1");
    let num = (d + 2 * n) as u128 * binom_u128(d + n - 1, n);
    (num / d as u128) as u64
}

fn binom_u128(n: usize, k: usize) -> u128 {
    let k = k.min(n - k.min(n));
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r
}

fn check_dims(u: &SpherePoint, v: &SpherePoint, d: usize) -> Result<()> {
    if u.dim() != d {
        return Err(Error::DimensionMismatch {
            left: u.dim(),
            right: d,
        });
    }
    if v.dim() != d {
        return Err(Error::DimensionMismatch {
            left: v.dim(),
            right: d,
        });
    }
    Ok(())
}

#[inline]
fn clamped_dot(u: &SpherePoint, v: &SpherePoint) -> f64 {
    u.dot(v).clamp(-1.0, 1.0)
}

/// Zonal kernel `Z_l(u, v) = d_l P^((d-1)/2)_l(u . v)`, the reproducing
/// kernel of degree-`l` harmonics for `mu_d`.
pub fn zonal_kernel(d: usize, l: usize, u: &SpherePoint, v: &SpherePoint) -> Result<f64> {
    check_dims(u, v, d)?;
    let p = ultraspherical_p(l, 0.5 * (d as f64 - 1.0), clamped_dot(u, v))?;
    Ok(dim_harmonics(d, l) as f64 * p)
}

/// Harmonic-ensemble kernel `N_n^(d) Q_n^(d/2, d/2-1)(u . v)`.
pub fn harmonic_kernel(d: usize, n: usize, u: &SpherePoint, v: &SpherePoint) -> Result<f64> {
    check_dims(u, v, d)?;
    Ok(HarmonicKernel::new(d, n)?.at(clamped_dot(u, v)))
}

/// Harmonic-ensemble kernel as the sum of zonal kernels of degree `<= n`.
pub fn harmonic_kernel_sum(d: usize, n: usize, u: &SpherePoint, v: &SpherePoint) -> Result<f64> {
    (0..=n).map(|l| zonal_kernel(d, l, u, v)).sum()
}

/// Harmonic ensemble on `S^d`, kernel relative to `mu_d`.
#[derive(Debug, Clone)]
pub struct HarmonicKernel {
    d: usize,
    n: usize,
    rank: usize,
    recurrence: JacobiRecurrence,
}

impl HarmonicKernel {
    pub fn new(d: usize, n: usize) -> Result<Self> {
        if d == 0 {
            return Err(parameter("HarmonicKernel", "sphere dimension must be >= 1"));
        }
        let half = 0.5 * d as f64;
        Ok(Self {
            d,
            n,
            rank: n_points(d, n) as usize,
            recurrence: JacobiRecurrence::new(n, half, half - 1.0)?,
        })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Kernel value as a function of `t = u . v` in `[-1, 1]`.
    #[inline]
    pub fn at(&self, t: f64) -> f64 {
        self.rank as f64 * self.recurrence.q(t)
    }

    #[inline]
    pub fn eval_real(&self, u: &SpherePoint, v: &SpherePoint) -> f64 {
        self.at(clamped_dot(u, v))
    }
}

impl CorrelationKernel for HarmonicKernel {
    type Point = SpherePoint;

    fn eval(&self, x: &SpherePoint, y: &SpherePoint) -> Complex64 {
        Complex64::new(self.eval_real(x, y), 0.0)
    }

    fn background(&self) -> Background {
        Background::SphereProbability { d: self.d }
    }
}

/// Spherical-ensemble kernel on `S^2` relative to the surface measure:
/// `(N / 4 pi) (e^(i(phi - phi')) sin(theta/2) sin(theta'/2) + cos(theta/2) cos(theta'/2))^(N-1)`.
pub fn spherical_ensemble_kernel(points: usize, u: &SpherePoint, v: &SpherePoint) -> Result<Complex64> {
    if points == 0 {
        return Err(parameter("spherical_ensemble_kernel", "N must be >= 1"));
    }
    check_dims(u, v, 2)?;
    Ok(SphericalEnsembleKernel::new(points)?.eval(u, v))
}

#[derive(Debug, Clone, Copy)]
pub struct SphericalEnsembleKernel {
    points: usize,
}

impl SphericalEnsembleKernel {
    pub fn new(points: usize) -> Result<Self> {
        if points == 0 {
            return Err(parameter("SphericalEnsembleKernel", "N must be >= 1"));
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> usize {
        self.points
    }

    /// `(cos(theta/2), sin(theta/2) e^(i phi))`; the kernel base is the
    /// Hermitian product of these pairs.
    #[inline]
    pub fn spinor(u: &SpherePoint) -> (f64, Complex64) {
        let (s, c) = (0.5 * u.colatitude()).sin_cos();
        (c, Complex64::from_polar(s, u.azimuth()))
    }

    /// Base of the power, `b(u) conj(b(v)) + a(u) a(v)`.
    #[inline]
    pub fn base(u: &SpherePoint, v: &SpherePoint) -> Complex64 {
        let (au, bu) = Self::spinor(u);
        let (av, bv) = Self::spinor(v);
        bu * bv.conj() + au * av
    }

    /// Kernel relative to the normalized measure `mu_2`, i.e. `4 pi` times
    /// the surface-measure kernel; its diagonal equals `N`.
    #[inline]
    pub fn eval_probability(&self, u: &SpherePoint, v: &SpherePoint) -> Complex64 {
        Self::base(u, v).powi(self.points as i32 - 1) * self.points as f64
    }
}

impl CorrelationKernel for SphericalEnsembleKernel {
    type Point = SpherePoint;

    fn eval(&self, x: &SpherePoint, y: &SpherePoint) -> Complex64 {
        self.eval_probability(x, y) / (4.0 * PI)
    }

    fn background(&self) -> Background {
        Background::SphereSurface { d: 2 }
    }
}

/// CUE kernel `sum_(k=0)^(modes-1) e^(i k (t - t'))` on the circle, relative
/// to `dt / 2 pi`. Points are `S^1` points with angle `t = t_1`.
#[derive(Debug, Clone, Copy)]
pub struct CueKernel {
    modes: usize,
}

impl CueKernel {
    pub fn new(modes: usize) -> Self {
        Self { modes }
    }

    /// The kernel with `2n + 1` modes, matching [`KernelFamily::Cue`].
    pub fn with_points(n: usize) -> Self {
        Self::new(2 * n + 1)
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn at_angles(&self, t: f64, s: f64) -> Complex64 {
        let h = t - s;
        if (0.5 * h).sin().abs() >= 0.1 {
            return self.gauge_phase(h) * self.real_form(t, s);
        }
        // near the diagonal the closed form divides by a small sine
        (0..self.modes).map(|k| Complex64::from_polar(1.0, k as f64 * h)).sum()
    }

    /// The real Dirichlet form `sin(n (t - s)/2) / sin((t - s)/2)`, gauge
    /// equivalent to [`CueKernel::at_angles`] through `v(t) = e^(i (n-1) t / 2)`.
    pub fn real_form(&self, t: f64, s: f64) -> f64 {
        let h = 0.5 * (t - s);
        let n = self.modes as f64;
        if h.sin().abs() < 1e-8 {
            // sin(n h)/sin(h) near a multiple of pi
            let k = (h / PI).round();
            let sign = if (k as i64 * (self.modes as i64 - 1)) % 2 == 0 {
                1.0
            } else {
                -1.0
            };
            return sign * n;
        }
        (n * h).sin() / h.sin()
    }

    /// Gauge phase `v(t) = e^(i (n - 1) t / 2)`.
    pub fn gauge_phase(&self, t: f64) -> Complex64 {
        Complex64::from_polar(1.0, 0.5 * (self.modes as f64 - 1.0) * t)
    }
}

impl CorrelationKernel for CueKernel {
    type Point = SpherePoint;

    fn eval(&self, x: &SpherePoint, y: &SpherePoint) -> Complex64 {
        self.at_angles(x.azimuth(), y.azimuth())
    }

    fn background(&self) -> Background {
        Background::SphereProbability { d: 1 }
    }
}

/// Limit kernel `k^(d)(r) = J_(d/2)(r) / (2 pi r)^(d/2)`, continuous at
/// `r = 0` with value `V_d / (2 pi)^d`.
pub fn limit_bessel_kernel(d: usize, r: f64) -> Result<f64> {
    if d == 0 {
        return Err(parameter("limit_bessel_kernel", "dimension must be >= 1"));
    }
    if !(r >= 0.0) || !r.is_finite() {
        return Err(domain(
            "limit_bessel_kernel",
            format!("r = {r} must be finite and >= 0"),
        ));
    }
    let h = 0.5 * d as f64;
    if r < SERIES_THRESHOLD {
        // (4 pi)^(-d/2) sum_k (-r^2/4)^k / (k! Gamma(k + d/2 + 1))
        let q = -0.25 * r * r;
        let mut term = 1.0 / gamma(h + 1.0);
        let mut sum = term;
        for k in 1..4 {
            let kf = k as f64;
            term *= q / (kf * (kf + h));
            sum += term;
        }
        return Ok(sum / (4.0 * PI).powf(h));
    }
    Ok(bessel_j(h, r)? / (2.0 * PI * r).powf(h))
}

/// `k^(d)(0) = V_d / (2 pi)^d`, the intensity of the limit process.
pub fn limit_intensity(d: usize) -> f64 {
    unit_ball_volume(d) / (2.0 * PI).powi(d as i32)
}

/// `k^(d)(r)` through `(2 pi)^(-d/2) r^(-(d-2)/2) int_0^1 s^(d/2) J_((d-2)/2)(r s) ds`,
/// by 64-point Gauss-Legendre quadrature on 4 panels.
pub fn limit_bessel_kernel_integral_form(d: usize, r: f64) -> Result<f64> {
    if d == 0 {
        return Err(parameter("limit_bessel_kernel_integral_form", "dimension must be >= 1"));
    }
    if !(r > 0.0) || !r.is_finite() {
        return Err(domain(
            "limit_bessel_kernel_integral_form",
            format!("r = {r} must be > 0"),
        ));
    }
    let h = 0.5 * d as f64;
    let order = h - 1.0;
    let gl = GaussLegendre::new(64);
    let mut err = None;
    let integral = gl.integrate_composite(0.0, 1.0, 4, |s| match bessel_j(order, r * s) {
        Ok(j) => s.powf(h) * j,
        Err(e) => {
            err.get_or_insert(e);
            0.0
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    Ok(integral / ((2.0 * PI).powf(h) * r.powf(order)))
}

/// `k^(d)(r)` for odd `d` in elementary functions, obtained by applying
/// `(-1/(2 pi r) d/dr)^((d-1)/2)` to `sin r / (pi r)`.
///
/// The result is held as `sum_k r^(-k) (a_k sin r + b_k cos r)`; it cancels
/// badly as `r -> 0`, where [`limit_bessel_kernel`] should be preferred.
#[derive(Debug, Clone)]
pub struct OddLimitKernel {
    d: usize,
    sin_coeffs: Vec<f64>,
    cos_coeffs: Vec<f64>,
}

impl OddLimitKernel {
    pub fn new(d: usize) -> Result<Self> {
        if d.is_multiple_of(2) {
            return Err(parameter("OddLimitKernel", format!("d = {d} must be odd")));
        }
        let top = d + 1;
        let mut a = vec![0.0; top + 1];
        let mut b = vec![0.0; top + 1];
        a[1] = 1.0 / PI;
        for _ in 0..(d - 1) / 2 {
            let mut na = vec![0.0; top + 1];
            let mut nb = vec![0.0; top + 1];
            // d/dr (r^-k sin) = -k r^-(k+1) sin + r^-k cos
            // d/dr (r^-k cos) = -k r^-(k+1) cos - r^-k sin
            // then multiply by -1/(2 pi r), which raises k by one
            let f = -1.0 / (2.0 * PI);
            for k in 0..top {
                let kf = k as f64;
                if k + 2 <= top {
                    na[k + 2] += f * (-kf * a[k]);
                    nb[k + 2] += f * (-kf * b[k]);
                }
                na[k + 1] += f * (-b[k]);
                nb[k + 1] += f * a[k];
            }
            a = na;
            b = nb;
        }
        Ok(Self {
            d,
            sin_coeffs: a,
            cos_coeffs: b,
        })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn eval(&self, r: f64) -> f64 {
        let (s, c) = r.sin_cos();
        let inv = 1.0 / r;
        let mut p = 1.0;
        let mut acc = 0.0;
        for (a, b) in self.sin_coeffs.iter().zip(&self.cos_coeffs) {
            acc += p * (a * s + b * c);
            p *= inv;
        }
        acc
    }
}

/// Translation-invariant limit kernel `K(x, y) = k^(d)(abs(x - y))` on `R^d`.
#[derive(Debug, Clone, Copy)]
pub struct LimitBesselKernel {
    d: usize,
}

impl LimitBesselKernel {
    pub fn new(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(parameter("LimitBesselKernel", "dimension must be >= 1"));
        }
        Ok(Self { d })
    }
}

impl CorrelationKernel for LimitBesselKernel {
    type Point = TangentPoint;

    fn eval(&self, x: &TangentPoint, y: &TangentPoint) -> Complex64 {
        let r = x.distance(y);
        Complex64::new(limit_bessel_kernel(self.d, r).unwrap_or(f64::NAN), 0.0)
    }

    fn background(&self) -> Background {
        Background::Lebesgue {
            d: self.d,
            density: 1.0,
        }
    }
}

/// `K_sinc(x, y) = sin((x - y)/2) / ((x - y)/2)`, equal to one on the diagonal.
pub fn sinc_kernel(x: f64, y: f64) -> f64 {
    let h = 0.5 * (x - y);
    if h.abs() < SERIES_THRESHOLD {
        let h2 = h * h;
        return 1.0 - h2 / 6.0 + h2 * h2 / 120.0;
    }
    h.sin() / h
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SincKernel;

impl CorrelationKernel for SincKernel {
    type Point = TangentPoint;

    fn eval(&self, x: &TangentPoint, y: &TangentPoint) -> Complex64 {
        Complex64::new(sinc_kernel(x.coords[0], y.coords[0]), 0.0)
    }

    fn background(&self) -> Background {
        Background::Lebesgue {
            d: 1,
            density: 1.0 / (2.0 * PI),
        }
    }
}

/// Ginibre kernel values at a pair of points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GinibreValue {
    /// `e^(pi rho z conj(w))`, paired with the Gaussian weight.
    pub kernel: Complex64,
    /// `rho e^(-pi rho abs(z)^2)`
    pub weight_z: f64,
    /// `rho e^(-pi rho abs(w)^2)`
    pub weight_w: f64,
    /// `rho e^(pi rho (z conj(w) - (abs(z)^2 + abs(w)^2)/2))`, paired with `dz`.
    pub flat: Complex64,
}

pub fn ginibre_kernel(rho: f64, z: Complex64, w: Complex64) -> Result<GinibreValue> {
    if !(rho > 0.0) {
        return Err(parameter("ginibre_kernel", "rho must be > 0"));
    }
    let a = PI * rho;
    let zw = z * w.conj();
    let (nz, nw) = (z.norm_sqr(), w.norm_sqr());
    Ok(GinibreValue {
        kernel: (zw * a).exp(),
        weight_z: rho * (-a * nz).exp(),
        weight_w: rho * (-a * nw).exp(),
        flat: ((zw - 0.5 * (nz + nw)) * a).exp() * rho,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GinibreForm {
    Weighted,
    Flat,
}

#[derive(Debug, Clone, Copy)]
pub struct GinibreKernel {
    pub rho: f64,
    pub form: GinibreForm,
}

impl CorrelationKernel for GinibreKernel {
    type Point = Complex64;

    fn eval(&self, x: &Complex64, y: &Complex64) -> Complex64 {
        let a = PI * self.rho;
        match self.form {
            GinibreForm::Weighted => (x * y.conj() * a).exp(),
            GinibreForm::Flat => ((x * y.conj() - 0.5 * (x.norm_sqr() + y.norm_sqr())) * a).exp() * self.rho,
        }
    }

    fn background(&self) -> Background {
        match self.form {
            GinibreForm::Weighted => Background::GaussianWeight { rho: self.rho },
            GinibreForm::Flat => Background::Lebesgue { d: 2, density: 1.0 },
        }
    }
}

/// Gauge transform `u(x) K(x, y) u(y)^(-1)` by a non-vanishing phase.
pub struct Gauged<K, F> {
    inner: K,
    phase: F,
}

/// Wraps `kernel` in the gauge transformation by `phase`.
pub fn gauge_transform<K, F>(kernel: K, phase: F) -> Gauged<K, F>
where
    K: CorrelationKernel,
    F: Fn(&K::Point) -> Complex64,
{
    Gauged { inner: kernel, phase }
}

impl<K, F> CorrelationKernel for Gauged<K, F>
where
    K: CorrelationKernel,
    F: Fn(&K::Point) -> Complex64,
{
    type Point = K::Point;

    fn eval(&self, x: &K::Point, y: &K::Point) -> Complex64 {
        (self.phase)(x) * self.inner.eval(x, y) / (self.phase)(y)
    }

    fn background(&self) -> Background {
        self.inner.background()
    }
}

/// Kernel of the dilated process `S_c`: `c^(-d) K(y / c, y' / c)`.
#[derive(Debug, Clone)]
pub struct Rescaled<K> {
    inner: K,
    c: f64,
    d: usize,
}

/// Rescales a kernel on `R^d` whose background is Lebesgue measure.
pub fn rescale_kernel<K>(kernel: K, c: f64) -> Result<Rescaled<K>>
where
    K: CorrelationKernel<Point = TangentPoint>,
{
    if !(c > 0.0) || !c.is_finite() {
        return Err(parameter("rescale_kernel", format!("scale {c} must be > 0")));
    }
    match kernel.background() {
        Background::Lebesgue { d, .. } => Ok(Rescaled { inner: kernel, c, d }),
        other => Err(parameter(
            "rescale_kernel",
            format!("background {other:?} is not Lebesgue measure on R^d"),
        )),
    }
}

impl<K> Rescaled<K> {
    pub fn scale(&self) -> f64 {
        self.c
    }
}

impl<K> CorrelationKernel for Rescaled<K>
where
    K: CorrelationKernel<Point = TangentPoint>,
{
    type Point = TangentPoint;

    fn eval(&self, x: &TangentPoint, y: &TangentPoint) -> Complex64 {
        let inv = 1.0 / self.c;
        self.inner.eval(&x.scaled(inv), &y.scaled(inv)) * inv.powi(self.d as i32)
    }

    fn background(&self) -> Background {
        self.inner.background()
    }
}

/// Scaled harmonic kernel `K_n(u, v) / (n^d omega_d)` for `u . v = t`.
pub fn scaled_harmonic_kernel(d: usize, n: usize, t: f64) -> Result<f64> {
    let k = HarmonicKernel::new(d, n)?;
    Ok(k.at(t.clamp(-1.0, 1.0)) / ((n as f64).powi(d as i32) * sphere_total_measure(d)))
}
