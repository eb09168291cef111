//! Exact sampling of projection DPPs on `S^d` from kernel evaluations only.
//!
//! The chain rule draws point `j + 1` from `K_j(u, u) / (N - j)` relative to
//! `mu_d`, where `K_j` is the kernel conditioned on the first `j` points.
//! Proposals come from `mu_d` and are accepted when `K_j(u, u) > U N`.
//!
//! Conditioning is kept in Cholesky form: with
//! `phi_i(v) = K_(i-1)(x_i, v) / sqrt(K_(i-1)(x_i, x_i))`,
//!
//! ```text
//! K_j(u, v) = K(u, v) - sum_(i <= j) conj(phi_i(u)) phi_i(v).
//! ```
//!
//! Since the partial sums only decrease, a proposal is rejected as soon as
//! the running diagonal drops below the threshold.

use std::fmt::Debug;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{parameter, Error, Result};
use crate::geom::{geodesic_angle, inverse_stereographic, log_map, uniform_sample, SpherePoint};
use crate::kernels::{CueKernel, HarmonicKernel, KernelFamily, KernelSpec, SphericalEnsembleKernel};

/// Pivots below this value trigger a compensated recomputation.
pub const PIVOT_FLOOR: f64 = 1e-10;
/// Proposals allowed per point, times the rank.
pub const MAX_PROPOSALS_PER_RANK: usize = 10_000;
/// Relative slack before a conditional diagonal counts as exceeding `N`.
pub const ENVELOPE_SLACK: f64 = 1e-8;

/// Real or complex kernel values.
pub trait KernelScalar:
    Copy
    + Send
    + Sync
    + Debug
    + Default
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Mul<f64, Output = Self>
{
    fn conj(self) -> Self;
    fn norm_sqr(self) -> f64;
    fn to_complex(self) -> Complex64;
    /// Drops the imaginary part for real scalars.
    fn from_complex(z: Complex64) -> Self;
}

impl KernelScalar for f64 {
    #[inline]
    fn conj(self) -> Self {
        self
    }
    #[inline]
    fn norm_sqr(self) -> f64 {
        self * self
    }
    #[inline]
    fn to_complex(self) -> Complex64 {
        Complex64::new(self, 0.0)
    }
    #[inline]
    fn from_complex(z: Complex64) -> Self {
        z.re
    }
}

impl KernelScalar for Complex64 {
    #[inline]
    fn conj(self) -> Self {
        Complex64::conj(&self)
    }
    #[inline]
    fn norm_sqr(self) -> f64 {
        Complex64::norm_sqr(&self)
    }
    #[inline]
    fn to_complex(self) -> Complex64 {
        self
    }
    #[inline]
    fn from_complex(z: Complex64) -> Self {
        z
    }
}

/// A rank-`N` projection kernel on `S^d`, evaluated relative to `mu_d`,
/// with constant diagonal `N`.
pub trait ProjectionKernel: Sync {
    type Scalar: KernelScalar;

    fn sphere_dim(&self) -> usize;

    fn rank(&self) -> usize;

    fn eval_mu(&self, u: &SpherePoint, v: &SpherePoint) -> Self::Scalar;
}

impl ProjectionKernel for HarmonicKernel {
    type Scalar = f64;

    fn sphere_dim(&self) -> usize {
        self.dim()
    }

    fn rank(&self) -> usize {
        HarmonicKernel::rank(self)
    }

    #[inline]
    fn eval_mu(&self, u: &SpherePoint, v: &SpherePoint) -> f64 {
        self.eval_real(u, v)
    }
}

impl ProjectionKernel for SphericalEnsembleKernel {
    type Scalar = Complex64;

    fn sphere_dim(&self) -> usize {
        2
    }

    fn rank(&self) -> usize {
        self.points()
    }

    #[inline]
    fn eval_mu(&self, u: &SpherePoint, v: &SpherePoint) -> Complex64 {
        self.eval_probability(u, v)
    }
}

impl ProjectionKernel for CueKernel {
    type Scalar = Complex64;

    fn sphere_dim(&self) -> usize {
        1
    }

    fn rank(&self) -> usize {
        self.modes()
    }

    #[inline]
    fn eval_mu(&self, u: &SpherePoint, v: &SpherePoint) -> Complex64 {
        self.at_angles(u.azimuth(), v.azimuth())
    }
}

/// Neumaier-compensated complex accumulator.
#[derive(Default, Clone, Copy)]
struct Compensated {
    re: (f64, f64),
    im: (f64, f64),
}

impl Compensated {
    fn add(&mut self, z: Complex64) {
        fn step(acc: &mut (f64, f64), x: f64) {
            let t = acc.0 + x;
            if acc.0.abs() >= x.abs() {
                acc.1 += (acc.0 - t) + x;
            } else {
                acc.1 += (x - t) + acc.0;
            }
            acc.0 = t;
        }
        step(&mut self.re, z.re);
        step(&mut self.im, z.im);
    }

    fn value(&self) -> Complex64 {
        Complex64::new(self.re.0 + self.re.1, self.im.0 + self.im.1)
    }
}

/// Kernel conditioned on a growing list of points (Schur complement).
pub struct ConditionalKernel<'k, K: ProjectionKernel> {
    kernel: &'k K,
    points: Vec<SpherePoint>,
    /// `rows[m][i] = conj(phi_i(x_m))` for `i < m`.
    rows: Vec<Vec<K::Scalar>>,
    sqrt_pivots: Vec<f64>,
}

impl<'k, K: ProjectionKernel> ConditionalKernel<'k, K> {
    pub fn new(kernel: &'k K) -> Self {
        Self {
            kernel,
            points: Vec::new(),
            rows: Vec::new(),
            sqrt_pivots: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[SpherePoint] {
        &self.points
    }

    pub fn into_points(self) -> Vec<SpherePoint> {
        self.points
    }

    /// Fills `out` with `phi_i(u)` and returns `K_j(u, u)`. With a
    /// threshold, stops early (returning `None`) once the running diagonal
    /// falls to or below it.
    fn features(&self, u: &SpherePoint, threshold: Option<f64>, out: &mut Vec<K::Scalar>) -> Option<f64> {
        out.clear();
        let mut diag = self.kernel.eval_mu(u, u).to_complex().re;
        for (m, (x, row)) in self.points.iter().zip(&self.rows).enumerate() {
            let mut acc = self.kernel.eval_mu(x, u);
            for (c, phi) in row.iter().zip(out.iter()) {
                acc = acc - *c * *phi;
            }
            let phi = acc * (1.0 / self.sqrt_pivots[m]);
            diag -= phi.norm_sqr();
            out.push(phi);
            if let Some(t) = threshold {
                if diag <= t {
                    return None;
                }
            }
        }
        Some(diag)
    }

    fn features_compensated(&self, u: &SpherePoint, out: &mut Vec<K::Scalar>) -> f64 {
        out.clear();
        let mut diag = Compensated::default();
        diag.add(self.kernel.eval_mu(u, u).to_complex());
        for (m, (x, row)) in self.points.iter().zip(&self.rows).enumerate() {
            let mut acc = Compensated::default();
            acc.add(self.kernel.eval_mu(x, u).to_complex());
            for (c, phi) in row.iter().zip(out.iter()) {
                acc.add(-(*c * *phi).to_complex());
            }
            let phi = K::Scalar::from_complex(acc.value()) * (1.0 / self.sqrt_pivots[m]);
            diag.add(Complex64::new(-phi.norm_sqr(), 0.0));
            out.push(phi);
        }
        diag.value().re
    }

    /// `K_j(u, v)`.
    pub fn eval(&self, u: &SpherePoint, v: &SpherePoint) -> K::Scalar {
        let mut fu = Vec::with_capacity(self.len());
        let mut fv = Vec::with_capacity(self.len());
        self.features(u, None, &mut fu);
        self.features(v, None, &mut fv);
        let mut k = self.kernel.eval_mu(u, v);
        for (a, b) in fu.iter().zip(&fv) {
            k = k - a.conj() * *b;
        }
        k
    }

    /// `K_j(u, u)`.
    pub fn diag(&self, u: &SpherePoint) -> f64 {
        let mut f = Vec::with_capacity(self.len());
        self.features(u, None, &mut f).unwrap_or(0.0)
    }

    /// Conditions on `x`, returning its pivot `K_j(x, x)`.
    pub fn push(&mut self, x: SpherePoint) -> Result<f64> {
        let mut f = Vec::with_capacity(self.len());
        let diag = self.features(&x, None, &mut f).unwrap_or(0.0);
        self.push_with(x, f, diag)
    }

    fn push_with(&mut self, x: SpherePoint, mut phis: Vec<K::Scalar>, diag: f64) -> Result<f64> {
        let mut pivot = diag;
        if pivot < PIVOT_FLOOR {
            pivot = self.features_compensated(&x, &mut phis);
            if pivot < PIVOT_FLOOR {
                return Err(Error::Numerical(format!(
                    "conditional pivot {pivot:e} below floor {PIVOT_FLOOR:e} at point {}",
                    self.len() + 1
                )));
            }
        }
        self.rows.push(phis.into_iter().map(KernelScalar::conj).collect());
        self.sqrt_pivots.push(pivot.sqrt());
        self.points.push(x);
        Ok(pivot)
    }
}

/// Draws all `N` points of the projection DPP by the chain rule.
pub fn sample_chain<K: ProjectionKernel, R: Rng + ?Sized>(kernel: &K, rng: &mut R) -> Result<Vec<SpherePoint>> {
    let n = kernel.rank();
    let d = kernel.sphere_dim();
    let nf = n as f64;
    let max_proposals = MAX_PROPOSALS_PER_RANK * n.max(1);
    let mut cond = ConditionalKernel::new(kernel);
    let mut scratch = Vec::with_capacity(n);
    for _ in 0..n {
        let mut accepted = false;
        for _ in 0..max_proposals {
            let u = uniform_sample(d, rng);
            let threshold = rng.random::<f64>() * nf;
            if let Some(diag) = cond.features(&u, Some(threshold), &mut scratch) {
                if diag > nf * (1.0 + ENVELOPE_SLACK) {
                    return Err(Error::Numerical(format!(
                        "conditional diagonal {diag} exceeds envelope N = {n} at point {}",
                        cond.len() + 1
                    )));
                }
                let phis = std::mem::replace(&mut scratch, Vec::with_capacity(n));
                cond.push_with(u, phis, diag)?;
                accepted = true;
                break;
            }
        }
        if !accepted {
            return Err(Error::RejectionLimit(max_proposals));
        }
    }
    Ok(cond.into_points())
}

/// The samplable families behind a [`KernelSpec`].
#[derive(Debug, Clone)]
pub enum SamplerKernel {
    Harmonic(HarmonicKernel),
    Spherical(SphericalEnsembleKernel),
    Cue(CueKernel),
}

impl SamplerKernel {
    pub fn from_spec(spec: &KernelSpec) -> Result<Self> {
        match spec.family {
            KernelFamily::HarmonicEnsemble { d, n } => Ok(Self::Harmonic(HarmonicKernel::new(d, n)?)),
            KernelFamily::SphericalEnsemble { points } => Ok(Self::Spherical(SphericalEnsembleKernel::new(points)?)),
            KernelFamily::Cue { n } => Ok(Self::Cue(CueKernel::with_points(n))),
            other => Err(parameter(
                "SamplerKernel",
                format!("{other:?} is not a finite projection family"),
            )),
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            Self::Harmonic(k) => k.rank(),
            Self::Spherical(k) => k.points(),
            Self::Cue(k) => k.modes(),
        }
    }

    pub fn sphere_dim(&self) -> usize {
        match self {
            Self::Harmonic(k) => k.dim(),
            Self::Spherical(_) => 2,
            Self::Cue(_) => 1,
        }
    }

    /// Kernel relative to `mu_d`.
    pub fn eval_mu(&self, u: &SpherePoint, v: &SpherePoint) -> Complex64 {
        match self {
            Self::Harmonic(k) => Complex64::new(k.eval_real(u, v), 0.0),
            Self::Spherical(k) => k.eval_probability(u, v),
            Self::Cue(k) => k.at_angles(u.azimuth(), v.azimuth()),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Vec<SpherePoint>> {
        match self {
            Self::Harmonic(k) => sample_chain(k, rng),
            Self::Spherical(k) => sample_chain(k, rng),
            Self::Cue(k) => sample_chain(k, rng),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Space {
    Sphere(usize),
    Tangent(usize),
    Line,
    ComplexPlane,
}

impl Space {
    /// Number of stored coordinates per point.
    pub fn coords(&self) -> usize {
        match *self {
            Space::Sphere(d) => d + 1,
            Space::Tangent(d) => d,
            Space::Line => 1,
            Space::ComplexPlane => 2,
        }
    }
}

/// A finite point configuration. Sphere points are stored as unit
/// embeddings, complex-plane points as `(re, im)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Configuration {
    pub space: Space,
    pub points: Vec<Vec<f64>>,
    pub seed: u64,
    pub replica: u64,
    /// Cumulative dilation applied by [`scale_config`].
    pub scale: f64,
}

impl Configuration {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn sphere_points(&self) -> Result<Vec<SpherePoint>> {
        match self.space {
            Space::Sphere(_) => self.points.iter().map(|p| SpherePoint::from_embedding(p)).collect(),
            other => Err(parameter("Configuration::sphere_points", format!("space is {other:?}"))),
        }
    }

    /// Checks coordinate counts, finiteness and unit norms.
    pub fn validate(&self) -> Result<()> {
        let k = self.space.coords();
        for p in &self.points {
            if p.len() != k {
                return Err(Error::DimensionMismatch {
                    left: p.len(),
                    right: k,
                });
            }
            if p.iter().any(|x| !x.is_finite()) {
                return Err(Error::Numerical("non-finite coordinate".into()));
            }
            if let Space::Sphere(_) = self.space {
                let norm2: f64 = p.iter().map(|x| x * x).sum();
                if (norm2 - 1.0).abs() > 1e-12 {
                    return Err(Error::Numerical(format!("sphere point with |u|^2 = {norm2}")));
                }
            }
        }
        Ok(())
    }
}

/// Random source for replica `replica` of a run seeded with `seed`: one
/// ChaCha8 key per seed, one stream per replica.
pub fn replica_rng(seed: u64, replica: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replica);
    rng
}

/// One exact sample of a projection family.
pub fn sample_projection_dpp(spec: &KernelSpec, seed: u64, replica: u64) -> Result<Configuration> {
    let kernel = SamplerKernel::from_spec(spec)?;
    let mut rng = replica_rng(seed, replica);
    let pts = kernel.sample(&mut rng)?;
    Ok(Configuration {
        space: Space::Sphere(kernel.sphere_dim()),
        points: pts.into_iter().map(|p| p.embedding().to_vec()).collect(),
        seed,
        replica,
        scale: 1.0,
    })
}

/// Replicas `0..count` in index order; they run on the current rayon pool.
pub fn sample_replicas(spec: &KernelSpec, seed: u64, count: usize) -> Result<Vec<Configuration>> {
    SamplerKernel::from_spec(spec)?;
    (0..count as u64)
        .into_par_iter()
        .map(|r| sample_projection_dpp(spec, seed, r))
        .collect()
}

/// Keeps the points in the open geodesic ball of radius `eps` around the
/// north pole and maps them to the tangent space there by `log_map`.
pub fn restrict_and_pullback(config: &Configuration, eps: f64) -> Result<Configuration> {
    let d = match config.space {
        Space::Sphere(d) => d,
        other => {
            return Err(parameter(
                "restrict_and_pullback",
                format!("space is {other:?}, not a sphere"),
            ))
        }
    };
    if !(eps > 0.0 && eps <= std::f64::consts::PI) {
        return Err(parameter(
            "restrict_and_pullback",
            format!("radius {eps} outside (0, pi]"),
        ));
    }
    let pole = SpherePoint::north_pole(d);
    let mut points = Vec::new();
    for p in config.sphere_points()? {
        if geodesic_angle(&pole, &p)? < eps {
            points.push(log_map(&p)?.coords);
        }
    }
    Ok(Configuration {
        space: Space::Tangent(d),
        points,
        seed: config.seed,
        replica: config.replica,
        scale: 1.0,
    })
}

/// The dilation `S_c`: every coordinate times `c`.
pub fn scale_config(config: &Configuration, c: f64) -> Result<Configuration> {
    if !(c > 0.0) || !c.is_finite() {
        return Err(parameter("scale_config", format!("scale {c} must be > 0")));
    }
    if let Space::Sphere(_) = config.space {
        return Err(parameter("scale_config", "sphere configurations cannot be dilated"));
    }
    Ok(Configuration {
        points: config
            .points
            .iter()
            .map(|p| p.iter().map(|x| x * c).collect())
            .collect(),
        scale: config.scale * c,
        ..config.clone()
    })
}

/// Maps an `S^2` configuration to the complex plane by
/// `z = tan(theta/2) e^(i phi)`.
pub fn to_complex_plane(config: &Configuration) -> Result<Configuration> {
    if config.space != Space::Sphere(2) {
        return Err(parameter(
            "to_complex_plane",
            format!("space is {:?}, not S^2", config.space),
        ));
    }
    let points = config
        .sphere_points()?
        .iter()
        .map(|p| inverse_stereographic(p).map(|z| vec![z.re, z.im]))
        .collect::<Result<_>>()?;
    Ok(Configuration {
        space: Space::ComplexPlane,
        points,
        ..config.clone()
    })
}
