use std::f64::consts::PI;
use std::fmt;
use std::time::Instant;

use sphdpp::geom::s2_from_polar;
use sphdpp::kernels::{
    ginibre_kernel, limit_bessel_kernel, sinc_kernel, CueKernel, HarmonicKernel, SphericalEnsembleKernel,
};
use sphdpp::limits::{
    bin_edges, cap_measure, count_statistics, cue_sinc_table, doubling_grid, ginibre_limit_table, kernel_limit_table,
    mehler_heine_table, pair_correlation_estimate,
};
use sphdpp::sampler::{restrict_and_pullback, sample_replicas, scale_config};
use sphdpp::{Complex64, ConvergenceTable, EstimatorReport, KernelSpec, Space, SpherePoint};

use crate::cli::{Command, ConvergeArgs, Family, FamilyArgs, KernelArgs, SampleArgs, Statistic, StatsArgs, Which};
use crate::output::{num, OutDir, RunManifest};

pub const SAMPLE_SCHEMA: &str = "sphdpp.sample.v1";
pub const KERNEL_SCHEMA: &str = "sphdpp.kernel.v1";
pub const CONVERGE_SCHEMA: &str = "sphdpp.converge.v1";
pub const STATS_SCHEMA: &str = "sphdpp.stats.v1";

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Tolerance(String),
    Numerical(String),
    Io(anyhow::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 1,
            CliError::Tolerance(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Tolerance(m) => write!(f, "tolerance failure: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
            CliError::Io(e) => write!(f, "{e:#}"),
        }
    }
}

impl From<sphdpp::Error> for CliError {
    fn from(e: sphdpp::Error) -> Self {
        use sphdpp::Error as E;
        match e {
            E::Numerical(_) | E::RejectionLimit(_) | E::Quadrature(_) => CliError::Numerical(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        CliError::Io(e)
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

type CliResult<T> = Result<T, CliError>;

type Evaluator = Box<dyn Fn(f64) -> CliResult<Complex64> + Sync>;

/// Result of a command that wrote its outputs: the seed used and a
/// tolerance failure to report after the manifest is written.
struct Done {
    seed: Option<u64>,
    failure: Option<String>,
}

/// Runs a command, writes its manifest and reports completion on stdout.
pub fn dispatch(command: &Command) -> CliResult<()> {
    if let Command::Replay(r) = command {
        let manifest = RunManifest::read(&r.manifest)?;
        let mut params = manifest.params;
        if let Some(out) = &r.out {
            set_out_dir(&mut params, out.clone())?;
        }
        if matches!(params, Command::Replay(_)) {
            return Err(usage("manifest records a replay"));
        }
        return dispatch(&params);
    }
    let start = Instant::now();
    let mut out = OutDir::create(out_dir(command))?;
    let done = match command {
        Command::Sample(a) => sample(a, &mut out)?,
        Command::Kernel(a) => kernel(a, &mut out)?,
        Command::Converge(a) => converge(a, &mut out)?,
        Command::Stats(a) => stats(a, &mut out)?,
        Command::Replay(_) => unreachable!(),
    };
    let files = out.written.len();
    let root = out.root.clone();
    out.finish(command, done.seed, start.elapsed().as_secs_f64())?;
    println!("wrote {files} file(s) and manifest.json to {}", root.display());
    match done.failure {
        Some(m) => Err(CliError::Tolerance(m)),
        None => Ok(()),
    }
}

fn out_dir(c: &Command) -> &std::path::Path {
    match c {
        Command::Sample(a) => &a.out.out,
        Command::Kernel(a) => &a.out.out,
        Command::Converge(a) => &a.out.out,
        Command::Stats(a) => &a.out.out,
        Command::Replay(_) => unreachable!(),
    }
}

fn set_out_dir(c: &mut Command, dir: std::path::PathBuf) -> CliResult<()> {
    match c {
        Command::Sample(a) => a.out.out = dir,
        Command::Kernel(a) => a.out.out = dir,
        Command::Converge(a) => a.out.out = dir,
        Command::Stats(a) => a.out.out = dir,
        Command::Replay(_) => return Err(usage("manifest records a replay")),
    }
    Ok(())
}

fn need(v: Option<usize>, flag: &str, family: Family) -> CliResult<usize> {
    v.ok_or_else(|| usage(format!("--family {family:?} needs {flag}").to_lowercase()))
}

fn describe(f: &FamilyArgs) -> String {
    let mut s = format!("{:?}", f.family).to_lowercase();
    for (k, v) in [("d", f.d), ("n", f.n), ("N", f.points)] {
        if let Some(v) = v {
            s.push_str(&format!(" {k}={v}"));
        }
    }
    if let Some(rho) = f.rho {
        s.push_str(&format!(" rho={rho}"));
    }
    s
}

/// Spec of a finite (samplable) family.
fn finite_spec(f: &FamilyArgs) -> CliResult<KernelSpec> {
    let spec = match f.family {
        Family::Harmonic => KernelSpec::harmonic(need(f.d, "-d", f.family)?, need(f.n, "-n", f.family)?)?,
        Family::Spherical => KernelSpec::spherical(need(f.points, "-N", f.family)?)?,
        Family::Cue => KernelSpec::cue(need(f.n, "-n", f.family)?)?,
        other => {
            return Err(usage(
                format!("{other:?} is a limit kernel on flat space and cannot be sampled").to_lowercase(),
            ))
        }
    };
    Ok(spec)
}

fn is_sphere_family(f: Family) -> bool {
    matches!(f, Family::Harmonic | Family::Spherical | Family::Cue)
}

fn coordinate_columns(space: Space) -> Vec<String> {
    match space {
        Space::Sphere(d) => (0..=d).map(|i| format!("x{i}")).collect(),
        Space::Tangent(d) => (0..d).map(|i| format!("t{i}")).collect(),
        Space::Line => vec!["x".into()],
        Space::ComplexPlane => vec!["re".into(), "im".into()],
    }
}

fn space_name(space: Space) -> String {
    match space {
        Space::Sphere(d) => format!("sphere S^{d}"),
        Space::Tangent(d) => format!("tangent R^{d} at north pole"),
        Space::Line => "line".into(),
        Space::ComplexPlane => "complex plane".into(),
    }
}

fn sample(a: &SampleArgs, out: &mut OutDir) -> CliResult<Done> {
    if a.eps.is_some() && !is_sphere_family(a.family.family) {
        return Err(usage("--eps needs a sphere family (harmonic, spherical, cue)"));
    }
    if a.scale.is_some() && a.eps.is_none() {
        return Err(usage("--scale applies to pulled-back points and needs --eps"));
    }
    if a.replicas == 0 {
        return Err(usage("--replicas must be >= 1"));
    }
    let spec = finite_spec(&a.family)?;
    let configs = sample_replicas(&spec, a.seed, a.replicas)?;
    let width = a.replicas.saturating_sub(1).to_string().len().max(4);
    for config in configs {
        let mut c = config;
        if let Some(eps) = a.eps {
            c = restrict_and_pullback(&c, eps)?;
        }
        if let Some(s) = a.scale {
            c = scale_config(&c, s)?;
        }
        let mut header = vec!["index".to_string()];
        header.extend(coordinate_columns(c.space));
        let rows: Vec<Vec<String>> = c
            .points
            .iter()
            .enumerate()
            .map(|(i, p)| {
                std::iter::once(i.to_string())
                    .chain(p.iter().map(|&x| num(x)))
                    .collect()
            })
            .collect();
        let mut meta = vec![
            ("family", describe(&a.family)),
            ("space", space_name(c.space)),
            ("scale", num(c.scale)),
            ("seed", c.seed.to_string()),
            ("replica", c.replica.to_string()),
            ("points", c.len().to_string()),
        ];
        if let Some(eps) = a.eps {
            meta.push(("eps", num(eps)));
        }
        let header: Vec<&str> = header.iter().map(String::as_str).collect();
        out.csv(
            &format!("sample_{:0width$}.csv", c.replica),
            SAMPLE_SCHEMA,
            &meta,
            &header,
            &rows,
        )?;
    }
    println!(
        "sampled {} replica(s) of {} points",
        a.replicas,
        spec.rank().unwrap_or(0)
    );
    Ok(Done {
        seed: Some(a.seed),
        failure: None,
    })
}

fn grid(from: f64, to: f64, steps: usize) -> CliResult<Vec<f64>> {
    if !from.is_finite() || !to.is_finite() {
        return Err(usage("grid bounds must be finite"));
    }
    match steps {
        0 => Err(usage("--steps must be >= 1")),
        1 => Ok(vec![from]),
        _ if to <= from => Err(usage("--to must exceed --from when --steps > 1")),
        _ => Ok((0..steps)
            .map(|i| {
                if i + 1 == steps {
                    to
                } else {
                    from + (to - from) * i as f64 / (steps - 1) as f64
                }
            })
            .collect()),
    }
}

fn kernel(a: &KernelArgs, out: &mut OutDir) -> CliResult<Done> {
    let xs = grid(a.from, a.to, a.steps)?;
    let f = &a.family;
    let (input, eval): (&str, Evaluator) = match f.family {
        Family::Harmonic => {
            let k = HarmonicKernel::new(need(f.d, "-d", f.family)?, need(f.n, "-n", f.family)?)?;
            ("angle", Box::new(move |t: f64| Ok(Complex64::new(k.at(t.cos()), 0.0))))
        }
        Family::Spherical => {
            let k = SphericalEnsembleKernel::new(need(f.points, "-N", f.family)?)?;
            let pole = SpherePoint::north_pole(2);
            if a.from < 0.0 || a.to > PI {
                return Err(usage("spherical family takes colatitudes in [0, pi]"));
            }
            (
                "angle",
                Box::new(move |t: f64| Ok(k.eval_probability(&pole, &s2_from_polar(t, 0.0)?))),
            )
        }
        Family::Cue => {
            let k = CueKernel::with_points(need(f.n, "-n", f.family)?);
            ("angle", Box::new(move |t: f64| Ok(k.at_angles(t, 0.0))))
        }
        Family::Limit => {
            let d = need(f.d, "-d", f.family)?;
            limit_bessel_kernel(d, 1.0)?;
            if a.from < 0.0 {
                return Err(usage("limit family takes distances r >= 0"));
            }
            (
                "r",
                Box::new(move |r: f64| Ok(Complex64::new(limit_bessel_kernel(d, r)?, 0.0))),
            )
        }
        Family::Sinc => ("r", Box::new(|r: f64| Ok(Complex64::new(sinc_kernel(r, 0.0), 0.0)))),
        Family::Ginibre => {
            let rho = f.rho.unwrap_or(1.0 / (4.0 * PI));
            ginibre_kernel(rho, Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0))?;
            if a.from < 0.0 {
                return Err(usage("ginibre family takes distances r >= 0"));
            }
            (
                "r",
                Box::new(move |r: f64| Ok(ginibre_kernel(rho, Complex64::new(r, 0.0), Complex64::new(0.0, 0.0))?.flat)),
            )
        }
    };
    use rayon::prelude::*;
    let values: Vec<Complex64> = xs.par_iter().map(|&x| eval(x)).collect::<CliResult<_>>()?;
    let rows: Vec<Vec<String>> = xs
        .iter()
        .zip(&values)
        .map(|(&x, v)| vec![num(x), num(v.re), num(v.im)])
        .collect();
    let reference = match f.family {
        Family::Harmonic | Family::Cue => {
            "point at the given angle from the north pole, kernel relative to normalized surface measure"
        }
        Family::Spherical => "north pole and colatitude t, kernel relative to normalized surface measure",
        Family::Limit => "k(r) = J_(d/2)(r) / (2 pi r)^(d/2), Lebesgue measure",
        Family::Sinc => "K(r, 0), Lebesgue measure with density 1/(2 pi)",
        Family::Ginibre => "flat form at (r, 0), Lebesgue measure",
    };
    let meta = [("family", describe(f)), ("evaluation", reference.to_string())];
    out.csv("kernel.csv", KERNEL_SCHEMA, &meta, &[input, "re", "im"], &rows)?;
    println!("tabulated {} values", rows.len());
    Ok(Done {
        seed: None,
        failure: None,
    })
}

fn converge(a: &ConvergeArgs, out: &mut OutDir) -> CliResult<Done> {
    let (start, stop) = match a.which {
        Which::MehlerHeine => (10, 640),
        Which::BesselLimit => (25, 400),
        Which::Ginibre => (64, 4096),
        Which::CueSinc => (8, 1024),
    };
    let g = doubling_grid(a.start.unwrap_or(start), a.stop.unwrap_or(stop));
    if g.is_empty() {
        return Err(usage("empty grid: --start exceeds --stop"));
    }
    if !(a.tol > 0.0) {
        return Err(usage("--tol must be > 0"));
    }
    let table: ConvergenceTable = match a.which {
        Which::MehlerHeine => mehler_heine_table(a.alpha, a.beta, a.z, &g)?,
        Which::BesselLimit => kernel_limit_table(a.d, a.r, &g)?,
        Which::Ginibre => ginibre_limit_table(Complex64::new(a.z, a.z_im), Complex64::new(a.w, a.w_im), &g)?,
        Which::CueSinc => cue_sinc_table(a.z, a.w, &g)?,
    };
    let rows: Vec<Vec<String>> = table
        .rows
        .iter()
        .map(|r| {
            vec![
                r.n.to_string(),
                num(r.value.re),
                num(r.value.im),
                num(r.limit.re),
                num(r.limit.im),
                num(r.error),
                r.improved.to_string(),
            ]
        })
        .collect();
    let final_error = table.final_error();
    let meta = [
        ("table", table.label.clone()),
        ("tol", num(a.tol)),
        ("final_error", num(final_error)),
    ];
    out.csv(
        "converge.csv",
        CONVERGE_SCHEMA,
        &meta,
        &["n", "value_re", "value_im", "limit_re", "limit_im", "error", "improved"],
        &rows,
    )?;
    println!("{}: final error {final_error:e} at n = {}", table.label, g[g.len() - 1]);
    let failure = (!table.final_below(a.tol)).then(|| format!("final error {final_error:e} not below {:e}", a.tol));
    Ok(Done { seed: None, failure })
}

/// Radius of the cap of probability `p` on `S^d`, by bisection.
fn cap_radius_for(d: usize, p: f64) -> f64 {
    let (mut lo, mut hi) = (0.0, PI);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if cap_measure(d, mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn stats(a: &StatsArgs, out: &mut OutDir) -> CliResult<Done> {
    if a.replicas < 2 {
        return Err(usage(format!(
            "--replicas {} leaves the standard error undefined; need >= 2",
            a.replicas
        )));
    }
    let spec = finite_spec(&a.family)?;
    let report: EstimatorReport = match a.statistic {
        Statistic::Paircorr => {
            if a.cap_radius.is_some() {
                return Err(usage("--cap-radius applies to --statistic counts"));
            }
            if a.bins == 0 {
                return Err(usage("--bins must be >= 1"));
            }
            pair_correlation_estimate(&spec, a.replicas, &bin_edges(0.0, PI, a.bins), a.seed)?
        }
        Statistic::Counts => {
            let d = spec.sphere_dim().unwrap_or(2);
            let radius = a.cap_radius.unwrap_or_else(|| cap_radius_for(d, 0.25));
            count_statistics(&spec, radius, a.replicas, a.seed)?
        }
    };
    let z = report.z_scores();
    let bins = report.estimate.len();
    let rows: Vec<Vec<String>> = (0..bins)
        .map(|i| {
            let (lo, hi) = match a.statistic {
                Statistic::Paircorr => (report.bin_edges[i], report.bin_edges[i + 1]),
                Statistic::Counts => (report.bin_edges[0], report.bin_edges[1]),
            };
            vec![
                report.labels[i].clone(),
                num(report.bin_centers[i]),
                num(lo),
                num(hi),
                num(report.estimate[i]),
                num(report.standard_error[i]),
                num(report.prediction[i]),
                num(report.prediction_alt[i]),
                num(z[i]),
            ]
        })
        .collect();
    let alt = match a.statistic {
        Statistic::Paircorr => "prediction: bin average of rho_2; prediction_alt: rho_2 at bin center",
        Statistic::Counts => "rows: count mean and variance in the cap; prediction_alt repeats prediction",
    };
    let meta = [
        ("family", describe(&a.family)),
        ("statistic", report.statistic.clone()),
        ("replicas", a.replicas.to_string()),
        ("seed", a.seed.to_string()),
        ("columns", alt.to_string()),
    ];
    out.csv(
        "stats.csv",
        STATS_SCHEMA,
        &meta,
        &[
            "label",
            "center",
            "lo",
            "hi",
            "estimate",
            "standard_error",
            "prediction",
            "prediction_alt",
            "z",
        ],
        &rows,
    )?;
    out.json("stats.json", &report)?;
    let worst = z.iter().fold(0.0f64, |m, z| m.max(z.abs()));
    println!(
        "{} over {} replicas: max |z| = {worst:.3}",
        report.statistic, a.replicas
    );
    let failure = a
        .check
        .filter(|&k| !report.all_within(k))
        .map(|k| format!("max |z| = {worst:.3} exceeds {k}"));
    Ok(Done {
        seed: Some(a.seed),
        failure,
    })
}
