use std::f64::consts::PI;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

/// Seed used when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 20240611;

#[derive(Debug, Parser)]
#[command(
    name = "sphdpp",
    version,
    about = "Determinantal point processes on spheres: sampling, kernels, limits"
)]
pub struct Cli {
    /// Worker threads for replicas and rows (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Draw exact samples and write one CSV per replica.
    Sample(SampleArgs),
    /// Tabulate a kernel along a one-dimensional grid.
    Kernel(KernelArgs),
    /// Convergence table of a scaling limit; exit 2 when the final error misses --tol.
    Converge(ConvergeArgs),
    /// Monte Carlo statistics against determinantal predictions.
    Stats(StatsArgs),
    /// Re-run the command recorded in a manifest.
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Harmonic,
    Spherical,
    Cue,
    Limit,
    Sinc,
    Ginibre,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct FamilyArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    /// Sphere (or limit) dimension.
    #[arg(short = 'd', long = "dim")]
    pub d: Option<usize>,
    /// Degree for harmonic and cue families.
    #[arg(short = 'n', long = "degree")]
    pub n: Option<usize>,
    /// Number of points for the spherical ensemble.
    #[arg(short = 'N', long = "points")]
    pub points: Option<usize>,
    /// Ginibre density (default 1/(4 pi)).
    #[arg(long)]
    pub rho: Option<f64>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct OutArgs {
    /// Output directory.
    #[arg(long, env = "SPHDPP_OUT", default_value = "sphdpp-out")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct SampleArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[arg(long, default_value_t = 1)]
    pub replicas: usize,
    /// Keep points within this geodesic radius of the north pole and pull them back to the tangent space.
    #[arg(long, value_parser = parse_angle)]
    pub eps: Option<f64>,
    /// Dilate pulled-back points by this factor (needs --eps).
    #[arg(long)]
    pub scale: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct KernelArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// First grid value: geodesic angle for sphere families, distance for limit families.
    #[arg(long, default_value = "0", value_parser = parse_angle)]
    pub from: f64,
    #[arg(long, default_value = "pi", value_parser = parse_angle)]
    pub to: f64,
    #[arg(long, default_value_t = 101)]
    pub steps: usize,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Which {
    MehlerHeine,
    BesselLimit,
    Ginibre,
    CueSinc,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct ConvergeArgs {
    #[arg(long, value_enum)]
    pub which: Which,
    /// Mehler-Heine Jacobi parameters.
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.0)]
    pub beta: f64,
    /// Dimension for bessel-limit.
    #[arg(short = 'd', long = "dim", default_value_t = 2)]
    pub d: usize,
    /// Distance for bessel-limit.
    #[arg(long, default_value_t = 1.0)]
    pub r: f64,
    /// Real part of z (mehler-heine uses z alone; cue-sinc reads it as x).
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub z: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub z_im: f64,
    /// Real part of w (cue-sinc reads it as y).
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub w: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub w_im: f64,
    /// First grid value; the grid doubles up to --stop.
    #[arg(long)]
    pub start: Option<u64>,
    #[arg(long)]
    pub stop: Option<u64>,
    #[arg(long, default_value_t = 1e-2)]
    pub tol: f64,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Statistic {
    Paircorr,
    Counts,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct StatsArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[arg(long, value_enum)]
    pub statistic: Statistic,
    #[arg(long, default_value_t = 10_000)]
    pub replicas: usize,
    /// Pair-correlation bins on [0, pi].
    #[arg(long, default_value_t = 12)]
    pub bins: usize,
    /// Cap radius for counts (default: the cap of probability 1/4).
    #[arg(long, value_parser = parse_angle)]
    pub cap_radius: Option<f64>,
    /// Exit 2 if any |z-score| exceeds this.
    #[arg(long)]
    pub check: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct ReplayArgs {
    /// Manifest written by an earlier run.
    pub manifest: PathBuf,
    /// Output directory (default: the one recorded in the manifest).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// A float, or `pi`, `pi/k`, `a*pi`, `a*pi/k`.
pub fn parse_angle(s: &str) -> Result<f64, String> {
    let t = s.trim();
    if let Ok(x) = t.parse::<f64>() {
        return Ok(x);
    }
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a, Some(b)),
        None => (t, None),
    };
    let coeff = match num.strip_suffix("pi") {
        Some("") => 1.0,
        Some("-") => -1.0,
        Some(c) => c
            .trim_end_matches('*')
            .parse::<f64>()
            .map_err(|_| format!("cannot parse {s:?}"))?,
        None => return Err(format!("cannot parse {s:?} as a number or multiple of pi")),
    };
    let den = match den {
        Some(b) => b.parse::<f64>().map_err(|_| format!("cannot parse {s:?}"))?,
        None => 1.0,
    };
    Ok(coeff * PI / den)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angles() {
        assert_eq!(parse_angle("0.5").unwrap(), 0.5);
        assert_eq!(parse_angle("pi").unwrap(), PI);
        assert_eq!(parse_angle("pi/3").unwrap(), PI / 3.0);
        assert_eq!(parse_angle("2*pi/3").unwrap(), 2.0 * PI / 3.0);
        assert_eq!(parse_angle("-pi").unwrap(), -PI);
        assert!(parse_angle("tau").is_err());
    }
}
