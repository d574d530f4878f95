use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "ncst",
    version,
    about = "Fuzzy distance and causality for localized spacetime points"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Distance between two localized points.
    Distance(DistanceArgs),
    /// Fuzzy causal relation between two localized points.
    Causal(PairArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Tabulate distance and causality along one axis.
    Sweep(SweepArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Flags shared by every command; each overrides the config file.
#[derive(Args, Debug, Clone)]
pub struct Common {
    /// JSON config document.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Gravitational coupling κ²; 0 gives the classical limit.
    #[arg(long, conflicts_with = "planck_length")]
    pub kappa_sq: Option<f64>,
    #[arg(long)]
    pub planck_length: Option<f64>,
    /// Monte Carlo and random-family seed.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub rel_tol: Option<f64>,
    #[arg(long)]
    pub mc_samples: Option<usize>,
    /// State parameter α of the regularized state.
    #[arg(long)]
    pub state_alpha: Option<f64>,
}

#[derive(Args, Debug)]
pub struct PairArgs {
    /// Center of the first bump, as t,x,y,z.
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    pub p: [f64; 4],
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true, default_value = "0,0,0,0")]
    pub q: [f64; 4],
    /// Width a of both bumps in 1/length², or `synge` / `minvar` for the
    /// Planck-scale width families.
    #[arg(long, value_parser = parse_width, default_value = "100")]
    pub width: Width,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Width {
    Value(f64),
    /// `a = 2c/ℓ²` with `c = e^{2(1-γ)}/4`.
    Synge,
    /// `a = 2c/ℓ²` with `c = e^{1-γ}/4`.
    Minvar,
}

#[derive(Args, Debug)]
pub struct DistanceArgs {
    #[command(flatten)]
    pub pair: PairArgs,
    /// Use the finite-α distance with the configured state instead of the limit.
    #[arg(long)]
    pub finite_alpha: bool,
    /// Also report the second moment taken in the positive state.
    #[arg(long)]
    pub diagnostics: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Minvar,
    Fourier,
    Gram,
    Weyl,
    AlphaLimit,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub suite: Suite,
    /// Number of random families or triples for the randomized suites.
    #[arg(long, default_value_t = 50)]
    pub count: usize,
    /// `gram` only: check the families in this JSON document instead of
    /// random ones.
    #[arg(long)]
    pub families: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Axis {
    /// |(p - q)²| along a timelike (or, with --spacelike, spacelike) ray.
    Separation,
    Width,
    StateAlpha,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(value_enum)]
    pub axis: Axis,
    /// start:stop:count
    #[arg(long, value_parser = parse_range)]
    pub range: Range,
    /// Geometric instead of linear spacing.
    #[arg(long)]
    pub log: bool,
    /// Separation axis only: displace along x instead of t.
    #[arg(long)]
    pub spacelike: bool,
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true, default_value = "1,0,0,0")]
    pub p: [f64; 4],
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true, default_value = "0,0,0,0")]
    pub q: [f64; 4],
    #[arg(long, value_parser = parse_width, default_value = "100")]
    pub width: Width,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Range {
    pub fn values(&self, log: bool) -> Result<Vec<f64>, String> {
        if log && (self.start <= 0.0 || self.stop <= 0.0) {
            return Err("geometric spacing needs positive endpoints".into());
        }
        let n = self.count;
        Ok((0..n)
            .map(|i| {
                let t = if n == 1 {
                    0.0
                } else {
                    i as f64 / (n - 1) as f64
                };
                if i == 0 {
                    self.start
                } else if i + 1 == n {
                    self.stop
                } else if log {
                    (self.start.ln() + t * (self.stop.ln() - self.start.ln())).exp()
                } else {
                    self.start + t * (self.stop - self.start)
                }
            })
            .collect())
    }
}

fn parse_point(s: &str) -> Result<[f64; 4], String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|e| format!("{x:?}: {e}")))
        .collect::<Result<_, _>>()?;
    let point: [f64; 4] = parts
        .try_into()
        .map_err(|v: Vec<f64>| format!("expected 4 components, got {}", v.len()))?;
    if point.iter().all(|x| x.is_finite()) {
        Ok(point)
    } else {
        Err("components must be finite".into())
    }
}

fn parse_width(s: &str) -> Result<Width, String> {
    match s {
        "synge" => Ok(Width::Synge),
        "minvar" => Ok(Width::Minvar),
        _ => s
            .parse()
            .map(Width::Value)
            .map_err(|e| format!("{s:?}: {e}")),
    }
}

fn parse_range(s: &str) -> Result<Range, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [start, stop, count] = parts[..] else {
        return Err("expected start:stop:count".into());
    };
    let num = |x: &str| x.parse::<f64>().map_err(|e| format!("{x:?}: {e}"));
    let count: usize = count.parse().map_err(|e| format!("{count:?}: {e}"))?;
    if count == 0 {
        return Err("count must be positive".into());
    }
    let (start, stop) = (num(start)?, num(stop)?);
    if !(start.is_finite() && stop.is_finite()) {
        return Err("range endpoints must be finite".into());
    }
    Ok(Range { start, stop, count })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn points_and_ranges() {
        assert_eq!(parse_point("1, -2,0,3.5").unwrap(), [1.0, -2.0, 0.0, 3.5]);
        assert!(parse_point("1,2,3").is_err());
        assert!(parse_point("1,2,3,nan").is_err());
        let r = parse_range("1:100:3").unwrap();
        assert_eq!(r.values(false).unwrap(), vec![1.0, 50.5, 100.0]);
        let g = r.values(true).unwrap();
        assert!((g[1] - 10.0).abs() < 1e-12);
        assert!(parse_range("1:2:0").is_err());
        assert!(parse_range("1:2").is_err());
        assert!(parse_range("-1:2:3").unwrap().values(true).is_err());
        assert_eq!(parse_width("1e4").unwrap(), Width::Value(1e4));
        assert_eq!(parse_width("minvar").unwrap(), Width::Minvar);
        assert!(parse_width("wide").is_err());
    }
}
