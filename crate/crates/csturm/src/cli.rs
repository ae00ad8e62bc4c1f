//! Command-line front end: tabulation, Gram audits, residual reports,
//! quadrature-rule dumps, and eigenvalue/energy queries.
//!
//! Exit codes: 0 on success, 1 on argument or validation errors (the
//! message names the violated invariant), and 2 when a requested
//! verification (`gram` or `residual`) exceeds its tolerance, so the tool
//! can gate a CI job. All numeric text output carries 17 significant
//! digits and identical invocations produce byte-identical output.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::grid;
use crate::odecheck::{self, EquationId};
use crate::orbitals::{self, OrbitalSpec};
use crate::quadrature;

/// Parse `args` and run; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            1
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "csturm",
    version,
    about = "Coulomb-Sturmian radial functions with noninteger quantum numbers: \
             tabulation, orthonormality audits, and differential-equation checks"
)]
struct Cli {
    /// Flat key=value file overriding built-in defaults (explicit flags win)
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Output format (default depends on the subcommand)
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,

    /// Write output to FILE instead of standard output
    #[arg(long, short = 'o', global = true, value_name = "FILE")]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate one radial function over a grid of radii
    Tabulate(TabulateArgs),
    /// Orthonormality audit: Gram matrix of a fixed-(l*, nu, alpha, zeta) family
    Gram(GramArgs),
    /// Residual report of one differential-equation form applied to one orbital
    Residual(ResidualArgs),
    /// Dump the nodes and weights of a generalized Gauss-Laguerre rule
    Quad(QuadArgs),
    /// Angular eigenvalue and Sturmian energy for given parameters
    Eigen(EigenArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Spacing {
    Linear,
    Log,
}

/// Weight parameter, given either directly or as a spatial dimension.
#[derive(Debug, Args)]
struct WeightArgs {
    /// Weight parameter alpha (exactly one of --alpha / --N)
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,

    /// Spatial dimension N = 4 - alpha (exactly one of --alpha / --N)
    #[arg(long = "N", value_name = "DIM")]
    n_dim: Option<f64>,
}

#[derive(Debug, Args)]
struct TabulateArgs {
    /// Principal quantum number n* (fractional values allowed)
    #[arg(long)]
    n: Option<f64>,
    /// Orbital quantum number l* (fractional values allowed)
    #[arg(long)]
    l: Option<f64>,
    /// Fractional-order parameter, 0 < nu <= 1 [default: 1]
    #[arg(long)]
    nu: Option<f64>,
    #[command(flatten)]
    weight: WeightArgs,
    /// Screening parameter zeta [default: 1]
    #[arg(long)]
    zeta: Option<f64>,
    /// Smallest radius [default: 0.1]
    #[arg(long)]
    rmin: Option<f64>,
    /// Largest radius [default: 10]
    #[arg(long)]
    rmax: Option<f64>,
    /// Number of grid points [default: 64]
    #[arg(long)]
    points: Option<usize>,
    /// Grid spacing [default: linear]
    #[arg(long, value_enum)]
    spacing: Option<Spacing>,
}

#[derive(Debug, Args)]
struct GramArgs {
    /// Orbital quantum number l* shared by the family
    #[arg(long)]
    l: Option<f64>,
    /// Fractional-order parameter [default: 1]
    #[arg(long)]
    nu: Option<f64>,
    #[command(flatten)]
    weight: WeightArgs,
    /// Screening parameter zeta [default: 1]
    #[arg(long)]
    zeta: Option<f64>,
    /// Family size: members n* = l* + nu + k for k < nmax [default: 8]
    #[arg(long)]
    nmax: Option<usize>,
    /// Quadrature points [default: 64]
    #[arg(long = "M", value_name = "POINTS")]
    m: Option<usize>,
    /// Tolerance on the deviation from the identity [default: 1e-10]
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Debug, Args)]
struct ResidualArgs {
    /// Equation form: EQ7, EQ8, EQ10, or EQ11
    #[arg(long)]
    eq: Option<EquationId>,
    /// Principal quantum number n*
    #[arg(long)]
    n: Option<f64>,
    /// Orbital quantum number l*
    #[arg(long)]
    l: Option<f64>,
    /// Fractional-order parameter [default: 1]
    #[arg(long)]
    nu: Option<f64>,
    #[command(flatten)]
    weight: WeightArgs,
    /// Screening parameter zeta [default: 1]
    #[arg(long)]
    zeta: Option<f64>,
    /// Smallest radius [default: 0.1 / zeta]
    #[arg(long)]
    rmin: Option<f64>,
    /// Largest radius [default: 20 / zeta]
    #[arg(long)]
    rmax: Option<f64>,
    /// Number of grid points [default: 64]
    #[arg(long)]
    points: Option<usize>,
    /// Grid spacing [default: log]
    #[arg(long, value_enum)]
    spacing: Option<Spacing>,
    /// Tolerance on the max relative residual [default: 1e-8]
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Debug, Args)]
struct QuadArgs {
    /// Weight exponent a > -1
    #[arg(long, allow_hyphen_values = true)]
    a: Option<f64>,
    /// Number of quadrature points
    #[arg(long = "M", value_name = "POINTS")]
    m: Option<usize>,
}

#[derive(Debug, Args)]
struct EigenArgs {
    /// Orbital quantum number l*
    #[arg(long)]
    l: Option<f64>,
    /// Fractional-order parameter [default: 1]
    #[arg(long)]
    nu: Option<f64>,
    #[command(flatten)]
    weight: WeightArgs,
    /// Screening parameter zeta [default: 1]
    #[arg(long)]
    zeta: Option<f64>,
}

type CliResult<T> = std::result::Result<T, String>;

const CONFIG_KEYS: [&str; 16] = [
    "n", "l", "nu", "alpha", "N", "zeta", "rmin", "rmax", "points", "spacing", "M", "tol", "nmax",
    "a", "eq", "format",
];

/// Defaults-then-config-then-flag resolution of every parameter.
struct Settings {
    config: BTreeMap<String, String>,
}

impl Settings {
    fn load(path: Option<&PathBuf>) -> CliResult<Self> {
        let mut config = BTreeMap::new();
        if let Some(path) = path {
            let text = fs::read_to_string(path)
                .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
            for (lineno, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let (key, value) = line
                    .split_once('=')
                    .ok_or(format!("config line {}: expected key=value", lineno + 1))?;
                let key = key.trim();
                if !CONFIG_KEYS.contains(&key) {
                    return Err(format!("config line {}: unknown key {key:?}", lineno + 1));
                }
                config.insert(key.to_string(), value.trim().to_string());
            }
        }
        Ok(Self { config })
    }

    fn lookup<T: FromStr>(&self, key: &str) -> CliResult<Option<T>> {
        match self.config.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse::<T>()
                .map(Some)
                .map_err(|_| format!("config key {key}: cannot parse {raw:?}")),
        }
    }

    fn value_or<T: FromStr + Copy>(&self, flag: Option<T>, key: &str, default: T) -> CliResult<T> {
        match flag {
            Some(v) => Ok(v),
            None => Ok(self.lookup(key)?.unwrap_or(default)),
        }
    }

    fn required<T: FromStr + Copy>(&self, flag: Option<T>, key: &str) -> CliResult<T> {
        match flag {
            Some(v) => Ok(v),
            None => self
                .lookup(key)?
                .ok_or(format!("missing required parameter --{key}")),
        }
    }

    /// Exactly one of alpha / N, flags taking precedence over config.
    fn resolve_alpha(&self, weight: &WeightArgs) -> CliResult<f64> {
        match (weight.alpha, weight.n_dim) {
            (Some(_), Some(_)) => Err("exactly one of --alpha or --N must be supplied".to_string()),
            (Some(alpha), None) => Ok(alpha),
            (None, Some(n_dim)) => orbitals::alpha_from_dimension(n_dim).map_err(|e| e.to_string()),
            (None, None) => {
                let alpha: Option<f64> = self.lookup("alpha")?;
                let n_dim: Option<f64> = self.lookup("N")?;
                match (alpha, n_dim) {
                    (Some(_), Some(_)) => {
                        Err("exactly one of alpha or N may appear in the config".to_string())
                    }
                    (Some(alpha), None) => Ok(alpha),
                    (None, Some(n_dim)) => {
                        orbitals::alpha_from_dimension(n_dim).map_err(|e| e.to_string())
                    }
                    (None, None) => Err("exactly one of --alpha or --N is required".to_string()),
                }
            }
        }
    }

    fn format_or(
        &self,
        flag: Option<OutputFormat>,
        default: OutputFormat,
    ) -> CliResult<OutputFormat> {
        if let Some(f) = flag {
            return Ok(f);
        }
        match self.config.get("format").map(String::as_str) {
            None => Ok(default),
            Some("csv") => Ok(OutputFormat::Csv),
            Some("json") => Ok(OutputFormat::Json),
            Some(other) => Err(format!("config key format: cannot parse {other:?}")),
        }
    }

    fn spacing_or(&self, flag: Option<Spacing>, default: Spacing) -> CliResult<Spacing> {
        if let Some(s) = flag {
            return Ok(s);
        }
        match self.config.get("spacing").map(String::as_str) {
            None => Ok(default),
            Some("linear") => Ok(Spacing::Linear),
            Some("log") => Ok(Spacing::Log),
            Some(other) => Err(format!("config key spacing: cannot parse {other:?}")),
        }
    }
}

fn execute(cli: Cli) -> CliResult<i32> {
    let settings = Settings::load(cli.config.as_ref())?;
    match &cli.command {
        Command::Tabulate(args) => run_tabulate(&cli, &settings, args),
        Command::Gram(args) => run_gram(&cli, &settings, args),
        Command::Residual(args) => run_residual(&cli, &settings, args),
        Command::Quad(args) => run_quad(&cli, &settings, args),
        Command::Eigen(args) => run_eigen(&cli, &settings, args),
    }
}

fn build_grid(spacing: Spacing, rmin: f64, rmax: f64, points: usize) -> CliResult<Vec<f64>> {
    if !rmin.is_finite() || rmin <= 0.0 {
        return Err(format!("rmin must be positive and finite, got {rmin}"));
    }
    if !rmax.is_finite() || rmax <= rmin {
        return Err(format!(
            "rmax must exceed rmin, got rmax {rmax} <= rmin {rmin}"
        ));
    }
    if points < 2 {
        return Err(format!("points must be at least 2, got {points}"));
    }
    Ok(match spacing {
        Spacing::Linear => grid::linear_spaced(rmin, rmax, points),
        Spacing::Log => grid::log_spaced(rmin, rmax, points),
    })
}

fn check_tol(tol: f64) -> CliResult<f64> {
    if !tol.is_finite() || tol <= 0.0 {
        return Err(format!("tol must be positive and finite, got {tol}"));
    }
    Ok(tol)
}

fn run_tabulate(cli: &Cli, settings: &Settings, args: &TabulateArgs) -> CliResult<i32> {
    let n = settings.required(args.n, "n")?;
    let l = settings.required(args.l, "l")?;
    let nu = settings.value_or(args.nu, "nu", 1.0)?;
    let alpha = settings.resolve_alpha(&args.weight)?;
    let zeta = settings.value_or(args.zeta, "zeta", 1.0)?;
    let spec = OrbitalSpec::new(n, l, nu, alpha, zeta).map_err(|e| e.to_string())?;

    let rmin = settings.value_or(args.rmin, "rmin", 0.1)?;
    let rmax = settings.value_or(args.rmax, "rmax", 10.0)?;
    let points = settings.value_or(args.points, "points", 64)?;
    let spacing = settings.spacing_or(args.spacing, Spacing::Linear)?;
    let radii = build_grid(spacing, rmin, rmax, points)?;

    let mut values = Vec::with_capacity(radii.len());
    for &r in &radii {
        values.push(spec.radial(r).map_err(|e| e.to_string())?);
    }

    let text = match settings.format_or(cli.format, OutputFormat::Csv)? {
        OutputFormat::Csv => {
            let mut out = String::from("r,R\n");
            for (&r, &v) in radii.iter().zip(&values) {
                out.push_str(&format!("{},{}\n", fmt17(r), fmt17(v)));
            }
            out
        }
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct Point {
                r: f64,
                #[serde(rename = "R")]
                radial: f64,
            }
            #[derive(Serialize)]
            struct Out<'a> {
                spec: &'a OrbitalSpec,
                points: Vec<Point>,
            }
            let doc = Out {
                spec: &spec,
                points: radii
                    .iter()
                    .zip(&values)
                    .map(|(&r, &v)| Point { r, radial: v })
                    .collect(),
            };
            to_json(&doc)?
        }
    };
    emit(cli.output.as_ref(), &text)?;
    Ok(0)
}

fn run_gram(cli: &Cli, settings: &Settings, args: &GramArgs) -> CliResult<i32> {
    let l = settings.required(args.l, "l")?;
    let nu = settings.value_or(args.nu, "nu", 1.0)?;
    let alpha = settings.resolve_alpha(&args.weight)?;
    let zeta = settings.value_or(args.zeta, "zeta", 1.0)?;
    let nmax = settings.value_or(args.nmax, "nmax", 8)?;
    if nmax == 0 {
        return Err("nmax must be at least 1".to_string());
    }
    let m = settings.value_or(args.m, "M", 64)?;
    let tol = check_tol(settings.value_or(args.tol, "tol", 1e-10)?)?;

    let fam = orbitals::family(l, nu, alpha, zeta, nmax).map_err(|e| e.to_string())?;
    let report = orbitals::gram(&fam, m).map_err(|e| e.to_string())?;

    let text = match settings.format_or(cli.format, OutputFormat::Json)? {
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct Summary {
                max_offdiag: f64,
                max_diag_deviation: f64,
            }
            to_json(&Summary {
                max_offdiag: report.max_offdiag,
                max_diag_deviation: report.max_diag_deviation,
            })?
        }
        OutputFormat::Csv => {
            let mut out = String::new();
            for row in &report.matrix {
                let cells: Vec<String> = row.iter().map(|&v| fmt17(v)).collect();
                out.push_str(&cells.join(","));
                out.push('\n');
            }
            out
        }
    };
    emit(cli.output.as_ref(), &text)?;
    Ok(
        if report.max_offdiag > tol || report.max_diag_deviation > tol {
            2
        } else {
            0
        },
    )
}

fn run_residual(cli: &Cli, settings: &Settings, args: &ResidualArgs) -> CliResult<i32> {
    let eq = settings.required(args.eq, "eq")?;
    let n = settings.required(args.n, "n")?;
    let l = settings.required(args.l, "l")?;
    let nu = settings.value_or(args.nu, "nu", 1.0)?;
    let alpha = settings.resolve_alpha(&args.weight)?;
    let zeta = settings.value_or(args.zeta, "zeta", 1.0)?;
    let spec = OrbitalSpec::new(n, l, nu, alpha, zeta).map_err(|e| e.to_string())?;

    let rmin = settings.value_or(args.rmin, "rmin", 0.1 / zeta)?;
    let rmax = settings.value_or(args.rmax, "rmax", 20.0 / zeta)?;
    let points = settings.value_or(args.points, "points", 64)?;
    let spacing = settings.spacing_or(args.spacing, Spacing::Log)?;
    let tol = check_tol(settings.value_or(args.tol, "tol", 1e-8)?)?;
    let radii = build_grid(spacing, rmin, rmax, points)?;

    let report = odecheck::residual(eq, &spec, &radii).map_err(|e| e.to_string())?;

    let text = match settings.format_or(cli.format, OutputFormat::Json)? {
        OutputFormat::Json => to_json(&report)?,
        OutputFormat::Csv => {
            let mut out = String::from("r,residual\n");
            for p in &report.points {
                out.push_str(&format!("{},{}\n", fmt17(p.r), fmt17(p.residual)));
            }
            out
        }
    };
    emit(cli.output.as_ref(), &text)?;
    Ok(if report.max_rel > tol { 2 } else { 0 })
}

fn run_quad(cli: &Cli, settings: &Settings, args: &QuadArgs) -> CliResult<i32> {
    let a = settings.required(args.a, "a")?;
    let m = settings.required(args.m, "M")?;
    let rule = quadrature::gauss_laguerre_rule(a, m).map_err(|e| e.to_string())?;

    let text = match settings.format_or(cli.format, OutputFormat::Csv)? {
        OutputFormat::Csv => {
            let mut out = String::from("node,weight,log_weight\n");
            for (&x, &lw) in rule.nodes().iter().zip(rule.log_weights()) {
                out.push_str(&format!("{},{},{}\n", fmt17(x), fmt17(lw.exp()), fmt17(lw)));
            }
            out
        }
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct Out<'a> {
                param_a: f64,
                count: usize,
                nodes: &'a [f64],
                log_weights: &'a [f64],
            }
            to_json(&Out {
                param_a: rule.param_a(),
                count: rule.count(),
                nodes: rule.nodes(),
                log_weights: rule.log_weights(),
            })?
        }
    };
    emit(cli.output.as_ref(), &text)?;
    Ok(0)
}

fn run_eigen(cli: &Cli, settings: &Settings, args: &EigenArgs) -> CliResult<i32> {
    let l = settings.required(args.l, "l")?;
    let nu = settings.value_or(args.nu, "nu", 1.0)?;
    let alpha = settings.resolve_alpha(&args.weight)?;
    let zeta = settings.value_or(args.zeta, "zeta", 1.0)?;

    let dimension = orbitals::dimension_from_alpha(alpha).map_err(|e| e.to_string())?;
    let lambda = orbitals::angular_eigenvalue(l, nu, dimension).map_err(|e| e.to_string())?;
    let energy = orbitals::sturmian_energy(zeta, alpha).map_err(|e| e.to_string())?;

    #[derive(Serialize)]
    struct Out {
        l_star: f64,
        nu: f64,
        alpha: f64,
        dimension: f64,
        effective_l: f64,
        lambda: f64,
        zeta: f64,
        energy: f64,
    }
    let out = Out {
        l_star: l,
        nu,
        alpha,
        dimension,
        effective_l: orbitals::effective_l(l, nu),
        lambda,
        zeta,
        energy,
    };

    let text = match settings.format_or(cli.format, OutputFormat::Json)? {
        OutputFormat::Json => to_json(&out)?,
        OutputFormat::Csv => {
            let mut s = String::from("l_star,nu,alpha,dimension,effective_l,lambda,zeta,energy\n");
            s.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                fmt17(out.l_star),
                fmt17(out.nu),
                fmt17(out.alpha),
                fmt17(out.dimension),
                fmt17(out.effective_l),
                fmt17(out.lambda),
                fmt17(out.zeta),
                fmt17(out.energy),
            ));
            s
        }
    };
    emit(cli.output.as_ref(), &text)?;
    Ok(0)
}

/// 17 significant digits: round-trip safe for f64.
fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

fn to_json<T: Serialize>(value: &T) -> CliResult<String> {
    serde_json::to_string_pretty(value)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| format!("cannot serialize output: {e}"))
}

fn emit(path: Option<&PathBuf>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| format!("cannot write to stdout: {e}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_overrides_defaults_but_not_flags() {
        let mut config = BTreeMap::new();
        config.insert("zeta".to_string(), "2.5".to_string());
        let settings = Settings { config };
        assert_eq!(settings.value_or(None, "zeta", 1.0).unwrap(), 2.5);
        assert_eq!(settings.value_or(Some(4.0), "zeta", 1.0).unwrap(), 4.0);
        assert_eq!(settings.value_or::<f64>(None, "nu", 1.0).unwrap(), 1.0);
    }

    #[test]
    fn alpha_and_dimension_are_mutually_exclusive() {
        let settings = Settings {
            config: BTreeMap::new(),
        };
        let both = WeightArgs {
            alpha: Some(1.0),
            n_dim: Some(3.0),
        };
        assert!(settings.resolve_alpha(&both).is_err());
        let neither = WeightArgs {
            alpha: None,
            n_dim: None,
        };
        assert!(settings.resolve_alpha(&neither).is_err());
        let via_dim = WeightArgs {
            alpha: None,
            n_dim: Some(3.0),
        };
        assert_eq!(settings.resolve_alpha(&via_dim).unwrap(), 1.0);
    }

    #[test]
    fn seventeen_digit_format_round_trips() {
        assert_eq!(fmt17(2.0), "2.0000000000000000e0");
        for v in [0.585_786_437_626_905, 1.0 / 3.0, 1e-300, -4.0 / 7.0] {
            assert_eq!(fmt17(v).parse::<f64>().unwrap(), v);
        }
    }
}
