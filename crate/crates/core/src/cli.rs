//! Command line front end.
//!
//! ```text
//! dirac-bounds disk-spectrum --radius 1 --kmax 5 --per-fiber 3
//! dirac-bounds analyze domain.json --out report.json
//! dirac-bounds sweep --family ellipse --param x --from 0.01 --to 1.0 --steps 20
//! dirac-bounds verify a.json b.json
//! ```
//!
//! Domains are JSON documents `{"shape": {...}, "offset": [x, y]}` with shape
//! kinds `disk {radius}`, `ellipse {a, b}` and `polar_fourier {a0, cos, sin}`.
//! Eigenvalue columns have units of inverse input length.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::bounds::{lambda_audit, verify_chain, BoundsReport, ChainConfig, LambdaAudit};
use crate::conformal::{DEFAULT_MODES, MAX_MODES, MIN_MODES};
use crate::diskspec::{disk_spectrum, principal, DiskEigenpair, MAX_FIBER, MAX_PER_FIBER};
use crate::geometry::{DomainSpec, DEFAULT_RESOLUTION, MIN_RESOLUTION};
use crate::transplant::DEFAULT_RADIAL_ORDER;

/// Frozen column set of `analyze` and `sweep` CSV output.
pub const CSV_COLUMNS: [&str; 21] = [
    "param",
    "area",
    "perimeter",
    "r_i",
    "r_o",
    "r_c",
    "kappa_star",
    "rho_star",
    "inradius",
    "hardy_measured",
    "hardy_kovalev",
    "hardy_gaier",
    "lower",
    "easy",
    "transplant",
    "abstract",
    "fc",
    "fs",
    "fc_bound",
    "fs_bound",
    "chain_ok",
];

pub const MAX_RESOLUTION: usize = 1 << 20;
pub const MIN_RADIAL_ORDER: usize = 8;
pub const MAX_RADIAL_ORDER: usize = 1024;
pub const MAX_STEPS: usize = 100_000;

/// Exit code of a `verify` run with a failed chain link.
pub const EXIT_FAILED: i32 = 1;
/// Exit code for usage, I/O and computation errors.
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// `a = 1 + x`, `b = 1 / (1 + x)`, parameter `x`.
    Ellipse,
    /// Unit disk centered at `(s, 0)`, parameter `s`.
    ShiftedDisk,
    /// `rho = 1 + eps cos(k phi)`, parameter `eps`, `k` from `--mode`.
    PerturbedCircle,
}

impl Family {
    pub fn param_name(self) -> &'static str {
        match self {
            Family::Ellipse => "x",
            Family::ShiftedDisk => "s",
            Family::PerturbedCircle => "eps",
        }
    }

    pub fn domain(self, value: f64, mode: usize) -> crate::Result<DomainSpec> {
        match self {
            Family::Ellipse => DomainSpec::ellipse(1.0 + value, 1.0 / (1.0 + value)),
            Family::ShiftedDisk => DomainSpec::disk(1.0)?.with_offset([value, 0.0]),
            Family::PerturbedCircle => {
                let mut cos = vec![0.0; mode];
                cos[mode - 1] = value;
                DomainSpec::polar_fourier(1.0, cos, Vec::new())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    DiskSpectrum {
        radius: f64,
        k_max: usize,
        per_fiber: usize,
    },
    Analyze {
        input: PathBuf,
    },
    Sweep {
        family: Family,
        param: String,
        from: f64,
        to: f64,
        steps: usize,
        mode: usize,
    },
    Verify {
        inputs: Vec<PathBuf>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub resolution: usize,
    pub radial_order: usize,
    pub n_modes: usize,
    pub format: Format,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn chain_config(&self) -> ChainConfig {
        ChainConfig {
            resolution: self.resolution,
            n_modes: self.n_modes,
            radial_order: self.radial_order,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "dirac-bounds",
    version,
    about = "Dirac eigenvalue bounds for planar domains"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, Args)]
struct Common {
    /// Boundary samples for geometric quantities.
    #[arg(long, default_value_t = DEFAULT_RESOLUTION)]
    resolution: usize,
    /// Gauss-Legendre order of the radial quadrature.
    #[arg(long, default_value_t = DEFAULT_RADIAL_ORDER)]
    radial_order: usize,
    /// Initial number of conformal map nodes (a power of two).
    #[arg(long, default_value_t = DEFAULT_MODES)]
    modes: usize,
    /// Output file; standard output if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Eigenvalues of the disk on angular fibers |k| <= kmax.
    DiskSpectrum {
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        #[arg(long, default_value_t = 5)]
        kmax: usize,
        #[arg(long, default_value_t = 3)]
        per_fiber: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Full bound report for one domain file.
    Analyze {
        input: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Bound reports over a one-parameter family.
    Sweep {
        #[arg(long, value_enum)]
        family: Family,
        /// Name of the swept parameter: x, s or eps depending on the family.
        #[arg(long)]
        param: Option<String>,
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        #[arg(long)]
        steps: usize,
        /// Angular frequency k of the perturbed circle.
        #[arg(long, default_value_t = 3)]
        mode: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Checks the inequality chain on each domain; nonzero exit on failure.
    Verify {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
}

fn invalid(msg: String) -> clap::Error {
    clap::Error::raw(clap::error::ErrorKind::ValueValidation, msg + "\n")
}

fn check_common(c: &Common) -> Result<(), clap::Error> {
    if !(MIN_RESOLUTION..=MAX_RESOLUTION).contains(&c.resolution) {
        return Err(invalid(format!(
            "--resolution must lie in [{MIN_RESOLUTION}, {MAX_RESOLUTION}], got {}",
            c.resolution
        )));
    }
    if !(MIN_RADIAL_ORDER..=MAX_RADIAL_ORDER).contains(&c.radial_order) {
        return Err(invalid(format!(
            "--radial-order must lie in [{MIN_RADIAL_ORDER}, {MAX_RADIAL_ORDER}], got {}",
            c.radial_order
        )));
    }
    if !(MIN_MODES..=MAX_MODES).contains(&c.modes) || !c.modes.is_power_of_two() {
        return Err(invalid(format!(
            "--modes must be a power of two in [{MIN_MODES}, {MAX_MODES}], got {}",
            c.modes
        )));
    }
    Ok(())
}

fn config(common: Common, command: Command, default: Format) -> RunConfig {
    RunConfig {
        command,
        resolution: common.resolution,
        radial_order: common.radial_order,
        n_modes: common.modes,
        format: common.format.unwrap_or(default),
        out: common.out,
    }
}

/// Parses and validates a command line; `argv[0]` is the program name.
pub fn parse_args<I, T>(argv: I) -> Result<RunConfig, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv)?;
    Ok(match cli.command {
        Cmd::DiskSpectrum {
            radius,
            kmax,
            per_fiber,
            out,
            format,
        } => {
            if !(radius > 0.0 && radius.is_finite()) {
                return Err(invalid(format!("--radius must be positive, got {radius}")));
            }
            if kmax > MAX_FIBER {
                return Err(invalid(format!(
                    "--kmax must be at most {MAX_FIBER}, got {kmax}"
                )));
            }
            if !(1..=MAX_PER_FIBER).contains(&per_fiber) {
                return Err(invalid(format!(
                    "--per-fiber must lie in [1, {MAX_PER_FIBER}], got {per_fiber}"
                )));
            }
            RunConfig {
                command: Command::DiskSpectrum {
                    radius,
                    k_max: kmax,
                    per_fiber,
                },
                resolution: DEFAULT_RESOLUTION,
                radial_order: DEFAULT_RADIAL_ORDER,
                n_modes: DEFAULT_MODES,
                format: format.unwrap_or(Format::Csv),
                out,
            }
        }
        Cmd::Analyze { input, common } => {
            check_common(&common)?;
            config(common, Command::Analyze { input }, Format::Json)
        }
        Cmd::Sweep {
            family,
            param,
            from,
            to,
            steps,
            mode,
            common,
        } => {
            check_common(&common)?;
            let expected = family.param_name();
            let param = param.unwrap_or_else(|| expected.to_string());
            if param != expected {
                return Err(invalid(format!(
                    "family {family:?} sweeps parameter {expected:?}, not {param:?}"
                )));
            }
            if !(from.is_finite() && to.is_finite() && from <= to) {
                return Err(invalid(format!(
                    "need finite --from <= --to, got {from} and {to}"
                )));
            }
            if !(1..=MAX_STEPS).contains(&steps) || (steps == 1 && from != to) {
                return Err(invalid(format!(
                    "--steps must lie in [1, {MAX_STEPS}] and be at least 2 for a proper range, got {steps}"
                )));
            }
            if family == Family::PerturbedCircle && !(1..=32).contains(&mode) {
                return Err(invalid(format!("--mode must lie in [1, 32], got {mode}")));
            }
            config(
                common,
                Command::Sweep {
                    family,
                    param,
                    from,
                    to,
                    steps,
                    mode,
                },
                Format::Csv,
            )
        }
        Cmd::Verify { inputs, common } => {
            check_common(&common)?;
            config(common, Command::Verify { inputs }, Format::Json)
        }
    })
}

/// Reads and validates a domain file.
pub fn load_domain(path: &Path) -> anyhow::Result<DomainSpec> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let spec: DomainSpec = serde_json::from_str(&text)
        .with_context(|| format!("parsing domain file {}", path.display()))?;
    spec.validate()
        .with_context(|| format!("validating domain file {}", path.display()))?;
    Ok(spec)
}

/// Sample points of a sweep, endpoints included.
pub fn sweep_points(from: f64, to: f64, steps: usize) -> Vec<f64> {
    if steps == 1 {
        return vec![from];
    }
    let h = (to - from) / (steps - 1) as f64;
    (0..steps)
        .map(|i| {
            if i + 1 == steps {
                to
            } else {
                from + h * i as f64
            }
        })
        .collect()
}

/// Fixed scientific formatting with 12 significant digits.
pub fn fmt_float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.11e}")
    } else {
        String::new()
    }
}

fn cell(v: Option<f64>) -> String {
    v.map(fmt_float).unwrap_or_default()
}

/// One CSV row in [`CSV_COLUMNS`] order.
pub fn csv_row(param: Option<f64>, r: &BoundsReport) -> String {
    let g = &r.geometry;
    let cells = [
        cell(param),
        fmt_float(g.area),
        fmt_float(g.perimeter),
        fmt_float(g.r_i),
        fmt_float(g.r_o),
        fmt_float(g.r_c),
        fmt_float(g.kappa_star),
        fmt_float(g.rho_star),
        fmt_float(g.inradius),
        fmt_float(r.hardy.value),
        cell(r.kovalev_hardy),
        cell(r.gaier_hardy),
        fmt_float(r.lower),
        cell(r.easy),
        fmt_float(r.transplant_bound),
        fmt_float(r.abstract_bound),
        cell(r.fc),
        cell(r.fs),
        cell(r.fc_bound),
        cell(r.fs_bound),
        r.chain_ok.to_string(),
    ];
    cells.join(",")
}

/// Rounds every float in a JSON tree to 12 significant digits.
fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("checked f64");
            if let Some(r) = fmt_float(x)
                .parse::<f64>()
                .ok()
                .and_then(serde_json::Number::from_f64)
            {
                *n = r;
            }
        }
        Value::Array(a) => a.iter_mut().for_each(round_floats),
        Value::Object(o) => o.values_mut().for_each(round_floats),
        _ => {}
    }
}

fn to_json<T: Serialize>(value: &T) -> anyhow::Result<String> {
    let mut v = serde_json::to_value(value)?;
    round_floats(&mut v);
    let mut s = serde_json::to_string_pretty(&v)?;
    s.push('\n');
    Ok(s)
}

fn audit_note(a: &LambdaAudit) -> String {
    format!(
        "note: j01 = {} (|J0(j01)| = {:.1e}) is sqrt(lambda1) of the unit disk; the quoted value {} is sqrt(j01) = {}{}",
        fmt_float(a.j01),
        a.j01_residual,
        a.quoted_sqrt_lambda1,
        fmt_float(a.sqrt_j01),
        if a.discrepancy { " [DISCREPANCY]" } else { "" }
    )
}

#[derive(Serialize)]
struct SpectrumRow<'a> {
    #[serde(flatten)]
    pair: &'a DiskEigenpair,
    secular_residual: f64,
}

fn spectrum_output(
    radius: f64,
    k_max: usize,
    per_fiber: usize,
    format: Format,
) -> anyhow::Result<String> {
    let spectrum = disk_spectrum(radius, k_max, per_fiber).context("computing disk spectrum")?;
    Ok(match format {
        Format::Csv => {
            let mut s = String::from("k,m,mu,secular_residual\n");
            for p in &spectrum {
                writeln!(
                    s,
                    "{},{},{},{}",
                    p.k,
                    p.m,
                    fmt_float(p.mu),
                    fmt_float(p.secular_residual())
                )?;
            }
            s
        }
        Format::Json => {
            let rows: Vec<_> = spectrum
                .iter()
                .map(|pair| SpectrumRow {
                    pair,
                    secular_residual: pair.secular_residual(),
                })
                .collect();
            to_json(&json!({
                "radius": radius,
                "k_max": k_max,
                "per_fiber": per_fiber,
                "principal": principal(&spectrum).map(|p| p.mu),
                "eigenpairs": rows,
            }))?
        }
    })
}

fn analyze_output(input: &Path, config: &RunConfig) -> anyhow::Result<String> {
    let spec = load_domain(input)?;
    let report = verify_chain(&spec, &config.chain_config())
        .with_context(|| format!("analyzing {}", input.display()))?;
    Ok(match config.format {
        Format::Csv => format!("{}\n{}\n", CSV_COLUMNS.join(","), csv_row(None, &report)),
        Format::Json => to_json(&json!({
            "input": input,
            "domain": spec,
            "config": config.chain_config(),
            "report": report,
            "lambda_audit": lambda_audit(),
        }))?,
    })
}

/// Per-point outcome of a sweep.
pub type SweepRow = (f64, Result<BoundsReport, String>);

pub fn run_sweep(
    family: Family,
    points: &[f64],
    mode: usize,
    config: &ChainConfig,
) -> Vec<SweepRow> {
    points
        .par_iter()
        .map(|&p| {
            let report = family
                .domain(p, mode)
                .and_then(|spec| verify_chain(&spec, config))
                .map_err(|e| e.to_string());
            (p, report)
        })
        .collect()
}

fn sweep_output(rows: &[SweepRow], family: Family, config: &RunConfig) -> anyhow::Result<String> {
    Ok(match config.format {
        Format::Csv => {
            let mut s = CSV_COLUMNS.join(",");
            s.push('\n');
            for (p, r) in rows {
                match r {
                    Ok(report) => s.push_str(&csv_row(Some(*p), report)),
                    Err(_) => {
                        s.push_str(&fmt_float(*p));
                        s.push_str(&",".repeat(CSV_COLUMNS.len() - 2));
                        s.push_str(",false");
                    }
                }
                s.push('\n');
            }
            s
        }
        Format::Json => {
            let points: Vec<Value> = rows
                .iter()
                .map(|(p, r)| match r {
                    Ok(report) => json!({ "param": p, "report": report }),
                    Err(e) => json!({ "param": p, "error": e }),
                })
                .collect();
            to_json(&json!({
                "family": family,
                "param": family.param_name(),
                "config": config.chain_config(),
                "points": points,
                "lambda_audit": lambda_audit(),
            }))?
        }
    })
}

fn verify_output(
    results: &[(PathBuf, anyhow::Result<BoundsReport>)],
    config: &RunConfig,
) -> anyhow::Result<String> {
    Ok(match config.format {
        Format::Csv => {
            let mut s = format!("path,{}\n", CSV_COLUMNS.join(","));
            for (path, r) in results {
                s.push_str(&path.display().to_string());
                s.push(',');
                match r {
                    Ok(report) => s.push_str(&csv_row(None, report)),
                    Err(_) => {
                        s.push_str(&",".repeat(CSV_COLUMNS.len() - 1));
                        s.push_str("false");
                    }
                }
                s.push('\n');
            }
            s
        }
        Format::Json => {
            let domains: Vec<Value> = results
                .iter()
                .map(|(path, r)| match r {
                    Ok(report) => json!({ "input": path, "ok": report.chain_ok, "report": report }),
                    Err(e) => json!({ "input": path, "ok": false, "error": format!("{e:#}") }),
                })
                .collect();
            let ok = results
                .iter()
                .all(|(_, r)| matches!(r, Ok(rep) if rep.chain_ok));
            to_json(&json!({
                "ok": ok,
                "config": config.chain_config(),
                "domains": domains,
                "lambda_audit": lambda_audit(),
            }))?
        }
    })
}

fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

/// Executes a command and returns its exit code. Errors go to standard error.
pub fn run(config: &RunConfig) -> i32 {
    match execute(config) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_ERROR
        }
    }
}

fn execute(config: &RunConfig) -> anyhow::Result<i32> {
    let out = config.out.as_deref();
    match &config.command {
        Command::DiskSpectrum {
            radius,
            k_max,
            per_fiber,
        } => {
            emit(
                out,
                &spectrum_output(*radius, *k_max, *per_fiber, config.format)?,
            )?;
            Ok(0)
        }
        Command::Analyze { input } => {
            let text = analyze_output(input, config)?;
            if config.format == Format::Csv {
                eprintln!("{}", audit_note(&lambda_audit()));
            }
            emit(out, &text)?;
            Ok(0)
        }
        Command::Sweep {
            family,
            from,
            to,
            steps,
            mode,
            ..
        } => {
            let points = sweep_points(*from, *to, *steps);
            let rows = run_sweep(*family, &points, *mode, &config.chain_config());
            let mut failed = false;
            for (p, r) in &rows {
                if let Err(e) = r {
                    eprintln!("error: {}={}: {e}", family.param_name(), fmt_float(*p));
                    failed = true;
                }
            }
            if config.format == Format::Csv {
                eprintln!("{}", audit_note(&lambda_audit()));
            }
            emit(out, &sweep_output(&rows, *family, config)?)?;
            Ok(if failed { EXIT_ERROR } else { 0 })
        }
        Command::Verify { inputs } => {
            if inputs.is_empty() {
                bail!("verify needs at least one domain file");
            }
            let chain = config.chain_config();
            let results: Vec<(PathBuf, anyhow::Result<BoundsReport>)> = inputs
                .par_iter()
                .map(|path| {
                    let r = load_domain(path).and_then(|spec| {
                        verify_chain(&spec, &chain)
                            .with_context(|| format!("analyzing {}", path.display()))
                    });
                    (path.clone(), r)
                })
                .collect();
            let mut ok = true;
            for (path, r) in &results {
                match r {
                    Ok(report) => {
                        for link in report.links.iter().filter(|l| !l.ok) {
                            eprintln!(
                                "FAIL {}: {} (lhs {}, rhs {}, margin {:.3e})",
                                path.display(),
                                link.name,
                                fmt_float(link.lhs),
                                fmt_float(link.rhs),
                                link.margin
                            );
                        }
                        ok &= report.chain_ok;
                    }
                    Err(e) => {
                        eprintln!("FAIL {}: {e:#}", path.display());
                        ok = false;
                    }
                }
            }
            if config.format == Format::Csv {
                eprintln!("{}", audit_note(&lambda_audit()));
            }
            emit(out, &verify_output(&results, config)?)?;
            Ok(if ok { 0 } else { EXIT_FAILED })
        }
    }
}
