//! Batch runner behind the `rosen` command: configuration, dispatch, CSV/JSON output and manifests.

use crate::cf::{expand, Family};
use crate::enumerate::{compute_t0, count_solutions};
use crate::error::{Error, Result};
use crate::lab::cdf::{lenstra_breakpoint, theta_cdf, uniform_grid, BREAK_TOL};
use crate::lab::constants::ConstantsTarget;
use crate::lab::entropy::entropy_estimate;
use crate::lab::legendre::{legendre_scan, SeedMode};
use crate::lab::sampling::{sample_point, SEED_MIXER};
use crate::ring::{HeckeIndex, LambdaRational, LambdaRing, DEFAULT_PRECISION_CAP};
use clap::{Args, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

/// Version of the CSV/JSON layouts written by `run`.
pub const SCHEMA_VERSION: u32 = 1;

/// Environment variable naming the default output directory.
pub const OUTPUT_DIR_ENV: &str = "ROSEN_OUTPUT_DIR";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Expand,
    Entropy,
    Lenstra,
    Legendre,
    Count,
    Bjw,
    T0,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Expand => "expand",
            Command::Entropy => "entropy",
            Command::Lenstra => "lenstra",
            Command::Legendre => "legendre",
            Command::Count => "count",
            Command::Bjw => "bjw",
            Command::T0 => "t0",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SeedKind {
    #[default]
    Uniform,
    Leading,
}

/// Command-line options; unset values take per-command defaults in [`RunArgs::resolve`].
#[derive(Clone, Debug, Default, Args)]
pub struct RunArgs {
    /// Hecke index k ≥ 3.
    #[arg(long)]
    pub k: Option<u32>,
    /// α of an α-expansion, as a rational (e.g. 1/2 or 0.5); overrides k.
    #[arg(long)]
    pub alpha: Option<String>,
    /// Point to expand or count around, as an exact decimal or fraction.
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<String>,
    /// Number of sampled seeds (points for count and legendre).
    #[arg(long)]
    pub samples: Option<u64>,
    /// Digits per seed.
    #[arg(long)]
    pub iters: Option<usize>,
    /// Master seed.
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Precision cap of sign decisions, in bits.
    #[arg(long, default_value_t = DEFAULT_PRECISION_CAP)]
    pub precision_bits: u64,
    /// t values: comma list (0.1,0.25) or step:max (0.001:1).
    #[arg(long)]
    pub t_grid: Option<String>,
    /// c values for the Legendre scan: comma list or step:max.
    #[arg(long)]
    pub c_grid: Option<String>,
    /// N values for counting: comma list of integers.
    #[arg(long)]
    pub n_grid: Option<String>,
    /// Breakpoint tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Largest denominator size searched by the Legendre scan.
    #[arg(long)]
    pub q_bound: Option<u64>,
    /// How Legendre scan points are drawn.
    #[arg(long, value_enum)]
    pub seed_mode: Option<SeedKind>,
    /// Largest leading digit of leading-digit seeds.
    #[arg(long)]
    pub max_digit: Option<u64>,
    /// Entry bound of the group elements probed by t0.
    #[arg(long)]
    pub probe_bound: Option<u64>,
    /// Output layout.
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
    /// Output file; the manifest goes next to it as <output>.manifest.json.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// A fully resolved run; the manifest echoes it verbatim.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub k: Option<u32>,
    pub alpha: Option<String>,
    pub x: Option<String>,
    pub samples: u64,
    pub iters: usize,
    pub seed: u64,
    pub precision_bits: u64,
    pub t_grid: Vec<String>,
    pub c_grid: Vec<String>,
    pub n_grid: Vec<u64>,
    pub tol: f64,
    pub q_bound: u64,
    pub seed_mode: SeedKind,
    pub max_digit: u64,
    pub probe_bound: u64,
    pub format: OutputFormat,
    pub output: Option<PathBuf>,
}

/// Expand a grid spec into its decimal entries.
pub fn parse_grid(spec: &str) -> Result<Vec<String>> {
    let bad = || Error::InvalidConfig(format!("bad grid {spec:?}"));
    if let Some((step, max)) = spec.split_once(':') {
        let (s, m): (f64, f64) = (step.trim().parse().map_err(|_| bad())?, max.trim().parse().map_err(|_| bad())?);
        if !(s > 0.0 && m >= s) || m / s > 1e7 {
            return Err(bad());
        }
        let decimals = step.trim().split_once('.').map_or(0, |(_, f)| f.len());
        return Ok(uniform_grid(s, m).into_iter().map(|t| format!("{t:.decimals$}")).collect());
    }
    let v: Vec<String> = spec.split(',').map(|t| t.trim().to_string()).filter(|t| !t.is_empty()).collect();
    if v.is_empty() {
        return Err(bad());
    }
    Ok(v)
}

impl RunArgs {
    pub fn resolve(&self, command: Command) -> Result<RunConfig> {
        use Command::*;
        let samples = self.samples.unwrap_or(match command {
            Entropy => 200,
            Lenstra | Bjw => 10_000,
            Legendre => 1000,
            Count => 50,
            Expand | T0 => 1,
        });
        let iters = self.iters.unwrap_or(match command {
            Entropy => 20_000,
            Lenstra | Bjw => 100,
            Expand => 30,
            _ => 0,
        });
        let k = match (command, self.k, &self.alpha) {
            (Bjw, Some(_), _) => {
                return Err(Error::InvalidConfig("bjw concerns the regular continued fraction".into()))
            }
            (Bjw, None, _) => None,
            (Legendre | Count | T0, None, _) => Some(3),
            (_, None, None) => Some(3),
            (_, k, _) => k,
        };
        if matches!(command, Legendre | Count | T0) && self.alpha.is_some() {
            return Err(Error::InvalidConfig(format!("{} needs a Hecke index, not alpha", command.name())));
        }
        let t_default = match command {
            Count => Some("0.1,0.25,0.4"),
            Lenstra | Bjw => Some("0.001:1"),
            _ => None,
        };
        let cfg = RunConfig {
            command,
            k,
            alpha: if command == Bjw { Some("1".into()) } else { self.alpha.clone() },
            x: self.x.clone(),
            samples,
            iters,
            seed: self.seed,
            precision_bits: self.precision_bits,
            t_grid: match self.t_grid.as_deref().or(t_default) {
                Some(s) => parse_grid(s)?,
                None => Vec::new(),
            },
            c_grid: match &self.c_grid {
                Some(s) => parse_grid(s)?,
                None => Vec::new(),
            },
            n_grid: match &self.n_grid {
                Some(s) => s
                    .split(',')
                    .map(|v| v.trim().parse::<u64>().map_err(|_| Error::InvalidConfig(format!("bad N value {v:?}"))))
                    .collect::<Result<_>>()?,
                None if command == Count => vec![10, 100, 1000, 10_000],
                None => Vec::new(),
            },
            tol: self.tol.unwrap_or(BREAK_TOL),
            q_bound: self.q_bound.unwrap_or(200),
            seed_mode: self.seed_mode.unwrap_or_default(),
            max_digit: self.max_digit.unwrap_or(8),
            probe_bound: self.probe_bound.unwrap_or(20),
            format: self.format,
            output: self.output.clone(),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        use Command::*;
        if matches!(self.command, Entropy | Lenstra | Bjw | Legendre | Count) && self.samples == 0 {
            return Err(Error::InvalidConfig("samples must be positive".into()));
        }
        if matches!(self.command, Entropy | Lenstra | Bjw | Expand) && self.iters == 0 {
            return Err(Error::InvalidConfig("iters must be positive".into()));
        }
        if self.command == Expand && self.x.is_none() {
            return Err(Error::InvalidConfig("expand needs --x".into()));
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(Error::InvalidConfig("tol must be positive".into()));
        }
        if self.precision_bits < 64 {
            return Err(Error::InvalidConfig("precision_bits must be at least 64".into()));
        }
        if let Some(k) = self.k {
            HeckeIndex::new(k)?;
        }
        Ok(())
    }

    /// The family selected by k or alpha, with the configured precision cap.
    pub fn family(&self) -> Result<Family> {
        match &self.alpha {
            Some(a) => match Family::alpha_from_str(a)? {
                Family::Alpha { num, den, .. } => {
                    let ring = LambdaRing::with_precision_cap(HeckeIndex::new(3)?, self.precision_bits);
                    Ok(Family::Alpha { ring, num, den })
                }
                f => Ok(f),
            },
            None => {
                let k = HeckeIndex::new(self.k.unwrap_or(3))?;
                Ok(Family::Rosen(LambdaRing::with_precision_cap(k, self.precision_bits)))
            }
        }
    }

    fn exact_grid(&self, ring: &LambdaRing, grid: &[String]) -> Result<Vec<LambdaRational>> {
        grid.iter().map(|s| LambdaRational::parse(ring, s)).collect()
    }

    fn float_grid(grid: &[String]) -> Result<Vec<f64>> {
        grid.iter()
            .map(|s| s.parse::<f64>().map_err(|_| Error::InvalidConfig(format!("bad grid value {s:?}"))))
            .collect()
    }
}

/// Tabular result of a run plus a free-form summary stored in the manifest.
#[derive(Clone, Debug, Default)]
pub struct RunOutput {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Value>>,
    pub summary: Value,
    pub failures: u64,
    /// Short human-readable lines for the terminal.
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub schema_version: u32,
    pub library_version: &'static str,
    pub config: RunConfig,
    pub seed_mixer: &'static str,
    pub wall_time_s: f64,
    pub failures: u64,
    pub valid: bool,
    pub exit_code: i32,
    pub error: Option<String>,
    pub targets: Option<ConstantsTarget>,
    pub summary: Value,
}

fn num(v: f64) -> Value {
    serde_json::Number::from_f64(v).map(Value::Number).unwrap_or_else(|| Value::String(v.to_string()))
}

fn header(cols: &[&str]) -> Vec<String> {
    cols.iter().map(|s| s.to_string()).collect()
}

/// Execute a resolved configuration.
pub fn execute(cfg: &RunConfig) -> Result<RunOutput> {
    let family = cfg.family()?;
    let ring = family.ring().clone();
    match cfg.command {
        Command::Expand => {
            let x = LambdaRational::parse(&ring, cfg.x.as_deref().expect("validated"))?;
            let e = expand(&family, &x, cfg.iters)?;
            let mut rows = Vec::new();
            for n in 1..=e.len() {
                let (p, q) = &e.convergents[n];
                rows.push(vec![
                    json!(n),
                    json!(e.digits[n - 1].to_string()),
                    json!(p.to_string()),
                    json!(q.to_string()),
                    num(e.theta(n, 64)?.to_f64()),
                ]);
            }
            Ok(RunOutput {
                header: header(&["n", "digit", "p", "q", "theta"]),
                rows,
                summary: json!({
                    "digits": e.digit_string(),
                    "convergents": e.convergent_string(),
                    "terminated": e.terminated,
                    "truncated": e.truncated,
                }),
                failures: e.truncated as u64,
                notes: vec![format!("digits: {}", e.digit_string()), format!("convergents: {}", e.convergent_string())],
            })
        }
        Command::Entropy => {
            let est = entropy_estimate(&family, cfg.samples, cfg.iters, cfg.seed)?;
            let target = ConstantsTarget::for_family(&family).map(|t| t.entropy_target);
            let mut notes = vec![format!("h_hat = {} ± {}", est.h_hat, est.stderr)];
            if let Family::Rosen(r) = &family {
                let k = r.k().value();
                if k % 2 == 1 && k > 3 {
                    notes.push(format!("the odd-k closed form is not confirmed by simulation for k = {k}; treat the target as unverified"));
                }
            }
            Ok(RunOutput {
                header: header(&["family", "n", "samples", "h_hat", "stderr", "target"]),
                rows: vec![vec![
                    json!(est.family),
                    json!(est.n),
                    json!(est.values.len()),
                    num(est.h_hat),
                    num(est.stderr),
                    target.map_or(Value::Null, num),
                ]],
                summary: json!({ "h_hat": est.h_hat, "stderr": est.stderr, "values": est.values }),
                failures: est.failures,
                notes,
            })
        }
        Command::Lenstra | Command::Bjw => {
            let grid = RunConfig::float_grid(&cfg.t_grid)?;
            let cdf = theta_cdf(&family, cfg.samples, cfg.iters, cfg.seed, &grid)?;
            if cfg.command == Command::Bjw {
                let rows = bjw_check_from(&cdf);
                let max_dev = rows.iter().map(|r| (r.1 - r.2).abs()).fold(0.0, f64::max);
                return Ok(RunOutput {
                    header: header(&["t", "empirical", "f", "deviation"]),
                    rows: rows.iter().map(|&(t, e, f)| vec![num(t), num(e), num(f), num(e - f)]).collect(),
                    summary: json!({ "max_deviation": max_dev, "sample_count": cdf.sample_count }),
                    failures: cdf.failures,
                    notes: vec![format!("max |empirical − F| = {max_dev}")],
                });
            }
            let bp = lenstra_breakpoint(&cdf, cfg.tol);
            let (summary, note) = match &bp {
                Ok(b) => (
                    json!({ "t_star": b.t_star, "slope": b.slope, "sample_count": cdf.sample_count, "max_theta": cdf.max_theta }),
                    format!("t* = {}, slope = {}", b.t_star, b.slope),
                ),
                Err(e) => (json!({ "t_star": null, "error": e.to_string() }), format!("no breakpoint: {e}")),
            };
            let slope = bp.as_ref().map(|b| b.slope).unwrap_or(f64::NAN);
            Ok(RunOutput {
                header: header(&["t", "mass", "fit"]),
                rows: cdf.t_grid.iter().zip(&cdf.mass).map(|(&t, &m)| vec![num(t), num(m), num(slope * t)]).collect(),
                summary,
                failures: cdf.failures,
                notes: vec![note],
            })
        }
        Command::Legendre => {
            let target = ConstantsTarget::rosen(ring.k().value()).lenstra_target;
            let c_grid = if cfg.c_grid.is_empty() {
                vec![LambdaRational::from_f64(&ring, 0.9 * target)?, LambdaRational::from_f64(&ring, 1.15 * target)?]
            } else {
                cfg.exact_grid(&ring, &cfg.c_grid)?
            };
            let mode = match cfg.seed_mode {
                SeedKind::Uniform => SeedMode::Uniform,
                SeedKind::Leading => SeedMode::LeadingDigit { max_digit: cfg.max_digit },
            };
            let rep = legendre_scan(&family, &c_grid, cfg.q_bound, cfg.samples, cfg.seed, mode)?;
            Ok(RunOutput {
                header: header(&["c", "violations", "witnesses_stored"]),
                rows: rep.rows.iter().map(|r| vec![num(r.c), json!(r.violations), json!(r.witnesses.len())]).collect(),
                notes: rep.rows.iter().map(|r| format!("c = {}: {} violations", r.c, r.violations)).collect(),
                summary: serde_json::to_value(&rep).expect("serializable"),
                failures: rep.undecided,
            })
        }
        Command::Count => {
            let k = ring.k().value();
            let t_grid = cfg.exact_grid(&ring, &cfg.t_grid)?;
            let xs: Vec<LambdaRational> = match &cfg.x {
                Some(s) => vec![LambdaRational::parse(&ring, s)?],
                None => (0..cfg.samples).map(|i| sample_point(&family, cfg.seed, i, 256)).collect(),
            };
            let mut rows = Vec::new();
            let mut undecided = 0;
            let mut sums = vec![vec![0.0; cfg.n_grid.len()]; t_grid.len()];
            let mut complete = true;
            for (xi, x) in xs.iter().enumerate() {
                let rep = count_solutions(k, x, &t_grid, &cfg.n_grid)?;
                complete &= rep.complete;
                for (i, &t) in rep.t_grid.iter().enumerate() {
                    for (j, &n) in rep.n_grid.iter().enumerate() {
                        let c = rep.counts[i][j];
                        undecided += !c.is_exact() as u64;
                        sums[i][j] += rep.slope_estimate[i][j];
                        rows.push(vec![
                            json!(xi),
                            num(x.to_f64()),
                            num(t),
                            json!(n),
                            json!(c.lo),
                            json!(c.hi),
                            num(rep.slope_estimate[i][j]),
                            num(rep.target_slope[i]),
                            json!(rep.beyond_t0[i]),
                        ]);
                    }
                }
            }
            if !complete {
                return Err(Error::Budget("candidate search exceeded its node budget".into()));
            }
            let target = ConstantsTarget::rosen(k);
            let means: Vec<Value> = t_grid
                .iter()
                .zip(&sums)
                .map(|(t, row)| {
                    let tf = t.to_f64();
                    json!({
                        "t": tf,
                        "mean_slope": row.iter().map(|s| s / xs.len() as f64).collect::<Vec<_>>(),
                        "target_slope": target.count_slope(tf),
                    })
                })
                .collect();
            Ok(RunOutput {
                header: header(&[
                    "x_index",
                    "x",
                    "t",
                    "n",
                    "count_lo",
                    "count_hi",
                    "slope_estimate",
                    "target_slope",
                    "beyond_t0",
                ]),
                rows,
                notes: means.iter().map(|m| m.to_string()).collect(),
                summary: json!({ "t0": 0.5, "n_grid": cfg.n_grid, "means": means }),
                failures: undecided,
            })
        }
        Command::T0 => {
            let rep = compute_t0(ring.k().value(), cfg.probe_bound)?;
            Ok(RunOutput {
                header: header(&["k", "t0", "min_abs_c", "probe_bound", "elements_checked", "below_one"]),
                rows: vec![vec![
                    json!(rep.k),
                    num(rep.t0),
                    num(rep.min_abs_c),
                    json!(rep.probe_bound),
                    json!(rep.elements_checked),
                    json!(rep.below_one),
                ]],
                notes: vec![format!("t0 = {}", rep.t0)],
                summary: serde_json::to_value(&rep).expect("serializable"),
                failures: 0,
            })
        }
    }
}

fn bjw_check_from(cdf: &crate::lab::cdf::EmpiricalCdf) -> Vec<(f64, f64, f64)> {
    cdf.t_grid.iter().zip(&cdf.mass).map(|(&t, &e)| (t, e, crate::lab::constants::bjw_cdf(t))).collect()
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// Render rows as CSV with a header row.
pub fn to_csv(out: &RunOutput) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::InvalidConfig(format!("csv: {e}"));
    w.write_record(&out.header).map_err(io)?;
    for r in &out.rows {
        w.write_record(r.iter().map(cell)).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::InvalidConfig(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("utf-8"))
}

/// Render rows as a JSON object with "manifest" and "rows".
pub fn to_json(out: &RunOutput, manifest: &RunManifest) -> String {
    let rows: Vec<Value> =
        out.rows.iter().map(|r| Value::Object(out.header.iter().cloned().zip(r.iter().cloned()).collect())).collect();
    serde_json::to_string_pretty(&json!({ "manifest": manifest, "rows": rows })).expect("serializable")
}

/// Where results go: an explicit path, or `<ROSEN_OUTPUT_DIR>/<command>.<ext>`.
pub fn output_path(cfg: &RunConfig) -> Option<PathBuf> {
    let ext = match cfg.format {
        OutputFormat::Csv => "csv",
        OutputFormat::Json => "json",
    };
    cfg.output.clone().or_else(|| {
        std::env::var_os(OUTPUT_DIR_ENV).map(|d| Path::new(&d).join(format!("{}.{ext}", cfg.command.name())))
    })
}

fn manifest_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

/// Result of [`run`]: the exit code and the manifest written for it.
#[derive(Clone, Debug)]
pub struct RunResult {
    pub exit_code: i32,
    pub manifest: RunManifest,
    pub output: Option<RunOutput>,
    pub rendered: Option<String>,
}

/// Run a configuration, write results and manifest, and return the exit code.
pub fn run(cfg: &RunConfig) -> RunResult {
    let start = Instant::now();
    let result = execute(cfg);
    let targets = cfg.family().ok().and_then(|f| ConstantsTarget::for_family(&f));
    let (exit_code, error, failures, summary) = match &result {
        Ok(o) => (0, None, o.failures, o.summary.clone()),
        Err(e) => (e.exit_code(), Some(e.to_string()), 0, Value::Null),
    };
    let manifest = RunManifest {
        schema_version: SCHEMA_VERSION,
        library_version: env!("CARGO_PKG_VERSION"),
        config: cfg.clone(),
        seed_mixer: SEED_MIXER,
        wall_time_s: start.elapsed().as_secs_f64(),
        failures,
        valid: result.is_ok(),
        exit_code,
        error,
        targets,
        summary,
    };
    let output = result.ok();
    let rendered = output.as_ref().map(|o| match cfg.format {
        OutputFormat::Csv => to_csv(o).unwrap_or_default(),
        OutputFormat::Json => to_json(o, &manifest),
    });
    RunResult { exit_code, manifest, output, rendered }
}

/// Write a run's artifacts; with no output path the data goes to `stdout`.
pub fn write_artifacts(cfg: &RunConfig, res: &RunResult, stdout: &mut dyn Write) -> std::io::Result<Option<PathBuf>> {
    let manifest = serde_json::to_string_pretty(&res.manifest).expect("serializable");
    match output_path(cfg) {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir)?;
            }
            if let Some(r) = &res.rendered {
                std::fs::write(&path, r)?;
            }
            std::fs::write(manifest_path(&path), manifest + "\n")?;
            Ok(Some(path))
        }
        None => {
            if let Some(r) = &res.rendered {
                stdout.write_all(r.as_bytes())?;
            }
            Ok(None)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args() -> RunArgs {
        RunArgs { seed: 7, precision_bits: DEFAULT_PRECISION_CAP, ..RunArgs::default() }
    }

    #[test]
    fn grids() {
        assert_eq!(parse_grid("0.25:1").unwrap(), vec!["0.25", "0.50", "0.75", "1.00"]);
        assert_eq!(parse_grid("0.1, 0.3").unwrap(), vec!["0.1", "0.3"]);
        assert!(parse_grid("").is_err());
        assert!(parse_grid("0:1").is_err());
    }

    #[test]
    fn expand_worked_example() {
        let cfg = RunArgs { k: Some(3), x: Some("0.4".into()), ..args() }.resolve(Command::Expand).unwrap();
        let r = run(&cfg);
        assert_eq!(r.exit_code, 0);
        let s = &r.manifest.summary;
        assert_eq!(s["digits"], "+3,-2");
        assert_eq!(s["convergents"], "1/3, 2/5");
        let csv = r.rendered.unwrap();
        assert!(csv.starts_with("n,digit,p,q,theta\n1,+3,1,3,0.6\n"), "{csv}");
    }

    #[test]
    fn invalid_configs_exit_2() {
        let e = RunArgs { samples: Some(0), ..args() }.resolve(Command::Bjw).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert!(RunArgs { k: Some(2), ..args() }.resolve(Command::Entropy).is_err());
        assert!(RunArgs::default().resolve(Command::Expand).is_err());
        let cfg = RunArgs { k: Some(3), x: Some("0.9".into()), ..args() }.resolve(Command::Expand).unwrap();
        assert_eq!(run(&cfg).exit_code, 2);
    }

    #[test]
    fn deterministic_csv() {
        let cfg = RunArgs { k: Some(4), samples: Some(30), iters: Some(40), t_grid: Some("0.05:1".into()), ..args() }
            .resolve(Command::Lenstra)
            .unwrap();
        let a = run(&cfg).rendered.unwrap();
        let b = run(&cfg).rendered.unwrap();
        assert_eq!(a, b);
        assert_eq!(a.lines().count(), 21);
    }

    #[test]
    fn json_has_manifest_and_rows() {
        let cfg = RunArgs { k: Some(5), probe_bound: Some(6), format: OutputFormat::Json, ..args() }
            .resolve(Command::T0)
            .unwrap();
        let r = run(&cfg);
        let v: Value = serde_json::from_str(r.rendered.as_ref().unwrap()).unwrap();
        assert_eq!(v["rows"][0]["t0"], 0.5);
        assert_eq!(v["manifest"]["schema_version"], SCHEMA_VERSION);
        assert_eq!(v["manifest"]["seed_mixer"], SEED_MIXER);
        assert_eq!(v["manifest"]["config"]["command"], "t0");
    }
}
