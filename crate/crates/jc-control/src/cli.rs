//! Batch front-end for the library: the `jcctl` binary.
//!
//! Subcommands map 1:1 to library capabilities — `spectrum`, `singular`,
//! `certify`, `propagate`, `scan` — with CSV or JSON output suitable for
//! external plotting. Every number a subcommand prints is reproducible by a
//! direct library call; no math lives here.
//!
//! Exit codes: 0 success (and `certify` with a clean verdict), 2 resonance
//! found, 3 coupling broken, 64 usage/configuration errors, 1 runtime
//! failures (I/O).
//!
//! Configuration: flags may be preloaded from a `--config` file with one
//! `key=value` per line ('#' starts a comment); explicit flags override the
//! file. Numeric output uses 17 significant digits so golden files are
//! byte-stable.

use std::collections::HashMap;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::chain::{self, Verdict};
use crate::coupling;
use crate::dynamics::{self, ControlKind, PiecewiseControl, StateVector};
use crate::error::{Error, Result};
use crate::model::{self, Labeling, LevelIndex, ModelParams, Sign};
use crate::resonance;

pub const SCHEMA_VERSION: u32 = 1;

/// Exit codes of the `jcctl` binary.
pub const EXIT_OK: i32 = 0;
pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_RESONANCE: i32 = 2;
pub const EXIT_COUPLING_BROKEN: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

/// Full round-trip precision so identical configs give byte-identical files.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "jcctl", version, about = "Spectral, coupling, and resonance analysis of the driven Jaynes-Cummings model")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Closed-form spectrum vs the dense-diagonalization oracle.
    Spectrum(Opts),
    /// Enumerate the singular coupling values in [0, g-max].
    Singular(Opts),
    /// Certify the non-resonant chain at a given coupling (JSON report).
    Certify(Opts),
    /// Propagate a piecewise-constant control schedule (CSV time series).
    Propagate(Opts),
    /// Sweep g and report the nearest resonance gap and verdict per point.
    Scan(Opts),
}

/// One flat option set shared by all subcommands; unset options fall back
/// to the config file, then to defaults.
#[derive(Debug, Clone, Default, Args)]
struct Opts {
    /// Oscillator frequency ω > 0.
    #[arg(long)]
    omega: Option<f64>,
    /// Two-level splitting Ω > 0.
    #[arg(long = "Omega")]
    capital_omega: Option<f64>,
    /// Coupling constant g.
    #[arg(long)]
    g: Option<f64>,
    /// Largest dressed-level index n.
    #[arg(long = "n-max")]
    n_max: Option<i32>,
    /// Fock-space cutoff for the dynamics engine.
    #[arg(long = "n-fock")]
    n_fock: Option<i32>,
    /// Frequency-coincidence tolerance (default 1e-9·ω).
    #[arg(long)]
    tol: Option<f64>,
    /// Upper end of the singular-set / sweep range.
    #[arg(long = "g-max")]
    g_max: Option<f64>,
    /// Lower end of the sweep range (scan only).
    #[arg(long = "g-min")]
    g_min: Option<f64>,
    /// Sweep step (scan only).
    #[arg(long = "g-step")]
    g_step: Option<f64>,
    /// Index cap for the singular-set enumeration.
    #[arg(long = "n-cap")]
    n_cap: Option<i32>,
    /// Output format (default csv; certify is always json).
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    /// Output path (default stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also list the benign level crossings (singular only).
    #[arg(long = "include-benign")]
    include_benign: bool,
    /// Schedule file: one "duration u1 u2" segment per line.
    #[arg(long)]
    schedule: Option<PathBuf>,
    /// Initial state, "dressed:N,NU" or "bare:N,up|down" (default dressed:0,+).
    #[arg(long)]
    initial: Option<String>,
    /// Target state for the fidelity column, same syntax as --initial.
    #[arg(long)]
    target: Option<String>,
    /// Config file with one key=value per line; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
}

/// Options after merging the config file under the explicit flags.
struct Resolved {
    opts: Opts,
}

impl Resolved {
    fn new(mut opts: Opts) -> Result<Self> {
        if let Some(path) = &opts.config {
            let text = std::fs::read_to_string(path)?;
            let file = parse_config_file(&text)?;
            let get = |key: &str| file.get(key).cloned();
            let parse_f64 = |key: &str| -> Result<Option<f64>> {
                get(key)
                    .map(|v| v.parse::<f64>().map_err(|_| Error::Parse(format!("config key {key}: bad number {v:?}"))))
                    .transpose()
            };
            let parse_i32 = |key: &str| -> Result<Option<i32>> {
                get(key)
                    .map(|v| v.parse::<i32>().map_err(|_| Error::Parse(format!("config key {key}: bad integer {v:?}"))))
                    .transpose()
            };
            opts.omega = opts.omega.or(parse_f64("omega")?);
            opts.capital_omega = opts.capital_omega.or(parse_f64("Omega")?);
            opts.g = opts.g.or(parse_f64("g")?);
            opts.n_max = opts.n_max.or(parse_i32("n-max")?);
            opts.n_fock = opts.n_fock.or(parse_i32("n-fock")?);
            opts.tol = opts.tol.or(parse_f64("tol")?);
            opts.g_max = opts.g_max.or(parse_f64("g-max")?);
            opts.g_min = opts.g_min.or(parse_f64("g-min")?);
            opts.g_step = opts.g_step.or(parse_f64("g-step")?);
            opts.n_cap = opts.n_cap.or(parse_i32("n-cap")?);
            if opts.format.is_none() {
                opts.format = match get("format").as_deref() {
                    Some("json") => Some(OutputFormat::Json),
                    Some("csv") => Some(OutputFormat::Csv),
                    Some(other) => return Err(Error::Parse(format!("config key format: expected json or csv, got {other:?}"))),
                    None => None,
                };
            }
            opts.out = opts.out.or_else(|| get("out").map(PathBuf::from));
            if !opts.include_benign {
                opts.include_benign = matches!(get("include-benign").as_deref(), Some("true") | Some("1"));
            }
            opts.schedule = opts.schedule.or_else(|| get("schedule").map(PathBuf::from));
            opts.initial = opts.initial.or(get("initial"));
            opts.target = opts.target.or(get("target"));
        }
        Ok(Self { opts })
    }

    fn params(&self) -> Result<ModelParams> {
        let omega = self.opts.omega.ok_or_else(|| Error::InvalidParams("--omega is required".into()))?;
        let capital_omega = self
            .opts
            .capital_omega
            .ok_or_else(|| Error::InvalidParams("--Omega is required".into()))?;
        ModelParams::new(omega, capital_omega, self.opts.g.unwrap_or(0.0))
    }

    fn tol(&self, omega: f64) -> f64 {
        self.opts.tol.unwrap_or(1e-9 * omega)
    }

    fn format(&self, default: OutputFormat) -> OutputFormat {
        self.opts.format.unwrap_or(default)
    }

    fn write(&self, content: &str) -> Result<()> {
        match &self.opts.out {
            Some(path) => std::fs::write(path, content)?,
            None => {
                std::io::stdout().write_all(content.as_bytes())?;
            }
        }
        Ok(())
    }
}

fn parse_config_file(text: &str) -> Result<HashMap<String, String>> {
    let mut map = HashMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("config line {}: expected key=value, got {raw:?}", lineno + 1)))?;
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

/// Parse "dressed:N,NU" / "bare:N,up|down" into a state on the truncation.
fn parse_state(spec: &str, params: &ModelParams, n_fock: i32) -> Result<StateVector> {
    let (kind, rest) = spec
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("state spec {spec:?}: expected 'dressed:N,NU' or 'bare:N,up|down'")))?;
    let (n_str, label) = rest
        .split_once(',')
        .ok_or_else(|| Error::Parse(format!("state spec {spec:?}: missing ',' separator")))?;
    let n: i32 = n_str
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("state spec {spec:?}: bad level index {n_str:?}")))?;
    match kind.trim() {
        "dressed" => {
            let nu: Sign = label.trim().parse()?;
            StateVector::dressed_state(params, n_fock, LevelIndex::new(n, nu)?)
        }
        "bare" => {
            let spin = match label.trim() {
                "up" => Sign::Plus,
                "down" => Sign::Minus,
                other => return Err(Error::Parse(format!("state spec {spec:?}: expected up|down, got {other:?}"))),
            };
            StateVector::basis_state(n_fock, n, spin)
        }
        other => Err(Error::Parse(format!("state spec {spec:?}: unknown kind {other:?}"))),
    }
}

// ---------------------------------------------------------------------------
// subcommands
// ---------------------------------------------------------------------------

#[derive(Debug, serde::Serialize)]
struct SpectrumRow {
    n: i32,
    nu: Sign,
    energy_analytic: f64,
    energy_oracle: f64,
    abs_diff: f64,
}

fn cmd_spectrum(r: &Resolved) -> Result<i32> {
    let params = r.params()?;
    let n_max = r.opts.n_max.unwrap_or(20);
    if n_max < 0 {
        return Err(Error::Domain(format!("n-max must be >= 0, got {n_max}")));
    }
    // blocks with n ≤ n_max are exact once n_fock ≥ n_max + 1
    let h = dynamics::build_jc(&params, n_max + 2)?;
    let eig = nalgebra::SymmetricEigen::new(h.matrix().clone());
    let evals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    let nearest = |target: f64| -> f64 {
        evals
            .iter()
            .copied()
            .min_by(|a, b| (a - target).abs().total_cmp(&(b - target).abs()))
            .expect("spectrum is nonempty")
    };

    let mut rows = Vec::new();
    let mut levels = vec![LevelIndex::spurious(&params)];
    for n in 0..=n_max {
        levels.push(LevelIndex::new(n, Sign::Minus)?);
        levels.push(LevelIndex::new(n, Sign::Plus)?);
    }
    for level in levels {
        let analytic = model::energy(&params, level, Labeling::Magnitude)?;
        let oracle = nearest(analytic);
        rows.push(SpectrumRow {
            n: level.n,
            nu: level.nu,
            energy_analytic: analytic,
            energy_oracle: oracle,
            abs_diff: (analytic - oracle).abs(),
        });
    }

    match r.format(OutputFormat::Csv) {
        OutputFormat::Csv => {
            let mut out = String::from("n,nu,energy_analytic,energy_oracle,abs_diff\n");
            for row in &rows {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    row.n,
                    row.nu,
                    num(row.energy_analytic),
                    num(row.energy_oracle),
                    num(row.abs_diff)
                ));
            }
            r.write(&out)?;
        }
        OutputFormat::Json => {
            let doc = serde_json::json!({
                "schema_version": SCHEMA_VERSION,
                "omega": params.omega(),
                "Omega": params.capital_omega(),
                "g": params.g(),
                "n_max": n_max,
                "rows": rows,
            });
            r.write(&format!("{}\n", serde_json::to_string_pretty(&doc).expect("spectrum document serializes")))?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_singular(r: &Resolved) -> Result<i32> {
    let params = r.params()?;
    let g_max = r.opts.g_max.unwrap_or(2.0);
    let n_cap = r.opts.n_cap.unwrap_or(40);
    let enumeration = resonance::enumerate_singular(params.omega(), params.capital_omega(), g_max, n_cap)?;
    let benign = if r.opts.include_benign {
        resonance::benign_crossings(params.omega(), params.capital_omega(), g_max, n_cap)?
    } else {
        Vec::new()
    };

    match r.format(OutputFormat::Csv) {
        OutputFormat::Csv => {
            let mut out = String::from("kind,g_star,family,m,n,nu,residual\n");
            let cell = |v: Option<i32>| v.map(|x| x.to_string()).unwrap_or_default();
            for p in &enumeration.points {
                for t in &p.tags {
                    out.push_str(&format!(
                        "singular,{},{:?},{},{},{},{}\n",
                        num(p.g_star),
                        t.family,
                        cell(t.m),
                        cell(t.n),
                        t.nu.map(|s| s.to_string()).unwrap_or_default(),
                        num(t.residual)
                    ));
                }
            }
            for (g, level) in &benign {
                out.push_str(&format!("benign,{},Crossing,,{},{},0\n", num(*g), level.n, level.nu));
            }
            r.write(&out)?;
        }
        OutputFormat::Json => {
            let benign_rows: Vec<_> = benign
                .iter()
                .map(|(g, l)| serde_json::json!({ "g_star": g, "n": l.n, "nu": l.nu }))
                .collect();
            let doc = serde_json::json!({
                "schema_version": SCHEMA_VERSION,
                "omega": params.omega(),
                "Omega": params.capital_omega(),
                "g_max": g_max,
                "n_cap": n_cap,
                "may_truncate": enumeration.may_truncate,
                "points": enumeration.points,
                "benign_crossings": benign_rows,
            });
            r.write(&format!("{}\n", serde_json::to_string_pretty(&doc).expect("singular document serializes")))?;
        }
    }
    Ok(EXIT_OK)
}

fn verdict_exit_code(verdict: Verdict) -> i32 {
    match verdict {
        Verdict::CertifiedNonResonant => EXIT_OK,
        Verdict::ResonanceFound => EXIT_RESONANCE,
        Verdict::CouplingBroken => EXIT_COUPLING_BROKEN,
    }
}

fn cmd_certify(r: &Resolved) -> Result<i32> {
    let params = r.params()?;
    if r.opts.g.is_none() {
        return Err(Error::InvalidParams("--g is required for certify".into()));
    }
    let n_max = r.opts.n_max.unwrap_or(20);
    let report = chain::certify(&params, n_max, r.tol(params.omega()), chain::DEFAULT_THRESHOLD)?;
    r.write(&format!("{}\n", serde_json::to_string_pretty(&report).expect("chain report serializes")))?;
    Ok(verdict_exit_code(report.verdict))
}

fn cmd_propagate(r: &Resolved) -> Result<i32> {
    let params = r.params()?;
    let n_fock = r.opts.n_fock.unwrap_or(30);
    let schedule = match &r.opts.schedule {
        Some(path) => PiecewiseControl::parse(&std::fs::read_to_string(path)?)?,
        None => PiecewiseControl::default(),
    };
    let initial_spec = r.opts.initial.as_deref().unwrap_or("dressed:0,+");
    let psi0 = parse_state(initial_spec, &params, n_fock)?;
    let target = r.opts.target.as_deref().map(|s| parse_state(s, &params, n_fock)).transpose()?;
    let reference = target.as_ref().unwrap_or(&psi0);

    let h = dynamics::build_jc(&params, n_fock)?;
    let h1 = dynamics::build_control(ControlKind::X, n_fock)?;
    let h2 = dynamics::build_control(ControlKind::P, n_fock)?;
    let run = dynamics::propagate(&h, (&h1, &h2), &schedule, &psi0)?;

    let max_block = 6.min(n_fock - 1);
    let mut out = String::from("t");
    for b in -1..=max_block {
        out.push_str(&format!(",block_pop_{b}"));
    }
    out.push_str(",norm_defect,fidelity\n");
    for (i, (t, state)) in run.trajectory.iter().enumerate() {
        let defect = if i == 0 { 0.0 } else { run.unitarity_defects[i - 1] };
        out.push_str(&num(*t));
        for b in -1..=max_block {
            out.push_str(&format!(",{}", num(state.block_population(b)?)));
        }
        out.push_str(&format!(",{},{}\n", num(defect), num(dynamics::fidelity(state, reference)?)));
    }
    r.write(&out)?;
    Ok(EXIT_OK)
}

/// Smallest |Δfreq| between a chain edge and any other coupled pair — the
/// quantity whose dips locate the resonance points in a sweep.
fn min_conflict_gap(params: &ModelParams, n_max: i32) -> Result<f64> {
    let chain_edges = chain::build_c0(params, n_max)?;
    let coupled = coupling::coupled_pairs(params, n_max, 0.0)?;
    let mut min_gap = f64::INFINITY;
    for ce in &chain_edges {
        for other in &coupled {
            if ce.same_pair(other) {
                continue;
            }
            min_gap = min_gap.min((ce.freq - other.freq).abs());
        }
    }
    Ok(min_gap)
}

fn cmd_scan(r: &Resolved) -> Result<i32> {
    let params0 = r.params()?;
    let g_min = r.opts.g_min.unwrap_or(0.05);
    let g_max = r.opts.g_max.unwrap_or(1.1);
    let step = r.opts.g_step.unwrap_or(1e-3);
    if !(step > 0.0) || g_max < g_min {
        return Err(Error::Domain(format!(
            "need g-step > 0 and g-max >= g-min, got step={step}, range [{g_min}, {g_max}]"
        )));
    }
    let n_max = r.opts.n_max.unwrap_or(15);
    let tol = r.tol(params0.omega());

    let mut out = String::from("g,min_delta_freq,verdict\n");
    let steps = ((g_max - g_min) / step).round() as i64;
    for k in 0..=steps {
        let g = g_min + step * k as f64;
        if g > g_max + 0.5 * step {
            break;
        }
        let params = params0.with_g(g)?;
        let gap = min_conflict_gap(&params, n_max)?;
        let report = chain::certify(&params, n_max, tol, chain::DEFAULT_THRESHOLD)?;
        out.push_str(&format!("{},{},{:?}\n", num(g), num(gap), report.verdict));
    }
    r.write(&out)?;
    Ok(EXIT_OK)
}

// ---------------------------------------------------------------------------
// entry point
// ---------------------------------------------------------------------------

fn error_exit_code(err: &Error) -> i32 {
    match err {
        Error::Io(_) => EXIT_RUNTIME,
        _ => EXIT_USAGE,
    }
}

/// Run the CLI on the given argument list; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap handles --help/--version as "errors" with exit code 0
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let (opts, exec): (Opts, fn(&Resolved) -> Result<i32>) = match cli.cmd {
        Cmd::Spectrum(o) => (o, cmd_spectrum),
        Cmd::Singular(o) => (o, cmd_singular),
        Cmd::Certify(o) => (o, cmd_certify),
        Cmd::Propagate(o) => (o, cmd_propagate),
        Cmd::Scan(o) => (o, cmd_scan),
    };
    match Resolved::new(opts).and_then(|r| exec(&r)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("jcctl: error: {e}");
            error_exit_code(&e)
        }
    }
}
