//! Command-line front end.
//!
//! Angles are degrees at this boundary and radians everywhere else. Every
//! output carries a metadata preamble whose `command` entry re-runs the job.
//! Exit codes: 0 success, 1 I/O or environment failure, 2 usage or
//! validation error.

pub mod output;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::analytics::{chsh, correlation_from_counts, offset_peak_ratio};
use crate::error::Error;
use crate::experiments::{
    aspect_probabilities, point_seed, sweep, Curve, Diagonal, Engine, KimDetector, SweepSettings,
    TripleSettings,
};
use crate::mc_engine::{
    detection_rate, detection_rate_analytic, run_double_coincidence, McConfig, RNG_ALGORITHM,
};
use crate::optics::PolarizerSetting;
use crate::sources::{correlation_analytic, SourceModel};

pub use output::{emit_table, format_significant, parse_csv, render, Format, MetaValue, Report, Row};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

const TOOL: &str = "eprsim";

#[derive(Debug, Parser)]
#[command(
    name = "eprsim",
    version,
    about = "Entangled vs. disentangled photon-pair coincidence experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Double coincidences at polarizers a and b.
    Aspect(AspectArgs),
    /// Triple-coincidence teleportation curve vs. Bob's phase β.
    Gisin(GisinArgs),
    /// Teleportation rates for ±45° inputs and detectors.
    Zeilinger(ZeilingerArgs),
    /// Complete Bell-state measurement curve vs. analyzer angle φ.
    Kim(KimArgs),
    /// CHSH value from four double-coincidence correlations.
    Chsh(ChshArgs),
    /// Phase-matching detection rate of the disentangled ensemble.
    Rate(RateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModelArg {
    Entangled,
    Disentangled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EngineArg {
    Analytic,
    Montecarlo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DetectorArg {
    #[value(name = "I")]
    I,
    #[value(name = "II")]
    II,
}

#[derive(Debug, Clone, Args)]
struct Common {
    #[arg(long, value_enum, default_value_t = ModelArg::Entangled)]
    model: ModelArg,
    #[arg(long, value_enum, default_value_t = EngineArg::Analytic)]
    engine: EngineArg,
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 8)]
    streams: usize,
    /// Phase-matching half-width in degrees (disabled when absent).
    #[arg(long = "phase-window", value_name = "DEG")]
    phase_window: Option<f64>,
    #[arg(long = "accidental-rate", default_value_t = 0.0)]
    accidental_rate: f64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    /// Flat key=value file mirroring the flags; flags take precedence.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
#[command(args_override_self = true)]
struct AspectArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true, value_name = "DEG")]
    a: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true, value_name = "DEG")]
    b: f64,
}

#[derive(Debug, Clone, Args)]
#[command(args_override_self = true)]
struct GisinArgs {
    #[command(flatten)]
    common: Common,
    /// START:STOP:N in degrees (STOP excluded) or a preset name.
    #[arg(long, default_value = "gisin-figure1", allow_hyphen_values = true)]
    grid: String,
    #[arg(long, default_value_t = std::f64::consts::FRAC_1_SQRT_2, allow_negative_numbers = true)]
    a0: f64,
    #[arg(long, default_value_t = std::f64::consts::FRAC_1_SQRT_2, allow_negative_numbers = true)]
    a1: f64,
}

#[derive(Debug, Clone, Args)]
#[command(args_override_self = true)]
struct ZeilingerArgs {
    #[command(flatten)]
    common: Common,
    /// Alice's input polarization, +45 or -45 degrees.
    #[arg(long, default_value_t = 45.0, allow_negative_numbers = true, value_name = "DEG")]
    alice: f64,
    /// Bob's detector angles: START:STOP:N in degrees or a preset name.
    #[arg(long, default_value = "zeilinger-table1", allow_hyphen_values = true)]
    grid: String,
}

#[derive(Debug, Clone, Args)]
#[command(args_override_self = true)]
struct KimArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_enum, default_value_t = DetectorArg::I)]
    detector: DetectorArg,
    #[arg(long, default_value = "kim-figure3", allow_hyphen_values = true)]
    grid: String,
}

#[derive(Debug, Clone, Args)]
#[command(args_override_self = true)]
struct ChshArgs {
    #[command(flatten)]
    common: Common,
    /// a,a',b,b' in degrees.
    #[arg(long, default_value = "0,45,22.5,67.5", allow_hyphen_values = true)]
    angles: String,
}

#[derive(Debug, Clone, Args)]
#[command(args_override_self = true)]
struct RateArgs {
    #[command(flatten)]
    common: Common,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Io(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Consistency(_) => CliError::Io(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

/// A named or `START:STOP:N` grid, in degrees.
fn parse_grid(spec: &str) -> Result<Vec<f64>, CliError> {
    let linear = |start: f64, stop: f64, n: usize| {
        (0..n).map(|i| start + (stop - start) * i as f64 / n as f64).collect::<Vec<_>>()
    };
    match spec {
        "gisin-figure1" | "kim-figure3" => return Ok(linear(0.0, 360.0, 64)),
        "zeilinger-table1" => return Ok(vec![-45.0, 45.0]),
        _ => {}
    }
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = || CliError::Usage(format!("invalid grid {spec:?} (expected START:STOP:N or a preset)"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let start: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let stop: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let n: usize = parts[2].trim().parse().map_err(|_| bad())?;
    if n == 0 || !start.is_finite() || !stop.is_finite() || stop <= start {
        return Err(bad());
    }
    Ok(linear(start, stop, n))
}

fn parse_angles(spec: &str) -> Result<[f64; 4], CliError> {
    let vals: Result<Vec<f64>, _> = spec.split(',').map(|s| s.trim().parse::<f64>()).collect();
    match vals {
        Ok(v) if v.len() == 4 && v.iter().all(|x| x.is_finite()) => Ok([v[0], v[1], v[2], v[3]]),
        _ => Err(CliError::Usage(format!(
            "--angles expects four comma-separated degree values, got {spec:?}"
        ))),
    }
}

/// Reads a flat `key=value` file into `--key value` tokens.
fn config_tokens(path: &Path) -> Result<Vec<OsString>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read config {}: {e}", path.display())))?;
    let mut tokens = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            CliError::Usage(format!("{}:{}: expected key=value", path.display(), lineno + 1))
        })?;
        let key = k.trim();
        if key == "config" {
            return Err(CliError::Usage("config files cannot include other config files".into()));
        }
        tokens.push(OsString::from(format!("--{key}")));
        tokens.push(OsString::from(v.trim()));
    }
    Ok(tokens)
}

/// Splices config-file flags in front of the command-line flags so that the
/// latter win.
fn expand_config(argv: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let mut path = None;
    let mut rest = Vec::with_capacity(argv.len());
    let mut iter = argv.into_iter();
    while let Some(tok) = iter.next() {
        let s = tok.to_string_lossy().into_owned();
        if s == "--config" {
            let p = iter
                .next()
                .ok_or_else(|| CliError::Usage("--config requires a path".into()))?;
            path = Some(PathBuf::from(p));
        } else if let Some(p) = s.strip_prefix("--config=") {
            path = Some(PathBuf::from(p));
        } else {
            rest.push(tok);
        }
    }
    let Some(path) = path else { return Ok(rest) };
    if rest.len() < 2 {
        return Err(CliError::Usage("--config must follow a subcommand".into()));
    }
    let mut out = rest[..2].to_vec();
    out.extend(config_tokens(&path)?);
    out.extend_from_slice(&rest[2..]);
    Ok(out)
}

struct Job {
    model: SourceModel,
    engine: Engine,
    mc: McConfig,
    format: Format,
    out: Option<PathBuf>,
    /// Canonical flags shared by every subcommand.
    common_flags: Vec<String>,
}

fn num(x: f64) -> String {
    format!("{x}")
}

impl Job {
    fn new(c: &Common) -> Result<Self, CliError> {
        let model = match c.model {
            ModelArg::Entangled => SourceModel::entangled(),
            ModelArg::Disentangled => SourceModel::disentangled(),
        };
        let engine = match c.engine {
            EngineArg::Analytic => Engine::Analytic,
            EngineArg::Montecarlo => Engine::MonteCarlo,
        };
        let phase_window = match c.phase_window {
            Some(d) if d.is_nan() || d < 0.0 => {
                return Err(CliError::Usage("--phase-window must be >= 0 degrees".into()))
            }
            Some(d) => d.to_radians(),
            None => f64::INFINITY,
        };
        let mc = McConfig {
            trials: c.trials,
            seed: c.seed,
            phase_window,
            accidental_rate: c.accidental_rate,
            streams: c.streams,
        };
        mc.validate()?;
        let format = match c.format {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        };
        let mut common_flags = vec![
            format!("--model {}", model.label()),
            format!("--engine {}", engine.label()),
        ];
        if engine == Engine::MonteCarlo {
            common_flags.push(format!("--trials {}", c.trials));
            common_flags.push(format!("--seed {}", c.seed));
            common_flags.push(format!("--streams {}", c.streams));
            common_flags.push(format!("--accidental-rate {}", num(c.accidental_rate)));
        }
        if let Some(d) = c.phase_window {
            common_flags.push(format!("--phase-window {}", num(d)));
        }
        common_flags.push(format!(
            "--format {}",
            if format == Format::Csv { "csv" } else { "json" }
        ));
        Ok(Self {
            model,
            engine,
            mc,
            format,
            out: c.out.clone(),
            common_flags,
        })
    }

    fn mc(&self) -> Option<&McConfig> {
        (self.engine == Engine::MonteCarlo).then_some(&self.mc)
    }

    fn report(&self, subcommand: &str, extra_flags: &[String]) -> Report {
        let mut command = vec![TOOL.to_owned(), subcommand.to_owned()];
        command.extend(self.common_flags.iter().cloned());
        command.extend(extra_flags.iter().cloned());
        let mut r = Report::default();
        r.push_meta("tool", format!("{TOOL} {}", env!("CARGO_PKG_VERSION")));
        r.push_meta("command", command.join(" "));
        r.push_meta("experiment", subcommand);
        r.push_meta("model", self.model.label());
        r.push_meta("engine", self.engine.label());
        if self.engine == Engine::MonteCarlo {
            r.push_meta("seed", self.mc.seed);
            r.push_meta("trials", self.mc.trials);
            r.push_meta("streams", self.mc.streams as u64);
            r.push_meta("rng", RNG_ALGORITHM);
        }
        r
    }
}

fn curve_rows(curve: &Curve, grid_deg: &[f64]) -> Vec<Row> {
    curve
        .points()
        .iter()
        .zip(grid_deg)
        .map(|(p, &x)| Row { x, y: p.y, std_err: p.std_err })
        .collect()
}

fn add_curve_summary(r: &mut Report, curve: &Curve, job: &Job, settings: &TripleSettings) {
    let (lo, hi) = curve
        .ys()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), y| (a.min(y), b.max(y)));
    r.push_meta("y_min", lo);
    r.push_meta("y_max", hi);
    if let Ok(ratio) = offset_peak_ratio(curve) {
        r.push_meta("offset_peak_ratio", ratio);
    }
    if job.engine == Engine::MonteCarlo {
        // Largest deviation from the closed form, absolute and in standard errors.
        let mut max_abs: f64 = 0.0;
        let mut max_sigma: f64 = 0.0;
        for p in curve.points() {
            if let Ok(a) = crate::experiments::triple_closed_form(&job.model, &settings.with_x(p.x)) {
                let d = (p.y - a).abs();
                max_abs = max_abs.max(d);
                if let Some(se) = p.std_err.filter(|s| *s > 0.0) {
                    max_sigma = max_sigma.max(d / se);
                }
            }
        }
        r.push_meta("max_abs_deviation_from_closed_form", max_abs);
        r.push_meta("max_sigma_deviation_from_closed_form", max_sigma);
    }
}

fn triple_curve(
    job: &Job,
    subcommand: &str,
    settings: TripleSettings,
    grid_spec: &str,
    extra_flags: Vec<String>,
) -> Result<Report, CliError> {
    let grid_deg = parse_grid(grid_spec)?;
    let grid: Vec<f64> = grid_deg.iter().map(|d| d.to_radians()).collect();
    let curve = sweep(&SweepSettings::Triple(settings), &job.model, &grid, job.engine, job.mc())?;
    let mut r = job.report(subcommand, &extra_flags);
    r.push_meta("grid", grid_spec);
    add_curve_summary(&mut r, &curve, job, &settings);
    r.rows = curve_rows(&curve, &grid_deg);
    Ok(r)
}

fn run_gisin(a: &GisinArgs) -> Result<(Report, Job), CliError> {
    let job = Job::new(&a.common)?;
    let settings = TripleSettings::Gisin { beta: 0.0, a0: a.a0, a1: a.a1 };
    let flags = vec![
        format!("--grid {}", a.grid),
        format!("--a0 {}", num(a.a0)),
        format!("--a1 {}", num(a.a1)),
    ];
    let mut r = triple_curve(&job, "gisin", settings, &a.grid, flags)?;
    r.push_meta("a0", a.a0);
    r.push_meta("a1", a.a1);
    Ok((r, job))
}

fn run_kim(a: &KimArgs) -> Result<(Report, Job), CliError> {
    let job = Job::new(&a.common)?;
    let detector = match a.detector {
        DetectorArg::I => KimDetector::I,
        DetectorArg::II => KimDetector::II,
    };
    let settings = TripleSettings::Kim { detector, phi: 0.0 };
    let flags = vec![
        format!("--detector {}", detector.label()),
        format!("--grid {}", a.grid),
    ];
    let mut r = triple_curve(&job, "kim", settings, &a.grid, flags)?;
    r.push_meta("detector", detector.label());
    Ok((r, job))
}

fn run_zeilinger(a: &ZeilingerArgs) -> Result<(Report, Job), CliError> {
    let job = Job::new(&a.common)?;
    let alice = Diagonal::from_degrees(a.alice)
        .ok_or_else(|| CliError::Usage("--alice must be 45 or -45".into()))?;
    let settings = TripleSettings::Zeilinger { alice: alice.angle(), bob: 0.0 };
    let flags = vec![
        format!("--alice {}", num(alice.degrees())),
        format!("--grid {}", a.grid),
    ];
    let mut r = triple_curve(&job, "zeilinger", settings, &a.grid, flags)?;
    r.push_meta("alice_deg", alice.degrees());
    let find = |deg: f64| r.rows.iter().find(|row| (row.x - deg).abs() < 1e-9).map(|row| row.y);
    if let (Some(matched), Some(mismatched)) = (find(alice.degrees()), find(-alice.degrees())) {
        if matched > 0.0 {
            r.push_meta("relative_intensity", mismatched / matched);
        }
    }
    Ok((r, job))
}

fn run_aspect(a: &AspectArgs) -> Result<(Report, Job), CliError> {
    let job = Job::new(&a.common)?;
    let pa = PolarizerSetting::from_degrees(a.a);
    let pb = PolarizerSetting::from_degrees(a.b);
    let flags = vec![format!("--a {}", num(a.a)), format!("--b {}", num(a.b))];
    let mut r = job.report("aspect", &flags);
    r.push_meta("a_deg", a.a);
    r.push_meta("b_deg", a.b);
    let row = match job.engine {
        Engine::Analytic => {
            let p = aspect_probabilities(&job.model, &pa, &pb)?;
            for (k, v) in ["p_pp", "p_pm", "p_mp", "p_mm"].iter().zip(p.as_array()) {
                r.push_meta(k, v);
            }
            Row { x: a.a - a.b, y: p.correlation(), std_err: None }
        }
        Engine::MonteCarlo => {
            let c = run_double_coincidence(&job.model, &pa, &pb, &job.mc)?;
            for (k, v) in ["n_pp", "n_pm", "n_mp", "n_mm"].iter().zip(c.channels()) {
                r.push_meta(k, v);
            }
            r.push_meta("n_trials", c.n_trials);
            r.push_meta("n_accidental", c.n_accidental);
            let e = correlation_from_counts(&c)?;
            r.push_meta("analytic_correlation", correlation_analytic(&job.model, pa.angle(), pb.angle())?);
            Row { x: a.a - a.b, y: e.value, std_err: Some(e.std_err) }
        }
    };
    r.rows.push(row);
    Ok((r, job))
}

fn run_chsh(a: &ChshArgs) -> Result<(Report, Job), CliError> {
    let job = Job::new(&a.common)?;
    let [x, xp, y, yp] = parse_angles(&a.angles)?;
    let pairs = [(x, y), (x, yp), (xp, y), (xp, yp)];
    let mut rows = Vec::with_capacity(4);
    for (i, &(p, q)) in pairs.iter().enumerate() {
        let (pa, pb) = (PolarizerSetting::from_degrees(p), PolarizerSetting::from_degrees(q));
        let row = match job.engine {
            Engine::Analytic => Row {
                x: p - q,
                y: correlation_analytic(&job.model, p.to_radians(), q.to_radians())?,
                std_err: None,
            },
            Engine::MonteCarlo => {
                let cfg = job.mc.with_seed(point_seed(job.mc.seed, i));
                let e = correlation_from_counts(&run_double_coincidence(&job.model, &pa, &pb, &cfg)?)?;
                Row { x: p - q, y: e.value, std_err: Some(e.std_err) }
            }
        };
        rows.push(row);
    }
    let s = chsh(rows[0].y, rows[1].y, rows[2].y, rows[3].y);
    let angles = format!("{},{},{},{}", num(x), num(xp), num(y), num(yp));
    let mut r = job.report("chsh", &[format!("--angles {angles}")]);
    r.push_meta("angles_deg", angles);
    r.push_meta("pairs", "(a,b);(a,b');(a',b);(a',b')");
    r.push_meta("S", s);
    r.push_meta("abs_S", s.abs());
    if job.engine == Engine::MonteCarlo {
        let se = rows.iter().filter_map(|r| r.std_err).map(|s| s * s).sum::<f64>().sqrt();
        r.push_meta("S_stderr", se);
    }
    r.push_meta("exceeds_local_bound", s.abs() > 2.0);
    r.rows = rows;
    Ok((r, job))
}

fn run_rate(a: &RateArgs) -> Result<(Report, Job), CliError> {
    let mut common = a.common.clone();
    let window_deg = *common.phase_window.get_or_insert(0.58);
    let job = Job::new(&common)?;
    let mut r = job.report("rate", &[]);
    let analytic = detection_rate_analytic(job.mc.phase_window);
    r.push_meta("phase_window_deg", window_deg);
    r.push_meta("analytic_rate", analytic);
    let row = match job.engine {
        Engine::Analytic => Row { x: window_deg, y: analytic, std_err: None },
        Engine::MonteCarlo => {
            let est = detection_rate(&job.mc)?;
            r.push_meta("accepted", est.accepted);
            Row { x: window_deg, y: est.rate, std_err: Some(est.std_err) }
        }
    };
    r.rows.push(row);
    Ok((r, job))
}

fn execute(argv: Vec<OsString>) -> Result<i32, CliError> {
    let argv = expand_config(argv)?;
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return Ok(code);
        }
    };
    let (report, job) = match &cli.command {
        Command::Aspect(a) => run_aspect(a)?,
        Command::Gisin(a) => run_gisin(a)?,
        Command::Zeilinger(a) => run_zeilinger(a)?,
        Command::Kim(a) => run_kim(a)?,
        Command::Chsh(a) => run_chsh(a)?,
        Command::Rate(a) => run_rate(a)?,
    };
    emit_table(&report, job.format, job.out.as_deref()).map_err(|e| {
        let dest = job.out.as_ref().map_or("stdout".into(), |p| p.display().to_string());
        CliError::Io(format!("cannot write {dest}: {e}"))
    })?;
    Ok(EXIT_OK)
}

/// Runs one command line (including the program name) and returns the
/// process exit status.
pub fn run_command<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    match execute(argv.into_iter().map(Into::into).collect()) {
        Ok(code) => code,
        Err(e) => {
            let msg = match &e {
                CliError::Usage(m) | CliError::Io(m) => m,
            };
            eprintln!("{TOOL}: {msg}");
            e.code()
        }
    }
}
