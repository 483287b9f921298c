//! Batch front end. Every subcommand reads JSON or flags and writes CSV or
//! JSON to `--out` (stdout when omitted).
//!
//! Exit codes: 0 success, 1 usage or input errors, 2 numeric failures
//! (quotas, searches without a hit, failed verifications).

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;

use crate::budget::EpsRule;
use crate::builder::{self, Manifest, SeriesSpec, UniversalSeries};
use crate::cantor::{self, TernaryPoint};
use crate::divergence::{
    self, DeltaRule, PartialSums, ProfileSource, RogosinskiProbe, ScanOptions,
};
use crate::error::{Error, Result};
use crate::fejer::{self, FejerOrder, Mode, ScaledFejerSpec};
use crate::rational;
use crate::trigpoly::{fmt_real, CoeffRecord, TrigPoly};
use crate::universality::{self, HitReport, TargetFunction};

/// Environment variable overriding the frequency quota of `build`.
pub const FREQ_CAP_ENV: &str = "UFOURIER_FREQ_CAP";

#[derive(Debug, Parser)]
#[command(
    name = "ufourier",
    version,
    about = "Universal Fourier series constructions and diagnostics"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Coefficients of a Fejer polynomial, optionally rescaled.
    Fejer(FejerArgs),
    /// Build a truncated universal series from a JSON spec.
    Build(BuildArgs),
    /// Partial sums of a built series (CSV: n, t, re, im).
    Eval(EvalArgs),
    /// Search checkpoints that hit prescribed values at the universality points.
    Usearch(UsearchArgs),
    /// Divergence-set covers, decay profiles, oscillation scans and residuals.
    #[command(subcommand)]
    Divergence(DivergenceCommand),
    /// Exact ternary Cantor-set geometry.
    #[command(subcommand)]
    Cantor(CantorCommand),
    /// Re-check the structural and checkpoint guarantees of a built series.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct Output {
    /// Output file (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FejerArgs {
    #[arg(long = "N")]
    pub big_n: u64,
    #[arg(long = "n")]
    pub n: u64,
    /// Rescale to the resonance target `c` (real part).
    #[arg(long, allow_hyphen_values = true)]
    pub target_re: Option<f64>,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub target_im: f64,
    #[arg(long, default_value_t = 1.0)]
    pub eps: f64,
    #[arg(long, value_enum, default_value_t = ModeArg::Relaxed)]
    pub mode: ModeArg,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Clone, Copy, Debug, clap::ValueEnum)]
pub enum ModeArg {
    Strict,
    Relaxed,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Strict => Mode::Strict,
            ModeArg::Relaxed => Mode::Relaxed,
        }
    }
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    /// Series spec (JSON).
    #[arg(long)]
    pub spec: PathBuf,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct SeriesInput {
    /// Series manifest written by `build`.
    #[arg(long)]
    pub series: PathBuf,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub input: SeriesInput,
    /// Angles, comma separated.
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        required = true
    )]
    pub t: Vec<f64>,
    /// Partial-sum indices, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub n: Vec<u64>,
    /// Also evaluate at every checkpoint 3N_j.
    #[arg(long)]
    pub checkpoints: bool,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct UsearchArgs {
    #[command(flatten)]
    pub input: SeriesInput,
    /// Target values (JSON: {"entries": [{"l": 0, "value": [re, im]}, ...]}).
    #[arg(long)]
    pub targets: PathBuf,
    /// Tolerance for single-point and finite builds.
    #[arg(long, default_value_t = 0.5)]
    pub delta: f64,
    /// Number of stages for countable builds.
    #[arg(long, default_value_t = 1)]
    pub stages: usize,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Subcommand)]
pub enum DivergenceCommand {
    /// Oscillation of partial sums per angle (CSV).
    Scan(ScanArgs),
    /// Decay profile r_m (CSV: m, r).
    Profile(ProfileArgs),
    /// Premeasure of the cover tail (JSON).
    Premeasure(PremeasureArgs),
    /// Rogosinski residuals (JSON).
    Rogosinski(RogosinskiArgs),
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub input: SeriesInput,
    /// Angles, comma separated.
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        conflicts_with = "grid"
    )]
    pub t: Vec<f64>,
    /// Uniform grid of this many angles in [−π, π).
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub n_min: u64,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 64)]
    pub samples: usize,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct EpsArgs {
    #[arg(long, default_value_t = 1.0)]
    pub eps_scale: f64,
    #[arg(long, default_value_t = 4)]
    pub eps_base: u32,
    /// Use the damped rule scale·4^{−(m+j)}·e^{−m²}.
    #[arg(long)]
    pub damped: bool,
}

impl EpsArgs {
    fn rule(&self) -> EpsRule {
        if self.damped {
            EpsRule::Damped {
                scale: self.eps_scale,
            }
        } else {
            EpsRule::geometric(self.eps_scale, self.eps_base)
        }
    }
}

#[derive(Debug, Args)]
pub struct ProfileArgs {
    #[command(flatten)]
    pub eps: EpsArgs,
    /// Radii δ_l = e^{−rate·l}.
    #[arg(long, default_value_t = 1.0)]
    pub delta_rate: f64,
    /// Probe angle; switches to Σ 1/|t − t_l| over `--points`.
    #[arg(long, allow_hyphen_values = true, requires = "points")]
    pub probe: Option<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub points: Vec<f64>,
    #[arg(long)]
    pub depth: usize,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct PremeasureArgs {
    #[arg(long, default_value_t = 1.0)]
    pub delta_rate: f64,
    #[arg(long)]
    pub a: f64,
    #[arg(long, default_value_t = 1)]
    pub m0: usize,
    #[arg(long)]
    pub depth: usize,
    /// Interval centers t_1..t_M (default: all 0; the premeasure ignores them).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub points: Vec<f64>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct RogosinskiArgs {
    /// Series manifest.
    #[arg(long, conflicts_with = "poly", required_unless_present = "poly")]
    pub series: Option<PathBuf>,
    /// Polynomial coefficients (JSON list of {k, re, im}).
    #[arg(long)]
    pub poly: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub t0: f64,
    /// Claimed limit s (defaults to the value of the input at t0).
    #[arg(long, allow_hyphen_values = true)]
    pub s_re: Option<f64>,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub s_im: f64,
    #[arg(long, default_value_t = 1.0)]
    pub phi: f64,
    #[arg(long, value_delimiter = ',', required = true)]
    pub ns: Vec<u64>,
    /// Window a,b with 0 < a ≤ φ ≤ b < 2π.
    #[arg(long, value_delimiter = ',', num_args = 1, default_value = "0.5,2")]
    pub window: Vec<f64>,
    #[arg(long)]
    pub symmetric: bool,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Subcommand)]
pub enum CantorCommand {
    /// Sweep [a/n, b/n] against C (CSV: n, N, hit_point, hit).
    Sweep20(Sweep20Args),
    /// Construct t_n and θ around a Cantor point (JSON).
    Construct21(Construct21Args),
    /// Stage intervals (CSV: lo, hi).
    Stage(StageArgs),
}

#[derive(Debug, Args)]
pub struct Sweep20Args {
    /// Rational, e.g. 2, 3/2 or 0.75.
    #[arg(long)]
    pub a: String,
    #[arg(long)]
    pub b: String,
    #[arg(long)]
    pub n_min: u64,
    #[arg(long)]
    pub n_max: u64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct Construct21Args {
    /// Ternary digits of t0 (0s and 2s), e.g. 0220.
    #[arg(long, default_value = "")]
    pub digits: String,
    /// Digit repeated after the prefix.
    #[arg(long)]
    pub repeat: Option<u8>,
    #[arg(long)]
    pub a: String,
    #[arg(long)]
    pub b: String,
    #[arg(long)]
    pub n: u64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct StageArgs {
    #[arg(long)]
    pub depth: u32,
    /// List C ∪ (−C) instead of C.
    #[arg(long)]
    pub symmetric: bool,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub input: SeriesInput,
    #[command(flatten)]
    pub output: Output,
}

/// Parse `argv` (including the program name), run, and return the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_numeric_failure() {
                2
            } else {
                1
            }
        }
    }
}

fn open_out(out: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn write_json<T: Serialize>(out: &Option<PathBuf>, value: &T) -> Result<()> {
    let mut w = open_out(out)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let file = File::open(path)
        .map_err(|e| Error::invalid(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_reader(io::BufReader::new(file))
        .map_err(|e| Error::invalid(format!("cannot parse {}: {e}", path.display())))
}

fn load_series(input: &SeriesInput) -> Result<UniversalSeries> {
    read_json::<Manifest>(&input.series)?.rebuild()
}

fn execute(cmd: &Command) -> Result<()> {
    match cmd {
        Command::Fejer(a) => fejer_cmd(a),
        Command::Build(a) => build_cmd(a),
        Command::Eval(a) => eval_cmd(a),
        Command::Usearch(a) => usearch_cmd(a),
        Command::Divergence(d) => match d {
            DivergenceCommand::Scan(a) => scan_cmd(a),
            DivergenceCommand::Profile(a) => profile_cmd(a),
            DivergenceCommand::Premeasure(a) => premeasure_cmd(a),
            DivergenceCommand::Rogosinski(a) => rogosinski_cmd(a),
        },
        Command::Cantor(c) => match c {
            CantorCommand::Sweep20(a) => sweep20_cmd(a),
            CantorCommand::Construct21(a) => construct21_cmd(a),
            CantorCommand::Stage(a) => stage_cmd(a),
        },
        Command::Verify(a) => verify_cmd(a),
    }
}

#[derive(Serialize)]
struct FejerReport {
    #[serde(rename = "N")]
    big_n: u64,
    n: u64,
    /// `H_n`, exact.
    resonance: String,
    /// `Σ_k |ĉ(k+1) − ĉ(k)|`, exact when available.
    variation: String,
    coefficients: Vec<CoeffRecord>,
}

fn fejer_cmd(a: &FejerArgs) -> Result<()> {
    let order = FejerOrder::new(a.big_n, a.n)?;
    let poly = match a.target_re {
        None => fejer::fejer_coeffs(order),
        Some(re) => fejer::scaled_fejer(&ScaledFejerSpec {
            order,
            target: Complex64::new(re, a.target_im),
            eps: a.eps,
            mode: a.mode.into(),
        })?,
    };
    let variation = match poly.coeff_total_variation_exact() {
        Some(v) => rational::format(&v),
        None => fmt_real(poly.coeff_total_variation()),
    };
    let report = FejerReport {
        big_n: a.big_n,
        n: a.n,
        resonance: rational::format(&fejer::fejer_resonance(order).exact),
        variation,
        coefficients: poly.into(),
    };
    write_json(&a.output.out, &report)
}

/// Frequency cap from the environment, if set.
fn env_freq_cap() -> Result<Option<i64>> {
    match std::env::var(FREQ_CAP_ENV) {
        Ok(v) => v
            .trim()
            .parse::<i64>()
            .ok()
            .filter(|&c| c > 0)
            .map(Some)
            .ok_or_else(|| {
                Error::invalid(format!(
                    "{FREQ_CAP_ENV} must be a positive integer, got {v:?}"
                ))
            }),
        Err(_) => Ok(None),
    }
}

fn build_cmd(a: &BuildArgs) -> Result<()> {
    let mut spec: SeriesSpec = read_json(&a.spec)?;
    if let Some(cap) = env_freq_cap()? {
        spec.freq_cap = cap;
    }
    let series = builder::build(&spec)?;
    write_json(&a.output.out, &series.manifest())
}

fn eval_cmd(a: &EvalArgs) -> Result<()> {
    let s = load_series(&a.input)?;
    let mut ns = a.n.clone();
    if a.checkpoints {
        ns.extend(s.checkpoints.iter().map(|c| c.n));
    }
    if ns.is_empty() {
        return Err(Error::invalid("give --n or --checkpoints"));
    }
    ns.sort_unstable();
    ns.dedup();
    let mut w = open_out(&a.output.out)?;
    writeln!(w, "n,t,re,im")?;
    for &t in &a.t {
        for (n, v) in ns.iter().zip(s.partial_sums_at(t, &ns)) {
            writeln!(
                w,
                "{n},{},{},{}",
                fmt_real(t),
                fmt_real(v.re),
                fmt_real(v.im)
            )?;
        }
    }
    w.flush()?;
    Ok(())
}

fn render_stage_table(reports: &[HitReport]) -> String {
    let mut s = String::from("stage  row  delta      n             label   max_error\n");
    for r in reports {
        let (stage, row, delta) = match &r.stage {
            Some(i) => (i.stage.to_string(), i.row, format!("{:.4}", i.delta)),
            None => ("-".to_string(), r.label.row(), "-".to_string()),
        };
        s.push_str(&format!(
            "{stage:<6} {row:<4} {delta:<10} {:<13} {:<7} {:.6e}\n",
            r.n,
            r.label.to_string(),
            r.max_error
        ));
    }
    s
}

fn usearch_cmd(a: &UsearchArgs) -> Result<()> {
    let s = load_series(&a.input)?;
    let targets: TargetFunction = read_json(&a.targets)?;
    let reports = if s.spec.kind == builder::SeriesKind::Countable {
        universality::usearch_staged(&s, &targets, a.stages)
    } else {
        universality::usearch_finite(&s, &targets, a.delta).map(|r| vec![r])
    };
    match reports {
        Ok(reports) => {
            eprint!("{}", render_stage_table(&reports));
            write_json(&a.output.out, &reports)
        }
        Err(e) => {
            // Partial output: an empty report list, so downstream tools see a file.
            write_json(&a.output.out, &Vec::<HitReport>::new())?;
            Err(e)
        }
    }
}

fn scan_cmd(a: &ScanArgs) -> Result<()> {
    let s = load_series(&a.input)?;
    let grid: Vec<f64> = match a.grid {
        Some(0) => return Err(Error::invalid("--grid must be positive")),
        Some(g) => (0..g)
            .map(|i| -std::f64::consts::PI + std::f64::consts::TAU * i as f64 / g as f64)
            .collect(),
        None if a.t.is_empty() => return Err(Error::invalid("give --t or --grid")),
        None => a.t.clone(),
    };
    let opts = ScanOptions {
        tol: a.tol,
        random_samples: a.samples,
        seed: a.seed,
    };
    let rows = divergence::oscillation_scan(&s, &grid, a.n_min, &opts);
    let mut w = open_out(&a.output.out)?;
    divergence::write_oscillation_csv(&rows, &mut w)?;
    w.flush()?;
    Ok(())
}

fn profile_cmd(a: &ProfileArgs) -> Result<()> {
    let eps = a.eps.rule();
    let rule = DeltaRule::Exponential { rate: a.delta_rate };
    let source = match a.probe {
        Some(t) => ProfileSource::Probe {
            t,
            points: &a.points,
        },
        None => {
            rule.validate(a.depth)?;
            ProfileSource::Cover(&rule)
        }
    };
    let r = divergence::condition15_profile(&eps, &source, a.depth)?;
    let mut w = open_out(&a.output.out)?;
    writeln!(w, "m,r")?;
    for (m, v) in r.iter().enumerate() {
        writeln!(w, "{},{}", m + 1, fmt_real(*v))?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct PremeasureReport {
    a: f64,
    m0: usize,
    depth: usize,
    radii: Vec<f64>,
    #[serde(flatten)]
    value: divergence::Premeasure,
}

fn premeasure_cmd(a: &PremeasureArgs) -> Result<()> {
    let points = if a.points.is_empty() {
        vec![0.0; a.depth]
    } else {
        a.points.clone()
    };
    let cover = divergence::build_cover(
        DeltaRule::Exponential { rate: a.delta_rate },
        &points,
        a.depth,
    )?;
    let value = divergence::premeasure(&cover, a.a, a.m0, a.depth)?;
    write_json(
        &a.output.out,
        &PremeasureReport {
            a: a.a,
            m0: a.m0,
            depth: a.depth,
            radii: cover.radii(),
            value,
        },
    )
}

#[derive(Serialize)]
struct ResidualRow {
    n: u64,
    theta: f64,
    residual: Complex64,
    abs: f64,
}

fn rogosinski_cmd(a: &RogosinskiArgs) -> Result<()> {
    let [lo, hi] = a.window[..] else {
        return Err(Error::invalid("--window takes two values a,b"));
    };
    let run = |p: &dyn Fn(f64, &[u64]) -> Vec<Complex64>, value_at_t0: Complex64| -> Result<()> {
        let s = a.s_re.map_or(value_at_t0, |re| Complex64::new(re, a.s_im));
        let probe = RogosinskiProbe::with_phase(a.t0, s, a.phi, &a.ns, (lo, hi))?;
        let adapter = FnSums(p);
        let res = divergence::rogosinski_residual(&adapter, &probe, a.symmetric)?;
        let rows: Vec<ResidualRow> = probe
            .pairs
            .iter()
            .zip(res)
            .map(|(&(n, theta), r)| ResidualRow {
                n,
                theta,
                residual: r,
                abs: r.norm(),
            })
            .collect();
        write_json(&a.output.out, &rows)
    };
    match (&a.series, &a.poly) {
        (Some(path), _) => {
            let s = load_series(&SeriesInput {
                series: path.clone(),
            })?;
            run(&|t, ns| s.partial_sums(t, ns), s.value(a.t0).0)
        }
        (None, Some(path)) => {
            let records: Vec<CoeffRecord> = read_json(path)?;
            let p = TrigPoly::try_from(records)?;
            run(&|t, ns| p.partial_sums(t, ns), p.eval(a.t0))
        }
        (None, None) => Err(Error::invalid("give --series or --poly")),
    }
}

/// Adapter so a closure can stand in for a partial-sum source.
struct FnSums<'a>(&'a dyn Fn(f64, &[u64]) -> Vec<Complex64>);

impl PartialSums for FnSums<'_> {
    fn partial_sums(&self, t: f64, ns: &[u64]) -> Vec<Complex64> {
        (self.0)(t, ns)
    }
    fn max_index(&self) -> u64 {
        0
    }
    fn landmarks(&self) -> Vec<u64> {
        Vec::new()
    }
}

fn sweep20_cmd(a: &Sweep20Args) -> Result<()> {
    let report = cantor::property20_sweep(
        &rational::parse(&a.a)?,
        &rational::parse(&a.b)?,
        a.n_min,
        a.n_max,
    )?;
    let mut w = open_out(&a.output.out)?;
    cantor::write_sweep_csv(&report, &mut w)?;
    w.flush()?;
    eprintln!(
        "misses: {}, disagreements: {}",
        report.misses.len(),
        report.disagreements.len()
    );
    Ok(())
}

fn construct21_cmd(a: &Construct21Args) -> Result<()> {
    let digits = a
        .digits
        .chars()
        .map(|c| {
            c.to_digit(3)
                .map(|d| d as u8)
                .ok_or_else(|| Error::invalid(format!("bad ternary digit {c:?}")))
        })
        .collect::<Result<Vec<u8>>>()?;
    let t0 = TernaryPoint::new(digits, a.repeat)?;
    let out =
        cantor::property21_construct(&t0, &rational::parse(&a.a)?, &rational::parse(&a.b)?, a.n)?;
    write_json(&a.output.out, &out)
}

fn stage_cmd(a: &StageArgs) -> Result<()> {
    let intervals = if a.symmetric {
        cantor::symmetric_double(a.depth)?
    } else {
        cantor::CantorStage::new(a.depth)?.intervals()
    };
    let mut w = open_out(&a.output.out)?;
    writeln!(w, "lo,hi")?;
    for (lo, hi) in &intervals {
        writeln!(w, "{},{}", rational::format(lo), rational::format(hi))?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct CheckpointCheck {
    label: String,
    n: u64,
    /// 0-based point index.
    l: usize,
    expected: Complex64,
    /// `S_n` of the block's own component at its point.
    own: Complex64,
    own_error: f64,
    /// `S_n` of the whole series at the point.
    series: Complex64,
}

#[derive(Serialize)]
struct VerifyReport {
    blocks: usize,
    min_frequency: Option<i64>,
    max_frequency: u64,
    separation_ok: bool,
    spectrum_ok: bool,
    max_checkpoint_error: f64,
    tail_bound: f64,
    checkpoints: Vec<CheckpointCheck>,
    passed: bool,
}

/// Tolerance for checkpoint identities relative to `1 + |c|`.
const CHECKPOINT_TOL: f64 = 1e-9;

fn verify_cmd(a: &VerifyArgs) -> Result<()> {
    let s = load_series(&a.input)?;
    let separation_ok = s.schedule.validate().is_ok();
    let spectrum_ok = s.verify_spectrum().is_ok() && s.min_frequency().is_none_or(|k| k >= 1);
    let mut checkpoints = Vec::new();
    let mut passed_checks = true;
    let mut max_err: f64 = 0.0;
    for (term, cp) in s.terms.iter().zip(&s.checkpoints) {
        for comp in &term.components {
            let t = s.spec.points[comp.point];
            let own = comp.poly.partial_sum(cp.n, t);
            let err = (own - comp.target).norm();
            max_err = max_err.max(err);
            passed_checks &= err < CHECKPOINT_TOL * (1.0 + comp.target.norm());
            checkpoints.push(CheckpointCheck {
                label: term.label.to_string(),
                n: cp.n,
                l: comp.point,
                expected: comp.target,
                own,
                own_error: err,
                series: s.partial_sum(cp.n, t),
            });
        }
    }
    let passed = separation_ok && spectrum_ok && passed_checks;
    let report = VerifyReport {
        blocks: s.terms.len(),
        min_frequency: s.min_frequency(),
        max_frequency: s.max_frequency(),
        separation_ok,
        spectrum_ok,
        max_checkpoint_error: max_err,
        tail_bound: s.tail_bound,
        checkpoints,
        passed,
    };
    write_json(&a.output.out, &report)?;
    if passed {
        Ok(())
    } else {
        Err(Error::NoHit {
            delta: CHECKPOINT_TOL,
            best_error: max_err,
        })
    }
}
