//! Command-line frontend: one subcommand per experiment, JSON or CSV output,
//! and a manifest sidecar next to every file written with `--out`.

mod manifest;
mod output;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::arith::{self, Sieve};
use crate::equidist::{self, DiscrepancyMode, Region};
use crate::error::{check_cap, Error, Result};
use crate::expsum;
use crate::fmt::ratio_str;
use crate::points::{generate, ExponentSchedule, ScheduleKind};
use crate::residue::{self, ResidueMap};
use crate::{FieldCtx, Limits};

pub use manifest::{sha256_hex, RunManifest, MANIFEST_VERSION};
pub use output::{Format, Payload};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(name = "orbitlab", version, about = "Equidistribution and orbit-statistics experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(untagged)]
enum Command {
    /// Orbit points of a primitive root as exact coordinates.
    FieldPoints(FieldPointsArgs),
    /// Box discrepancy of an orbit point set.
    Discrepancy(DiscrepancyArgs),
    /// Incomplete exponential sum, for one gamma or maximized over all.
    Expsum(ExpsumArgs),
    /// Right-hand side of the Koksma-Szusz inequality.
    KsBound(KsBoundArgs),
    /// Monte Carlo volumes of the inner and outer boundary shells of a region.
    ShellVolume(ShellArgs),
    /// Average multiplicative order T_g(L).
    AvgOrder(AvgOrderArgs),
    /// Average Carmichael function up to L.
    SumLambda(SumLambdaArgs),
    /// Average period of the additive maps up to L.
    QAverage(QAverageArgs),
    /// Average of the mean divisor sigma(k)/tau(k) up to K.
    AvgDivisor(AvgDivisorArgs),
    /// Number of primes up to x for which g is a primitive root.
    PrimRootCount(PrimRootArgs),
    /// Tail and cycle length of one orbit of a map on Z_ell.
    Orbit(OrbitArgs),
    /// Consecutive-powers check for theta = 2 modulo a prime.
    #[command(name = "counterexample-2b")]
    Counterexample2b(CounterexampleArgs),
    /// Orbit deviation from the expected count, averaged over all primitive roots.
    AvgPrimDeviation(AvgPrimDeviationArgs),
}

#[derive(Debug, Args, Serialize)]
struct OutputArgs {
    /// Write the payload here and a manifest to `<out>.manifest.json`.
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Debug, Args, Serialize)]
struct FieldArgs {
    #[arg(long)]
    p: u64,
    #[arg(long, default_value_t = 1)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum ScheduleName {
    Linear,
    Poly,
    Monomial,
    Powering,
}

#[derive(Debug, Args, Serialize)]
struct ScheduleArgs {
    #[arg(long, value_enum, default_value_t = ScheduleName::Linear)]
    schedule: ScheduleName,
    /// Number of points.
    #[arg(long = "M")]
    #[serde(rename = "M")]
    m: u64,
    /// Degree for the monomial schedule.
    #[arg(long)]
    k: Option<u32>,
    /// Base for the powering schedule.
    #[arg(long)]
    e: Option<u64>,
    /// Coefficients c0,c1,... of the exponent polynomial.
    #[arg(long)]
    poly: Option<String>,
}

#[derive(Debug, Args, Serialize)]
struct FieldPointsArgs {
    #[command(flatten)]
    #[serde(flatten)]
    field: FieldArgs,
    #[command(flatten)]
    #[serde(flatten)]
    schedule: ScheduleArgs,
    #[command(flatten)]
    #[serde(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum ModeName {
    Exact,
    Grid,
}

#[derive(Debug, Args, Serialize)]
struct DiscrepancyArgs {
    #[command(flatten)]
    #[serde(flatten)]
    field: FieldArgs,
    #[command(flatten)]
    #[serde(flatten)]
    schedule: ScheduleArgs,
    #[arg(long, value_enum, default_value_t = ModeName::Exact)]
    mode: ModeName,
    /// Grid spacing for `--mode grid`.
    #[arg(long, default_value_t = 0.015625)]
    resolution: f64,
    /// Also report the deviation for this region (JSON or a path to a JSON file).
    #[arg(long)]
    region: Option<String>,
    #[command(flatten)]
    #[serde(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
struct ExpsumArgs {
    #[command(flatten)]
    #[serde(flatten)]
    field: FieldArgs,
    #[command(flatten)]
    #[serde(flatten)]
    schedule: ScheduleArgs,
    /// Polynomial-basis coefficients of gamma; omitted means maximize over all gamma.
    #[arg(long)]
    gamma: Option<String>,
    #[command(flatten)]
    #[serde(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
struct KsBoundArgs {
    #[command(flatten)]
    #[serde(flatten)]
    field: FieldArgs,
    #[command(flatten)]
    #[serde(flatten)]
    schedule: ScheduleArgs,
    /// Frequency cutoff.
    #[arg(long = "L")]
    #[serde(rename = "L")]
    l: u64,
    #[command(flatten)]
    #[serde(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
struct ShellArgs {
    /// Region as JSON or a path to a JSON file.
    #[arg(long)]
    region: String,
    /// Shell widths, comma separated.
    #[arg(long, default_value = "0.01")]
    epsilon: String,
    #[arg(long, default_value_t = 1_000_000)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    #[serde(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
struct AvgOrderArgs {
    #[arg(long, default_value_t = 2)]
    g: u64,
    #[arg(long = "L")]
    #[serde(rename = "L")]
    l: u64,
    #[command(flatten)]
    #[serde(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
struct SumLambdaArgs {
    #[arg(long, default_value_t = 2)]
    g: u64,
    #[arg(long = "L")]
    #[serde(rename = "L")]
    l: u64,
    #[command(flatten)]
    #[serde(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
struct QAverageArgs {
    #[arg(long = "L")]
    #[serde(rename = "L")]
    l: u64,
    #[command(flatten)]
    #[serde(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
struct AvgDivisorArgs {
    #[arg(long = "K")]
    #[serde(rename = "K")]
    k: u64,
    #[command(flatten)]
    #[serde(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
struct PrimRootArgs {
    #[arg(long)]
    x: u64,
    #[arg(long, default_value_t = 2)]
    g: u64,
    #[command(flatten)]
    #[serde(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum MapName {
    Mul,
    Add,
    Pow,
}

#[derive(Debug, Args, Serialize)]
struct OrbitArgs {
    #[arg(long, value_enum)]
    map: MapName,
    /// Modulus.
    #[arg(long)]
    ell: u64,
    #[arg(long, default_value_t = 1)]
    x0: u64,
    /// Multiplier for `--map mul`.
    #[arg(long)]
    g: Option<u64>,
    /// Shift for `--map add`.
    #[arg(long)]
    a: Option<u64>,
    /// Exponent for `--map pow`.
    #[arg(long)]
    e: Option<u64>,
    #[command(flatten)]
    #[serde(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
struct CounterexampleArgs {
    #[arg(long)]
    p: u64,
    #[command(flatten)]
    #[serde(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
struct AvgPrimDeviationArgs {
    #[arg(long)]
    p: u64,
    #[arg(long, default_value_t = 1)]
    n: usize,
    /// Coefficients c0,c1,... of f.
    #[arg(long, default_value = "0,1")]
    poly: String,
    #[arg(long = "M")]
    #[serde(rename = "M")]
    m: u64,
    /// Region as JSON or a path to a JSON file.
    #[arg(long)]
    region: String,
    #[command(flatten)]
    #[serde(flatten)]
    output: OutputArgs,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::FieldPoints(_) => "field-points",
            Command::Discrepancy(_) => "discrepancy",
            Command::Expsum(_) => "expsum",
            Command::KsBound(_) => "ks-bound",
            Command::ShellVolume(_) => "shell-volume",
            Command::AvgOrder(_) => "avg-order",
            Command::SumLambda(_) => "sum-lambda",
            Command::QAverage(_) => "q-average",
            Command::AvgDivisor(_) => "avg-divisor",
            Command::PrimRootCount(_) => "prim-root-count",
            Command::Orbit(_) => "orbit",
            Command::Counterexample2b(_) => "counterexample-2b",
            Command::AvgPrimDeviation(_) => "avg-prim-deviation",
        }
    }

    fn output(&self) -> &OutputArgs {
        match self {
            Command::FieldPoints(a) => &a.output,
            Command::Discrepancy(a) => &a.output,
            Command::Expsum(a) => &a.output,
            Command::KsBound(a) => &a.output,
            Command::ShellVolume(a) => &a.output,
            Command::AvgOrder(a) => &a.output,
            Command::SumLambda(a) => &a.output,
            Command::QAverage(a) => &a.output,
            Command::AvgDivisor(a) => &a.output,
            Command::PrimRootCount(a) => &a.output,
            Command::Orbit(a) => &a.output,
            Command::Counterexample2b(a) => &a.output,
            Command::AvgPrimDeviation(a) => &a.output,
        }
    }

    fn seed(&self) -> u64 {
        match self {
            Command::FieldPoints(a) => a.field.seed,
            Command::Discrepancy(a) => a.field.seed,
            Command::Expsum(a) => a.field.seed,
            Command::KsBound(a) => a.field.seed,
            Command::ShellVolume(a) => a.seed,
            _ => 0,
        }
    }

    fn default_format(&self) -> Format {
        match self {
            Command::FieldPoints(_) => Format::Csv,
            _ => Format::Json,
        }
    }
}

/// Runs the CLI on `argv` (including the program name) and returns the exit
/// code: 0 on success, 2 on usage errors, 1 when the computation fails.
pub fn run<I, S>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{rendered}");
                    0
                }
                _ => {
                    let _ = write!(stderr, "{rendered}");
                    2
                }
            };
        }
    };
    match execute(&cli.command, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            if e.is_usage() {
                2
            } else {
                1
            }
        }
    }
}

fn execute(cmd: &Command, stdout: &mut dyn Write) -> Result<()> {
    let started = now();
    let limits = Limits::from_env();
    let format = cmd.output().format.unwrap_or_else(|| cmd.default_format());
    let payload = dispatch(cmd, format, &limits)?;
    let bytes = payload.render(format)?;
    let finished = now();
    match &cmd.output().out {
        None => stdout.write_all(&bytes)?,
        Some(path) => {
            std::fs::write(path, &bytes)?;
            let manifest = RunManifest {
                manifest_version: MANIFEST_VERSION,
                command: cmd.name().to_string(),
                params: serde_json::to_value(cmd)?,
                seed: cmd.seed(),
                artifact_version: VERSION,
                started,
                finished,
                output_format: format!("{format:?}").to_lowercase(),
                output_sha256: sha256_hex(&bytes),
            };
            let mut text = serde_json::to_vec_pretty(&manifest)?;
            text.push(b'\n');
            std::fs::write(manifest_path(path), text)?;
        }
    }
    Ok(())
}

/// Sidecar location for a payload written to `out`.
pub fn manifest_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

fn now() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true)
}

fn dispatch(cmd: &Command, format: Format, limits: &Limits) -> Result<Payload> {
    match cmd {
        Command::FieldPoints(a) => field_points(a, format, limits),
        Command::Discrepancy(a) => discrepancy(a, limits),
        Command::Expsum(a) => expsum_cmd(a, limits),
        Command::KsBound(a) => ks_bound(a, limits),
        Command::ShellVolume(a) => shell_volume(a),
        Command::AvgOrder(a) => avg_order(a, format, limits),
        Command::SumLambda(a) => Ok(to_payload(&arith::sum_carmichael(a.l, a.g, limits.sieve)?)?),
        Command::QAverage(a) => Ok(to_payload(&arith::q_average(a.l, limits.sieve)?)?),
        Command::AvgDivisor(a) => avg_divisor(a, limits),
        Command::PrimRootCount(a) => prim_root_count(a, limits),
        Command::Orbit(a) => orbit(a, limits),
        Command::Counterexample2b(a) => Ok(to_payload(&residue::counterexample_2b(a.p)?)?),
        Command::AvgPrimDeviation(a) => avg_prim_deviation(a, limits),
    }
}

fn to_payload<T: Serialize>(v: &T) -> Result<Payload> {
    Ok(Payload::Json(serde_json::to_value(v)?))
}

fn parse_list<T: std::str::FromStr>(what: &str, s: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(|t| t.trim().parse::<T>().map_err(|_| Error::invalid(format!("bad {what} entry {t:?}"))))
        .collect()
}

fn read_region(arg: &str) -> Result<Region> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| Error::invalid(format!("cannot read region file {arg}: {e}")))?
    };
    Region::from_json(&text).map_err(|e| match e {
        Error::Json(j) => Error::invalid(format!("bad region JSON: {j}")),
        other => other,
    })
}

fn build_field(a: &FieldArgs, limits: &Limits) -> Result<FieldCtx> {
    if a.n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    FieldCtx::build_with_budget(a.p, a.n, a.seed, limits.factor_budget)
}

fn build_schedule(a: &ScheduleArgs) -> Result<ExponentSchedule> {
    let kind = match a.schedule {
        ScheduleName::Linear => ScheduleKind::Linear,
        ScheduleName::Poly => {
            let poly = a.poly.as_deref().ok_or_else(|| Error::invalid("--schedule poly needs --poly"))?;
            ScheduleKind::Polynomial { coeffs: parse_list("--poly", poly)? }
        }
        ScheduleName::Monomial => {
            ScheduleKind::Monomial { k: a.k.ok_or_else(|| Error::invalid("--schedule monomial needs --k"))? }
        }
        ScheduleName::Powering => {
            ScheduleKind::Powering { e: a.e.ok_or_else(|| Error::invalid("--schedule powering needs --e"))? }
        }
    };
    ExponentSchedule::new(kind, a.m)
}

fn header(ctx: &FieldCtx, sched: &ExponentSchedule) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("p".into(), json!(ctx.p()));
    m.insert("n".into(), json!(ctx.n()));
    m.insert("schedule".into(), json!(sched.to_string()));
    m.insert("M".into(), json!(sched.len));
    m
}

fn field_points(a: &FieldPointsArgs, format: Format, limits: &Limits) -> Result<Payload> {
    let ctx = build_field(&a.field, limits)?;
    let sched = build_schedule(&a.schedule)?;
    let pts = generate(&ctx, &sched)?;
    match format {
        Format::Csv => {
            let header = (0..pts.dim()).map(|j| format!("x{j}")).collect();
            let rows = pts
                .iter()
                .map(|pt| pt.iter().map(|c| json!(format!("{c}/{}", pts.denominator()))).collect())
                .collect();
            Ok(Payload::Table { header, rows })
        }
        Format::Json => {
            let mut m = header(&ctx, &sched);
            if let Value::Object(body) = pts.to_json() {
                m.extend(body);
            }
            Ok(Payload::Json(Value::Object(m)))
        }
    }
}

fn discrepancy(a: &DiscrepancyArgs, limits: &Limits) -> Result<Payload> {
    let ctx = build_field(&a.field, limits)?;
    let sched = build_schedule(&a.schedule)?;
    let pts = generate(&ctx, &sched)?;
    let mode = match a.mode {
        ModeName::Exact => DiscrepancyMode::Exact,
        ModeName::Grid => DiscrepancyMode::Grid { resolution: a.resolution },
    };
    let report = equidist::box_discrepancy(&pts, mode, limits)?;
    let mut m = header(&ctx, &sched);
    if let Value::Object(body) = serde_json::to_value(&report)? {
        m.extend(body);
    }
    if let Some(spec) = &a.region {
        let omega = read_region(spec)?;
        let dev = equidist::region_deviation(&pts, &omega)?;
        m.insert("region_volume".into(), json!(omega.volume()));
        m.insert("region_count".into(), json!(dev.count));
        m.insert("region_deviation".into(), json!(dev.normalized));
        m.insert(
            "region_box_ratio".into(),
            json!(equidist::region_box_ratio(dev.normalized, report.value, pts.dim())),
        );
    }
    Ok(Payload::Json(Value::Object(m)))
}

fn expsum_cmd(a: &ExpsumArgs, limits: &Limits) -> Result<Payload> {
    let ctx = build_field(&a.field, limits)?;
    let sched = build_schedule(&a.schedule)?;
    let result = match &a.gamma {
        Some(g) => {
            let gamma = ctx.elem(parse_list("--gamma", g)?)?;
            expsum::incomplete_sum(&ctx, &gamma, &sched)?
        }
        None => expsum::max_over_gamma(&ctx, &sched, limits.gamma_enum)?,
    };
    to_payload(&result)
}

fn ks_bound(a: &KsBoundArgs, limits: &Limits) -> Result<Payload> {
    let ctx = build_field(&a.field, limits)?;
    let sched = build_schedule(&a.schedule)?;
    let pts = generate(&ctx, &sched)?;
    let rhs = expsum::koksma_szusz_rhs(&pts, a.l, limits.ks_work)?;
    let mut m = header(&ctx, &sched);
    m.insert("L".into(), json!(a.l));
    m.insert("rhs".into(), json!(rhs));
    Ok(Payload::Json(Value::Object(m)))
}

fn shell_volume(a: &ShellArgs) -> Result<Payload> {
    let omega = read_region(&a.region)?;
    let eps: Vec<f64> = parse_list("--epsilon", &a.epsilon)?;
    let estimates = eps
        .iter()
        .map(|&e| equidist::shell_volume(&omega, e, a.samples, a.seed))
        .collect::<Result<Vec<_>>>()?;
    let header: Vec<String> = ["epsilon", "vol_plus", "vol_minus", "std_error_plus", "std_error_minus", "std_error"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let rows = estimates
        .iter()
        .map(|s| {
            vec![
                json!(s.epsilon),
                json!(s.vol_plus),
                json!(s.vol_minus),
                json!(s.std_error_plus),
                json!(s.std_error_minus),
                json!(s.std_error),
            ]
        })
        .collect();
    Ok(Payload::Table { header, rows })
}

/// Decades `10, 100, ...` below `l`, then `l` itself.
fn decade_checkpoints(l: u64) -> Vec<u64> {
    let mut cps: Vec<u64> = std::iter::successors(Some(10u64), |&c| c.checked_mul(10)).take_while(|&c| c < l).collect();
    cps.push(l);
    cps
}

fn avg_order(a: &AvgOrderArgs, format: Format, limits: &Limits) -> Result<Payload> {
    if a.g < 2 {
        return Err(Error::invalid("base g must be at least 2"));
    }
    if a.l == 0 {
        return Err(Error::invalid("L must be at least 1"));
    }
    let sieve = Sieve::new(a.l, limits.sieve)?;
    match format {
        Format::Csv => {
            let rows = sieve.checkpoint_table(a.g, &decade_checkpoints(a.l))?;
            let values: Vec<Value> = rows.iter().map(serde_json::to_value).collect::<std::result::Result<_, _>>()?;
            let header: Vec<String> = match values.first() {
                Some(Value::Object(m)) => m.keys().cloned().collect(),
                _ => Vec::new(),
            };
            let rows = values
                .into_iter()
                .map(|v| match v {
                    Value::Object(m) => m.into_iter().map(|(_, v)| v).collect(),
                    _ => Vec::new(),
                })
                .collect();
            Ok(Payload::Table { header, rows })
        }
        Format::Json => {
            let t = sieve.avg_order_series(a.g, &[a.l])?.points[0].1;
            let lf = a.l as f64;
            Ok(Payload::Json(json!({
                "g": a.g,
                "L": a.l,
                "T": t,
                "T_logL_over_L": t * lf.ln() / lf,
            })))
        }
    }
}

fn avg_divisor(a: &AvgDivisorArgs, limits: &Limits) -> Result<Payload> {
    let d = arith::divisor_average(a.k, limits.sieve)?;
    let mut v = serde_json::to_value(&d)?;
    if let Value::Object(m) = &mut v {
        m.insert("kappa".into(), json!(arith::KAPPA));
    }
    Ok(Payload::Json(v))
}

fn prim_root_count(a: &PrimRootArgs, limits: &Limits) -> Result<Payload> {
    if a.g < 2 {
        return Err(Error::invalid("base g must be at least 2"));
    }
    let (count, primes) = if a.x < 2 {
        (0, 0)
    } else {
        let sieve = Sieve::new(a.x, limits.sieve)?;
        let primes = (2..=a.x).filter(|&p| sieve.is_prime(p) && a.g % p != 0).count() as u64;
        (sieve.primitive_root_prime_count(a.x, a.g)?, primes)
    };
    let fraction = if primes == 0 { 0.0 } else { count as f64 / primes as f64 };
    Ok(Payload::Json(json!({
        "x": a.x,
        "g": a.g,
        "count": count,
        "primes": primes,
        "fraction": fraction,
    })))
}

fn orbit(a: &OrbitArgs, limits: &Limits) -> Result<Payload> {
    let need = |v: Option<u64>, flag: &str| v.ok_or_else(|| Error::invalid(format!("--map {:?} needs {flag}", a.map).to_lowercase()));
    let map = match a.map {
        MapName::Mul => ResidueMap::Mul { g: need(a.g, "--g")? },
        MapName::Add => ResidueMap::Add { a: need(a.a, "--a")? },
        MapName::Pow => ResidueMap::Pow { e: need(a.e, "--e")? },
    };
    let predicted = residue::predicted_orbit_with_budget(map, a.ell, a.x0, limits.factor_budget)?;
    check_cap("orbit modulus", u128::from(a.ell), limits.orbit_modulus)?;
    let stats = residue::orbit(map, a.ell, a.x0)?;
    let mut v = serde_json::to_value(stats)?;
    if let Value::Object(m) = &mut v {
        let (tail, cycle) = match predicted {
            Some((t, c)) => (json!(t), json!(c)),
            None => (Value::Null, Value::Null),
        };
        m.insert("predicted_tail".into(), tail);
        m.insert("predicted_cycle".into(), cycle);
        if let ResidueMap::Add { .. } = map {
            m.insert("mean_period".into(), json!(ratio_str(&arith::additive_average_period(a.ell)?)));
        }
    }
    Ok(Payload::Json(v))
}

fn avg_prim_deviation(a: &AvgPrimDeviationArgs, limits: &Limits) -> Result<Payload> {
    let omega = read_region(&a.region)?;
    let f: Vec<i64> = parse_list("--poly", &a.poly)?;
    let value = equidist::avg_primitive_root_deviation(a.p, a.n, &f, a.m, &omega, limits)?;
    Ok(Payload::Json(json!({
        "p": a.p,
        "n": a.n,
        "poly": f,
        "M": a.m,
        "region_volume": omega.volume(),
        "avg_deviation": value,
        "normalized": value / a.m as f64,
    })))
}
