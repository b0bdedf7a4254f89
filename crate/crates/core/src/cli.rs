//! Command-line front end. Reports are JSON (every number paired with an
//! `error_bound`, infinities written as `"inf"`) or RFC-4180 CSV.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use crate::characterization::{characterize, classify_case, embedding_constants, ConstantReport, Exponents};
use crate::discretization::{discretizing_sequence, DEFAULT_K_CAP, DEFAULT_K_MIN};
use crate::error::Error;
use crate::oracle::{estimate_best_constant, OracleEstimate, OracleOptions};
use crate::scalar::Scalar;
use crate::spaces::{reduce_four_weight, FourWeightConfig};
use crate::weights::{parse_weight, Weight};

#[derive(Parser, Debug)]
#[command(name = "hcopson", version, about = "Best constants of weighted Hardy-Copson inequalities")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Case region and characterizing constants.
    Characterize(ProblemArgs),
    /// Numerical lower bound for the best constant.
    Oracle(OracleArgs),
    /// Characterization and oracle side by side, checked against an envelope.
    Verify(VerifyArgs),
    /// Discretizing sequence of a weight as CSV.
    Discretize(DiscretizeArgs),
    /// Constants of the oscillation-space embedding.
    Embed(EmbedArgs),
    /// Characterization over a grid of exponents as CSV.
    Sweep(SweepArgs),
}

/// Either the three-weight problem (`--r --p --q --u --v --w`) or the
/// four-weight one (`--p1 --q1 --p2 --q2 --u1 --v1 --u2 --v2`).
#[derive(Args, Debug, Clone)]
pub struct ProblemArgs {
    #[arg(long)]
    pub r: Option<f64>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub q: Option<f64>,
    #[arg(long)]
    pub u: Option<String>,
    #[arg(long)]
    pub v: Option<String>,
    #[arg(long)]
    pub w: Option<String>,
    #[arg(long)]
    pub p1: Option<f64>,
    #[arg(long)]
    pub q1: Option<f64>,
    #[arg(long)]
    pub p2: Option<f64>,
    #[arg(long)]
    pub q2: Option<f64>,
    #[arg(long)]
    pub u1: Option<String>,
    #[arg(long)]
    pub v1: Option<String>,
    #[arg(long)]
    pub u2: Option<String>,
    #[arg(long)]
    pub v2: Option<String>,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct SearchArgs {
    #[arg(long, default_value_t = 64)]
    pub cells: usize,
    #[arg(long, default_value_t = 8)]
    pub restarts: usize,
    #[arg(long, default_value_t = 200)]
    pub budget: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub grid_min: Option<f64>,
    #[arg(long)]
    pub grid_max: Option<f64>,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[command(flatten)]
    pub search: SearchArgs,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[command(flatten)]
    pub search: SearchArgs,
    /// Pass when oracle / estimate lies in [1/envelope, envelope].
    #[arg(long, default_value_t = 64.0)]
    pub envelope: f64,
}

#[derive(Args, Debug)]
pub struct DiscretizeArgs {
    #[arg(long)]
    pub w: String,
    #[arg(long, default_value_t = DEFAULT_K_MIN, allow_hyphen_values = true)]
    pub k_min: i32,
    #[arg(long, default_value_t = DEFAULT_K_CAP, allow_hyphen_values = true)]
    pub k_max: i32,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct EmbedArgs {
    #[arg(long)]
    pub p: f64,
    #[arg(long)]
    pub q: f64,
    #[arg(long)]
    pub u: String,
    #[arg(long)]
    pub w: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// Comma-separated values of r.
    #[arg(long, value_delimiter = ',')]
    pub r: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    pub p: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    pub q: Vec<f64>,
    #[arg(long)]
    pub u: String,
    #[arg(long)]
    pub v: String,
    #[arg(long)]
    pub w: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Failure of a command, carrying its exit status.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) | Error::Io(_) | Error::InvalidWeight(_) | Error::InvalidExponents(_) => 2,
            Error::DegenerateWeight(_) | Error::Triviality { .. } => 3,
            _ => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure { code: 2, message: msg.into() }
}

/// Parses `args` (program name first) and runs the command. Returns the
/// process exit status; diagnostics go to stderr.
pub fn main_with_args<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run(&cli.command) {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

pub fn run(cmd: &Command) -> std::result::Result<(), Failure> {
    match cmd {
        Command::Characterize(a) => {
            let pr = Problem::from_args(a)?;
            let rep = characterize(&pr.e, &pr.u, &pr.v, &pr.w)?;
            emit(a.out.as_deref(), &pretty(&characterization_json(&pr, &rep)))
        }
        Command::Oracle(a) => {
            let pr = Problem::from_args(&a.problem)?;
            let est = estimate_best_constant(&pr.e, &pr.u, &pr.v, &pr.w, &search_options(&a.search)?);
            if let Some(out) = &a.problem.out {
                emit(Some(&witness_path(out)), &witness_csv(&est)?)?;
            }
            emit(a.problem.out.as_deref(), &pretty(&oracle_json(&pr, &est)))
        }
        Command::Verify(a) => {
            let pr = Problem::from_args(&a.problem)?;
            let rep = characterize(&pr.e, &pr.u, &pr.v, &pr.w)?;
            let est = estimate_best_constant(&pr.e, &pr.u, &pr.v, &pr.w, &search_options(&a.search)?);
            let ratio = verify_ratio(est.ratio, rep.estimate.value());
            let pass = envelope_pass(ratio, a.envelope);
            let body = json!({
                "characterization": characterization_json(&pr, &rep),
                "oracle": oracle_json(&pr, &est),
                "ratio": num(ratio, ratio * 2.0 * f64::quad_tol() + ratio * rep.error_bound / rep.estimate.value().max(f64::MIN_POSITIVE)),
                "envelope": a.envelope,
                "pass": pass,
            });
            emit(a.problem.out.as_deref(), &pretty(&body))?;
            if pass {
                Ok(())
            } else {
                Err(Failure { code: 1, message: format!("ratio {ratio} outside the envelope [1/{0}, {0}]", a.envelope) })
            }
        }
        Command::Discretize(a) => {
            let w: Weight<f64> = parse_weight(&a.w)?;
            let seq = discretizing_sequence(&w, a.k_min, a.k_max)?;
            let mut wr = csv::Writer::from_writer(Vec::new());
            wr.write_record(["k", "x_k", "W_x_k"]).map_err(io)?;
            for (k, x, wx) in seq.rows() {
                wr.write_record([k.to_string(), fmt(x), fmt(wx)]).map_err(io)?;
            }
            emit(a.out.as_deref(), &finish_csv(wr)?)
        }
        Command::Embed(a) => {
            let u: Weight<f64> = parse_weight(&a.u)?;
            let w: Weight<f64> = parse_weight(&a.w)?;
            let rep = embedding_constants(a.p, a.q, &u, &w)?;
            let mut body = report_fields(&rep);
            body.insert("p".into(), json!(a.p));
            body.insert("q".into(), json!(a.q));
            emit(a.out.as_deref(), &pretty(&Value::Object(body)))
        }
        Command::Sweep(a) => {
            let u: Weight<f64> = parse_weight(&a.u)?;
            let v: Weight<f64> = parse_weight(&a.v)?;
            let w: Weight<f64> = parse_weight(&a.w)?;
            let mut points = Vec::new();
            for &r in &a.r {
                for &p in &a.p {
                    for &q in &a.q {
                        points.push((r, p, q));
                    }
                }
            }
            if points.is_empty() {
                return Err(usage("sweep needs at least one value for each of --r, --p, --q"));
            }
            let rows = sweep_rows(&points, &u, &v, &w);
            let mut wr = csv::Writer::from_writer(Vec::new());
            wr.write_record(["r", "p", "q", "case", "estimate", "error_bound", "finite", "status"]).map_err(io)?;
            for row in rows {
                wr.write_record(row).map_err(io)?;
            }
            emit(a.out.as_deref(), &finish_csv(wr)?)
        }
    }
}

/// `oracle / estimate`; zero when the estimate is infinite.
pub fn verify_ratio(oracle: f64, estimate: f64) -> f64 {
    if estimate.is_infinite() {
        0.0
    } else if estimate == 0.0 {
        if oracle == 0.0 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        oracle / estimate
    }
}

pub fn envelope_pass(ratio: f64, envelope: f64) -> bool {
    ratio >= 1.0 / envelope && ratio <= envelope
}

struct Problem {
    e: Exponents<f64>,
    u: Weight<f64>,
    v: Weight<f64>,
    w: Weight<f64>,
    /// `p1` of a reduced four-weight problem.
    power: Option<f64>,
}

impl Problem {
    fn from_args(a: &ProblemArgs) -> std::result::Result<Self, Failure> {
        let four = [a.p1, a.q1, a.p2, a.q2].iter().any(Option::is_some);
        if four {
            let need = |x: Option<f64>, n: &str| x.ok_or_else(|| usage(format!("--{n} is required")));
            let weight = |s: &Option<String>, n: &str| -> std::result::Result<Weight<f64>, Failure> {
                Ok(parse_weight(s.as_deref().ok_or_else(|| usage(format!("--{n} is required")))?)?)
            };
            let cfg = FourWeightConfig {
                p1: need(a.p1, "p1")?,
                q1: need(a.q1, "q1")?,
                p2: need(a.p2, "p2")?,
                q2: need(a.q2, "q2")?,
                u1: weight(&a.u1, "u1")?,
                v1: weight(&a.v1, "v1")?,
                u2: weight(&a.u2, "u2")?,
                v2: weight(&a.v2, "v2")?,
            };
            let red = reduce_four_weight(&cfg)?;
            return Ok(Problem { e: red.exponents, u: red.u, v: red.v, w: red.w, power: Some(red.power) });
        }
        let need = |x: Option<f64>, n: &str| x.ok_or_else(|| usage(format!("--{n} is required")));
        let weight = |s: &Option<String>, n: &str| -> std::result::Result<Weight<f64>, Failure> {
            Ok(parse_weight(s.as_deref().ok_or_else(|| usage(format!("--{n} is required")))?)?)
        };
        let e = Exponents::new(need(a.r, "r")?, need(a.p, "p")?, need(a.q, "q")?)?;
        Ok(Problem { e, u: weight(&a.u, "u")?, v: weight(&a.v, "v")?, w: weight(&a.w, "w")?, power: None })
    }

    fn header(&self) -> Map<String, Value> {
        let mut m = Map::new();
        m.insert("r".into(), json!(self.e.r));
        m.insert("p".into(), json!(self.e.p));
        m.insert("q".into(), json!(self.e.q));
        m.insert("u".into(), json!(self.u.to_string()));
        m.insert("v".into(), json!(self.v.to_string()));
        m.insert("w".into(), json!(self.w.to_string()));
        if let Some(p1) = self.power {
            m.insert("p1".into(), json!(p1));
        }
        m
    }
}

fn search_options(a: &SearchArgs) -> std::result::Result<OracleOptions<f64>, Failure> {
    let grid = match (a.grid_min, a.grid_max) {
        (None, None) => None,
        (Some(lo), Some(hi)) if lo > 0.0 && hi > lo && hi.is_finite() => Some((lo, hi)),
        (Some(_), Some(_)) => return Err(usage("--grid-min and --grid-max must satisfy 0 < min < max < inf")),
        _ => return Err(usage("--grid-min and --grid-max go together")),
    };
    Ok(OracleOptions { cells: a.cells, restarts: a.restarts, budget: a.budget, seed: a.seed, grid, ..Default::default() })
}

/// `{"value": x, "error_bound": e}` with non-finite values as strings.
fn num(x: f64, err: f64) -> Value {
    json!({ "value": scalar(x), "error_bound": scalar(err) })
}

fn scalar(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else if x.is_nan() {
        json!("nan")
    } else if x > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

fn report_fields(rep: &ConstantReport<f64>) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("case".into(), json!(rep.case.to_string()));
    let mut cs = Map::new();
    for (name, c) in &rep.constants {
        cs.insert(name.clone(), num(c.value.value(), c.error_bound));
    }
    m.insert("constants".into(), Value::Object(cs));
    m.insert("estimate".into(), num(rep.estimate.value(), rep.error_bound));
    m.insert("finite".into(), json!(rep.finite));
    m.insert("extrapolated".into(), json!(rep.extrapolated));
    m
}

fn characterization_json(pr: &Problem, rep: &ConstantReport<f64>) -> Value {
    let mut m = pr.header();
    m.extend(report_fields(rep));
    if let Some(p1) = pr.power {
        let c = rep.estimate.value().powf(1.0 / p1);
        m.insert("four_weight_estimate".into(), num(c, c * rep.error_bound / (p1 * rep.estimate.value().max(f64::MIN_POSITIVE))));
    }
    Value::Object(m)
}

fn oracle_json(pr: &Problem, est: &OracleEstimate<f64>) -> Value {
    let mut m = pr.header();
    m.insert("lower_bound".into(), num(est.ratio, est.ratio * f64::quad_tol()));
    m.insert("converged".into(), json!(est.converged));
    m.insert("sweeps".into(), json!(est.trace.last().map(|t| t.0).unwrap_or(0)));
    m.insert("witness_cells".into(), json!(est.witness.len()));
    Value::Object(m)
}

fn witness_path(out: &Path) -> PathBuf {
    out.with_extension("witness.csv")
}

fn witness_csv(est: &OracleEstimate<f64>) -> std::result::Result<String, Failure> {
    let mut wr = csv::Writer::from_writer(Vec::new());
    wr.write_record(["left", "right", "value"]).map_err(io)?;
    for (a, b, c) in est.witness.cells() {
        wr.write_record([fmt(a), fmt(b), fmt(c)]).map_err(io)?;
    }
    finish_csv(wr)
}

fn sweep_rows(points: &[(f64, f64, f64)], u: &Weight<f64>, v: &Weight<f64>, w: &Weight<f64>) -> Vec<Vec<String>> {
    let row = |&(r, p, q): &(f64, f64, f64)| -> Vec<String> {
        let head = vec![fmt(r), fmt(p), fmt(q)];
        let tail = match Exponents::new(r, p, q).and_then(|e| characterize(&e, u, v, w).map(|rep| (e, rep))) {
            Ok((e, rep)) => vec![
                classify_case(&e).to_string(),
                fmt(rep.estimate.value()),
                fmt(rep.error_bound),
                rep.finite.to_string(),
                "ok".into(),
            ],
            Err(err) => vec![String::new(), String::new(), String::new(), String::new(), err.to_string()],
        };
        head.into_iter().chain(tail).collect()
    };
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get()).min(points.len());
    let chunk = points.len().div_ceil(threads);
    std::thread::scope(|s| {
        let handles: Vec<_> = points.chunks(chunk).map(|c| s.spawn(move || c.iter().map(row).collect::<Vec<_>>())).collect();
        handles.into_iter().flat_map(|h| h.join().expect("sweep worker panicked")).collect()
    })
}

fn fmt(x: f64) -> String {
    if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x}")
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn io(e: impl std::fmt::Display) -> Failure {
    Failure { code: 1, message: format!("i/o error: {e}") }
}

fn finish_csv(wr: csv::Writer<Vec<u8>>) -> std::result::Result<String, Failure> {
    let bytes = wr.into_inner().map_err(io)?;
    String::from_utf8(bytes).map_err(io)
}

fn emit(path: Option<&Path>, body: &str) -> std::result::Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, body).map_err(io),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(body.as_bytes()).map_err(io)
        }
    }
}

/// Re-exported so callers can classify errors without the CLI types.
pub fn exit_code(e: &Error) -> i32 {
    Failure::from(e.clone()).code
}
