//! Command-line front end.
//!
//! Every subcommand writes either an aligned table (default) or tab-separated
//! `key=value` records (`--format records`). A TOML file given with `--config`
//! supplies default flag values: top-level keys apply to every subcommand and
//! a `[name]` table to that subcommand only. Flags on the command line win.

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;
use std::str::FromStr;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use crate::corpus::{classical_entry, format_corpus, load_corpus, random_corpus, random_test_function, DrawMode};
use crate::criteria::{lambda_range, theta_oracle, Theorem, TheoremParams};
use crate::disk::{winding_number, GridSpec};
use crate::error::{Error, Result};
use crate::series::{make_function, FunctionSpec, Series, TestFunction, DEFAULT_TRUNCATION};
use crate::verifier::{
    jack_check, run_corpus, search_counterexample, valence_margin, verify_implication, SearchConfig, SearchMode,
    Status, VerificationReport,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_VIOLATION: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Parser, Debug)]
#[command(
    name = "gftv",
    version,
    about = "Closed-form constants, boundary oracles and implication checks for multivalent function criteria",
    after_help = "Environment: GFTV_THREADS caps worker threads (0 = one per core)."
)]
struct Cli {
    /// TOML file with default flag values
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the closed-form constants for the given parameters
    #[command(args_override_self = true)]
    Bounds(BoundsArgs),
    /// Extremize the boundary expression over a θ grid and compare with the closed form
    #[command(args_override_self = true)]
    Oracle(OracleArgs),
    /// Check one criterion on one function
    #[command(args_override_self = true)]
    Verify(VerifyArgs),
    /// Run a parameter grid over a corpus
    #[command(args_override_self = true)]
    Sweep(SweepArgs),
    /// Probe random functions for a counterexample
    #[command(args_override_self = true)]
    Search(SearchArgs),
    /// Count zeros of f inside a circle and report the valence margin
    #[command(args_override_self = true)]
    Valence(ValenceArgs),
    /// Check Jack's lemma for an auxiliary function w
    #[command(args_override_self = true)]
    Jack(JackArgs),
    /// Write a seeded corpus file
    #[command(args_override_self = true)]
    Generate(GenerateArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Records,
}

/// Comma-separated list given as a single flag value.
#[derive(Clone, Debug, PartialEq)]
struct List<T>(Vec<T>);

impl<T: FromStr> FromStr for List<T>
where
    T::Err: std::fmt::Display,
{
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        s.split(',')
            .map(|t| t.trim().parse::<T>().map_err(|e| format!("'{t}': {e}")))
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(List)
    }
}

fn parse_theorem(s: &str) -> std::result::Result<Theorem, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_mode(s: &str) -> std::result::Result<DrawMode, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Args, Debug, Clone)]
struct OutputArgs {
    /// Output layout
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Write output to this file instead of stdout
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct ShapeArgs {
    /// Leading power p of f(z) = z^p + ...
    #[arg(long, default_value_t = 1)]
    p: u32,
    /// Gap n: the first admissible coefficient after z^p is z^(p+n)
    #[arg(long, default_value_t = 1)]
    n: u32,
    /// α (dimensionless)
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    alpha: f64,
    /// β exponent (t23a, t23b)
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    beta: f64,
    /// γ exponent (t23a, t23b)
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    gamma: f64,
    /// λ of the target disk λ(1-z)/(λ-z); required for t24
    #[arg(long, allow_negative_numbers = true)]
    lambda: Option<f64>,
}

impl ShapeArgs {
    fn params(&self, theorem: Theorem) -> Result<TheoremParams> {
        let lambda = match (theorem, self.lambda) {
            (Theorem::T24, None) => {
                let range = lambda_range(self.p, self.n);
                if !range.valid {
                    return Err(Error::ParamOutOfRange(range.diagnostic));
                }
                return Err(Error::ParamOutOfRange("--lambda is required for t24".into()));
            }
            (_, l) => l.unwrap_or(0.0),
        };
        let params = TheoremParams {
            theorem,
            p: self.p,
            n: self.n,
            alpha: self.alpha,
            beta: self.beta,
            gamma: self.gamma,
            lambda,
        };
        params.validate()?;
        Ok(params)
    }
}

#[derive(Args, Debug, Clone)]
struct GridArgs {
    /// Circle radii, comma separated; the largest is where the criterion is checked
    #[arg(long, default_value = "0.9,0.99,0.999", value_name = "R,R,...")]
    radii: List<f64>,
    /// Angular samples M per circle
    #[arg(long, default_value_t = 4096)]
    samples: usize,
    /// Absolute tolerance for margins
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

impl GridArgs {
    fn grid(&self) -> Result<GridSpec> {
        GridSpec::new(self.radii.0.clone(), self.samples, self.tol)
    }
}

#[derive(Args, Debug, Clone)]
struct FunctionArgs {
    /// Coefficients k:re[:im], comma separated (c_p = 1 is implied)
    #[arg(long, value_name = "K:RE[:IM],...", allow_hyphen_values = true)]
    coeffs: Option<String>,
    /// Named function: identity, half-plane, monomial-pair(c)
    #[arg(long, value_name = "NAME")]
    named: Option<String>,
    /// Corpus file to take the function from (with --id)
    #[arg(long, value_name = "PATH")]
    corpus: Option<PathBuf>,
    /// Entry id inside --corpus
    #[arg(long)]
    id: Option<String>,
    /// Truncation order N for --coeffs and --named
    #[arg(long, default_value_t = DEFAULT_TRUNCATION)]
    truncation: usize,
}

fn parse_coeffs(flag: &str, text: &str) -> Result<BTreeMap<usize, Complex64>> {
    let mut out = BTreeMap::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let parts: Vec<&str> = item.split(':').collect();
        let bad = || Error::ParamOutOfRange(format!("{flag}: cannot parse '{item}' as k:re[:im]"));
        if parts.len() < 2 || parts.len() > 3 {
            return Err(bad());
        }
        let k: usize = parts[0].parse().map_err(|_| bad())?;
        let re: f64 = parts[1].parse().map_err(|_| bad())?;
        let im: f64 = parts.get(2).map_or(Ok(0.0), |s| s.parse()).map_err(|_| bad())?;
        if out.insert(k, Complex64::new(re, im)).is_some() {
            return Err(Error::ParamOutOfRange(format!("{flag}: index {k} given twice")));
        }
    }
    Ok(out)
}

impl FunctionArgs {
    fn load(&self, p: u32, n: u32) -> Result<(String, FunctionSpec)> {
        let given = [self.coeffs.is_some(), self.named.is_some(), self.corpus.is_some()];
        if given.iter().filter(|g| **g).count() != 1 {
            return Err(Error::ParamOutOfRange("give exactly one of --coeffs, --named, --corpus".into()));
        }
        if let Some(text) = &self.coeffs {
            return Ok(("user".into(), make_function(p, n, &parse_coeffs("--coeffs", text)?, self.truncation)?));
        }
        if let Some(name) = &self.named {
            let f = crate::corpus::classical_function(name, p, n, self.truncation)?;
            return Ok((name.clone(), f));
        }
        let path = self.corpus.as_ref().expect("checked above");
        let id = self.id.as_ref().ok_or_else(|| Error::ParamOutOfRange("--corpus needs --id".into()))?;
        let entry = load_corpus(path)?
            .into_iter()
            .find(|e| &e.id == id)
            .ok_or_else(|| Error::UnknownName(format!("--id {id} not in {}", path.display())))?;
        Ok((entry.id, entry.function))
    }
}

#[derive(Args, Debug)]
struct BoundsArgs {
    /// Criterion (t21, t22, t23a, t23b, t24); all when omitted
    #[arg(long, value_parser = parse_theorem)]
    theorem: Option<Theorem>,
    #[command(flatten)]
    shape: ShapeArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct OracleArgs {
    /// Criterion (t21, t22, t23a, t24)
    #[arg(long, value_parser = parse_theorem)]
    theorem: Theorem,
    #[command(flatten)]
    shape: ShapeArgs,
    /// Value of m = zw'/w at the contact point; defaults to n
    #[arg(long)]
    m: Option<f64>,
    /// Number of equispaced θ samples on [0, 2π)
    #[arg(long, default_value_t = 200_000)]
    theta_samples: usize,
    /// Largest accepted |grid extremum - closed form|
    #[arg(long, default_value_t = 1e-6)]
    oracle_tol: f64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Criterion (t21, t22, t23a, t23b, t24)
    #[arg(long, value_parser = parse_theorem)]
    theorem: Theorem,
    #[command(flatten)]
    shape: ShapeArgs,
    #[command(flatten)]
    function: FunctionArgs,
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Criteria, comma separated
    #[arg(long, value_name = "T,T,...", default_value = "t21,t22,t23a,t23b,t24")]
    theorems: List<String>,
    /// Leading power p
    #[arg(long, default_value_t = 1)]
    p: u32,
    /// Gap n
    #[arg(long, default_value_t = 1)]
    n: u32,
    /// α values (t21, t22, t23a, t23b)
    #[arg(long, default_value = "0", value_name = "A,A,...")]
    alphas: List<f64>,
    /// β values (t23a, t23b)
    #[arg(long, default_value = "1", value_name = "B,B,...")]
    betas: List<f64>,
    /// γ values (t23a, t23b)
    #[arg(long, default_value = "0", value_name = "G,G,...")]
    gammas: List<f64>,
    /// λ values (t24); t24 is skipped when empty
    #[arg(long, value_name = "L,L,...")]
    lambdas: Option<List<f64>>,
    /// Corpus file; a seeded random corpus is drawn when omitted
    #[arg(long, value_name = "PATH")]
    corpus: Option<PathBuf>,
    /// Random corpus size
    #[arg(long, default_value_t = 1000)]
    count: usize,
    /// Random corpus seed
    #[arg(long, default_value_t = 2024)]
    seed: u64,
    /// Random polynomial degree
    #[arg(long, default_value_t = 5)]
    degree: usize,
    /// Random coefficient scale
    #[arg(long, default_value_t = 0.2)]
    scale: f64,
    /// Random coefficient regime (decay or aggressive)
    #[arg(long, default_value = "decay", value_parser = parse_mode)]
    mode: DrawMode,
    /// Print only the per-parameter summaries
    #[arg(long)]
    summary_only: bool,
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct SearchArgs {
    /// Criterion (t21, t22, t23a, t23b, t24)
    #[arg(long, value_parser = parse_theorem)]
    theorem: Theorem,
    #[command(flatten)]
    shape: ShapeArgs,
    /// Hypothesis slack; 0 keeps the hypothesis strict
    #[arg(long, default_value_t = 0.0)]
    delta: f64,
    /// Trial seed
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Number of random trials
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    /// Trial polynomial degree
    #[arg(long, default_value_t = 4)]
    degree: usize,
    /// Trial coefficient bound
    #[arg(long, default_value_t = 0.3)]
    scale: f64,
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct ValenceArgs {
    /// Leading power p
    #[arg(long, default_value_t = 1)]
    p: u32,
    /// Gap n
    #[arg(long, default_value_t = 1)]
    n: u32,
    #[command(flatten)]
    function: FunctionArgs,
    /// Circle radius
    #[arg(long, default_value_t = 0.99)]
    radius: f64,
    /// Angular samples M on the circle
    #[arg(long, default_value_t = 4096)]
    samples: usize,
    /// Absolute tolerance
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct JackArgs {
    /// Coefficients of w as k:re[:im], comma separated (w(0) = 0)
    #[arg(long, value_name = "K:RE[:IM],...", allow_hyphen_values = true)]
    w: Option<String>,
    /// Order of a random w (used when --w is absent)
    #[arg(long, default_value_t = 1)]
    order: u32,
    /// Extra random coefficients above the order
    #[arg(long, default_value_t = 3)]
    extra: usize,
    /// Random w seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random w stream
    #[arg(long, default_value_t = 0)]
    stream: u64,
    /// Radius r0 in (0, 1)
    #[arg(long, default_value_t = 0.9)]
    r0: f64,
    /// Coarse angular samples before refinement
    #[arg(long, default_value_t = 4096)]
    samples: usize,
    /// Smallest |w(z0)| and |w'(z0)| treated as nonzero
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct GenerateArgs {
    /// Leading power p
    #[arg(long, default_value_t = 1)]
    p: u32,
    /// Gap n
    #[arg(long, default_value_t = 1)]
    n: u32,
    /// Number of random entries
    #[arg(long, default_value_t = 100)]
    count: usize,
    /// Seed
    #[arg(long, default_value_t = 2024)]
    seed: u64,
    /// Polynomial degree
    #[arg(long, default_value_t = 5)]
    degree: usize,
    /// Coefficient scale
    #[arg(long, default_value_t = 0.2)]
    scale: f64,
    /// Coefficient regime (decay or aggressive)
    #[arg(long, default_value = "decay", value_parser = parse_mode)]
    mode: DrawMode,
    /// Named functions to prepend, comma separated
    #[arg(long, value_name = "NAME,NAME,...")]
    named: Option<List<String>>,
    /// Write the corpus here instead of stdout
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,
}

/// Aligned plain-text table.
fn table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(headers.to_vec());
    for row in rows {
        out.push_str(&line(row.iter().map(String::as_str).collect()));
    }
    out
}

fn margin(v: f64) -> String {
    if v.is_finite() {
        format!("{v:+.6e}")
    } else {
        v.to_string()
    }
}

fn opt_lambda2(l: Option<f64>) -> String {
    l.map_or("inf".to_string(), |v| v.to_string())
}

fn coeff_text(f: &Series) -> String {
    let parts: Vec<String> = f.nonzero().map(|(k, c)| format!("{k}:{:e}:{:e}", c.re, c.im)).collect();
    parts.join(",")
}

struct Outcome {
    text: String,
    code: i32,
}

fn emit(out: &OutputArgs, text: String, code: i32) -> Result<Outcome> {
    Ok(Outcome { text: write_to(out.output.as_ref(), text)?, code })
}

/// Writes to the file if one is given; returns what still goes to stdout.
fn write_to(path: Option<&PathBuf>, text: String) -> Result<String> {
    match path {
        Some(p) => {
            fs::write(p, text)?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

fn cmd_bounds(a: &BoundsArgs) -> Result<Outcome> {
    let s = &a.shape;
    let theorems: Vec<Theorem> = a.theorem.map_or(Theorem::ALL.to_vec(), |t| vec![t]);
    let range = lambda_range(s.p, s.n);
    let mut rows = Vec::new();
    let mut records = Vec::new();
    for t in theorems {
        let params = match s.params(t) {
            Ok(p) => p,
            Err(e) if a.theorem.is_some() => return Err(e),
            Err(e) => {
                let cells = [t.to_string(), "-".into(), "-".into(), e.to_string()];
                rows.push(cells.to_vec());
                records.push(format!("theorem={t}\tp={}\tn={}\terror={e}", s.p, s.n));
                continue;
            }
        };
        let bound = params.bound()?;
        let thr = params.conclusion_threshold();
        let detail = match t {
            Theorem::T21 | Theorem::T22 => format!("alpha={}", params.alpha),
            Theorem::T23A | Theorem::T23B => {
                format!("alpha={} beta={} gamma={}", params.alpha, params.beta, params.gamma)
            }
            Theorem::T24 => format!("lambda={}", params.lambda),
        };
        rows.push(vec![t.to_string(), bound.to_string(), thr.to_string(), detail]);
        records.push(format!(
            "theorem={t}\tp={}\tn={}\talpha={}\tbeta={}\tgamma={}\tlambda={}\tbound={:.16e}\tthreshold={:.16e}",
            params.p, params.n, params.alpha, params.beta, params.gamma, params.lambda, bound, thr
        ));
    }
    let range_text = if range.valid {
        format!("({}, {})", range.lambda1, opt_lambda2(range.lambda2))
    } else {
        range.diagnostic.clone()
    };
    let text = match a.out.format {
        Format::Table => {
            let mut t = format!("p={} n={}\n", s.p, s.n);
            t.push_str(&table(&["theorem", "bound", "threshold", "parameters"], &rows));
            t.push_str(&format!("lambda range: {range_text}\n"));
            t
        }
        Format::Records => {
            records.push(format!(
                "lambda_range\tp={}\tn={}\tvalid={}\tlambda1={}\tlambda2={}",
                s.p,
                s.n,
                range.valid,
                range.lambda1,
                opt_lambda2(range.lambda2)
            ));
            records.join("\n") + "\n"
        }
    };
    emit(&a.out, text, EXIT_OK)
}

fn cmd_oracle(a: &OracleArgs) -> Result<Outcome> {
    let params = a.shape.params(a.theorem)?;
    let m = a.m.unwrap_or(params.n as f64);
    let oracle = theta_oracle(&params, m, a.theta_samples)?;
    let closed = params.bound()?;
    let diff = (oracle.value - closed).abs();
    let ok = diff <= a.oracle_tol;
    let kind = if a.theorem == Theorem::T21 { "max" } else { "min" };
    let text = match a.out.format {
        Format::Table => {
            let rows = vec![vec![
                a.theorem.to_string(),
                format!("{kind} {}", oracle.value),
                oracle.theta.to_string(),
                closed.to_string(),
                format!("{diff:.3e}"),
                oracle.excluded.to_string(),
                if ok { "ok" } else { "MISMATCH" }.to_string(),
            ]];
            table(&["theorem", "grid", "theta", "closed_form", "abs_diff", "excluded", "result"], &rows)
        }
        Format::Records => format!(
            "theorem={}\tp={}\tn={}\talpha={}\tbeta={}\tgamma={}\tlambda={}\tm={m}\tsamples={}\textremum={kind}\tgrid={:.16e}\ttheta={:.16e}\tclosed_form={:.16e}\tabs_diff={:e}\texcluded={}\tok={ok}\n",
            params.theorem,
            params.p,
            params.n,
            params.alpha,
            params.beta,
            params.gamma,
            params.lambda,
            oracle.samples,
            oracle.value,
            oracle.theta,
            closed,
            diff,
            oracle.excluded
        ),
    };
    emit(&a.out, text, if ok { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn report_table(r: &VerificationReport) -> String {
    let p = &r.params;
    let rows: Vec<Vec<String>> = [
        ("id", r.id.clone()),
        ("theorem", p.theorem.to_string()),
        ("p, n", format!("{}, {}", p.p, p.n)),
        ("alpha, beta, gamma", format!("{}, {}, {}", p.alpha, p.beta, p.gamma)),
        ("lambda", p.lambda.to_string()),
        ("radius", r.radius.to_string()),
        ("bound", r.bound.to_string()),
        ("hypothesis margin", margin(r.hyp_margin)),
        ("conclusion margin", margin(r.concl_margin)),
        ("status", r.status.to_string()),
        ("samples", r.samples.to_string()),
        ("principle", r.principle_ok.map_or("na", |b| if b { "ok" } else { "fail" }).to_string()),
        ("note", r.note.clone().unwrap_or_default()),
    ]
    .into_iter()
    .map(|(k, v)| vec![k.to_string(), v])
    .collect();
    table(&["field", "value"], &rows)
}

fn status_code(s: Status) -> i32 {
    if s == Status::Violation {
        EXIT_VIOLATION
    } else {
        EXIT_OK
    }
}

fn cmd_verify(a: &VerifyArgs) -> Result<Outcome> {
    let params = a.shape.params(a.theorem)?;
    let grid = a.grid.grid()?;
    let (id, f) = a.function.load(a.shape.p, a.shape.n)?;
    let r = verify_implication(&id, &f, &params, &grid)?;
    let text = match a.out.format {
        Format::Table => report_table(&r),
        Format::Records => r.to_record() + "\n",
    };
    emit(&a.out, text, status_code(r.status))
}

fn sweep_params(a: &SweepArgs) -> Result<Vec<TheoremParams>> {
    let mut theorems = a
        .theorems
        .0
        .iter()
        .map(|s| s.parse::<Theorem>())
        .collect::<Result<Vec<_>>>()?;
    theorems.sort();
    theorems.dedup();
    let sorted = |v: &[f64]| {
        let mut v = v.to_vec();
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    };
    let (alphas, betas, gammas) = (sorted(&a.alphas.0), sorted(&a.betas.0), sorted(&a.gammas.0));
    let lambdas = sorted(a.lambdas.as_ref().map_or(&[][..], |l| &l.0));
    let mut out = Vec::new();
    for t in theorems {
        let base = TheoremParams { theorem: t, p: a.p, n: a.n, alpha: 0.0, beta: 0.0, gamma: 0.0, lambda: 0.0 };
        match t {
            Theorem::T21 | Theorem::T22 => out.extend(alphas.iter().map(|&alpha| TheoremParams { alpha, ..base })),
            Theorem::T23A | Theorem::T23B => {
                for &alpha in &alphas {
                    for &beta in &betas {
                        for &gamma in &gammas {
                            out.push(TheoremParams { alpha, beta, gamma, ..base });
                        }
                    }
                }
            }
            Theorem::T24 => out.extend(lambdas.iter().map(|&lambda| TheoremParams { lambda, ..base })),
        }
    }
    for p in &out {
        p.validate().map_err(|e| Error::ParamOutOfRange(format!("{}: {e}", p.theorem)))?;
    }
    if out.is_empty() {
        return Err(Error::ParamOutOfRange("sweep has no parameter sets (t24 needs --lambdas)".into()));
    }
    Ok(out)
}

fn cmd_sweep(a: &SweepArgs) -> Result<Outcome> {
    let grid = a.grid.grid()?;
    let sets = sweep_params(a)?;
    let mut corpus = match &a.corpus {
        Some(path) => load_corpus(path)?,
        None => random_corpus(a.count, a.p, a.n, a.degree, a.scale, a.mode, a.seed)?,
    };
    corpus.sort_by(|x, y| x.id.cmp(&y.id));

    let mut rows = Vec::new();
    let mut records = Vec::new();
    let mut summary_rows = Vec::new();
    let mut summaries = Vec::new();
    let mut any_violation = false;
    for params in &sets {
        let rep = run_corpus(&corpus, params, &grid)?;
        let c = rep.counts;
        eprintln!("{}", rep.summary_record());
        any_violation |= c.violation > 0;
        let label = format!(
            "{} a={} b={} g={} l={}",
            params.theorem, params.alpha, params.beta, params.gamma, params.lambda
        );
        if !a.summary_only {
            for r in &rep.reports {
                rows.push(vec![
                    label.clone(),
                    r.id.clone(),
                    margin(r.hyp_margin),
                    margin(r.concl_margin),
                    r.status.to_string(),
                ]);
                records.push(r.to_record());
            }
        }
        summary_rows.push(vec![
            label,
            c.total().to_string(),
            c.both_hold.to_string(),
            c.vacuous.to_string(),
            c.violation.to_string(),
            c.inconclusive.to_string(),
        ]);
        summaries.push(rep.summary_record());
    }
    let text = match a.out.format {
        Format::Table => {
            let mut t = String::new();
            if !a.summary_only {
                t.push_str(&table(&["parameters", "id", "hyp_margin", "concl_margin", "status"], &rows));
                t.push('\n');
            }
            t.push_str(&table(
                &["parameters", "total", "both_hold", "vacuous", "violation", "inconclusive"],
                &summary_rows,
            ));
            t
        }
        Format::Records => {
            records.extend(summaries);
            records.join("\n") + "\n"
        }
    };
    emit(&a.out, text, if any_violation { EXIT_VIOLATION } else { EXIT_OK })
}

fn cmd_search(a: &SearchArgs) -> Result<Outcome> {
    let params = a.shape.params(a.theorem)?;
    let grid = a.grid.grid()?;
    let mode = SearchMode::from_delta(a.delta)?;
    let cfg = SearchConfig { mode, seed: a.seed, trials: a.trials, degree: a.degree, scale: a.scale };
    let outcome = search_counterexample(&params, &cfg, &grid)?;
    let mode_name = match mode {
        SearchMode::Strict => "strict".to_string(),
        SearchMode::Relaxed(d) => format!("relaxed(delta={d})"),
    };
    let witness = outcome.witness.as_ref();
    let text = match a.out.format {
        Format::Table => {
            let mut rows = vec![
                vec!["theorem".into(), params.theorem.to_string()],
                vec!["mode".into(), mode_name],
                vec!["trials".into(), outcome.trials.to_string()],
                vec!["accepted".into(), outcome.accepted.to_string()],
                vec!["witness".into(), witness.map_or("none".into(), |w| format!("trial {}", w.trial))],
            ];
            if let Some(w) = witness {
                rows.push(vec!["coefficients".into(), coeff_text(w.function.series())]);
                rows.push(vec!["hypothesis margin".into(), margin(w.report.hyp_margin)]);
                rows.push(vec!["conclusion margin".into(), margin(w.report.concl_margin)]);
            }
            table(&["field", "value"], &rows)
        }
        Format::Records => {
            let mut t = format!(
                "search\ttheorem={}\tmode={mode_name}\tseed={}\ttrials={}\taccepted={}\twitness={}\n",
                params.theorem,
                a.seed,
                outcome.trials,
                outcome.accepted,
                witness.map_or("none".into(), |w| w.trial.to_string())
            );
            if let Some(w) = witness {
                t.push_str(&format!("{}\tcoeffs={}\n", w.report.to_record(), coeff_text(w.function.series())));
            }
            t
        }
    };
    let code = if witness.is_some() && mode == SearchMode::Strict { EXIT_VIOLATION } else { EXIT_OK };
    emit(&a.out, text, code)
}

fn cmd_valence(a: &ValenceArgs) -> Result<Outcome> {
    let grid = GridSpec::new(vec![a.radius], a.samples, a.tol)?;
    let (id, f) = a.function.load(a.p, a.n)?;
    let winding = winding_number(f.series(), a.radius, a.samples, a.tol)?;
    let vm = valence_margin(&f, &grid)?;
    let ok = winding == a.p as i64;
    let text = match a.out.format {
        Format::Table => table(
            &["id", "p", "radius", "winding", "valence_margin", "result"],
            &[vec![
                id,
                a.p.to_string(),
                a.radius.to_string(),
                winding.to_string(),
                margin(vm),
                if ok { "ok" } else { "MISMATCH" }.to_string(),
            ]],
        ),
        Format::Records => format!(
            "id={id}\tp={}\tradius={}\tsamples={}\twinding={winding}\tvalence_margin={vm:.16e}\tok={ok}\n",
            a.p, a.radius, a.samples
        ),
    };
    emit(&a.out, text, if ok { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn cmd_jack(a: &JackArgs) -> Result<Outcome> {
    let w = match &a.w {
        Some(text) => {
            let coeffs = parse_coeffs("--w", text)?;
            let top = coeffs.keys().next_back().copied().unwrap_or(0);
            TestFunction::from_map(&coeffs, top.max(1))?
        }
        None => random_test_function(a.order, a.extra, a.seed, a.stream)?,
    };
    let r = jack_check(&w, a.r0, a.samples, a.tol)?;
    let ok = r.passes();
    let text = match a.out.format {
        Format::Table => table(
            &["order", "r0", "z0", "m", "residual", "second_order", "result"],
            &[vec![
                r.order.to_string(),
                r.r0.to_string(),
                format!("{:.9}{:+.9}i", r.z0.re, r.z0.im),
                format!("{:.9}{:+.9}i", r.m_estimate.re, r.m_estimate.im),
                format!("{:.3e}", r.residual),
                format!("{:.9}", r.second_order),
                if ok { "ok" } else { "FAIL" }.to_string(),
            ]],
        ),
        Format::Records => format!(
            "order={}\tr0={}\tz0_re={:.16e}\tz0_im={:.16e}\tm_re={:.16e}\tm_im={:.16e}\tresidual={:e}\tsecond_order={:.16e}\tok={ok}\n",
            r.order, r.r0, r.z0.re, r.z0.im, r.m_estimate.re, r.m_estimate.im, r.residual, r.second_order
        ),
    };
    emit(&a.out, text, if ok { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn cmd_generate(a: &GenerateArgs) -> Result<Outcome> {
    let mut entries = Vec::new();
    if let Some(names) = &a.named {
        for name in &names.0 {
            entries.push(classical_entry(name, a.p, a.n)?);
        }
    }
    entries.extend(random_corpus(a.count, a.p, a.n, a.degree, a.scale, a.mode, a.seed)?);
    Ok(Outcome { text: write_to(a.output.as_ref(), format_corpus(&entries))?, code: EXIT_OK })
}

fn execute(cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::Bounds(a) => cmd_bounds(a),
        Command::Oracle(a) => cmd_oracle(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Search(a) => cmd_search(a),
        Command::Valence(a) => cmd_valence(a),
        Command::Jack(a) => cmd_jack(a),
        Command::Generate(a) => cmd_generate(a),
    }
}

fn config_flags(value: &toml::Value, key: &str, out: &mut Vec<String>) -> std::result::Result<(), String> {
    let flag = format!("--{key}");
    match value {
        toml::Value::Boolean(true) => out.push(flag),
        toml::Value::Boolean(false) => {}
        toml::Value::String(s) => out.extend([flag, s.clone()]),
        toml::Value::Integer(i) => out.extend([flag, i.to_string()]),
        toml::Value::Float(x) => out.extend([flag, x.to_string()]),
        toml::Value::Array(items) => {
            let parts = items
                .iter()
                .map(|v| match v {
                    toml::Value::String(s) => Ok(s.clone()),
                    toml::Value::Integer(i) => Ok(i.to_string()),
                    toml::Value::Float(x) => Ok(x.to_string()),
                    _ => Err(format!("config key '{key}': unsupported list item")),
                })
                .collect::<std::result::Result<Vec<_>, _>>()?;
            out.extend([flag, parts.join(",")]);
        }
        _ => return Err(format!("config key '{key}': unsupported value")),
    }
    Ok(())
}

/// Splices flags from the `--config` file right after the subcommand name,
/// so flags given on the command line come later and override them.
fn merge_config(argv: Vec<String>) -> std::result::Result<Vec<String>, String> {
    let mut path = None;
    let mut sub = None;
    let mut i = 1;
    while i < argv.len() {
        let a = &argv[i];
        if a == "--config" {
            path = argv.get(i + 1).cloned();
            i += 2;
            continue;
        }
        if let Some(p) = a.strip_prefix("--config=") {
            path = Some(p.to_string());
        } else if sub.is_none() && !a.starts_with('-') {
            sub = Some(i);
        }
        i += 1;
    }
    let (Some(path), Some(sub)) = (path, sub) else { return Ok(argv) };
    let text = fs::read_to_string(&path).map_err(|e| format!("--config {path}: {e}"))?;
    let doc: toml::Table = text.parse().map_err(|e| format!("--config {path}: {e}"))?;
    let name = argv[sub].clone();
    let mut extra = Vec::new();
    for (k, v) in &doc {
        if !v.is_table() {
            config_flags(v, k, &mut extra)?;
        }
    }
    if let Some(toml::Value::Table(section)) = doc.get(&name) {
        for (k, v) in section {
            config_flags(v, k, &mut extra)?;
        }
    }
    let mut merged = argv[..=sub].to_vec();
    merged.extend(extra);
    merged.extend(argv[sub + 1..].iter().cloned());
    Ok(merged)
}

fn thread_count() -> std::result::Result<usize, String> {
    match std::env::var("GFTV_THREADS") {
        Ok(v) => v.trim().parse().map_err(|_| format!("GFTV_THREADS={v} is not a non-negative integer")),
        Err(_) => Ok(0),
    }
}

fn usage_error(e: &Error) -> bool {
    matches!(
        e,
        Error::ParamOutOfRange(_)
            | Error::UnknownName(_)
            | Error::GapViolation { .. }
            | Error::IndexOutOfRange { .. }
            | Error::InvalidFunction(_)
            | Error::MalformedFile { .. }
            | Error::InvariantViolation { .. }
    )
}

/// Parses `argv` (program name first), runs the subcommand and returns the exit code.
pub fn run<I: IntoIterator<Item = String>>(argv: I) -> i32 {
    let argv = match merge_config(argv.into_iter().collect()) {
        Ok(a) => a,
        Err(msg) => {
            eprintln!("gftv: error: {msg}");
            return EXIT_USAGE;
        }
    };
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
        }
    };
    let threads = match thread_count() {
        Ok(t) => t,
        Err(msg) => {
            eprintln!("gftv: error: {msg}");
            return EXIT_USAGE;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("gftv: error: thread pool: {e}");
            return EXIT_CHECK_FAILED;
        }
    };
    match pool.install(|| execute(&cli.command)) {
        Ok(out) => {
            print!("{}", out.text);
            out.code
        }
        Err(e) => {
            eprintln!("gftv: error: {e}");
            if usage_error(&e) {
                EXIT_USAGE
            } else {
                EXIT_CHECK_FAILED
            }
        }
    }
}
