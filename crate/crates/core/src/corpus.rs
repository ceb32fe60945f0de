//! Seeded generation of test functions, named reference functions, and the
//! corpus file format.
//!
//! Corpus files are line oriented. Blank lines and lines starting with `#` are
//! ignored; every other line is one entry of whitespace-separated fields:
//!
//! ```text
//! <id> <p> <n> <N> <exact> <tail> <provenance> [<k> <re> <im>]...
//! ```
//!
//! `exact` is `true` or `false`, `tail` is the coefficient bound used for the
//! truncation tail (0 for polynomials), and coefficients are written with 17
//! significant digits. Provenance is one of `user`, `named:<name>` or
//! `random:seed=<s>:stream=<i>:scale=<x>:mode=<decay|aggressive>`.

use std::collections::{BTreeMap, HashSet};
use std::f64::consts::TAU;
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::series::{make_function, FunctionSpec, Series, TestFunction, DEFAULT_TRUNCATION};

const HEADER: &str = "# gftv corpus v1\n# id p n N exact tail provenance [k re im]...\n";

/// Coefficient size regime for random draws.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DrawMode {
    /// `|c_k| <= scale / k^2`
    Decay,
    /// `|c_k| <= scale`
    Aggressive,
}

impl fmt::Display for DrawMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DrawMode::Decay => "decay",
            DrawMode::Aggressive => "aggressive",
        })
    }
}

impl FromStr for DrawMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "decay" => Ok(DrawMode::Decay),
            "aggressive" => Ok(DrawMode::Aggressive),
            other => Err(Error::ParamOutOfRange(format!("unknown draw mode '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Provenance {
    Random { seed: u64, stream: u64, scale: f64, mode: DrawMode },
    Named(String),
    User,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Random { seed, stream, scale, mode } => {
                write!(f, "random:seed={seed}:stream={stream}:scale={scale}:mode={mode}")
            }
            Provenance::Named(name) => write!(f, "named:{name}"),
            Provenance::User => f.write_str("user"),
        }
    }
}

impl FromStr for Provenance {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "user" {
            return Ok(Provenance::User);
        }
        if let Some(name) = s.strip_prefix("named:") {
            return Ok(Provenance::Named(name.to_string()));
        }
        let rest = s.strip_prefix("random:").ok_or_else(|| format!("unknown provenance '{s}'"))?;
        let mut fields = BTreeMap::new();
        for part in rest.split(':') {
            let (k, v) = part.split_once('=').ok_or_else(|| format!("bad provenance field '{part}'"))?;
            fields.insert(k, v);
        }
        let get = |k: &str| fields.get(k).copied().ok_or_else(|| format!("provenance missing '{k}'"));
        Ok(Provenance::Random {
            seed: get("seed")?.parse().map_err(|e| format!("seed: {e}"))?,
            stream: get("stream")?.parse().map_err(|e| format!("stream: {e}"))?,
            scale: get("scale")?.parse().map_err(|e| format!("scale: {e}"))?,
            mode: get("mode")?.parse().map_err(|e: Error| e.to_string())?,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusEntry {
    pub id: String,
    pub function: FunctionSpec,
    pub provenance: Provenance,
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn draw_coefficient(rng: &mut ChaCha8Rng, bound: f64) -> Complex64 {
    let mag = rng.gen::<f64>() * bound;
    let phase = rng.gen::<f64>() * TAU;
    Complex64::from_polar(mag, phase)
}

/// Random member of `A_{p,n}` of the given degree, drawn from stream `stream` of `seed`.
pub fn random_polynomial_stream(
    p: u32,
    n: u32,
    degree: usize,
    scale: f64,
    mode: DrawMode,
    seed: u64,
    stream: u64,
) -> Result<FunctionSpec> {
    if p == 0 || n == 0 {
        return Err(Error::ParamOutOfRange(format!("p and n must be positive (p={p}, n={n})")));
    }
    if degree < p as usize {
        return Err(Error::ParamOutOfRange(format!("degree {degree} below p={p}")));
    }
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::ParamOutOfRange(format!("scale {scale} must be positive")));
    }
    let mut rng = rng_for(seed, stream);
    let mut coeffs = BTreeMap::new();
    for k in (p + n) as usize..=degree {
        let bound = match mode {
            DrawMode::Decay => scale / (k * k) as f64,
            DrawMode::Aggressive => scale,
        };
        coeffs.insert(k, draw_coefficient(&mut rng, bound));
    }
    make_function(p, n, &coeffs, degree)
}

pub fn random_polynomial(p: u32, n: u32, degree: usize, scale: f64, mode: DrawMode, seed: u64) -> Result<FunctionSpec> {
    random_polynomial_stream(p, n, degree, scale, mode, seed, 0)
}

/// `count` entries from consecutive streams of one seed.
pub fn random_corpus(
    count: usize,
    p: u32,
    n: u32,
    degree: usize,
    scale: f64,
    mode: DrawMode,
    seed: u64,
) -> Result<Vec<CorpusEntry>> {
    (0..count as u64)
        .map(|stream| {
            let function = random_polynomial_stream(p, n, degree, scale, mode, seed, stream)?;
            Ok(CorpusEntry {
                id: format!("s{seed}-p{p}n{n}-{stream:05}"),
                function,
                provenance: Provenance::Random { seed, stream, scale, mode },
            })
        })
        .collect()
}

/// Random auxiliary function `w` of exact order `order`: coefficients up to
/// `order + extra` in the unit disk, leading one bounded away from zero.
pub fn random_test_function(order: u32, extra: usize, seed: u64, stream: u64) -> Result<TestFunction> {
    if order == 0 {
        return Err(Error::ParamOutOfRange("test function order must be positive".into()));
    }
    let mut rng = rng_for(seed, stream);
    let top = order as usize + extra;
    let mut coeffs = BTreeMap::new();
    let lead = 0.2 + 0.8 * rng.gen::<f64>();
    coeffs.insert(order as usize, Complex64::from_polar(lead, rng.gen::<f64>() * TAU));
    for k in order as usize + 1..=top {
        coeffs.insert(k, draw_coefficient(&mut rng, 1.0));
    }
    TestFunction::new(Series::from_map(&coeffs, top)?)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Classical {
    Identity,
    HalfPlane,
    MonomialPair(f64),
}

impl FromStr for Classical {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "identity" => return Ok(Classical::Identity),
            "half-plane" => return Ok(Classical::HalfPlane),
            _ => {}
        }
        let arg = s
            .strip_prefix("monomial-pair(")
            .and_then(|r| r.strip_suffix(')'))
            .or_else(|| s.strip_prefix("monomial-pair:"));
        match arg.map(str::parse::<f64>) {
            Some(Ok(c)) => Ok(Classical::MonomialPair(c)),
            _ => Err(Error::UnknownName(s.to_string())),
        }
    }
}

impl fmt::Display for Classical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classical::Identity => f.write_str("identity"),
            Classical::HalfPlane => f.write_str("half-plane"),
            Classical::MonomialPair(c) => write!(f, "monomial-pair({c})"),
        }
    }
}

/// Named reference functions: `z^p`, the truncated `z/(1-z)`, and `z^p + c z^{p+n}`.
pub fn classical_function(name: &str, p: u32, n: u32, truncation: usize) -> Result<FunctionSpec> {
    match name.parse::<Classical>()? {
        Classical::Identity => make_function(p, n, &BTreeMap::new(), truncation),
        Classical::HalfPlane => {
            if p != 1 {
                return Err(Error::ParamOutOfRange(format!("half-plane requires p=1, got p={p}")));
            }
            let ones = (1..=truncation).map(|k| (k, Complex64::new(1.0, 0.0))).collect();
            Ok(make_function(1, n, &ones, truncation)?.with_tail(1.0))
        }
        Classical::MonomialPair(c) => {
            let k = (p + n) as usize;
            let coeffs = [(k, Complex64::new(c, 0.0))].into_iter().collect();
            make_function(p, n, &coeffs, truncation.max(k))
        }
    }
}

pub fn classical_entry(name: &str, p: u32, n: u32) -> Result<CorpusEntry> {
    let function = classical_function(name, p, n, DEFAULT_TRUNCATION)?;
    Ok(CorpusEntry { id: format!("{name}-p{p}n{n}"), function, provenance: Provenance::Named(name.to_string()) })
}

fn format_entry(e: &CorpusEntry) -> String {
    let f = &e.function;
    let mut line = format!(
        "{} {} {} {} {} {:.16e} {}",
        e.id,
        f.p(),
        f.n(),
        f.truncation(),
        f.exact(),
        f.tail_coeff(),
        e.provenance
    );
    for (k, c) in f.series().nonzero() {
        line.push_str(&format!(" {k} {:.16e} {:.16e}", c.re, c.im));
    }
    line
}

pub fn format_corpus(entries: &[CorpusEntry]) -> String {
    let mut out = String::from(HEADER);
    for e in entries {
        out.push_str(&format_entry(e));
        out.push('\n');
    }
    out
}

fn field<T: FromStr>(tokens: &[&str], idx: usize, name: &str, line: usize) -> Result<T>
where
    T::Err: fmt::Display,
{
    let tok = tokens
        .get(idx)
        .ok_or_else(|| Error::MalformedFile { line, msg: format!("missing field '{name}'") })?;
    tok.parse()
        .map_err(|e| Error::MalformedFile { line, msg: format!("field '{name}' ('{tok}'): {e}") })
}

fn parse_entry(text: &str, line: usize) -> Result<CorpusEntry> {
    let tokens: Vec<&str> = text.split_whitespace().collect();
    let id: String = field(&tokens, 0, "id", line)?;
    let p: u32 = field(&tokens, 1, "p", line)?;
    let n: u32 = field(&tokens, 2, "n", line)?;
    let truncation: usize = field(&tokens, 3, "N", line)?;
    let exact: bool = field(&tokens, 4, "exact", line)?;
    let tail: f64 = field(&tokens, 5, "tail", line)?;
    let provenance: Provenance = field(&tokens, 6, "provenance", line)?;
    let rest = &tokens[7.min(tokens.len())..];
    if !rest.len().is_multiple_of(3) {
        return Err(Error::MalformedFile { line, msg: "coefficients must come in k/re/im triples".into() });
    }
    let mut coeffs = BTreeMap::new();
    for (i, triple) in rest.chunks(3).enumerate() {
        let k: usize = field(triple, 0, &format!("k[{i}]"), line)?;
        let re: f64 = field(triple, 1, &format!("re[{i}]"), line)?;
        let im: f64 = field(triple, 2, &format!("im[{i}]"), line)?;
        if coeffs.insert(k, Complex64::new(re, im)).is_some() {
            return Err(Error::MalformedFile { line, msg: format!("duplicate coefficient index {k}") });
        }
    }
    if coeffs.get(&(p as usize)) != Some(&Complex64::new(1.0, 0.0)) {
        return Err(Error::InvariantViolation { line, msg: format!("coefficient at index p={p} must be exactly 1") });
    }
    let function = make_function(p, n, &coeffs, truncation)
        .map_err(|e| Error::InvariantViolation { line, msg: format!("entry '{id}': {e}") })?;
    let function = if exact { function } else { function.with_tail(tail) };
    Ok(CorpusEntry { id, function, provenance })
}

pub fn parse_corpus(text: &str) -> Result<Vec<CorpusEntry>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let entry = parse_entry(line, i + 1)?;
        if !seen.insert(entry.id.clone()) {
            return Err(Error::InvariantViolation { line: i + 1, msg: format!("duplicate id '{}'", entry.id) });
        }
        out.push(entry);
    }
    Ok(out)
}

pub fn save_corpus(path: impl AsRef<Path>, entries: &[CorpusEntry]) -> Result<()> {
    fs::write(path, format_corpus(entries))?;
    Ok(())
}

pub fn load_corpus(path: impl AsRef<Path>) -> Result<Vec<CorpusEntry>> {
    parse_corpus(&fs::read_to_string(path)?)
}
