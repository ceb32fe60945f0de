//! Theorem constants, hypothesis/conclusion functionals, and the boundary
//! θ-extremization that reproduces each constant independently.
//!
//! Constants are evaluated from their literal closed forms. The θ-oracle
//! evaluates the boundary expression obtained at a first point where the
//! auxiliary function `w` reaches the unit circle (`w = e^{iθ}`,
//! `z w' = m w`), and extremizes it over a uniform θ grid.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::disk::grid_angle;
use crate::error::{Error, Result};
use crate::series::{eval_shifted, FunctionSpec};

/// θ samples whose pole denominator falls below this are skipped.
pub const POLE_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Theorem {
    /// `Re(1 + zf''/f') > bound  =>  Re(f'/(p z^{p-1})) > (1+α)/2`
    T21,
    /// `Re(1 + zf''/f') < bound  =>  |f'/(p z^{p-1}) - 1| < 1+α`
    T22,
    /// product hypothesis  `=>  Re(f'/(p z^{p-1})) > (1+α)/2`
    T23A,
    /// product hypothesis  `=>  |f'/(p z^{p-1}) - 1| < |1-α|`
    T23B,
    /// `Re(1 + zf''/f') < bound  =>  (1/p) zf'/f ≺ λ(1-z)/(λ-z)`
    T24,
}

impl Theorem {
    pub const ALL: [Theorem; 5] = [Theorem::T21, Theorem::T22, Theorem::T23A, Theorem::T23B, Theorem::T24];

    pub fn name(self) -> &'static str {
        match self {
            Theorem::T21 => "t21",
            Theorem::T22 => "t22",
            Theorem::T23A => "t23a",
            Theorem::T23B => "t23b",
            Theorem::T24 => "t24",
        }
    }

    /// Whether the hypothesis is a lower bound (`>`) on its functional.
    pub fn hypothesis_sense(self) -> Sense {
        match self {
            Theorem::T21 => Sense::Above,
            _ => Sense::Below,
        }
    }

    pub fn conclusion_sense(self) -> Sense {
        match self {
            Theorem::T21 | Theorem::T23A => Sense::Above,
            _ => Sense::Below,
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Theorem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "t21" => Ok(Theorem::T21),
            "t22" => Ok(Theorem::T22),
            "t23a" => Ok(Theorem::T23A),
            "t23b" => Ok(Theorem::T23B),
            "t24" => Ok(Theorem::T24),
            other => Err(Error::ParamOutOfRange(format!("unknown theorem '{other}'"))),
        }
    }
}

/// Direction of a strict inequality: the functional must stay above or below its threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Above,
    Below,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TheoremParams {
    pub theorem: Theorem,
    pub p: u32,
    pub n: u32,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub lambda: f64,
}

impl TheoremParams {
    fn base(theorem: Theorem, p: u32, n: u32) -> Self {
        Self { theorem, p, n, alpha: 0.0, beta: 0.0, gamma: 0.0, lambda: 0.0 }
    }

    pub fn t21(p: u32, n: u32, alpha: f64) -> Self {
        Self { alpha, ..Self::base(Theorem::T21, p, n) }
    }

    pub fn t22(p: u32, n: u32, alpha: f64) -> Self {
        Self { alpha, ..Self::base(Theorem::T22, p, n) }
    }

    pub fn t23a(p: u32, n: u32, alpha: f64, beta: f64, gamma: f64) -> Self {
        Self { alpha, beta, gamma, ..Self::base(Theorem::T23A, p, n) }
    }

    pub fn t23b(p: u32, n: u32, alpha: f64, beta: f64, gamma: f64) -> Self {
        Self { alpha, beta, gamma, ..Self::base(Theorem::T23B, p, n) }
    }

    pub fn t24(p: u32, n: u32, lambda: f64) -> Self {
        Self { lambda, ..Self::base(Theorem::T24, p, n) }
    }

    /// Same parameters for a different theorem.
    pub fn for_theorem(self, theorem: Theorem) -> Self {
        Self { theorem, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        check_pn(self.p, self.n)?;
        let finite = [self.alpha, self.beta, self.gamma, self.lambda].iter().all(|v| v.is_finite());
        if !finite {
            return Err(Error::ParamOutOfRange("parameters must be finite".into()));
        }
        match self.theorem {
            Theorem::T21 => check_alpha_unit(self.alpha),
            Theorem::T22 => check_alpha_nonneg(self.alpha),
            Theorem::T23A => {
                check_alpha_unit(self.alpha)?;
                check_beta_gamma(self.beta, self.gamma)
            }
            Theorem::T23B => {
                check_alpha_nonneg(self.alpha)?;
                if self.alpha == 1.0 {
                    return Err(Error::ParamOutOfRange("alpha must differ from 1".into()));
                }
                check_beta_gamma(self.beta, self.gamma)
            }
            Theorem::T24 => check_lambda(self.p, self.n, self.lambda),
        }
    }

    /// True for admitted parameters outside `0 <= α < 1` (only possible for T23B).
    pub fn outside_stated_regime(&self) -> bool {
        self.theorem == Theorem::T23B && self.alpha > 1.0
    }

    /// Closed-form hypothesis constant.
    pub fn bound(&self) -> Result<f64> {
        match self.theorem {
            Theorem::T21 => bound_t21(self.p, self.n, self.alpha),
            Theorem::T22 => bound_t22(self.p, self.n, self.alpha),
            Theorem::T23A => bound_t23(T23Kind::A, self.p, self.n, self.alpha, self.beta, self.gamma),
            Theorem::T23B => bound_t23(T23Kind::B, self.p, self.n, self.alpha, self.beta, self.gamma),
            Theorem::T24 => bound_t24(self.p, self.n, self.lambda),
        }
    }

    /// Threshold the conclusion functional is compared against.
    pub fn conclusion_threshold(&self) -> f64 {
        match self.theorem {
            Theorem::T21 | Theorem::T23A => (1.0 + self.alpha) / 2.0,
            Theorem::T22 => 1.0 + self.alpha,
            Theorem::T23B => (1.0 - self.alpha).abs(),
            Theorem::T24 => self.lambda / (self.lambda + 1.0),
        }
    }
}

fn check_pn(p: u32, n: u32) -> Result<()> {
    if p == 0 || n == 0 {
        return Err(Error::ParamOutOfRange(format!("p and n must be positive (p={p}, n={n})")));
    }
    Ok(())
}

fn check_alpha_unit(alpha: f64) -> Result<()> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::ParamOutOfRange(format!("alpha={alpha} not in [0, 1)")));
    }
    Ok(())
}

fn check_alpha_nonneg(alpha: f64) -> Result<()> {
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return Err(Error::ParamOutOfRange(format!("alpha={alpha} must be >= 0")));
    }
    Ok(())
}

fn check_beta_gamma(beta: f64, gamma: f64) -> Result<()> {
    if !(beta >= 0.0 && gamma >= 0.0 && beta + gamma > 0.0) {
        return Err(Error::ParamOutOfRange(format!(
            "need beta, gamma >= 0 and beta + gamma > 0 (beta={beta}, gamma={gamma})"
        )));
    }
    Ok(())
}

fn check_lambda(p: u32, n: u32, lambda: f64) -> Result<()> {
    let range = lambda_range(p, n);
    if !range.valid {
        return Err(Error::ParamOutOfRange(range.diagnostic));
    }
    if !range.contains(lambda) {
        return Err(Error::ParamOutOfRange(format!(
            "lambda={lambda} outside ({}, {})",
            range.lambda1,
            range.lambda2.map_or("inf".to_string(), |v| v.to_string())
        )));
    }
    Ok(())
}

pub fn bound_t21(p: u32, n: u32, alpha: f64) -> Result<f64> {
    TheoremParams::t21(p, n, alpha).validate()?;
    let (p, n) = (p as f64, n as f64);
    Ok(((2.0 * p - n) + alpha * (2.0 * p + n)) / (2.0 * (alpha + 1.0)))
}

pub fn bound_t22(p: u32, n: u32, alpha: f64) -> Result<f64> {
    TheoremParams::t22(p, n, alpha).validate()?;
    let (p, n) = (p as f64, n as f64);
    Ok(((p + n) * alpha + (2.0 * p + n)) / (alpha + 2.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum T23Kind {
    A,
    B,
}

pub fn bound_t23(kind: T23Kind, p: u32, n: u32, alpha: f64, beta: f64, gamma: f64) -> Result<f64> {
    let pn = p as f64 * n as f64;
    match kind {
        T23Kind::A => {
            TheoremParams::t23a(p, n, alpha, beta, gamma).validate()?;
            Ok(pn.powf(gamma) * (1.0 - alpha).powf(beta + gamma) / 2f64.powf(beta + 2.0 * gamma))
        }
        T23Kind::B => {
            TheoremParams::t23b(p, n, alpha, beta, gamma).validate()?;
            Ok(pn.powf(gamma) * (1.0 - alpha).abs().powf(beta + gamma))
        }
    }
}

/// Admissible λ interval for the subordination theorem.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaRange {
    pub lambda1: f64,
    /// `None` when the upper end is unbounded.
    pub lambda2: Option<f64>,
    pub valid: bool,
    pub diagnostic: String,
}

impl LambdaRange {
    pub fn contains(&self, lambda: f64) -> bool {
        self.valid && lambda > self.lambda1 && self.lambda2.is_none_or(|l2| lambda < l2)
    }

    fn invalid(lambda1: f64, lambda2: Option<f64>, diagnostic: String) -> Self {
        Self { lambda1, lambda2, valid: false, diagnostic }
    }
}

pub fn lambda_range(p: u32, n: u32) -> LambdaRange {
    if p == 0 || n == 0 {
        return LambdaRange::invalid(f64::NAN, None, "lambda range invalid (p and n must be positive)".into());
    }
    let (p, n) = (p as f64, n as f64);
    let numer = 2.0 * n + 4.0 * (2.0 * p - 1.0);

    let disc1 = 16.0 * n + n * n + 32.0 * p - 12.0 * n * p - 28.0 * p * p;
    if disc1 < 0.0 {
        return LambdaRange::invalid(
            f64::NAN,
            None,
            format!("lambda range invalid (negative discriminant): {disc1} in lambda1"),
        );
    }
    let den1 = 4.0 + n - 2.0 * p + disc1.sqrt();
    if den1 <= 0.0 {
        return LambdaRange::invalid(f64::NAN, None, format!("lambda range invalid (lambda1 denominator {den1})"));
    }
    let lambda1 = numer / den1;

    let disc2 = 16.0 - 8.0 * n + n * n - 48.0 * p + 4.0 * n * p + 36.0 * p * p;
    if disc2 < 0.0 {
        return LambdaRange::invalid(
            lambda1,
            None,
            format!("lambda range invalid (negative discriminant): {disc2} in lambda2"),
        );
    }
    let den2 = -n + 2.0 * p + disc2.sqrt();
    let lambda2 = if den2.abs() <= 1e-12 {
        None
    } else if den2 < 0.0 {
        return LambdaRange::invalid(lambda1, None, format!("lambda range invalid (lambda2 denominator {den2})"));
    } else {
        Some(numer / den2)
    };

    if !(lambda1 > 0.0) {
        return LambdaRange::invalid(lambda1, lambda2, format!("lambda range invalid (lambda1 = {lambda1})"));
    }
    if let Some(l2) = lambda2 {
        if lambda1 >= l2 {
            return LambdaRange::invalid(
                lambda1,
                lambda2,
                format!("lambda range invalid (empty interval lambda1 = {lambda1} >= lambda2 = {l2})"),
            );
        }
    }
    LambdaRange { lambda1, lambda2, valid: true, diagnostic: String::new() }
}

/// Piecewise subordination constant; the switch point `(p+n)/p` belongs to the first branch.
pub fn bound_t24(p: u32, n: u32, lambda: f64) -> Result<f64> {
    check_pn(p, n)?;
    check_lambda(p, n, lambda)?;
    let (pf, nf) = (p as f64, n as f64);
    let l = lambda;
    if l <= (pf + nf) / pf {
        Ok((2.0 * (1.0 - pf) * l * l + (4.0 + nf) * l + (2.0 - 2.0 * pf - nf)) / (2.0 * (l + 1.0)))
    } else {
        Ok((2.0 * (1.0 - pf) * l * l + nf * l + (-2.0 + 2.0 * pf + nf)) / (2.0 * (l - 1.0)))
    }
}

/// Grid extremum of a boundary expression.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleResult {
    pub value: f64,
    pub theta: f64,
    pub samples: usize,
    /// Samples skipped because they sit on a pole of the expression.
    pub excluded: usize,
}

/// Boundary expression at `w = e^{iθ}`, `zw' = m w`. `None` marks a pole sample.
pub fn theta_expression(params: &TheoremParams, m: f64, theta: f64) -> Option<f64> {
    let p = params.p as f64;
    let (a, b, g, l) = (params.alpha, params.beta, params.gamma, params.lambda);
    let c = theta.cos();
    match params.theorem {
        Theorem::T21 => Some(p + a * m * (a + c) / (1.0 + a * a + 2.0 * a * c) - m / 2.0),
        Theorem::T22 => {
            let s = 1.0 + a;
            let den = 1.0 + s * s + 2.0 * s * c;
            (den.abs() >= POLE_EPS).then(|| p + m * s * (s + c) / den)
        }
        Theorem::T23A => {
            let den = 2.0 + 2.0 * c;
            (den.abs() >= POLE_EPS)
                .then(|| p.powf(g) * m.powf(g) * (1.0 - a).powf(b + g) / den.powf((b + 2.0 * g) / 2.0))
        }
        Theorem::T23B => Some(p.powf(g) * m.powf(g) * (1.0 - a).abs().powf(b + g)),
        Theorem::T24 => {
            let den = l * l + 1.0 - 2.0 * l * c;
            (den.abs() >= POLE_EPS)
                .then(|| (l + 1.0) * (2.0 - p) / 2.0 + (l * l - 1.0) * ((p + m) - p * l) / (2.0 * den))
        }
    }
}

/// Extremizes the boundary expression over `samples` equispaced angles:
/// maximum for T21, minimum for T22, T23A and T24.
pub fn theta_oracle(params: &TheoremParams, m: f64, samples: usize) -> Result<OracleResult> {
    params.validate()?;
    if params.theorem == Theorem::T23B {
        return Err(Error::ParamOutOfRange("theta oracle covers t21, t22, t23a and t24".into()));
    }
    if !(m >= params.n as f64) {
        return Err(Error::ParamOutOfRange(format!("m={m} below n={}", params.n)));
    }
    if samples < 1000 {
        return Err(Error::ParamOutOfRange(format!("theta samples {samples} < 1000")));
    }
    let maximize = params.theorem == Theorem::T21;
    let mut best: Option<(f64, f64)> = None;
    let mut excluded = 0;
    for j in 0..samples {
        let theta = grid_angle(j, samples);
        let Some(v) = theta_expression(params, m, theta) else {
            excluded += 1;
            continue;
        };
        let better = match best {
            None => true,
            Some((bv, _)) => (maximize && v > bv) || (!maximize && v < bv),
        };
        if better {
            best = Some((v, theta));
        }
    }
    let (value, theta) = best.ok_or(Error::SingularTheta)?;
    Ok(OracleResult { value, theta, samples, excluded })
}

/// The hypothesis functional at `z`.
pub fn hyp_value(params: &TheoremParams, f: &FunctionSpec, z: Complex64) -> Result<f64> {
    match params.theorem {
        Theorem::T21 | Theorem::T22 | Theorem::T24 => Ok(f.convexity_functional(z)?.re),
        Theorem::T23A | Theorem::T23B => {
            let p = f.p() as i64;
            let d1 = f.series().derivative();
            let d2 = d1.derivative();
            let g = eval_shifted(&d1, p - 1, z)? / p as f64;
            let second = eval_shifted(&d2, p - 2, z)? - (p - 1) as f64 * eval_shifted(&d1, p - 1, z)?;
            Ok((g - 1.0).norm().powf(params.beta) * second.norm().powf(params.gamma))
        }
    }
}

/// The conclusion functional at `z`; compare with [`TheoremParams::conclusion_threshold`].
pub fn concl_value(params: &TheoremParams, f: &FunctionSpec, z: Complex64) -> Result<f64> {
    match params.theorem {
        Theorem::T21 | Theorem::T23A => Ok(f.normalized_derivative(z)?.re),
        Theorem::T22 | Theorem::T23B => Ok((f.normalized_derivative(z)? - 1.0).norm()),
        Theorem::T24 => {
            let center = params.lambda / (params.lambda + 1.0);
            Ok((f.starlike_functional(z)? - center).norm())
        }
    }
}
