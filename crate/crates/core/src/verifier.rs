//! Hypothesis => conclusion checks on single functions and corpora,
//! counterexample probes, and the extremal-point (Jack) check.

use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::corpus::{random_polynomial_stream, CorpusEntry, DrawMode};
use crate::criteria::{hyp_value, Sense, Theorem, TheoremParams};
use crate::disk::{
    grid_angle, inf_re_on_circle, sup_mod_on_circle, sup_re_on_circle, sup_real_on_circle, winding_number,
    GridSpec,
};
use crate::error::{Error, Result};
use crate::series::{FunctionSpec, TestFunction};
use crate::subordination::disk_inequality_margin;

/// Violations this close to zero are reported as inconclusive.
pub const DOWNGRADE_FACTOR: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Status {
    BothHold,
    Vacuous,
    Violation,
    Inconclusive,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::BothHold => "BOTH_HOLD",
            Status::Vacuous => "VACUOUS",
            Status::Violation => "VIOLATION",
            Status::Inconclusive => "INCONCLUSIVE",
        }
    }

    /// Status from the two signed margins (positive = inequality satisfied).
    pub fn classify(hyp_margin: f64, concl_margin: f64, tol: f64) -> (Status, Option<String>) {
        if hyp_margin < -tol {
            return (Status::Vacuous, None);
        }
        if !(hyp_margin > tol) {
            return (Status::Inconclusive, None);
        }
        if concl_margin > tol {
            return (Status::BothHold, None);
        }
        if concl_margin < -tol {
            let limit = DOWNGRADE_FACTOR * tol;
            if concl_margin.abs() <= limit || hyp_margin <= limit {
                return (Status::Inconclusive, Some("violation within 10*tol downgraded".into()));
            }
            return (Status::Violation, None);
        }
        (Status::Inconclusive, None)
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub id: String,
    pub params: TheoremParams,
    pub radius: f64,
    pub bound: f64,
    pub hyp_margin: f64,
    pub concl_margin: f64,
    pub status: Status,
    pub samples: usize,
    pub tol: f64,
    /// Inner circles never more extreme than the outer one (within tol).
    pub principle_ok: Option<bool>,
    pub note: Option<String>,
}

impl VerificationReport {
    /// One tab-separated `key=value` record.
    pub fn to_record(&self) -> String {
        let p = &self.params;
        let note = self.note.as_deref().unwrap_or("").replace(['\t', '\n'], " ");
        let principle = match self.principle_ok {
            Some(true) => "ok",
            Some(false) => "fail",
            None => "na",
        };
        format!(
            "id={}\ttheorem={}\tp={}\tn={}\talpha={}\tbeta={}\tgamma={}\tlambda={}\tradius={}\tbound={:.16e}\thyp_margin={:.16e}\tconcl_margin={:.16e}\tstatus={}\tsamples={}\ttol={:e}\tprinciple={}\tnote={}",
            self.id,
            p.theorem,
            p.p,
            p.n,
            p.alpha,
            p.beta,
            p.gamma,
            p.lambda,
            self.radius,
            self.bound,
            self.hyp_margin,
            self.concl_margin,
            self.status,
            self.samples,
            self.tol,
            principle,
            note
        )
    }
}

/// Hypothesis extremum on one circle, or a certificate that the hypothesis fails inside.
fn hyp_extremum(f: &FunctionSpec, params: &TheoremParams, r: f64, grid: &GridSpec) -> Result<std::result::Result<f64, String>> {
    let m = grid.angular_count();
    match params.theorem {
        Theorem::T21 | Theorem::T22 | Theorem::T24 => {
            // Re(1 + zf''/f') is harmonic only while f' has no zeros off the origin.
            let g = f.series().derivative().shifted(f.p() as usize - 1)?;
            let zeros = winding_number(&g, r, m, grid.tol())?;
            if zeros != 0 {
                return Ok(Err(format!("f' has {zeros} zero(s) in 0<|z|<{r}")));
            }
            let ext = match params.theorem.hypothesis_sense() {
                Sense::Above => inf_re_on_circle(|z| f.convexity_functional(z), r, m)?,
                Sense::Below => sup_re_on_circle(|z| f.convexity_functional(z), r, m)?,
            };
            Ok(Ok(ext))
        }
        Theorem::T23A | Theorem::T23B => Ok(Ok(sup_real_on_circle(|z| hyp_value(params, f, z), r, m)?)),
    }
}

fn signed(sense: Sense, value: f64, threshold: f64) -> f64 {
    match sense {
        Sense::Above => value - threshold,
        Sense::Below => threshold - value,
    }
}

fn conclusion_margin(f: &FunctionSpec, params: &TheoremParams, grid: &GridSpec) -> Result<f64> {
    let r = grid.outer_radius();
    let m = grid.angular_count();
    let thr = params.conclusion_threshold();
    match params.theorem {
        Theorem::T21 | Theorem::T23A => Ok(inf_re_on_circle(|z| f.normalized_derivative(z), r, m)? - thr),
        Theorem::T22 | Theorem::T23B => {
            Ok(thr - sup_mod_on_circle(|z| Ok(f.normalized_derivative(z)? - 1.0), r, m)?)
        }
        Theorem::T24 => disk_inequality_margin(f, params.lambda, grid),
    }
}

fn principle_check(f: &FunctionSpec, params: &TheoremParams, grid: &GridSpec, outer: f64) -> Option<bool> {
    let sense = params.theorem.hypothesis_sense();
    let inner = &grid.radii()[..grid.radii().len() - 1];
    let mut ok = true;
    for &r in inner {
        match hyp_extremum(f, params, r, grid) {
            Ok(Ok(v)) => ok &= signed(sense, v, outer) >= -grid.tol(),
            _ => return None,
        }
    }
    Some(ok)
}

fn join_notes(a: Option<String>, b: Option<String>) -> Option<String> {
    match (a, b) {
        (Some(a), Some(b)) => Some(format!("{a}; {b}")),
        (a, b) => a.or(b),
    }
}

/// Checks one theorem on one function over the grid's outermost circle.
/// Evaluation failures end up in the report; only invalid parameters are errors.
pub fn verify_implication(
    id: &str,
    f: &FunctionSpec,
    params: &TheoremParams,
    grid: &GridSpec,
) -> Result<VerificationReport> {
    params.validate()?;
    if f.p() != params.p || f.n() < params.n {
        return Err(Error::ParamOutOfRange(format!(
            "function in A_(p={},n={}) does not belong to A_(p={},n={})",
            f.p(),
            f.n(),
            params.p,
            params.n
        )));
    }
    let bound = params.bound()?;
    let r = grid.outer_radius();
    let tol = grid.tol();
    let mut note = params
        .outside_stated_regime()
        .then(|| "alpha > 1 lies outside 0 <= alpha < 1".to_string());

    let (hyp_margin, principle_ok) = match hyp_extremum(f, params, r, grid) {
        Ok(Ok(ext)) => (signed(params.theorem.hypothesis_sense(), ext, bound), principle_check(f, params, grid, ext)),
        Ok(Err(why)) => {
            note = join_notes(note, Some(why));
            (f64::NEG_INFINITY, None)
        }
        Err(e) => {
            note = join_notes(note, Some(format!("hypothesis: {e}")));
            (f64::NAN, None)
        }
    };

    let concl_margin = match conclusion_margin(f, params, grid) {
        Ok(v) => v,
        Err(e) => {
            if hyp_margin >= -tol {
                note = join_notes(note, Some(format!("conclusion: {e}")));
            }
            f64::NAN
        }
    };

    let (status, extra) = Status::classify(hyp_margin, concl_margin, tol);
    Ok(VerificationReport {
        id: id.to_string(),
        params: *params,
        radius: r,
        bound,
        hyp_margin,
        concl_margin,
        status,
        samples: grid.angular_count(),
        tol,
        principle_ok,
        note: join_notes(note, extra),
    })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StatusCounts {
    pub both_hold: usize,
    pub vacuous: usize,
    pub violation: usize,
    pub inconclusive: usize,
}

impl StatusCounts {
    pub fn add(&mut self, s: Status) {
        match s {
            Status::BothHold => self.both_hold += 1,
            Status::Vacuous => self.vacuous += 1,
            Status::Violation => self.violation += 1,
            Status::Inconclusive => self.inconclusive += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.both_hold + self.vacuous + self.violation + self.inconclusive
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusReport {
    pub params: TheoremParams,
    pub reports: Vec<VerificationReport>,
    pub counts: StatusCounts,
}

impl CorpusReport {
    pub fn summary_record(&self) -> String {
        let p = &self.params;
        let c = &self.counts;
        format!(
            "summary\ttheorem={}\tp={}\tn={}\talpha={}\tbeta={}\tgamma={}\tlambda={}\ttotal={}\tboth_hold={}\tvacuous={}\tviolation={}\tinconclusive={}",
            p.theorem,
            p.p,
            p.n,
            p.alpha,
            p.beta,
            p.gamma,
            p.lambda,
            c.total(),
            c.both_hold,
            c.vacuous,
            c.violation,
            c.inconclusive
        )
    }
}

/// Verifies every entry (in parallel) and aggregates in corpus order.
pub fn run_corpus(entries: &[CorpusEntry], params: &TheoremParams, grid: &GridSpec) -> Result<CorpusReport> {
    if entries.is_empty() {
        return Err(Error::ParamOutOfRange("corpus is empty".into()));
    }
    params.validate()?;
    let reports = entries
        .par_iter()
        .map(|e| verify_implication(&e.id, &e.function, params, grid))
        .collect::<Result<Vec<_>>>()?;
    let mut counts = StatusCounts::default();
    for r in &reports {
        counts.add(r.status);
    }
    Ok(CorpusReport { params: *params, reports, counts })
}

/// Which trial functions count as satisfying the (possibly weakened) hypothesis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SearchMode {
    /// Hypothesis must hold: `hyp_margin > tol`.
    Strict,
    /// Hypothesis violated by less than `delta`: `-delta < hyp_margin <= 0`.
    Relaxed(f64),
}

impl SearchMode {
    /// `delta = 0` selects strict mode.
    pub fn from_delta(delta: f64) -> Result<Self> {
        if delta == 0.0 {
            Ok(SearchMode::Strict)
        } else if delta > 0.0 && delta.is_finite() {
            Ok(SearchMode::Relaxed(delta))
        } else {
            Err(Error::ParamOutOfRange(format!("delta={delta} must be >= 0")))
        }
    }

    fn accepts(&self, hyp_margin: f64, tol: f64) -> bool {
        match *self {
            SearchMode::Strict => hyp_margin > tol,
            SearchMode::Relaxed(delta) => hyp_margin > -delta && hyp_margin <= 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    pub mode: SearchMode,
    pub seed: u64,
    pub trials: usize,
    pub degree: usize,
    pub scale: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub trial: usize,
    pub function: FunctionSpec,
    pub report: VerificationReport,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome {
    pub witness: Option<Witness>,
    pub trials: usize,
    /// Trials inside the acceptance window.
    pub accepted: usize,
}

/// Draws aggressive-mode trial functions and returns the lowest-index one that
/// meets the acceptance window but misses the conclusion by more than tol.
/// Candidates are re-verified on a grid with twice the angular resolution.
pub fn search_counterexample(params: &TheoremParams, cfg: &SearchConfig, grid: &GridSpec) -> Result<SearchOutcome> {
    params.validate()?;
    if let SearchMode::Relaxed(d) = cfg.mode {
        SearchMode::from_delta(d)?;
    }
    let tol = grid.tol();
    let bound = params.bound()?;
    let fine = grid.with_angular_count(grid.angular_count() * 2)?;
    let outcomes = (0..cfg.trials)
        .into_par_iter()
        .map(|t| -> Result<(bool, Option<Witness>)> {
            let f = random_polynomial_stream(
                params.p,
                params.n,
                cfg.degree,
                cfg.scale,
                DrawMode::Aggressive,
                cfg.seed,
                t as u64,
            )?;
            let hyp = match hyp_extremum(&f, params, grid.outer_radius(), grid) {
                Ok(Ok(ext)) => signed(params.theorem.hypothesis_sense(), ext, bound),
                _ => return Ok((false, None)),
            };
            let accepted = cfg.mode.accepts(hyp, tol);
            if !accepted || conclusion_margin(&f, params, grid).map_or(true, |c| c >= -tol) {
                return Ok((accepted, None));
            }
            let id = format!("trial-{t}");
            let again = verify_implication(&id, &f, params, &fine)?;
            let confirmed = cfg.mode.accepts(again.hyp_margin, tol) && again.concl_margin < -tol;
            Ok((accepted, confirmed.then_some(Witness { trial: t, function: f, report: again })))
        })
        .collect::<Result<Vec<_>>>()?;
    let accepted = outcomes.iter().filter(|(a, _)| *a).count();
    let witness = outcomes.into_iter().find_map(|(_, w)| w);
    Ok(SearchOutcome { witness, trials: cfg.trials, accepted })
}

/// Data at the point of maximal modulus of `w` on `|z| = r0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JackReport {
    pub r0: f64,
    pub z0: Complex64,
    /// `z0 w'(z0) / w(z0)`
    pub m_estimate: Complex64,
    pub order: u32,
    /// `|Im m_estimate|`
    pub residual: f64,
    /// `Re(z0 w''(z0) / w'(z0)) + 1`
    pub second_order: f64,
}

impl JackReport {
    pub fn m_ok(&self, tol: f64) -> bool {
        self.m_estimate.re >= self.order as f64 - tol
    }

    pub fn residual_ok(&self, tol: f64) -> bool {
        self.residual <= tol
    }

    pub fn second_order_ok(&self, tol: f64) -> bool {
        self.second_order >= self.m_estimate.re - tol
    }

    /// The default acceptance: 1e-4 on m and the residual, 1e-3 on the second-order inequality.
    pub fn passes(&self) -> bool {
        self.m_ok(1e-4) && self.residual_ok(1e-4) && self.second_order_ok(1e-3)
    }
}

const JACK_CANDIDATES: usize = 3;
const JACK_ROUNDS: usize = 3;
const JACK_FACTOR: i32 = 8;

fn refine_argmax(g: &impl Fn(f64) -> f64, mut theta: f64, mut h: f64) -> f64 {
    for _ in 0..JACK_ROUNDS {
        let step = h / JACK_FACTOR as f64;
        theta = (-JACK_FACTOR..=JACK_FACTOR)
            .map(|i| theta + i as f64 * step)
            .max_by(|a, b| g(*a).total_cmp(&g(*b)))
            .expect("non-empty window");
        h = step;
    }
    theta
}

/// Locates the maximum of `|w|` on `|z| = r0` (grid, then three rounds of
/// 8x angular refinement around the best coarse maxima) and reports
/// `m = z0 w'(z0)/w(z0)` there.
pub fn jack_check(w: &TestFunction, r0: f64, m: usize, tol: f64) -> Result<JackReport> {
    if !(r0 > 0.0 && r0 < 1.0) {
        return Err(Error::ParamOutOfRange(format!("r0={r0} not in (0, 1)")));
    }
    let m = m.max(16);
    let s = w.series();
    let modulus = |t: f64| s.eval(Complex64::from_polar(r0, t)).norm();
    let values: Vec<f64> = (0..m).map(|j| modulus(grid_angle(j, m))).collect();
    let mut candidates: Vec<usize> = (0..m)
        .filter(|&j| values[j] >= values[(j + m - 1) % m] && values[j] >= values[(j + 1) % m])
        .collect();
    candidates.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    candidates.truncate(JACK_CANDIDATES);

    let h = std::f64::consts::TAU / m as f64;
    let theta = candidates
        .into_iter()
        .map(|j| refine_argmax(&modulus, grid_angle(j, m), h))
        .max_by(|a, b| modulus(*a).total_cmp(&modulus(*b)))
        .unwrap_or(0.0);

    let z0 = Complex64::from_polar(r0, theta);
    let w0 = s.eval(z0);
    if w0.norm() <= tol {
        return Err(Error::DegenerateMax { value: w0.norm() });
    }
    let d1 = s.derivative();
    let d2 = d1.derivative();
    let w1 = d1.eval(z0);
    if w1.norm() <= tol {
        return Err(Error::DenominatorVanishes { z: z0 });
    }
    let m_estimate = z0 * w1 / w0;
    let second_order = (z0 * d2.eval(z0) / w1).re + 1.0;
    Ok(JackReport { r0, z0, m_estimate, order: w.order(), residual: m_estimate.im.abs(), second_order })
}

/// `inf Re f'/(p z^{p-1})` over the outer circle; positive values certify
/// p-valence (close-to-convexity with respect to `z^p`).
pub fn valence_margin(f: &FunctionSpec, grid: &GridSpec) -> Result<f64> {
    inf_re_on_circle(|z| f.normalized_derivative(z), grid.outer_radius(), grid.angular_count())
}
