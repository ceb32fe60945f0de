//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits non-zero if any criterion fails.

use std::time::Instant;

use gftv::corpus::{random_corpus, random_test_function, DrawMode};
use gftv::criteria::{
    bound_t21, bound_t22, bound_t23, bound_t24, lambda_range, theta_oracle, T23Kind, Theorem, TheoremParams,
};
use gftv::disk::{inf_re_on_circle, winding_number, GridSpec};
use gftv::subordination::{containment_subordination_check, disk_inequality_margin, starlike_inf};
use gftv::verifier::{jack_check, run_corpus, search_counterexample, verify_implication, SearchConfig, SearchMode};

const ORACLE_SAMPLES: usize = 200_000;
const ORACLE_TOL: f64 = 1e-6;
const REDUCTION_TOL: f64 = 1e-12;
const JACK_TOL: f64 = 1e-4;
const JACK_SECOND_TOL: f64 = 1e-3;
const CORPUS_DEGREE: usize = 5;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

const ALPHAS: [f64; 4] = [0.0, 0.25, 0.5, 0.75];
const BETA_GAMMA: [(f64, f64); 4] = [(1.0, 0.0), (0.0, 1.0), (1.0, 1.0), (2.0, 1.0)];

/// Five interior λ values; an unbounded range is cut at twice the branch switch.
fn interior_lambdas(p: u32, n: u32) -> Vec<f64> {
    let r = lambda_range(p, n);
    let hi = r.lambda2.unwrap_or(2.0 * (p + n) as f64 / p as f64);
    (1..=5).map(|k| r.lambda1 + k as f64 * (hi - r.lambda1) / 6.0).collect()
}

fn c1_oracle_equivalence() -> Outcome {
    let mut cases = Vec::new();
    for p in 1..=3 {
        for n in 1..=3 {
            for &a in &ALPHAS {
                cases.push(TheoremParams::t21(p, n, a));
                cases.push(TheoremParams::t22(p, n, a));
                for &(b, g) in &BETA_GAMMA {
                    cases.push(TheoremParams::t23a(p, n, a, b, g));
                }
            }
        }
    }
    for p in 1..=2 {
        for n in 1..=12 {
            if lambda_range(p, n).valid {
                for l in interior_lambdas(p, n) {
                    cases.push(TheoremParams::t24(p, n, l));
                }
            }
        }
    }
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    for params in &cases {
        let oracle = theta_oracle(params, params.n as f64, ORACLE_SAMPLES).expect("oracle");
        let closed = params.bound().expect("bound");
        let err = (oracle.value - closed).abs();
        worst = worst.max(err);
        if !(err <= ORACLE_TOL) {
            failures.push(format!("{:?}: oracle {} vs {}", params, oracle.value, closed));
        }
    }
    let t24 = cases.iter().filter(|c| c.theorem == Theorem::T24).count();
    outcome(
        failures.is_empty(),
        format!("{} cases ({t24} t24), max |oracle - closed| = {worst:.2e}{}", cases.len(), fmt_fail(&failures)),
    )
}

fn fmt_fail(failures: &[String]) -> String {
    if failures.is_empty() {
        String::new()
    } else {
        format!("; first failure: {}", failures[0])
    }
}

fn c2_reduction_identities() -> Outcome {
    let mut failures = Vec::new();
    let mut check = |what: String, got: f64, want: f64| {
        if !((got - want).abs() <= REDUCTION_TOL) {
            failures.push(format!("{what}: {got} vs {want}"));
        }
    };
    let mut alphas: Vec<f64> = ALPHAS.to_vec();
    alphas.extend((0..10).map(|k| 0.1 * k as f64));
    for &a in &alphas {
        check(format!("t21 a={a}"), bound_t21(1, 1, a).unwrap(), (1.0 + 3.0 * a) / (2.0 * (1.0 + a)));
        check(format!("t22 a={a}"), bound_t22(1, 1, a).unwrap(), (3.0 + 2.0 * a) / (2.0 + a));
        let mut bg: Vec<(f64, f64)> = BETA_GAMMA.to_vec();
        for b in 0..=2 {
            for g in 0..=2 {
                if b + g > 0 {
                    bg.push((b as f64, g as f64));
                }
            }
        }
        for (b, g) in bg {
            check(
                format!("t23a a={a} b={b} g={g}"),
                bound_t23(T23Kind::A, 1, 1, a, b, g).unwrap(),
                (1.0 - a).powf(b + g) / 2f64.powf(b + 2.0 * g),
            );
        }
    }
    let mut lambdas = interior_lambdas(1, 1);
    lambdas.extend((1..=20).map(|k| 1.0 + 2.0 * k as f64 / 21.0));
    for l in lambdas {
        let want = if l <= 2.0 { (5.0 * l - 1.0) / (2.0 * (l + 1.0)) } else { (l + 1.0) / (2.0 * (l - 1.0)) };
        check(format!("t24 l={l}"), bound_t24(1, 1, l).unwrap(), want);
    }
    let r = lambda_range(1, 1);
    check("lambda1(1,1)".into(), r.lambda1, 1.0);
    check("lambda2(1,1)".into(), r.lambda2.unwrap_or(f64::INFINITY), 3.0);
    for n in 1..=10 {
        check(format!("lambda1(1,{n})"), lambda_range(1, n).lambda1, 1.0);
    }
    outcome(failures.is_empty(), format!("all identities within {REDUCTION_TOL:e}{}", fmt_fail(&failures)))
}

fn c3_zero_violation() -> Outcome {
    let grid = GridSpec::default();
    let params = [
        TheoremParams::t21(1, 1, 0.0),
        TheoremParams::t21(1, 1, 0.5),
        TheoremParams::t22(1, 1, 0.0),
        TheoremParams::t22(1, 1, 1.0),
        TheoremParams::t23a(1, 1, 0.0, 1.0, 1.0),
        TheoremParams::t23a(1, 1, 0.5, 2.0, 0.0),
        TheoremParams::t23b(1, 1, 0.0, 1.0, 1.0),
        TheoremParams::t23b(1, 1, 0.5, 2.0, 0.0),
        TheoremParams::t24(1, 1, 1.5),
        TheoremParams::t24(1, 1, 2.5),
    ];
    let mut ok = true;
    let mut lines = Vec::new();
    for p in &params {
        let corpus = random_corpus(1000, p.p, p.n, CORPUS_DEGREE, 0.2, DrawMode::Decay, 2024).unwrap();
        let rep = run_corpus(&corpus, p, &grid).unwrap();
        let c = rep.counts;
        let pass = c.violation == 0 && c.both_hold >= 100;
        ok &= pass;
        lines.push(format!(
            "{}(a={},b={},g={},l={}): hold={} vac={} viol={} inc={}",
            p.theorem, p.alpha, p.beta, p.gamma, p.lambda, c.both_hold, c.vacuous, c.violation, c.inconclusive
        ));
    }
    outcome(ok, lines.join(" | "))
}

fn c4_subordination_equivalence() -> Outcome {
    let grid = GridSpec::default();
    let tol = grid.tol();
    let mut corpus = random_corpus(100, 1, 1, CORPUS_DEGREE, 0.2, DrawMode::Decay, 77).unwrap();
    corpus.extend(random_corpus(100, 1, 2, CORPUS_DEGREE, 0.6, DrawMode::Aggressive, 78).unwrap());
    let (mut compared, mut positive, mut negative, mut skipped) = (0, 0, 0, 0);
    let mut failures = Vec::new();
    for e in &corpus {
        for &l in &[1.2, 1.5, 2.0, 2.5] {
            let margin = match disk_inequality_margin(&e.function, l, &grid) {
                Ok(m) => m,
                Err(_) => {
                    skipped += 1;
                    continue;
                }
            };
            let inside = containment_subordination_check(&e.function, l, &grid).unwrap();
            if margin.abs() > 2.0 * tol {
                compared += 1;
                if inside != (margin > 0.0) {
                    failures.push(format!("{} l={l}: margin {margin} containment {inside}", e.id));
                }
            }
            if margin > 0.0 {
                positive += 1;
                let inf = starlike_inf(&e.function, &grid).unwrap();
                if !(inf > -tol) {
                    failures.push(format!("{} l={l}: margin {margin} but inf Re = {inf}", e.id));
                }
            } else {
                negative += 1;
            }
        }
    }
    outcome(
        failures.is_empty() && positive > 0 && negative > 0,
        format!(
            "{compared} compared, {positive} inside, {negative} outside, {skipped} rejected (extra zeros){}",
            fmt_fail(&failures)
        ),
    )
}

fn c5_jack() -> Outcome {
    let mut failures = Vec::new();
    let (mut worst_res, mut min_gap, mut count) = (0.0f64, f64::INFINITY, 0);
    for order in 1..=3u32 {
        for i in 0..100u64 {
            let w = random_test_function(order, 4, 500 + order as u64, i).unwrap();
            for &r0 in &[0.5, 0.9] {
                let rep = jack_check(&w, r0, 4096, 1e-12).unwrap();
                count += 1;
                worst_res = worst_res.max(rep.residual);
                min_gap = min_gap.min(rep.m_estimate.re - order as f64);
                if !(rep.m_ok(JACK_TOL) && rep.residual_ok(JACK_TOL) && rep.second_order_ok(JACK_SECOND_TOL)) {
                    failures.push(format!("order {order} #{i} r0={r0}: {rep:?}"));
                }
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!("{count} checks, max residual {worst_res:.2e}, min Re m - n = {min_gap:.4}{}", fmt_fail(&failures)),
    )
}

fn c6_valence() -> Outcome {
    let mut failures = Vec::new();
    let mut count = 0;
    for p in 1..=2 {
        for n in 1..=2 {
            for scale in [0.05, 0.2] {
                let corpus = random_corpus(100, p, n, CORPUS_DEGREE + 4, scale, DrawMode::Decay, 31 + p as u64).unwrap();
                for e in &corpus {
                    count += 1;
                    let a = winding_number(e.function.series(), 0.99, 4096, 1e-9);
                    let b = winding_number(e.function.series(), 0.99, 8192, 1e-9);
                    if a != Ok(p as i64) || a != b {
                        failures.push(format!("{}: {a:?} / {b:?}", e.id));
                    }
                }
            }
        }
    }
    outcome(failures.is_empty(), format!("{count} functions, winding = p at r=0.99 and M->2M stable{}", fmt_fail(&failures)))
}

fn c7_principles() -> Outcome {
    let grid = GridSpec::default();
    let tol = grid.tol();
    let fine = grid.with_angular_count(grid.angular_count() * 2).unwrap();
    let corpus = random_corpus(100, 1, 1, CORPUS_DEGREE, 0.2, DrawMode::Decay, 909).unwrap();
    let params = TheoremParams::t21(1, 1, 0.0);
    let mut failures = Vec::new();
    let mut worst_shift = 0.0f64;
    for e in &corpus {
        let f = &e.function;
        let infs: Vec<f64> = [0.5, 0.9, 0.999]
            .iter()
            .map(|&r| inf_re_on_circle(|z| f.convexity_functional(z), r, grid.angular_count()).unwrap())
            .collect();
        if !(infs[0] >= infs[1] - tol && infs[1] >= infs[2] - tol) {
            failures.push(format!("{}: infs {infs:?}", e.id));
        }
        let a = verify_implication(&e.id, f, &params, &grid).unwrap();
        let b = verify_implication(&e.id, f, &params, &fine).unwrap();
        let shift = (a.hyp_margin - b.hyp_margin).abs().max((a.concl_margin - b.concl_margin).abs());
        worst_shift = worst_shift.max(shift);
        if !(shift < 10.0 * tol) {
            failures.push(format!("{}: margin shift {shift:e} under M doubling", e.id));
        }
    }
    outcome(
        failures.is_empty(),
        format!("100 functionals monotone over radii; max margin shift under M->2M = {worst_shift:.2e}{}", fmt_fail(&failures)),
    )
}

fn c8_no_witness() -> Outcome {
    let grid = GridSpec::default();
    let params = [
        TheoremParams::t21(1, 1, 0.0),
        TheoremParams::t22(1, 1, 0.0),
        TheoremParams::t23a(1, 1, 0.0, 1.0, 1.0),
        TheoremParams::t23b(1, 1, 0.0, 1.0, 1.0),
        TheoremParams::t24(1, 1, 1.5),
    ];
    let mut ok = true;
    let mut lines = Vec::new();
    for p in &params {
        let cfg = SearchConfig { mode: SearchMode::Strict, seed: 7, trials: 10_000, degree: 4, scale: 0.3 };
        let out = search_counterexample(p, &cfg, &grid).unwrap();
        ok &= out.witness.is_none();
        lines.push(format!(
            "{}: accepted {}/{}, witness {}",
            p.theorem,
            out.accepted,
            out.trials,
            out.witness.as_ref().map_or("none".to_string(), |w| format!("trial {}", w.trial))
        ));
    }
    outcome(ok, lines.join(" | "))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("C1 oracle equivalence", c1_oracle_equivalence),
        ("C2 reduction identities", c2_reduction_identities),
        ("C3 zero-violation corpus suite", c3_zero_violation),
        ("C4 subordination equivalence", c4_subordination_equivalence),
        ("C5 jack-lemma suite", c5_jack),
        ("C6 valence", c6_valence),
        ("C7 principle checks", c7_principles),
        ("C8 no-witness check", c8_no_witness),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, run) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let o = run();
        println!(
            "[{}] {name} ({:.1}s): {}",
            if o.ok { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64(),
            o.detail
        );
        if !o.ok {
            failed += 1;
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
