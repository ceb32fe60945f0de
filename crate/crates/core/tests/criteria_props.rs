use gftv::criteria::{lambda_range, theta_expression, theta_oracle, Theorem, TheoremParams};

const SAMPLES: usize = 20_000;

fn cos_sorted(params: &TheoremParams, m: f64) -> Vec<(f64, f64)> {
    let mut pts: Vec<(f64, f64)> = (0..=2000)
        .map(|j| std::f64::consts::PI * j as f64 / 2000.0)
        .filter_map(|t| theta_expression(params, m, t).map(|v| (t.cos(), v)))
        .collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    pts
}

#[test]
fn t21_expression_nondecreasing_in_cos() {
    for p in 1..=3 {
        for alpha in [0.1, 0.25, 0.5, 0.75, 0.9] {
            let params = TheoremParams::t21(p, 1, alpha);
            for w in cos_sorted(&params, 1.0).windows(2) {
                assert!(w[1].1 >= w[0].1 - 1e-12);
            }
        }
    }
}

#[test]
fn t22_expression_nonincreasing_in_cos() {
    for p in 1..=3 {
        for alpha in [0.1, 0.5, 1.0, 2.0] {
            let params = TheoremParams::t22(p, 1, alpha);
            for w in cos_sorted(&params, 1.0).windows(2) {
                assert!(w[1].1 <= w[0].1 + 1e-12);
            }
        }
    }
}

#[test]
fn extremal_theta_expressions_monotone_in_m() {
    for alpha in [0.0, 0.3, 0.6] {
        let t21 = TheoremParams::t21(1, 1, alpha);
        let t22 = TheoremParams::t22(1, 1, alpha);
        for m in 1..6 {
            let (m0, m1) = (m as f64, m as f64 + 1.0);
            assert!(theta_expression(&t21, m1, 0.0).unwrap() < theta_expression(&t21, m0, 0.0).unwrap());
            assert!(theta_expression(&t22, m1, 0.0).unwrap() > theta_expression(&t22, m0, 0.0).unwrap());
        }
    }
}

/// Larger m never moves the extremum across the bound.
#[test]
fn oracle_at_m_equal_n_is_extremal() {
    let mut cases = Vec::new();
    for p in 1..=2 {
        for n in 1..=2 {
            cases.push(TheoremParams::t21(p, n, 0.5));
            cases.push(TheoremParams::t22(p, n, 0.5));
            cases.push(TheoremParams::t23a(p, n, 0.25, 1.0, 1.0));
        }
    }
    cases.push(TheoremParams::t24(1, 1, 1.5));
    cases.push(TheoremParams::t24(1, 1, 2.5));
    cases.push(TheoremParams::t24(1, 3, 4.0));
    for params in cases {
        let n = params.n as f64;
        let base = theta_oracle(&params, n, SAMPLES).unwrap().value;
        for k in 1..=5 {
            let v = theta_oracle(&params, n + k as f64, SAMPLES).unwrap().value;
            if params.theorem == Theorem::T21 {
                assert!(v <= base + 1e-12, "{params:?} m=n+{k}: {v} > {base}");
            } else {
                assert!(v >= base - 1e-12, "{params:?} m=n+{k}: {v} < {base}");
            }
        }
    }
}

#[test]
fn oracle_matches_closed_form_on_a_sample() {
    for params in [
        TheoremParams::t21(2, 3, 0.25),
        TheoremParams::t22(3, 1, 0.75),
        TheoremParams::t23a(2, 2, 0.5, 2.0, 1.0),
        TheoremParams::t24(2, 12, 5.0),
    ] {
        let o = theta_oracle(&params, params.n as f64, 200_000).unwrap();
        assert!((o.value - params.bound().unwrap()).abs() <= 1e-6, "{params:?}");
    }
}

#[test]
fn lambda_range_validity_pattern() {
    assert!(lambda_range(1, 1).valid);
    assert!(lambda_range(1, 5).valid);
    assert_eq!(lambda_range(1, 5).lambda2, None);
    for n in 1..=11 {
        assert!(!lambda_range(2, n).valid, "n={n}");
    }
    for n in 12..=20 {
        assert!(lambda_range(2, n).valid, "n={n}");
    }
    assert!(lambda_range(2, 1).diagnostic.contains("lambda range invalid (negative discriminant)"));
}
