"""Smoke test for the gftv Python module.

Build and install first:  maturin develop -m crates/python/Cargo.toml
"""

import math

import gftv


def main():
    assert gftv.bound("t21", 1, 1, alpha=0.0) == 0.5
    assert abs(gftv.bound("t24", 1, 1, lam=1.5) - 1.3) < 1e-12

    l1, l2, valid, _ = gftv.lambda_range(1, 1)
    assert valid and abs(l1 - 1.0) < 1e-12 and abs(l2 - 3.0) < 1e-12
    _, _, valid, diag = gftv.lambda_range(2, 1)
    assert not valid and "negative discriminant" in diag

    params = gftv.TheoremParams("t24", lam=1.5)
    oracle = gftv.theta_oracle(params)
    assert abs(oracle["value"] - params.bound()) < 1e-6

    f = gftv.FunctionSpec(1, 1, {2: 0.1})
    assert abs(f.eval(0.5) - 0.525) < 1e-15
    report = gftv.verify(f, gftv.TheoremParams("t21"))
    assert report.status == "BOTH_HOLD", report
    assert math.isclose(report.bound, 0.5)

    g = gftv.FunctionSpec.named("monomial-pair(0.45)")
    assert gftv.verify(g, gftv.TheoremParams("t21")).status == "VACUOUS"

    h = gftv.FunctionSpec.random(2, 1, 6, 0.2, seed=3)
    assert gftv.winding_number(h, 0.99) == 2

    grid = gftv.GridSpec(samples=1024)
    corpus = [gftv.FunctionSpec.random(1, 1, 5, 0.2, seed=1, stream=i) for i in range(20)]
    reports = gftv.run_corpus(corpus, gftv.TheoremParams("t22"), grid)
    assert len(reports) == 20 and all(r.status != "VIOLATION" for r in reports)

    margin = gftv.disk_inequality_margin(f, 2.0, grid)
    assert (margin > 0) == gftv.containment_subordination_check(f, 2.0, grid)

    jack = gftv.jack_check({2: 0.5, 3: 0.1j}, 0.9)
    assert jack["passes"] and jack["order"] == 2

    witness, accepted, trials = gftv.search_counterexample(gftv.TheoremParams("t21"), trials=100, grid=grid)
    assert witness is None and trials == 100

    try:
        gftv.FunctionSpec(1, 2, {2: 0.1})
    except ValueError:
        pass
    else:
        raise AssertionError("gap violation accepted")

    print("smoke test ok")


if __name__ == "__main__":
    main()
