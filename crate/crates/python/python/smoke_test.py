"""Smoke test for the pygnrad extension module.

Build and install first, e.g. `maturin develop --release` in crates/python,
then run `python python/smoke_test.py`.
"""

import math

import pygnrad


def main():
    lions = pygnrad.Params.preset("lions")
    derived = lions.derived()
    assert derived["gamma_rad"] == "18/7", derived
    assert derived["beta_sum_gamma"] == "1", derived
    assert lions.classify() == "RangeA"
    assert lions.verdicts()["thm13"] == "HoldsStrict"
    assert lions.identities()["all_pass"]

    custom = pygnrad.Params(3, "1/2", "2", "4", "2", "47/10")
    assert custom.gamma == "47/10"
    assert custom.classify() == pygnrad.Params.preset("case1").classify()
    assert all(t.identities()["all_pass"] for t in pygnrad.Params.random(7, 20))

    # D = 0 for this tuple
    try:
        pygnrad.Params(3, "1/2", "2", "2", "1", "2").derived()
        raise AssertionError("degenerate tuple accepted")
    except ValueError as e:
        assert "DegenerateD" in str(e)

    g = pygnrad.Profile.single(1.0, 10.0, 1.0)
    assert math.isclose(g(10.0), math.exp(-1.0))
    report = pygnrad.evaluate(g, lions)
    assert report["converged"]
    scaled = pygnrad.evaluate(g.scale_amplitude(4.0).dilate(2.0), lions)
    assert math.isclose(report["quotient"], scaled["quotient"], rel_tol=1e-6)

    try:
        pygnrad.Profile([(1.0, 10.0, 1.0), (1.0, 10.5, 1.0)])
        raise AssertionError("overlapping bumps accepted")
    except ValueError:
        pass

    summary = pygnrad.scan("single-bump", pygnrad.Params.preset("case1"))
    assert summary["passed"], summary["checks"]
    header = summary["csv"].splitlines()[0]
    assert header == "scan_var,lgamma,seminorm,coulomb,quotient,converged"
    print("pygnrad smoke test ok: case1 slope", summary["fits"][0]["slope"])


if __name__ == "__main__":
    main()
