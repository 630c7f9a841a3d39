import math
import os

import pytest

import bmfix

SCENARIOS = os.environ.get("BMFIX_SCENARIO_DIR", os.path.join(os.path.dirname(__file__), "..", "..", "scenarios"))


def test_power_space_distances():
    sq = bmfix.power_space(1, 2.0)
    assert sq.s == 2.0
    assert sq.kind == "vector"
    assert sq.dist(1.0, 0.9) == pytest.approx(0.01, rel=1e-12)
    assert bmfix.hausdorff(sq, [0.0], [1.0]) == 1.0
    assert bmfix.hausdorff(sq, [0.0, 1.0], [0.0, 1.0]) == 0.0


def test_matrix_space_and_axioms():
    sp = bmfix.matrix_space(3, [[0, 1, 4], [1, 0, 1], [4, 1, 0]], 2.0)
    assert sp.kind == "finite"
    assert sp.dist(0, 2) == 4.0
    assert bmfix.verify_axioms(sp, [0, 1, 2])["passed"]
    assert bmfix.estimate_min_s(sp, [0, 1, 2]) == 2.0
    with pytest.raises(bmfix.InvalidInput, match="asymmetry"):
        bmfix.matrix_space(2, [[0, 1], [2, 0]], 1.0)


def test_worked_example_run():
    sc = bmfix.paper_example()
    out = bmfix.run(sc)
    assert out["exit_code"] == 0
    report = out["report"]
    assert set(report) == {"certificate", "orbit", "audit", "timing_ms"}
    assert report["orbit"]["status"] == "converged"
    assert report["orbit"]["iterations"] == 77
    assert report["certificate"]["alpha_min"] == pytest.approx(0.81, abs=1e-9)
    assert abs(report["orbit"]["fixed_point"][0]) < 1e-3


def test_certify_and_bounds():
    cert = bmfix.certify(bmfix.paper_example())
    assert cert["verdicts"]["thm33"] is True
    assert cert["verdicts"]["thm41"] is False
    assert bmfix.gamma_of(0.9, 0.0, 2.0) == 0.9
    series = bmfix.cauchy_series(0.81, 2.0, 0.01)
    assert series["bound0"] == pytest.approx(6.7756723931010083139, rel=1e-13)
    assert bmfix.cauchy_bound(1, 0.81, 2.0, 0.01) == 0.81 * series["bound0"]
    assert bmfix.chaining_bound([1.0, 1.0, 1.0], 2.0) == 12.0


def test_random_finite_round_trip():
    a = bmfix.random_finite(42, 8, 2.0, 0.5)
    b = bmfix.Scenario.from_dict(a.to_dict())
    assert a == b
    assert bmfix.run(a)["exit_code"] == 0
    assert a.to_dict() == bmfix.load_scenario(os.path.join(SCENARIOS, "random_finite_42.json")).to_dict()


def test_splitmix_reference():
    rng = bmfix.SplitMix64(0)
    assert rng.next() == 0xE220A8397B1DCDAF
    assert rng.next() == 0x6E789E6AA1B965F4


def test_errors_map_to_python():
    with pytest.raises(bmfix.InvalidInput):
        bmfix.load_scenario("/nonexistent.json")
    with pytest.raises(ValueError):
        bmfix.random_finite(1, 2)
    assert math.isfinite(bmfix.default_beta(0.2, 1.0, 2.0))
