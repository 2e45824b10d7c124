"""Acceptance suite: one test per criterion, plus CLI reproducibility."""

import pytest

from stringmass import acceptance as ac
from stringmass import cli


@pytest.fixture(scope="session")
def results():
    return {r.number: r for r in ac.run_all(seed=0)}


def _check(results, number):
    r = results[number]
    assert r.passed, f"criterion {number} failed: {r.name}, details={r.details}"


def test_criterion_1_closed_form_spectrum(results):
    _check(results, 1)
    assert results[1].details["max_rel_err_lambda"] <= 1e-8


def test_criterion_2_interlacing_random_configs(results):
    _check(results, 2)
    assert results[2].details["violations"] == 0


def test_criterion_3_gap_trends(results):
    _check(results, 3)
    d = results[3].details
    assert d["max_over_median_n_delta"] <= 3.0
    assert d["min_two_step_gap"] > d["two_step_floor"]


def test_criterion_4_weyl_asymptotics(results):
    _check(results, 4)
    assert results[4].details["max_deviation"] <= 0.02


def test_criterion_5_eigenfunction_structure(results):
    _check(results, 5)
    d = results[5].details
    assert d["max_jump_residual"] <= 1e-6
    assert d["max_gram_offdiag"] <= 1e-5
    assert abs(d["exp_fused"]) <= 0.3
    assert abs(d["exp_cluster_second"] + 1.0) <= 0.3
    assert abs(d["exp_isolated_bplus"]) <= 0.3
    assert abs(d["exp_isolated_bminus"] + 1.0) <= 0.3


def test_criterion_6_simulator_fidelity(results):
    _check(results, 6)
    d = results[6].details
    assert d["frequency_rel_err"] <= 1e-3
    assert d["energy_drift"] <= 1e-4
    assert d["trace_l2_rel_err"] <= 0.02


def test_criterion_7_observability_constants(results):
    _check(results, 7)
    d = results[7].details
    assert d["c_min"] > 0.0
    assert d["spread"] <= 1e3


def test_criterion_8_control_to_rest(results):
    _check(results, 8)
    d = results[8].details
    assert d["duhamel_relative_residual"] <= 1e-8
    assert d["fd_energy_reduction"] >= 1e3


def test_criterion_9_cluster_cost(results):
    _check(results, 9)
    assert results[9].details["cost_gap_spread"] <= 3.0


def test_criterion_10_verify_reproducible(tmp_path):
    out1 = tmp_path / "run1"
    out2 = tmp_path / "run2"
    assert cli.main(["verify", "--out", str(out1), "--seed", "0"]) == 0
    assert cli.main(["verify", "--out", str(out2), "--seed", "0"]) == 0
    b1 = (out1 / "acceptance_report.txt").read_bytes()
    b2 = (out2 / "acceptance_report.txt").read_bytes()
    assert b1 == b2
    assert b"FAIL" not in b1
