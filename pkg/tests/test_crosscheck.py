import logging

import pytest

from app.core.error_handling import IndexNotInFamily
from app.services import crosscheck
from app.services.crosscheck import DERIVATIVE_RELATION, crosscheck_point, run_crosscheck
from tests.helpers import load, variant


def corrupt(monkeypatch, family: str, offset: float = 1.0):
    original = crosscheck.predicted_components

    def corrupted(cfg, p):
        components = original(cfg, p)
        components[family] = {idx: value + offset for idx, value in components[family].items()}
        return components

    monkeypatch.setattr(crosscheck, "predicted_components", corrupted)


@pytest.mark.parametrize("name", ["f2211_flat", "f321_flat", "f33_flat", "f411_flat"])
def test_flat_fixtures_agree(name):
    report = run_crosscheck(load(name), 2, seed=0)
    assert report.passed
    assert report.discrepant == []
    assert all(c.passed for point in report.points for c in point.components)


def test_point_reports_every_predicted_component():
    point = crosscheck_point(load("f2211_flat"), [0.3, 0.4, 0.5, 0.6, 2.5, 3.5], tol=1e-8)
    families = {c.family for c in point.components}
    assert families == {"block_chi", "sigma_block", "block_sigma", "sigma_tau", "block_pair"}
    assert all(len(c.index) == 4 and all(1 <= i <= 6 for i in c.index) for c in point.components)
    assert set(point.derivative_relation) == {f"d{k}_rho{p}" for k in range(1, 7) for p in (2, 4)}
    assert set(point.equalities) == {
        "R1_112=R4_142",
        "R3_334=R2_324",
        "R1_112=R5_152",
        "R1_112=R6_162",
        "R3_334=R5_354",
        "R3_334=R6_364",
    }


def test_corrupted_family_is_named(monkeypatch, caplog):
    corrupt(monkeypatch, "sigma_tau")
    with caplog.at_level(logging.WARNING, logger="app"):
        report = run_crosscheck(load("f2211_flat"), 2, seed=0)
    assert not report.passed
    assert report.discrepant == ["sigma_tau"]
    assert report.family_max_error["sigma_tau"] == pytest.approx(1.0)
    assert "sigma_tau" in caplog.text


def test_corrupted_anchor_is_named(monkeypatch):
    corrupt(monkeypatch, "R2_123", offset=0.5)
    report = run_crosscheck(load("f33_flat"), 1, seed=0)
    assert report.discrepant == ["R2_123"]


def test_generic_2211_derivative_relation():
    report = run_crosscheck(load("f2211_generic"), 3, seed=4)
    assert DERIVATIVE_RELATION not in report.discrepant
    assert report.family_max_error[DERIVATIVE_RELATION] < 1e-5


def test_family_without_component_formulas():
    with pytest.raises(IndexNotInFamily):
        run_crosscheck(load("f51_flat"), 1, seed=0)


def test_report_json_round_trips_alias():
    report = run_crosscheck(load("f411_flat"), 1, seed=2)
    assert '"schema": 1' in report.to_json()
    assert '"passed": true' in report.to_json()


@pytest.mark.parametrize("name", ["f2211_generic", "f411_generic", "f33_generic"])
def test_generic_crosscheck_is_reproducible(name):
    cfg = load(name)
    first = run_crosscheck(cfg, 2, seed=8)
    second = run_crosscheck(cfg, 2, seed=8)
    assert first.to_json() == second.to_json()
    assert all(point.components for point in first.points)


def test_generic_2211_literal_reports_block_pair():
    report = run_crosscheck(load("f2211_generic"), 5, seed=0)
    assert report.discrepant == ["block_pair"]


@pytest.mark.parametrize(
    "cfg",
    [
        variant("f2211_eps", misprint_mode="alt"),
        variant("f2211_generic", eps=0, eps_tilde=0, misprint_mode="alt"),
    ],
)
def test_2211_alt_block_pair_agrees(cfg):
    report = run_crosscheck(cfg, 5, seed=0)
    assert report.discrepant == []


def test_321_literal_and_alt():
    literal = run_crosscheck(load("f321_generic"), 5, seed=0)
    assert {"R4_445", "R6_163", "R6_465"} <= set(literal.discrepant)
    assert "R2_123" not in literal.discrepant
    alt = run_crosscheck(variant("f321_generic", misprint_mode="alt"), 5, seed=0)
    assert alt.discrepant == []


def test_33_literal_and_alt():
    literal = run_crosscheck(load("f33_generic"), 5, seed=0)
    assert "R5_456" in literal.discrepant
    assert "R2_123" not in literal.discrepant
    alt = run_crosscheck(variant("f33_generic", misprint_mode="alt"), 5, seed=0)
    assert alt.discrepant == []


@pytest.mark.parametrize("name", ["f411_generic", "f411_eps", "f411_f5"])
def test_411_first_column_anchors_agree(name):
    report = run_crosscheck(load(name), 5, seed=0)
    assert "R1_114" not in report.discrepant
    assert "Rs_1s4" not in report.discrepant


def test_411_without_eps_literal_and_alt():
    literal = run_crosscheck(load("f411_f5"), 5, seed=0)
    assert set(literal.discrepant) == {"R1_214", "Rs_2s4"}
    alt = run_crosscheck(variant("f411_f5", misprint_mode="alt"), 5, seed=0)
    assert alt.discrepant == []


@pytest.mark.parametrize("name", ["f2211_flat", "f33_flat", "f411_flat"])
def test_equalities_hold_on_flat_fixtures(name):
    report = run_crosscheck(load(name), 3, seed=0)
    values = [v for point in report.points for v in point.equalities.values()]
    assert values and max(values) < 1e-8


@pytest.mark.parametrize(
    "name, equality",
    [("f2211_eps", "R1_112=R4_142"), ("f33_eps", "R2_123=R6_163")],
)
def test_equalities_break_off_constant_curvature(name, equality):
    report = run_crosscheck(load(name), 3, seed=0)
    assert all(point.equalities[equality] > 1e-3 for point in report.points)
    # informational only
    assert equality not in report.discrepant


def test_floats_written_with_17_digits():
    report = run_crosscheck(load("f2211_generic"), 1, seed=0)
    x0 = report.points[0].x[0]
    assert format(x0, ".17g") in report.to_json()
