import numpy as np
import pytest

from app.core.error_handling import IndexNotInFamily
from app.services.closedform import (
    condition_quantities,
    derivative_relation_residual,
    flatten,
    point_data,
    predicted_anchor_components,
    predicted_components,
    predicted_components_2211,
    rho_derivative,
)
from app.services.metrics import metric_values
from app.services.sampling import sample_points
from tests.helpers import load, variant

X2211 = np.array([0.3, 0.4, 0.5, 0.6, 2.5, 3.5])


@pytest.mark.parametrize("name", ["f2211_flat", "f411_flat"])
def test_constant_functions_give_vanishing_quantities(name, points_for):
    cfg = load(name)
    for p in points_for(name):
        q = condition_quantities(cfg, p)
        assert all(v == 0.0 for v in q.flat().values()), q.flat()


def test_2211_rho_by_hand():
    cfg = load("f2211_generic")
    x1, x2, x3, x4, x5, x6 = X2211
    f2, f4, f5, f6 = x2, x4 + 1.0, x5, x6**2
    d5, d6 = 1.0, 2.0 * x6
    g = metric_values(cfg, X2211)
    g55, g66 = g[4, 4], g[5, 5]
    assert g55 == pytest.approx(-((f2 - f5) ** 2) * (f4 - f5) ** 2 * (f6 - f5))
    assert g66 == pytest.approx((f2 - f6) ** 2 * (f4 - f6) ** 2 * (f5 - f6))

    q = condition_quantities(cfg, X2211)
    rho2 = -0.25 * (d5**2 / ((f5 - f2) ** 2 * g55) + d6**2 / ((f6 - f2) ** 2 * g66))
    assert q.rho_p["2"] == pytest.approx(rho2, rel=1e-12)

    bracket = -1 / (f5 - f2) + 2 / (f2 - f5) + 2 / (f4 - f5) + 1 / (f6 - f5)
    rho52 = -0.25 * d5**2 / ((f5 - f2) * g55) * bracket - 0.25 * d6**2 / ((f6 - f2) * (f6 - f5) * g66)
    assert q.rho_sigma_p["52"] == pytest.approx(rho52, rel=1e-12)

    # θ = t², so B_2 = ε θ'(x²) / (A² g_12) with A = x¹ + (x²)²
    A = x1 + x2**2
    assert q.B_p["2"] == pytest.approx(2 * x2 / (A**2 * g[0, 1]), rel=1e-12)
    assert q.chi_p["2"] == pytest.approx(q.B_p["2"] + q.rho_p["2"], rel=1e-12)


def test_require():
    q = condition_quantities(load("f2211_generic"), X2211)
    assert q.require("rho_p", "4") == q.rho_p["4"]
    with pytest.raises(IndexNotInFamily):
        q.require("gamma1")
    with pytest.raises(IndexNotInFamily):
        q.require("rho_p", "3")
    empty = condition_quantities(load("f33_generic"), [0.5, 0.5, 0.5, 0.5, 0.5, 1.5])
    assert empty.flat() == {}
    with pytest.raises(IndexNotInFamily):
        empty.require("gamma1")


def test_rho_independent_of_first_coordinate():
    cfg = load("f2211_generic")
    shifted = X2211 + np.array([0.2, 0, 0, 0, 0, 0])
    a, b = condition_quantities(cfg, X2211), condition_quantities(cfg, shifted)
    assert a.rho_p == b.rho_p
    assert a.rho_sigma_p == b.rho_sigma_p


@pytest.mark.parametrize(
    "cfg",
    [
        load("f2211_generic"),
        load("f411_generic"),
        load("f411_f5"),
        variant("f321_generic", misprint_mode="alt"),
    ],
)
def test_derivative_relation(cfg):
    for p in sample_points(cfg, 5, seed=0):
        residual = derivative_relation_residual(cfg, p)
        assert residual and max(residual.values()) < 1e-5, residual


def test_rho_constant_along_partner_coordinates():
    cfg = load("f2211_generic")
    for p in sample_points(cfg, 3, seed=0):
        residual = derivative_relation_residual(cfg, p)
        assert residual["d1_rho2"] == residual["d3_rho2"] == 0.0
        assert residual["d1_rho4"] == residual["d3_rho4"] == 0.0


def test_411_self_derivative_is_six_eps_gamma1():
    cfg = load("f411_generic")
    x = [0.3, 0.4, 0.5, 1.2, 1.9, 2.6]
    d = point_data(cfg, x)
    q = condition_quantities(cfg, x)
    assert rho_derivative(cfg, d, 4, 4) == pytest.approx(6.0 * cfg.eps * q.gamma1, rel=1e-12)
    assert [rho_derivative(cfg, d, 4, k) for k in (1, 2, 3)] == [0.0, 0.0, 0.0]


def test_derivative_relation_undefined_without_simple_pairs():
    with pytest.raises(IndexNotInFamily):
        derivative_relation_residual(load("f33_generic"), [0.5, 0.5, 0.5, 0.5, 0.5, 1.5])


def test_flat_2211_predictions_vanish():
    components = predicted_components_2211(load("f2211_flat"), X2211)
    assert set(components) == {"block_chi", "sigma_block", "block_sigma", "sigma_tau", "block_pair"}
    entries = flatten(components)
    assert entries
    assert all(value == 0.0 for _, value in entries.values())


def test_2211_formulas_reject_other_families():
    with pytest.raises(IndexNotInFamily):
        predicted_components_2211(load("f411_generic"), [0.3, 0.4, 0.5, 0.6, 1.5, 2.5])


def test_411_without_eps_reduces_to_gammas():
    cfg = load("f411_f5")
    x = [0.3, 0.4, 0.5, 0.6, 1.5, 2.5]
    q = condition_quantities(cfg, x)
    g = metric_values(cfg, x)
    value = predicted_anchor_components(cfg, x)["R1_224"][(1, 2, 2, 4)]
    assert value == pytest.approx(q.gamma1 * g[1, 3] + q.gamma2 * g[0, 3], rel=1e-12)
    assert q.gamma1 != 0.0


def test_321_flat_anchors_vanish():
    components = predicted_anchor_components(load("f321_flat"), [0.3, 0.4, 0.5, 0.6, 0.7, 2.5])
    assert len(components) == 7
    assert all(value == 0.0 for _, value in flatten(components).values())


def test_33_anchor_by_hand():
    x = [0.3, 0.4, 0.5, 0.6, 0.7, 1.5]
    components = predicted_anchor_components(load("f33_eps"), x)
    # A = ε x² + θ with θ = 1, ε̃ = 0
    assert components["R2_123"][(2, 1, 2, 3)] == pytest.approx(3.0 / (8.0 * (0.4 + 1.0)))
    assert components["R5_456"][(5, 4, 5, 6)] == 0.0


@pytest.mark.parametrize("name", ["f2211_generic", "f51_eps"])
def test_no_anchor_formulas(name):
    with pytest.raises(IndexNotInFamily):
        predicted_anchor_components(load(name), X2211)


def test_51_has_no_component_formulas():
    with pytest.raises(IndexNotInFamily):
        predicted_components(load("f51_eps"), [0.3, 0.4, 0.5, 0.6, 0.7, 1.5])


def test_321_alt_mode_uses_omega_derivative():
    x = [0.3, 0.4, 0.5, 0.6, 0.7, 2.5]
    literal = condition_quantities(load("f321_generic"), x)
    alt = condition_quantities(variant("f321_generic", misprint_mode="alt"), x)
    # θ = t gives θ' = 1; ω = 1 + t² gives ω'(x⁵) = 2 x⁵
    assert alt.B_p["5"] == pytest.approx(2 * 0.7 * literal.B_p["5"], rel=1e-12)
    assert alt.B_p["3"] == literal.B_p["3"]


def test_33_alt_mode_mirrors_second_block():
    x = [0.3, 0.4, 0.5, 0.6, 0.7, 1.5]
    # ω = 1 + t; literal Ã = ε̃ x⁴ + ω(x⁶), alt Ã = ε̃ x⁵ + ω(x⁶)
    literal = predicted_anchor_components(load("f33_generic"), x)
    alt = predicted_anchor_components(variant("f33_generic", misprint_mode="alt"), x)
    assert literal["R5_456"][(5, 4, 5, 6)] == pytest.approx(3.0 / (8.0 * 3.1))
    assert alt["R5_456"][(5, 4, 5, 6)] == pytest.approx(3.0 / (8.0 * 3.2))


def test_411_alt_anchors_carry_g14_terms():
    x = [0.3, 0.4, 0.5, 0.6, 1.5, 2.5]
    cfg = load("f411_f5")
    literal = predicted_anchor_components(cfg, x)
    alt = predicted_anchor_components(variant("f411_f5", misprint_mode="alt"), x)
    q = condition_quantities(cfg, x)
    d = point_data(cfg, x)
    g14 = d.gg(1, 4)
    assert alt["R1_214"][(1, 2, 1, 4)] - literal["R1_214"][(1, 2, 1, 4)] == pytest.approx(q.gamma1 * g14)
    for s in (5, 6):
        shift = -(q.rho_p["4"] - q.rho_sigma_p[f"{s}4"]) * g14 / (d.f(s) - d.f(4))
        assert alt["Rs_2s4"][(s, 2, s, 4)] - literal["Rs_2s4"][(s, 2, s, 4)] == pytest.approx(shift)
    assert alt["R1_114"] == literal["R1_114"]
    assert alt["R1_224"] == literal["R1_224"]


def test_2211_alt_flips_block_pair_sum():
    literal = predicted_components_2211(load("f2211_generic"), X2211)
    alt = predicted_components_2211(variant("f2211_generic", misprint_mode="alt"), X2211)
    for name in ("block_chi", "sigma_block", "block_sigma", "sigma_tau"):
        assert alt[name] == literal[name]
    assert alt["block_pair"].keys() == literal["block_pair"].keys()
    assert any(alt["block_pair"][idx] != literal["block_pair"][idx] for idx in literal["block_pair"])
