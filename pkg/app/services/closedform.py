"""Closed-form condition quantities and predicted curvature components.

Everything here is evaluated from metric values and exact polynomial
derivatives of the family functions, never from jets, so the module stays an
independent check of the brute-force curvature pipeline. Indices are 1-based.
"""

from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np

from app.core.error_handling import DivisionNearZero, IndexNotInFamily, SingularPoint
from app.core.logging_config import get_logger
from app.models.family import FamilyConfig, FamilyTag, PointLike, coords
from app.models.quantities import ConditionQuantities
from app.services.jets import reciprocal
from app.services.metrics import FamilyScalars, family_scalars, metric_values

logger = get_logger(__name__)

Index = Tuple[int, int, int, int]
Components = Dict[str, Dict[Index, float]]

# p-blocks of [2211]: index set and the partner of each index inside its block
BLOCKS_2211 = {2: (1, 2), 4: (3, 4)}
PARTNER = {1: 2, 2: 1, 3: 4, 4: 3}


@dataclass(frozen=True)
class PointData:
    x: np.ndarray
    g: np.ndarray
    s: FamilyScalars
    d1: Dict[int, float]
    d2: Dict[int, float]

    def f(self, i: int) -> float:
        return float(self.s.roots[i - 1])

    def gg(self, i: int, j: int) -> float:
        return float(self.g[i - 1, j - 1])


def point_data(cfg: FamilyConfig, p: PointLike) -> PointData:
    x = coords(p)
    g = metric_values(cfg, x)
    s = family_scalars(cfg, [float(v) for v in x])
    d1, d2 = {}, {}
    for sigma in s.simple:
        spec = cfg.f5 if sigma == 5 else cfg.f6
        _, d1[sigma], d2[sigma] = spec.eval2(float(x[sigma - 1]))
    return PointData(x=x, g=g, s=s, d1=d1, d2=d2)


def _inv(v: float) -> float:
    return reciprocal(float(v))


def rho_p(d: PointData, p: int) -> float:
    return -0.25 * sum(d.d1[s] ** 2 * _inv((d.f(s) - d.f(p)) ** 2 * d.gg(s, s)) for s in d.s.simple)


def rho_pq(d: PointData, p: int, q: int) -> float:
    return -0.25 * sum(
        d.d1[s] ** 2 * _inv((d.f(s) - d.f(p)) * (d.f(s) - d.f(q)) * d.gg(s, s)) for s in d.s.simple
    )


def rho_sigma_p(d: PointData, sigma: int, p: int) -> float:
    # first brace expanded so that f'_σ = 0 does not produce 0/0
    fs, fp, gss = d.f(sigma), d.f(p), d.gg(sigma, sigma)
    base = _inv((fs - fp) * gss)
    bracket = -_inv(fs - fp) + sum(_inv(d.f(i) - fs) for i in range(1, 7) if i != sigma)
    value = -0.25 * 2.0 * d.d2[sigma] * base - 0.25 * d.d1[sigma] ** 2 * base * bracket
    value -= 0.25 * sum(
        d.d1[t] ** 2 * _inv((d.f(t) - fp) * (d.f(t) - fs) * d.gg(t, t)) for t in d.s.simple if t != sigma
    )
    return value


def _gamma_power(d: PointData, p: int, power: int) -> float:
    return -0.25 * sum(d.d1[s] ** 2 * _inv((d.f(s) - d.f(p)) ** power * d.gg(s, s)) for s in d.s.simple)


def _quantities_2211(cfg: FamilyConfig, d: PointData) -> ConditionQuantities:
    x = d.x
    A, At = float(d.s.A), float(d.s.At)
    B = {
        2: cfg.eps * cfg.theta.eval2(float(x[1]))[1] * _inv(A**2 * d.gg(1, 2)),
        4: cfg.et * cfg.omega.eval2(float(x[3]))[1] * _inv(At**2 * d.gg(3, 4)),
    }
    rho = {p: rho_p(d, p) for p in (2, 4)}
    return ConditionQuantities(
        family=cfg.tag,
        rho_p={str(p): v for p, v in rho.items()},
        rho_pq={"24": rho_pq(d, 2, 4)},
        rho_sigma_p={f"{s}{p}": rho_sigma_p(d, s, p) for s in (5, 6) for p in (2, 4)},
        B_p={str(p): v for p, v in B.items()},
        chi_p={str(p): B[p] + rho[p] for p in (2, 4)},
    )


def _quantities_321(cfg: FamilyConfig, d: PointData) -> ConditionQuantities:
    x = d.x
    A, At = float(d.s.A), float(d.s.At)
    if cfg.misprint_mode == "alt":
        numerator = cfg.omega.eval2(float(x[4]))[1]
    else:
        numerator = cfg.theta.eval2(float(x[2]))[1]
    B = {
        3: 3.0 * cfg.eps**2 * _inv(16.0 * A**2 * d.gg(2, 2)),
        5: cfg.et * numerator * _inv(At**2 * d.gg(4, 5)),
    }
    rho = {p: rho_p(d, p) for p in (3, 5)}
    return ConditionQuantities(
        family=cfg.tag,
        rho_p={str(p): v for p, v in rho.items()},
        rho_pq={"35": rho_pq(d, 3, 5)},
        rho_sigma_p={f"6{p}": rho_sigma_p(d, 6, p) for p in (3, 5)},
        B_p={str(p): v for p, v in B.items()},
        chi_p={str(p): B[p] + rho[p] for p in (3, 5)},
        gamma=_gamma_power(d, 3, 3),
    )


def _quantities_411(cfg: FamilyConfig, d: PointData) -> ConditionQuantities:
    return ConditionQuantities(
        family=cfg.tag,
        rho_p={"4": rho_p(d, 4)},
        rho_sigma_p={f"{s}4": rho_sigma_p(d, s, 4) for s in (5, 6)},
        gamma1=_gamma_power(d, 4, 3),
        gamma2=_gamma_power(d, 4, 4),
    )


def _quantities_empty(cfg: FamilyConfig, d: PointData) -> ConditionQuantities:
    return ConditionQuantities(family=cfg.tag)


_QUANTITIES = {
    FamilyTag.T2211: _quantities_2211,
    FamilyTag.T321: _quantities_321,
    FamilyTag.T33: _quantities_empty,
    FamilyTag.T411: _quantities_411,
    FamilyTag.T51: _quantities_empty,
}


def condition_quantities(cfg: FamilyConfig, p: PointLike) -> ConditionQuantities:
    d = point_data(cfg, p)
    try:
        return _QUANTITIES[cfg.tag](cfg, d)
    except DivisionNearZero as exc:
        raise SingularPoint(f"[{cfg.tag.value}] closed-form quantities singular at {d.x.tolist()}: {exc}") from exc


def predicted_components_2211(cfg: FamilyConfig, p: PointLike) -> Components:
    """Nonzero R^i_{jkl} of [2211] grouped by component family."""
    if cfg.tag is not FamilyTag.T2211:
        raise IndexNotInFamily(f"component formulas are given for [2211] only, not [{cfg.tag.value}]")
    d = point_data(cfg, p)
    q = condition_quantities(cfg, d.x)
    chi = {p_: q.require("chi_p", str(p_)) for p_ in (2, 4)}
    rho_s = {(s, p_): q.require("rho_sigma_p", f"{s}{p_}") for s in (5, 6) for p_ in (2, 4)}
    r24 = q.require("rho_pq", "24")
    # sign of the Σ_l (χ_l − ρ_24) term: minus as printed, plus in alt mode
    pair_sign = 1.0 if cfg.misprint_mode == "alt" else -1.0
    A_p = {2: float(d.s.A), 4: float(d.s.At)}
    g = d.gg

    out: Components = {
        "block_chi": {},
        "sigma_block": {},
        "block_sigma": {},
        "sigma_tau": {},
        "block_pair": {},
    }
    try:
        for p_, block in BLOCKS_2211.items():
            for a in block:
                for b in block:
                    for c in block:
                        if a != c:
                            out["block_chi"][(a, b, a, c)] = chi[p_] * g(b, c)
            for s in (5, 6):
                D = (chi[p_] - rho_s[(s, p_)]) * _inv(d.f(s) - d.f(p_))
                for b in block:
                    for c in block:
                        value = rho_s[(s, p_)] * g(b, c)
                        if b == p_:
                            value -= D * A_p[p_] * g(PARTNER[p_], c)
                        out["sigma_block"][(s, b, s, c)] = value
                for a in block:
                    for b in block:
                        value = rho_s[(s, p_)] * (1.0 if a == b else 0.0)
                        if b == p_ and a == PARTNER[p_]:
                            value -= D * A_p[p_]
                        out["block_sigma"][(a, s, b, s)] = g(s, s) * value

        f2 = d.f(2)
        for s, t in ((5, 6), (6, 5)):
            out["sigma_tau"][(t, s, t, s)] = g(s, s) * (
                rho_s[(t, 2)] * (d.f(t) - f2) - rho_s[(s, 2)] * (d.f(s) - f2)
            ) * _inv(d.f(t) - d.f(s))

        chi_sum = sum(chi[l] - r24 for l in (2, 4))
        for p_, q_ in ((2, 4), (4, 2)):
            fp, fq = d.f(p_), d.f(q_)
            for a in BLOCKS_2211[p_]:
                for k in BLOCKS_2211[p_]:
                    for j in BLOCKS_2211[q_]:
                        for l in BLOCKS_2211[q_]:
                            value = 0.0
                            if a == k:
                                value += r24 * g(j, l)
                                if l == q_:
                                    value -= (chi[q_] - r24) * _inv(fp - fq) * A_p[q_] * g(j, PARTNER[l])
                            if k == p_ and a == PARTNER[k]:
                                value -= (chi[p_] - r24) * _inv(fq - fp) * A_p[p_] * g(j, l)
                                if l == q_:
                                    pair = chi_sum * _inv((fq - fp) ** 2) * A_p[p_] * A_p[q_]
                                    value += pair_sign * pair * g(j, PARTNER[l])
                            out["block_pair"][(a, j, k, l)] = value
    except DivisionNearZero as exc:
        raise SingularPoint(f"[2211] predicted components singular at {d.x.tolist()}: {exc}") from exc
    return out


def _anchors_33(cfg: FamilyConfig, d: PointData) -> Components:
    return {
        "R2_123": {(2, 1, 2, 3): 3.0 * cfg.eps**2 * _inv(8.0 * float(d.s.A))},
        "R5_456": {(5, 4, 5, 6): 3.0 * cfg.et**2 * _inv(8.0 * float(d.s.At))},
    }


def _anchors_321(cfg: FamilyConfig, d: PointData) -> Components:
    q = condition_quantities(cfg, d.x)
    A = float(d.s.A)
    f3, f5, f6 = (float(v) for v in d.s.groups)
    S1 = _inv(f6 - f3) + 2.0 * _inv(f5 - f3)
    theta_d1 = cfg.theta.eval2(float(d.x[2]))[1]
    eps = cfg.eps
    g13, g45 = d.gg(1, 3), d.gg(4, 5)
    return {
        "R2_123": {(2, 1, 2, 3): q.require("chi_p", "3") * g13},
        "R5_153": {(5, 1, 5, 3): q.require("rho_pq", "35") * g13},
        "R6_163": {(6, 1, 6, 3): q.require("rho_sigma_p", "63") * g13},
        "R4_445": {(4, 4, 4, 5): q.require("chi_p", "5") * g45},
        "R3_435": {(3, 4, 3, 5): q.require("rho_pq", "35") * g45},
        "R6_465": {(6, 4, 6, 5): q.require("rho_sigma_p", "65") * g45},
        "R1_123": {
            (1, 1, 2, 3): q.require("gamma") * g13
            + 3.0 * eps**2 * _inv(8.0 * A) * S1
            + 3.0 * eps * _inv(4.0 * A**2) * (theta_d1 - eps**2 * float(d.x[0]))
        },
    }


def _anchors_411(cfg: FamilyConfig, d: PointData) -> Components:
    q = condition_quantities(cfg, d.x)
    A = float(d.s.A)
    theta_d1 = cfg.theta.eval2(float(d.x[3]))[1]
    eps = cfg.eps
    g14, g24 = d.gg(1, 4), d.gg(2, 4)
    rho4, gamma1, gamma2 = q.require("rho_p", "4"), q.require("gamma1"), q.require("gamma2")
    rho_s = {s: q.require("rho_sigma_p", f"{s}4") for s in (5, 6)}

    r1_214 = rho4 * g24
    rs_2s4 = {(s, 2, s, 4): rho_s[s] * g24 for s in (5, 6)}
    if cfg.misprint_mode == "alt":
        # the g_14 terms whose difference the two printed forms must carry
        r1_214 += gamma1 * g14 + 2.0 * eps**2 * _inv(3.0 * A)
        rs_2s4 = {
            (s, 2, s, 4): rho_s[s] * g24 - (rho4 - rho_s[s]) * g14 * _inv(d.f(s) - d.f(4)) for s in (5, 6)
        }
    return {
        "R1_114": {(1, 1, 1, 4): rho4 * g14},
        "R1_214": {(1, 2, 1, 4): r1_214},
        "Rs_1s4": {(s, 1, s, 4): rho_s[s] * g14 for s in (5, 6)},
        "Rs_2s4": rs_2s4,
        "R1_224": {
            (1, 2, 2, 4): gamma1 * g24
            + gamma2 * g14
            + 2.0 * eps * _inv(3.0 * A**2) * (theta_d1 - 4.0 / 3.0 * eps**2 * float(d.x[1]))
        },
    }


_ANCHORS = {
    FamilyTag.T321: _anchors_321,
    FamilyTag.T33: _anchors_33,
    FamilyTag.T411: _anchors_411,
}


def predicted_anchor_components(cfg: FamilyConfig, p: PointLike) -> Components:
    if cfg.tag not in _ANCHORS:
        raise IndexNotInFamily(f"no explicit anchor components for family [{cfg.tag.value}]")
    d = point_data(cfg, p)
    try:
        return _ANCHORS[cfg.tag](cfg, d)
    except DivisionNearZero as exc:
        raise SingularPoint(f"[{cfg.tag.value}] anchor components singular at {d.x.tolist()}: {exc}") from exc


def predicted_components(cfg: FamilyConfig, p: PointLike) -> Components:
    """Whatever closed-form components the family has."""
    if cfg.tag is FamilyTag.T2211:
        return predicted_components_2211(cfg, p)
    return predicted_anchor_components(cfg, p)


# p -> (config attribute holding ε_p, multiplicity of f_p), with f_p = ε_p x^p + const
RHO_ROOTS: Dict[FamilyTag, Dict[int, Tuple[str, int]]] = {
    FamilyTag.T2211: {2: ("eps", 2), 4: ("et", 2)},
    FamilyTag.T321: {3: ("eps", 3), 5: ("et", 2)},
    FamilyTag.T411: {4: ("eps", 4)},
}


def rho_derivative(cfg: FamilyConfig, d: PointData, p: int, k: int) -> float:
    """Closed form of ∂_k ρ_p.

    Along a simple root σ this is −f'_σ (ρ_p − ρ_σp)/(f_σ − f_p). Along the
    variable of a multiple root it comes from differentiating (f_σ − f_p) and
    g_σσ, which holds f_k with its multiplicity. Along every other coordinate
    ρ_p is constant.
    """
    roots = RHO_ROOTS[cfg.tag]
    fp = d.f(p)
    if k in d.s.simple:
        return -d.d1[k] * (rho_p(d, p) - rho_sigma_p(d, k, p)) * _inv(d.f(k) - fp)
    if k not in roots:
        return 0.0
    name, mult = roots[k]
    eps_k = float(getattr(cfg, name))
    if k == p:
        return -0.25 * (2 + mult) * eps_k * sum(
            d.d1[s] ** 2 * _inv((d.f(s) - fp) ** 3 * d.gg(s, s)) for s in d.s.simple
        )
    fk = d.f(k)
    return -0.25 * mult * eps_k * sum(
        d.d1[s] ** 2 * _inv((d.f(s) - fp) ** 2 * (d.f(s) - fk) * d.gg(s, s)) for s in d.s.simple
    )


def derivative_relation_residual(cfg: FamilyConfig, p: PointLike, h: float = 1e-5) -> Dict[str, float]:
    """Relative mismatch between central differences of ρ_p and ``rho_derivative``.

    Keys are ``d{k}_rho{p}``, one per coordinate k and multiple root p.
    """
    if cfg.tag not in RHO_ROOTS:
        raise IndexNotInFamily(f"no ρ derivative relations for family [{cfg.tag.value}]")
    x = coords(p)
    d = point_data(cfg, x)
    out: Dict[str, float] = {}
    try:
        for k in range(1, 7):
            step = np.zeros(6)
            step[k - 1] = h
            plus = condition_quantities(cfg, x + step)
            minus = condition_quantities(cfg, x - step)
            for p_ in RHO_ROOTS[cfg.tag]:
                key = str(p_)
                lhs = (plus.require("rho_p", key) - minus.require("rho_p", key)) / (2.0 * h)
                rhs = rho_derivative(cfg, d, p_, k)
                denom = max(abs(lhs), abs(rhs), abs(rho_p(d, p_)))
                out[f"d{k}_rho{p_}"] = abs(lhs - rhs) / denom if denom > 0.0 else 0.0
    except DivisionNearZero as exc:
        raise SingularPoint(f"[{cfg.tag.value}] ρ derivatives singular at {x.tolist()}: {exc}") from exc
    return out


def flatten(components: Components) -> Dict[Index, Tuple[str, float]]:
    return {idx: (name, value) for name, entries in components.items() for idx, value in entries.items()}
