#!/usr/bin/env python3
"""Reference values for the wraparound-speed module.

Recomputes, from first principles in exact fractions, the level-permutation
wraparound discrepancy of both desk towers, the stub variants, the shrink
ratios, the per-cell and aggregate Monte Carlo budgets, the box-oracle exact
discrepancy, and the exact Hoeffding radius (same dyadic algorithm as the
library plus an mpmath soundness cross-check).
"""
from fractions import Fraction as F
import json
import math

import mpmath

# desk quadruple and frozen stage-1 outputs (see stage1_oracle.py)
P1, Q1, PP1, QP1 = 2, 3, 1, 5
Q2 = 13515
PP2, QP2 = 1982183425207, 9907255908031
D_DIM = 2
N = 1


def stage_numbers(p, q, pp, qp, q_next, D, n=1, d=2):
    qqp = q * qp
    assert q_next % qqp == 0
    m = q_next // qqp + 1
    qbar = q_next + qqp
    eps = F(2, n * qqp)
    alpha = F(p, q)
    alphap = F(pp, qp)
    alpha_n = alpha + F(1, q_next)
    alphap_n = alphap + F(1, qbar) + D
    delta = F(1, qbar) - (m - 1) * D
    return dict(qqp=qqp, m=m, qbar=qbar, eps=eps, alpha=alpha, alphap=alphap,
                alpha_next=alpha_n, alphap_next=alphap_n, delta=delta,
                q_next=q_next, D=D, n=n, d=d)


def circ(x):
    """circle distance of x to 0"""
    f = x - math.floor(x)
    return min(f, 1 - f)


def wrap_terms(st):
    """closed-form wraparound of both towers: one rotated box pair each"""
    qqp, m, qbar, eps = st["qqp"], st["m"], st["qbar"], st["eps"]
    fiber = (1 - 2 * eps) ** (st["d"] - 2)
    # tower 1 base: theta1 width qq'/q_next, theta2 height (1-4eps)/(2qq')
    w1, h1 = F(qqp, st["q_next"]), F(1 - 4 * eps, 2 * qqp)
    # q q' (m-1) rotation steps move the base by (0, -qq' delta) mod 1
    s2 = circ(qqp * (m - 1) * st["alphap_next"])
    assert s2 == circ(qqp * st["delta"]) or st["delta"] == 0
    ov1 = max(F(0), h1 - s2) * (w1 if w1 < 1 else F(1))
    wrap1 = 2 * (w1 * h1 - ov1) * fiber
    # tower 2 base: theta1 width (1-4eps)/(2qq'), theta2 a tall strip of
    # height (qq'-4eps)/qbar' (almost one full level spacing)
    w2, h2 = F(1 - 4 * eps, 2 * qqp), (qqp - 4 * eps) / qbar
    t1 = circ(qqp * m * st["alpha_next"])
    t2 = circ(qqp * m * st["alphap_next"])
    ov2 = max(F(0), w2 - t1) * max(F(0), h2 - t2)
    wrap2 = 2 * (w2 * h2 - ov2) * fiber
    return wrap1, wrap2


def speed_summary(st):
    wrap1, wrap2 = wrap_terms(st)
    total = wrap1 + wrap2
    qq2 = st["qqp"] ** 2
    bound = F(6 * qq2, st["q_next"] * st["qbar"])
    mm1 = st["m"] * (st["m"] - 1)
    ratio = total * mm1
    a_const = -((-6 * qq2 * mm1) // (st["q_next"] * st["qbar"]))
    assert mm1 * qq2 == st["q_next"] * st["qbar"]
    return dict(wrap1=wrap1, wrap2=wrap2, total=total, bound=bound,
                ratio=ratio, a_const=a_const)


# same dyadic algorithm as the library; soundness checked against mpmath
LN2_UP = F(6931471805599454, 10**16)
K32 = 1 << 32


def sqrt_lower(x: F) -> F:
    return F(math.isqrt((x.numerator * K32 * K32) // x.denominator), K32)


def sqrt_upper(x: F) -> F:
    c = -((-x.numerator * K32 * K32) // x.denominator)
    r = math.isqrt(c)
    if r * r < c:
        r += 1
    return F(r, K32)


def ln_upper(x: F) -> F:
    k = 0
    while x > 2:
        x /= 2
        k += 1
    return k * LN2_UP + (x - 1) / sqrt_lower(x)


def halfwidth(rng: int, samples: int, gamma: F) -> F:
    return rng * sqrt_upper(ln_upper(2 / gamma) / (2 * samples))


def main():
    out = {}

    # ---- desk stage 1 ----
    D1 = F(PP2, QP2) - F(PP1, QP1) - F(1, Q2 + 15)
    assert D1 == F(10793, 134045172435659430)
    st = stage_numbers(P1, Q1, PP1, QP1, Q2, D1)
    assert st["delta"] == F(10983643219, 148608838620465)
    desk = speed_summary(st)
    assert desk["wrap1"] == 2 * F(1, 901) * 15 * st["delta"]
    # box dimensions against independently frozen tower measures
    assert (st["m"] - 1) * st["qqp"] * F(1, 901) * F(7, 450) == F(7, 30)
    assert st["m"] * st["qqp"] * F(7, 450) * F(217, 202950) == F(1519, 6750)
    assert desk["a_const"] == 6
    assert 0 < desk["ratio"] <= 6
    out["desk"] = {k: str(v) for k, v in desk.items()}

    # eps ratio of the committed next stage
    eps2 = F(2, 2 * Q2 * QP2)
    mm1 = st["m"] * (st["m"] - 1)
    assert eps2 * mm1 < F(1, 2 * 2 * 15 * 15)
    out["eps2_ratio"] = str(eps2 * mm1)
    out["tail_bound"] = str(2 * eps2)

    # ---- stubs ----
    zero_drift = speed_summary(stage_numbers(2, 3, 1, 5, 15, F(0)))
    assert zero_drift["wrap1"] == F(7, 225) and zero_drift["wrap2"] == 0
    assert zero_drift["ratio"] == F(14, 225)
    out["zero_drift"] = {k: str(v) for k, v in zero_drift.items()}

    flat = speed_summary(stage_numbers(2, 3, 1, 5, 15, F(1, 30)))
    assert flat["total"] == 0 and flat["ratio"] == 0
    out["flat_ratio"] = str(flat["ratio"])

    # ---- rigidity ----
    alpha2 = F(2, 3) + F(1, Q2)
    alphap2 = F(1, 5) + F(1, Q2 + 15) + D1
    assert alpha2 == F(9011, 13515) and alphap2 == F(PP2, QP2)
    assert (alpha2 * Q2).denominator == 1 and (alphap2 * QP2).denominator == 1
    out["period"] = str(Q2 * QP2)

    # ---- Monte Carlo budgets ----
    eps = st["eps"]
    cell_measure = F(1 - eps, 15**2) * F(1 - 2 * eps, 2 * 15**2) * 15**2
    assert cell_measure == F(143, 101250)
    out["cell_budget"] = str(eps * cell_measure)
    good_total = (1 - eps) * (1 - 2 * eps)
    out["sum_budget"] = str(eps * good_total)

    # ---- box oracle: tower-1 base box shifted in theta1 ----
    w, h = F(1, 901), F(7, 450)
    delta = F(1, 1000)
    exact = 2 * (w * h - (w - delta) * h)
    assert exact == F(7, 225000)
    out["box_exact"] = str(exact)

    # ---- Hoeffding radius: frozen values and soundness ----
    for rng, n_samp in ((1, 20000), (2, 20000), (1, 50000), (1, 100000)):
        hw = halfwidth(rng, n_samp, F(1, 100))
        true = F(str(rng * mpmath.sqrt(mpmath.log(200) / (2 * n_samp))))
        assert hw >= true  # exact radius never underestimates
        assert hw < true * F(101, 100)  # and stays within one percent
        out[f"halfwidth_r{rng}_n{n_samp}"] = str(hw)

    print(json.dumps(out, indent=2))


if __name__ == "__main__":
    main()
