#!/usr/bin/env python3
"""Independent window-count oracle for the tower generating diagnostics.

Simulates the theta1 orbit of tower-1 box 0 and the theta2 orbit of tower-2
box 0 directly with Fractions (one frac-step per level) and counts window
fits, instead of using the closed-form progression constants the library
derives.  Desk scale: (p,q,p',q') = (2,3,1,5), q2 = 13515, d = 2.
"""

from fractions import Fraction as Fr


def frac(x: Fr) -> Fr:
    return x - (x.numerator // x.denominator)


def main() -> None:
    p, q, pp, qp = 2, 3, 1, 5
    q_next = 13515
    D = Fr(10793, 134045172435659430)
    qq = q * qp
    m = q_next // qq + 1
    qbar = m * qq
    eps = Fr(2, 1 * qq)  # eps_n = 2/(n q q'), n = 1
    alpha_next = Fr(p, q) + Fr(1, q_next)
    alphap_next = Fr(pp, qp) + Fr(1, qbar) + D

    # cell-unit steps of the two orbits (d = 2: slab width W = 1 cell)
    step1 = frac(qq * alpha_next)
    step2 = frac(qq * alphap_next)
    assert step1 == Fr(qq, q_next)
    assert step2 == Fr(qq, qbar) + qq * D

    w1 = Fr(qq * qq, q_next)
    w2 = qq * Fr(qq - 4 * eps, qbar)
    x0 = eps / 2                       # theta1 anchor of tower-1 box 0, cell units
    y0 = eps / 2 + 2 * eps * Fr(qq, qbar)  # theta2 anchor of tower-2 box 0

    lo, hi = eps / 2, 1 - eps / 2
    xi1 = sum(
        1
        for i in range(m - 1)
        if lo <= frac(x0 + i * step1) and frac(x0 + i * step1) + w1 <= hi
    )
    xi2 = sum(
        1
        for i in range(m)
        if lo <= frac(y0 + i * step2) and frac(y0 + i * step2) + w2 <= hi
    )

    shrink = eps * (1 - eps)  # windows shrink by eps of their unit length
    slo, shi = lo + shrink, hi - shrink
    eta = sum(
        1
        for i in range(m - 1)
        if slo <= frac(x0 + i * step1)
        and frac(x0 + i * step1) + w1 <= shi
        and slo <= frac(y0 + i * step2)
        and frac(y0 + i * step2) + w2 <= shi
    )

    print(f"m = {m}, qbar' = {qbar}")
    print(f"xi1 = {xi1}/{m - 1}")
    print(f"xi2 = {xi2}/{m}")
    print(f"eta = {eta}/{m - 1}")

    # wrap structure of the xi1 orbit: first index leaving the window above,
    # first index past the wrap (positions below eps/2 afterwards)
    first_out = next(i for i in range(m - 1) if frac(x0 + i * step1) + w1 > hi)
    first_wrap = next(
        i for i in range(m - 1) if frac(x0 + i * step1) < frac(x0 + (i - 1) * step1)
    ) if m > 2 else None
    print(f"xi1 first index above window: {first_out}")
    print(f"xi1 first index past wrap:    {first_wrap}")

    # m = 2 stub cross-tower overlap: full-theta1 tower-1 box 0 against
    # tower-2 box 0 at the same cell, both heights (1-4e)/(2qq)
    h = Fr(1 - 4 * eps, 2 * qq)
    print(f"stub cross overlap = {h * h}")


if __name__ == "__main__":
    main()
