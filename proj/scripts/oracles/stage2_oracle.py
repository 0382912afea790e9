#!/usr/bin/env python3
"""Reference computation for the second desk stage (formula regime).

Integers here reach ~360 digits; gmpy2 drives the prime search and sympy
independently confirms primality.  All rational work stays exact.
"""
from fractions import Fraction as F
import json
import math

import gmpy2
import sympy

# frozen stage-1 outputs (see stage1_oracle.py)
P2, Q2 = 9011, 13515
PP2, QP2 = 1982183425207, 9907255908031
N, D_DIM = 2, 2
EPS1 = F(2, 15)


def ceil_frac(x: F) -> int:
    return -((-x.numerator) // x.denominator)


def head(x, keep=40):
    s = str(x)
    return dict(digits=len(s), head=s[:keep])


def main():
    qqp = Q2 * QP2
    eps2 = F(2, N * qqp)
    l2 = max(N * N, ceil_frac(F(2 ** (N + 2), 3)), ceil_frac(F(2 ** (N + 1), 1) / EPS1))
    assert l2 == 60
    C_l2 = math.factorial(D_DIM + l2 - 1) // math.factorial(D_DIM - 1)
    assert C_l2 == math.factorial(61)

    # norm certificate for the maps existing before this transition: one
    # composed stage, first-derivative certificate 7/4 per stage
    norm_bound = F(7, 4) ** (l2 + 1)
    binding = 8 * l2 * C_l2 * qqp * norm_bound
    growth = 4 * N ** (D_DIM - 1) * qqp ** (D_DIM + 1)
    k = max(ceil_frac(binding / qqp), growth // qqp + 1)
    while math.gcd(P2 * k * QP2 + 1, k * qqp) != 1:
        k += 1
    q3 = k * qqp
    p3 = P2 * (q3 // Q2) + 1
    assert math.gcd(p3, q3) == 1

    qbar3 = q3 + qqp
    m2 = k + 1
    target = 4 * N * qbar3 ** (D_DIM + 1)
    qp3 = int(gmpy2.next_prime(target))
    assert sympy.isprime(qp3)
    assert qp3 > 4 * qbar3  # (F)

    alphap2 = F(PP2, QP2)
    pp3 = (qp3 * (alphap2 + F(1, qbar3))).numerator // (qp3 * (alphap2 + F(1, qbar3))).denominator + 1
    D2 = F(pp3, qp3) - alphap2 - F(1, qbar3)
    assert 0 < D2 < F(1, target)
    assert math.gcd(pp3, qp3) == 1 and math.gcd(qp3, q3) == 1

    r2 = (m2 - 1) * P2 % Q2
    rp2 = (m2 - 1) * PP2 % QP2
    Delta2 = F(1, qbar3) - (m2 - 1) * D2
    assert Delta2 > 0
    alpha3 = F(p3, q3)
    assert alpha3 == F(P2, Q2) + F(1, q3)
    alphap3 = F(pp3, qp3)
    assert alphap3 == alphap2 + F(1, qbar3) + D2

    def mod1(x):
        return x - (x.numerator // x.denominator)

    assert mod1((m2 - 1) * alpha3) == mod1(F(r2, Q2) + F(1, qqp))
    assert mod1((m2 - 1) * alphap3) == mod1(F(rp2, QP2) + F(1, qqp) - Delta2)
    assert mod1(m2 * alpha3) == mod1(F(r2 + P2, Q2) + F(1, qqp) + F(1, q3))
    assert mod1(m2 * alphap3) == mod1(F(rp2 + PP2, QP2) + F(1, qqp) + m2 * D2)

    iota2 = F(1, q3) - F(1, qbar3) - D2
    assert iota2 > 0 and (m2 - 1) * iota2 == Delta2
    assert -eps2 / (8 * m2 * qqp) < qqp * (F(1, qbar3) + D2 - F(1, q3)) < 0
    assert m2 * m2 * D2 < eps2 / (2 * qbar3)

    # rigidity: q3*qp3*alpha3 and q3*qp3*alphap3 integral
    assert (q3 * qp3 * alpha3).denominator == 1
    assert (q3 * qp3 * alphap3).denominator == 1

    # speed, formula regime
    w1t1, w1t2 = F(qqp, q3), (1 - 4 * eps2) / (2 * qqp)
    assert qqp * Delta2 < w1t2
    wrap1 = 2 * (qqp * Delta2) * w1t1
    w2t1, w2t2 = (1 - 4 * eps2) / (2 * qqp), (qqp - 4 * eps2) / qbar3
    s1, s2 = F(qqp, q3), qqp * m2 * D2
    assert s1 < w2t1 and s2 < w2t2
    wrap2 = 2 * (w2t1 * w2t2 - (w2t1 - s1) * (w2t2 - s2))
    total = wrap1 + wrap2
    bound = 6 * F(qqp * qqp, q3 * qbar3)
    assert 0 < total <= bound
    ratio = total * m2 * (m2 - 1)
    eps3 = F(2, 3 * q3 * qp3)
    eps_term = eps3 * m2 * (m2 - 1)
    assert eps_term < F(1, 2 * 3 * qqp * qqp)

    # margins
    c0 = (2 * eps2 - eps2) / (2 * qqp) - F(qqp, q3)
    guard = 3 * eps2 / (8 * qqp)
    assert c0 > guard
    min_lower_1 = c0 - (qqp * (m2 - 1) - 1) * iota2
    upper0_2 = eps2 / (2 * qqp) + 2 * eps2 / qbar3
    min_upper_2 = upper0_2 - (qqp * m2 - 1) * iota2
    min_lower_2 = (2 * eps2 - eps2) / (2 * qqp) - (qqp - 2 * eps2) / qbar3
    assert min_lower_1 > 0 and min_upper_2 > 0 and min_lower_2 > 0

    # small-translation certificate for the one earlier partition:
    # perimeter route, increments delta = (1/q3, 1/qbar3 + D2)
    lam = 1 + 8 * F(15, 1) / EPS1                             # stage-1 translation seam
    shear = (1 + max(F(3), 1 + 8 / eps2)) ** 2                # stage-2 shear factors
    trans2 = 1 + 8 * F(qqp) / eps2
    L = lam * shear * trans2 * 2
    delta_sum = F(1, q3) + F(1, qbar3) + D2
    eps_l1 = EPS1
    # stage-1 level of tower 1: q1q'1 boxes, perimeter 2*(w1+w2) each (d=2)
    per_level_t1 = 15 * 2 * (F(15, 13515) + F(7, 450))
    mu_level_t1 = 15 * F(15, 13515) * F(7, 450)
    bound_H = L * per_level_t1 * delta_sum
    thresh_H = eps_l1 * mu_level_t1
    assert bound_H < thresh_H

    t1_star = int((1 - 4 * eps2) * qbar3 / (2 * qqp ** 2))
    t2_star = int((1 - 4 * eps2) * q3 / (2 * qqp ** 2))

    out = dict(
        l2=l2, C_l2=head(C_l2), k2=str(k), m2=str(m2),
        q3=str(q3), qbar3=str(qbar3), qp3=str(qp3), p3=str(p3), pp3=str(pp3),
        q3_h=head(q3), qp3_h=head(qp3),
        r2=r2, rp2=str(rp2),
        eps2=str(eps2),
        D2_num_h=head(D2.numerator), D2_den_h=head(D2.denominator),
        Delta2_h=dict(num=head(Delta2.numerator), den=head(Delta2.denominator)),
        ratio_float=float(ratio),
        wrap1_float=float(wrap1), wrap2_float=float(wrap2),
        bound_float=float(bound),
        c0_float=float(c0), guard_float=float(guard),
        min_lower_1_float=float(min_lower_1),
        min_upper_2_float=float(min_upper_2),
        min_lower_2_float=float(min_lower_2),
        bound_H_float=float(bound_H), thresh_H_float=float(thresh_H),
        t1_star=str(t1_star), t2_star=str(t2_star),
        t1_star_h=head(t1_star), t2_star_h=head(t2_star),
        norm_bound_float=float(norm_bound),
        binding_h=head(ceil_frac(binding)),
    )
    print(json.dumps(out, indent=1))


if __name__ == "__main__":
    main()
