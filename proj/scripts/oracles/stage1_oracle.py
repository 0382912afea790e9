#!/usr/bin/env python3
"""Reference computation for the first tower stage of the desk configuration.

Every value is exact (fractions.Fraction).  Output is frozen into the C++
unit tests; rerun after any change to the derivation code and diff.
"""
from fractions import Fraction as F
import json
import math

# Deterministic Miller-Rabin, valid for n < 3.3e24 with this base set.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def next_prime_above(n: int) -> int:
    c = n + 1
    while not is_prime(c):
        c += 1
    return c


def mod1(x: F) -> F:
    return x - (x.numerator // x.denominator)


def crt_index(i: int, j: int, q: int, qp: int) -> int:
    # k in [0, q*qp) with k = i mod qp and k = j mod q.
    for k in range(q * qp):
        if k % qp == i % qp and k % q == j % q:
            return k
    raise AssertionError


def stage_tables(p, q, pp, qp, q_next, D):
    qqp = q * qp
    assert q_next % qqp == 0
    assert math.gcd(q, qp) == 1
    qbar = q_next + qqp
    m = q_next // qqp + 1
    r = (m - 1) * p % q
    rp = (m - 1) * pp % qp
    Delta = F(1, qbar) - (m - 1) * D
    alpha2 = F(p, q) + F(1, q_next)
    alphap2 = F(pp, qp) + F(1, qbar) + D
    # exact congruences, all mod 1
    assert mod1((m - 1) * alpha2) == mod1(F(r, q) + F(1, qqp))
    assert mod1((m - 1) * alphap2) == mod1(F(rp, qp) + F(1, qqp) - Delta)
    assert mod1(m * alpha2) == mod1(F(r + p, q) + F(1, qqp) + F(1, q_next))
    assert mod1(m * alphap2) == mod1(F(rp + pp, qp) + F(1, qqp) + m * D)
    assert mod1(qqp * (m - 1) * alpha2) == 0
    assert mod1(qqp * (m - 1) * alphap2) == mod1(-qqp * Delta)

    g1, h1 = r * qp + 1, rp * q + 1
    g2, h2 = (r + p) * qp + 1, (rp + pp) * q + 1
    tables = {}
    for s, (g, h) in ((1, (g1, h1)), (2, (g2, h2))):
        rows = []
        seen = set()
        for k in range(qqp):
            u, v = k * g % qqp, k * h % qqp
            i, j = k % qp, k % q
            assert u % qp == i and v % q == j
            a, ap = (u - i) // qp, (v - j) // q
            assert 0 <= a < q and 0 <= ap < qp
            assert crt_index(i, j, q, qp) == k
            seen.add((u, v))
            rows.append(dict(k=k, i=i, j=j, a=a, ap=ap))
        assert len(seen) == qqp
        tables[s] = rows
    return dict(m=m, r=r, rp=rp, qbar=qbar, Delta=str(Delta),
                alpha_next=str(alpha2), alphap_next=str(alphap2),
                tables=tables)


def desk_stage1():
    # seed alpha_1 = 2/3, alpha'_1 = 1/5; d = 2
    n, d = 1, 2
    p, q, pp, qp = 2, 3, 1, 5
    qqp = q * qp
    eps = F(2, n * qqp)
    eps_t = eps * (n * qqp) ** (2 - d)

    # schedule floor: l_1 = 3, C_3 = 24, norm bound 1
    l1, C3, NB = 3, 24, 1
    binding = 8 * l1 * C3 * qqp * NB            # 8640
    growth = 4 * n ** (d - 1) * qqp ** (d + 1)  # 13500
    k = max((binding + qqp - 1) // qqp, growth // qqp + 1)
    q2 = k * qqp
    while math.gcd(p * (q2 // q) + 1, q2) != 1:
        q2 += qqp
    assert q2 == 13515

    qbar = q2 + qqp
    qp2 = next_prime_above(4 * n * qbar ** (d + 1))
    pp2 = (qp2 * (F(pp, qp) + F(1, qbar))).numerator // (qp2 * (F(pp, qp) + F(1, qbar))).denominator + 1
    D = F(pp2, qp2) - F(pp, qp) - F(1, qbar)
    assert 0 < D < F(1, 4 * n * qbar ** (d + 1))

    st = stage_tables(p, q, pp, qp, q2, D)
    m = st["m"]
    Delta = F(1, qbar) - (m - 1) * D
    iota = F(1, q2) - F(1, qbar) - D
    assert Delta > 0 and iota > 0
    # increment inequality, both plain and tilde flavour
    assert -eps / (8 * m * qqp) < qqp * (F(1, qbar) + D - F(1, q2)) < 0
    assert -eps_t / (8 * m * qqp) < qqp * (F(1, qbar) + D - F(1, q2)) < 0
    assert m * m * D < eps / (2 * qbar)

    # tower-1 anti-diagonal margins: start c0, per-step drift -iota
    c0 = (2 * eps - eps_t) / (2 * qqp) - F(qqp, q2)
    N1max = qqp * (m - 1) - 1
    min_lower_1 = c0 - N1max * iota
    min_upper_1 = eps_t / (2 * qqp)              # at N = 0
    # tower-2 margins: start values, per-step drift +iota on the lower side
    lower0_2 = (2 * eps - eps_t) / (2 * qqp) - (qqp - 2 * eps) / qbar
    upper0_2 = eps_t / (2 * qqp) + 2 * eps / qbar
    N2max = qqp * m - 1
    min_upper_2 = upper0_2 - N2max * iota
    min_lower_2 = lower0_2
    guard = 3 * eps / (8 * qqp)
    assert c0 > guard and min_upper_2 > 0 and min_lower_2 > 0 and min_lower_1 > 0

    # wraparound leakage of the two level maps
    w1_t1, w1_t2 = F(qqp, q2), (1 - 4 * eps) / (2 * qqp)
    wrap1 = 2 * (qqp * Delta) * w1_t1
    assert qqp * Delta < w1_t2
    w2_t1, w2_t2 = (1 - 4 * eps) / (2 * qqp), (qqp - 4 * eps) / qbar
    s1, s2 = F(qqp, q2), qqp * m * D
    assert s1 < w2_t1 and s2 < w2_t2
    wrap2 = 2 * (w2_t1 * w2_t2 - (w2_t1 - s1) * (w2_t2 - s2))
    total = wrap1 + wrap2
    bound = 6 * F(qqp ** 2, q2 * qbar)
    assert total <= bound
    ratio = total * m * (m - 1)

    # within-strip spacing, kind 2
    gap2 = 4 * eps / qbar + qqp * D
    wrapgap2 = 4 * eps / qbar - (m - 1) * qqp * D
    assert m * w2_t2 + (m - 1) * gap2 + wrapgap2 == 1

    # column counts
    t1_star = int((1 - 4 * eps) * qbar / (2 * qqp ** 2))
    t2_star = int((1 - 4 * eps) * q2 / (2 * qqp ** 2))

    mu_t1 = (m - 1) * qqp * (w1_t1 * w1_t2)
    mu_t2 = m * qqp * (w2_t1 * w2_t2)
    assert mu_t1 == (1 - 4 * eps) / 2

    out = dict(
        q2=q2, qbar=qbar, qp2=qp2, pp2=pp2, m=m, r=st["r"], rp=st["rp"],
        eps=str(eps), D=str(D), Delta=str(Delta), iota=str(iota),
        alpha2=st["alpha_next"], alphap2=st["alphap_next"],
        c0=str(c0), guard=str(guard),
        min_lower_1=str(min_lower_1), min_upper_1=str(min_upper_1),
        min_lower_2=str(min_lower_2), min_upper_2=str(min_upper_2),
        wrap1=str(wrap1), wrap2=str(wrap2), total=str(total),
        bound=str(bound), ratio=str(ratio), ratio_float=float(ratio),
        gap2=str(gap2), wrapgap2=str(wrapgap2),
        t1_star=t1_star, t2_star=t2_star,
        mu_t1=str(mu_t1), mu_t2=str(mu_t2),
    )
    return out


def figure_example():
    # the small drawing case: alpha = 2/3, alpha' = 1/5, q_next = 240, D = 0
    return stage_tables(2, 3, 1, 5, 240, F(0))


if __name__ == "__main__":
    fig = figure_example()
    desk = desk_stage1()
    print(json.dumps(dict(figure=fig, desk=desk), indent=1))
