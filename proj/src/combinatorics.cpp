#include "tlab/combinatorics.hpp"

#include <set>

namespace tlab {
namespace {

Int mod_int(const Int& a, const Int& mod) {
    Int r = a % mod;
    if (r < 0) r += mod;
    return r;
}

// cell-index steps of the two lattice generators, in units of 1/(q q')
std::pair<Int, Int> generator_steps(const StageParams& st, int s) {
    if (s == 1) return {st.r * st.qp + 1, st.rp * st.q + 1};
    return {(st.r + st.p) * st.qp + 1, (st.rp + st.pp) * st.q + 1};
}

int64_t small(const Int& v) { return v.convert_to<int64_t>(); }

void require_desk_scale(const Int& qqp, const char* what) {
    if (qqp > 1000000) throw InvalidInput(std::string(what) + ": q q' too large to materialize");
}

}  // namespace

StageParams derive_stage(const Int& p, const Int& q, const Int& pp, const Int& qp,
                         const Int& q_next, const Rat& D, const Int& n, const Int& d) {
    if (q <= 0 || qp <= 0 || n < 1 || d < 2) throw InvalidInput("derive_stage: bad arguments");
    if (gcd_int(p, q) != 1 || gcd_int(pp, qp) != 1)
        throw InvalidInput("derive_stage: seed fractions must be reduced");
    if (D < 0) throw InvalidInput("derive_stage: D must be nonnegative");
    if (gcd_int(q, qp) != 1)
        throw ConditionViolation("B", "gcd(q, q') = " + rat_string(Rat(gcd_int(q, qp))) + " != 1");
    Int qqp = q * qp;
    if (q_next % qqp != 0)
        throw ConditionViolation("A", "q q' = " + rat_string(Rat(qqp)) + " does not divide q_next = " +
                                          rat_string(Rat(q_next)));
    if (q_next <= 0) throw ConditionViolation("A", "q_next must be positive");

    StageParams st;
    st.n = n;
    st.d = d;
    st.p = p;
    st.q = q;
    st.pp = pp;
    st.qp = qp;
    st.q_next = q_next;
    st.qbar_next = q_next + qqp;  // condition (C) by construction
    if (st.qbar_next != q_next + qqp) throw ConditionViolation("C", "qbar bookkeeping");
    st.D = D;
    st.eps = Rat(2, n * qqp);
    st.m = q_next / qqp + 1;
    if (st.m != st.qbar_next / qqp) throw ConditionViolation("C", "m mismatch against qbar");
    st.r = mod_int((st.m - 1) * p, q);
    st.rp = mod_int((st.m - 1) * pp, qp);
    st.Delta = Rat(1, st.qbar_next) - Rat(st.m - 1) * D;
    st.l = 0;

    // the four congruences, exact mod 1
    Rat a2 = st.alpha_next(), ap2 = st.alphap_next();
    Rat one_qqp = Rat(1, qqp);
    if (mod1(Rat(st.m - 1) * a2) != mod1(Rat(st.r, q) + one_qqp))
        throw InvalidInput("derive_stage: congruence a1 failed");
    if (mod1(Rat(st.m - 1) * ap2) != mod1(Rat(st.rp, qp) + one_qqp - st.Delta))
        throw InvalidInput("derive_stage: congruence a2 failed");
    if (mod1(Rat(st.m) * a2) != mod1(Rat(st.r + st.p, q) + one_qqp + Rat(1, q_next)))
        throw InvalidInput("derive_stage: congruence a3 failed");
    if (mod1(Rat(st.m) * ap2) != mod1(Rat(st.rp + st.pp, qp) + one_qqp + Rat(st.m) * D))
        throw InvalidInput("derive_stage: congruence a4 failed");
    return st;
}

Int crt_index(const Int& i, const Int& j, const Int& q, const Int& qp) {
    if (gcd_int(q, qp) != 1) throw InvalidInput("crt_index: q, q' not coprime");
    if (i < 0 || i >= qp || j < 0 || j >= q) throw InvalidInput("crt_index: residue range");
    // k = j + q*t with t = (i-j) * q^{-1} mod q', inverse by extended Euclid
    Int old_r = mod_int(q, qp), rr = qp, old_s = 1, ss = 0;
    while (rr != 0) {
        Int quot = old_r / rr;
        Int tmp = old_r - quot * rr;
        old_r = rr;
        rr = tmp;
        tmp = old_s - quot * ss;
        old_s = ss;
        ss = tmp;
    }
    Int q_inv = mod_int(old_s, qp);
    Int t = mod_int((i - j) * q_inv, qp);
    return j + q * t;
}

LatticeGroups build_lattice_groups(const StageParams& st) {
    require_desk_scale(st.qqp(), "build_lattice_groups");
    if (st.qqp() > 1000) throw InvalidInput("build_lattice_groups: q q' exceeds coset-check bound");
    int64_t qqp = small(st.qqp());
    LatticeGroups lg;
    lg.qqp = qqp;
    for (int s = 1; s <= 2; ++s) {
        auto [gI, hI] = generator_steps(st, s);
        int64_t g = small(mod_int(gI, st.qqp())), h = small(mod_int(hI, st.qqp()));
        auto& out = s == 1 ? lg.gamma1 : lg.gamma2;
        for (int64_t k = 0; k < qqp; ++k) out.emplace_back(k * g % qqp, k * h % qqp);
    }
    return lg;
}

bool verify_lattice_cosets(const StageParams& st) {
    LatticeGroups lg = build_lattice_groups(st);
    int64_t qqp = lg.qqp, q = small(st.q), qp = small(st.qp);
    for (const auto& gamma : {lg.gamma1, lg.gamma2}) {
        std::set<std::pair<int64_t, int64_t>> distinct(gamma.begin(), gamma.end());
        if (int64_t(distinct.size()) != qqp) return false;
        // cosets gamma + (i1/q, i2/q') must hit every Lambda point exactly once
        std::vector<int> hits(size_t(qqp * qqp), 0);
        for (int64_t i1 = 0; i1 < q; ++i1)
            for (int64_t i2 = 0; i2 < qp; ++i2)
                for (const auto& [t1, t2] : gamma) {
                    int64_t u = (t1 + i1 * qp) % qqp, v = (t2 + i2 * q) % qqp;
                    ++hits[size_t(u * qqp + v)];
                }
        for (int h : hits)
            if (h != 1) return false;
    }
    return true;
}

CellAssignment build_assignment(const StageParams& st) {
    require_desk_scale(st.qqp(), "build_assignment");
    int64_t q = small(st.q), qp = small(st.qp), qqp = q * qp;
    CellAssignment ca;
    ca.q = st.q;
    ca.qp = st.qp;
    for (int s = 1; s <= 2; ++s) {
        auto [gI, hI] = generator_steps(st, s);
        int64_t g = small(mod_int(gI, st.qqp())), h = small(mod_int(hI, st.qqp()));
        auto& rows = s == 1 ? ca.rows1 : ca.rows2;
        rows.resize(size_t(qqp));
        for (int64_t k = 0; k < qqp; ++k) {
            CellAssignment::Row row;
            row.u = k * g % qqp;
            row.v = k * h % qqp;
            row.i = k % qp;
            row.j = k % q;
            // generators are = 1 mod their own modulus, so residues line up
            if (row.u % qp != row.i || row.v % q != row.j)
                throw InvalidInput("build_assignment: residue invariant broken");
            row.a = (row.u - row.i) / qp;
            row.ap = (row.v - row.j) / q;
            rows[size_t(k)] = row;
        }
    }
    return ca;
}

int64_t CellAssignment::k_of(int64_t i, int64_t j) const {
    return small(crt_index(Int(i), Int(j), q, qp));
}

std::vector<Box> rectangles(const StageParams& st, int s) {
    if (s != 1 && s != 2) throw InvalidInput("rectangles: kind must be 1 or 2");
    CellAssignment ca = build_assignment(st);
    Rat cell = Rat(1, st.qqp());
    Rat half = cell / 2;
    std::vector<Box> out;
    const auto& rows = s == 1 ? ca.rows1 : ca.rows2;
    for (const auto& row : rows) {
        Rat t1_lo = Rat(row.u) * cell;
        Rat t2_lo = s == 1 ? Rat(row.v) * cell + half : Rat(row.v) * cell;
        Box direct = make_box(t1_lo, cell, t2_lo, half);
        // cross-check: the same box as the CRT-predicted translate of S^(s)_{i,j}
        Rat base_t2 = s == 1 ? Rat(row.j) * cell + half : Rat(row.j) * cell;
        Box translated = make_box(mod1(Rat(row.i) * cell + Rat(row.a, st.q)), cell,
                                  mod1(base_t2 + Rat(row.ap, st.qp)), half);
        if (!(direct == translated)) throw InvalidInput("rectangles: translate mismatch");
        out.push_back(direct);
    }
    return out;
}

CombidisjReport verify_combidisj(const StageParams& st) {
    CellAssignment ca = build_assignment(st);
    CombidisjReport rep{true, {}};
    int64_t q = small(st.q), qp = small(st.qp), qqp = q * qp;
    for (int s = 1; s <= 2; ++s) {
        const auto& rows = s == 1 ? ca.rows1 : ca.rows2;
        std::set<std::pair<int64_t, int64_t>> residues, cells;
        for (int64_t k = 0; k < qqp; ++k) {
            const auto& row = rows[size_t(k)];
            if (!residues.emplace(row.u % qp, row.v % q).second) {
                rep.pass = false;
                rep.witnesses.push_back("kind " + std::to_string(s) + ": residue collision at k=" +
                                        std::to_string(k));
            }
            if (!cells.emplace(row.u, row.v).second) {
                rep.pass = false;
                rep.witnesses.push_back("kind " + std::to_string(s) + ": cell collision at k=" +
                                        std::to_string(k));
            }
            if (crt_index(Int(row.i), Int(row.j), st.q, st.qp) != k) {
                rep.pass = false;
                rep.witnesses.push_back("kind " + std::to_string(s) +
                                        ": CRT index mismatch at k=" + std::to_string(k));
            }
        }
    }
    return rep;
}

}  // namespace tlab
