#include "tlab/scheduler.hpp"

#include <algorithm>

#include "tlab/primes.hpp"

namespace tlab {
namespace {

unsigned small_exp(const Int& e, const char* what) {
    if (e < 0 || e > 200000) throw InvalidInput(std::string(what) + ": exponent out of range");
    return e.convert_to<unsigned>();
}

// finite tail sums: sum 1/l_i < eps_global, and past every stage n with a
// known eps_n, sum_{i>n} 1/l_i < eps_n
void check_l_tails(const Ladder& lad) {
    Rat total(0);
    for (const Int& l : lad.l_seq) total += Rat(1, l);
    if (!(total < lad.eps_global))
        throw ConditionViolation("l_seq", "sum 1/l_i = " + rat_string(total) +
                                              " not below eps_global = " + rat_string(lad.eps_global));
    size_t known = std::min(lad.l_seq.size(), lad.count() + 1);
    for (size_t n = 1; n <= known; ++n) {
        Rat tail(0);
        for (size_t i = n; i < lad.l_seq.size(); ++i) tail += Rat(1, lad.l_seq[i]);
        Rat eps_n = lad.eps_at(n);
        if (!(tail < eps_n))
            throw ConditionViolation("l_seq", "tail past l_" + std::to_string(n) + " = " + rat_string(tail) +
                                                  " not below eps_" + std::to_string(n) + " = " + rat_string(eps_n));
    }
}

void push(std::vector<CertEntry>& out, std::string label, Rat lhs, std::string rel, Rat rhs) {
    CertEntry e{std::move(label), std::move(lhs), std::move(rel), std::move(rhs), false};
    e.pass = recheck(e);
    out.push_back(std::move(e));
}

}  // namespace

bool recheck(const CertEntry& e) {
    if (e.rel == "<") return e.lhs < e.rhs;
    if (e.rel == "<=") return e.lhs <= e.rhs;
    if (e.rel == "==") return e.lhs == e.rhs;
    if (e.rel == ">") return e.lhs > e.rhs;
    if (e.rel == ">=") return e.lhs >= e.rhs;
    throw InvalidInput("cert entry: unknown relation '" + e.rel + "'");
}

std::string describe(const CertEntry& e) {
    return e.label + ": " + rat_string(e.lhs) + " " + e.rel + " " + rat_string(e.rhs);
}

bool StageCert::pass() const {
    for (const CertEntry& e : entries)
        if (!e.pass) return false;
    return true;
}

Rat Ladder::alpha_at(size_t n) const {
    if (n < 1 || n > stages.size() + 1) throw InvalidInput("ladder: stage index out of range");
    if (n == 1) return Rat(p1, q1);
    return stages[n - 2].alpha_next();
}

Rat Ladder::alphap_at(size_t n) const {
    if (n < 1 || n > stages.size() + 1) throw InvalidInput("ladder: stage index out of range");
    if (n == 1) return Rat(pp1, qp1);
    return stages[n - 2].alphap_next();
}

Rat Ladder::eps_at(size_t n) const {
    if (n >= 1 && n <= stages.size()) return stages[n - 1].eps;
    Int q = denominator(alpha_at(n));
    Int qp = denominator(alphap_at(n));
    return Rat(2, Int(n) * q * qp);
}

Int constant_C(const Int& k, const Int& d) {
    if (k < 0 || d < 2) throw InvalidInput("constant_C: need k >= 0, d >= 2");
    unsigned top = small_exp(d + k - 1, "constant_C");
    return factorial(top) / factorial(small_exp(d - 1, "constant_C"));
}

Int schedule_l(const Ladder& lad, size_t n) {
    if (n < 1 || n > lad.count() + 1) throw InvalidInput("schedule_l: stage index out of range");
    Int best = Int(n) * Int(n);
    best = std::max(best, ceil_rat(Rat(pow_int(Int(2), unsigned(n + 2))) / lad.eps_global));
    for (size_t j = 1; j < n; ++j)
        best = std::max(best, ceil_rat(Rat(pow_int(Int(2), unsigned(n + 2 - j))) / lad.eps_at(j)));
    return best;
}

Ladder make_ladder(const Int& d, const Int& p1, const Int& q1, const Int& pp1,
                   const Int& qp1, const Rat& A, const Rat& B, const Rat& eps_global,
                   const Int& k_ceiling, std::vector<Int> l_override) {
    if (d < 2) throw InvalidInput("ladder: dimension must be at least 2");
    if (q1 < 2 || qp1 < 2 || p1 < 1 || p1 >= q1 || pp1 < 1 || pp1 >= qp1)
        throw InvalidInput("ladder: seed fractions must lie strictly inside (0,1)");
    if (gcd_int(p1, q1) != 1 || gcd_int(pp1, qp1) != 1)
        throw ConditionViolation("gcd", "seed fractions must be reduced");
    if (gcd_int(q1, qp1) != 1)
        throw ConditionViolation("B", "gcd(q_1, q'_1) = " + rat_string(Rat(gcd_int(q1, qp1))) + " != 1");
    if (!(eps_global > 0)) throw InvalidInput("ladder: eps_global must be positive");
    if (k_ceiling < 1) throw InvalidInput("ladder: k ceiling must be positive");

    Ladder lad;
    lad.d = d;
    lad.p1 = p1;
    lad.q1 = q1;
    lad.pp1 = pp1;
    lad.qp1 = qp1;
    lad.A = A;
    lad.B = B;
    lad.eps_global = eps_global;
    lad.k_ceiling = k_ceiling;
    if (l_override.empty()) {
        lad.l_auto = true;
        lad.l_seq.push_back(schedule_l(lad, 1));
    } else {
        lad.l_auto = false;
        for (const Int& l : l_override)
            if (l < 1) throw InvalidInput("ladder: schedule lengths must be positive");
        lad.l_seq = std::move(l_override);
    }
    check_l_tails(lad);
    return lad;
}

StageParams propose_stage(const Ladder& lad, const Rat& norm_bound, const Int& k_floor) {
    size_t n = lad.count() + 1;
    if (!(norm_bound >= 1)) throw InvalidInput("propose_stage: norm bound below 1");
    if (lad.l_seq.size() < n) throw InvalidInput("propose_stage: l sequence exhausted");

    Int p = numerator(lad.alpha_at(n));
    Int q = denominator(lad.alpha_at(n));
    Int pp = numerator(lad.alphap_at(n));
    Int qp = denominator(lad.alphap_at(n));
    Int qq = q * qp;
    Int l_n = lad.l_seq[n - 1];
    Int C = constant_C(l_n, lad.d);

    // growth (E): k q q' > 4 n^{d-1} (q q')^{d+1}
    Int k_growth = 4 * pow_int(Int(n), small_exp(lad.d - 1, "growth")) *
                       pow_int(qq, small_exp(lad.d, "growth")) +
                   1;
    // step bound: k q q' >= 8 l_n C_{l_n} q q' norm_bound
    Int k_step = ceil_rat(Rat(8 * l_n * C) * norm_bound);
    // derivative gate, squared form: (k q q')^2 > 4 d (n+1)^4 norm_bound^2
    Rat gate = Rat(4 * lad.d * pow_int(Int(n + 1), 4)) * norm_bound * norm_bound / Rat(qq * qq);
    Int k_gate = sqrt(floor_rat(gate));
    while (Rat(k_gate) * Rat(k_gate) <= gate) ++k_gate;

    Int k = std::max({k_growth, k_step, k_gate, Int(1), k_floor});
    Int bumps = 0;
    while (true) {
        if (k > lad.k_ceiling)
            throw NoAdmissibleStage("stage " + std::to_string(n) + ": k = " + k.str() +
                                    " exceeds ceiling " + lad.k_ceiling.str() + " (growth " + k_growth.str() +
                                    ", step " + k_step.str() + ", gate " + k_gate.str() + ", gcd bumps " +
                                    bumps.str() + ")");
        Int p_next = p * k * qp + 1;  // alpha_n + 1/(k q q') over q_{n+1}
        if (gcd_int(p_next, k * qq) == 1) break;
        k += 1;
        bumps += 1;
    }

    Int q_next = k * qq;
    Int qbar = q_next + qq;
    Int qp_floor = 4 * Int(n) * pow_int(qbar, small_exp(lad.d + 1, "drift floor"));
    Int qp_next = next_prime_above(qp_floor);
    Rat base = lad.alphap_at(n) + Rat(1, qbar);
    Int pp_next = floor_rat(Rat(qp_next) * base) + 1;
    if (pp_next >= qp_next)
        throw ConditionViolation("alpha-range", "alpha'_{n+1} would leave (0,1) at stage " + std::to_string(n));
    Rat D = Rat(pp_next, qp_next) - base;

    StageParams st = derive_stage(p, q, pp, qp, q_next, D, Int(n), lad.d);
    st.l = l_n;
    return st;
}

StageCert audit_stage(const Ladder&, const StageParams& st, const Rat& norm_bound) {
    StageCert cert;
    cert.n = st.n;
    cert.norm_bound = norm_bound;
    std::vector<CertEntry>& out = cert.entries;

    Int qq = st.qqp();
    Int p_next = numerator(st.alpha_next());
    Int q_next_red = denominator(st.alpha_next());
    Int pp_next = numerator(st.alphap_next());
    Int qp_next = denominator(st.alphap_next());
    Rat eps = st.eps;
    Rat m(st.m);
    Rat mm1(st.m - 1);

    push(out, "(A) q_{n+1} multiple of q q'", Rat(st.q_next % qq), "==", Rat(0));
    push(out, "(B) gcd(q, q') = 1", Rat(gcd_int(st.q, st.qp)), "==", Rat(1));
    push(out, "(C) qbar = q_{n+1} + q q'", Rat(st.qbar_next), "==", Rat(st.q_next + qq));
    push(out, "(D) drift positive", Rat(0), "<", st.D);
    push(out, "(D) drift bound", st.D, "<",
         Rat(1, 4 * st.n * pow_int(st.qbar_next, small_exp(st.d + 1, "audit"))));
    push(out, "(E) growth",
         Rat(4 * pow_int(st.n, small_exp(st.d - 1, "audit")) * pow_int(qq, small_exp(st.d + 1, "audit"))), "<",
         Rat(st.q_next));
    push(out, "(E) qbar above q_{n+1}", Rat(st.q_next), "<", Rat(st.qbar_next));
    push(out, "(E) q'_{n+1} above qbar", Rat(st.qbar_next), "<", Rat(qp_next));
    push(out, "(F) q'_{n+1} above 4 qbar", Rat(4 * st.qbar_next), "<", Rat(qp_next));
    push(out, "schedule length positive", Rat(0), "<", Rat(st.l));
    push(out, "alpha_{n+1} keeps denominator q_{n+1}", Rat(q_next_red), "==", Rat(st.q_next));
    push(out, "gcd(p_{n+1}, q_{n+1}) = 1", Rat(gcd_int(p_next, st.q_next)), "==", Rat(1));
    push(out, "gcd(p'_{n+1}, q'_{n+1}) = 1", Rat(gcd_int(pp_next, qp_next)), "==", Rat(1));
    push(out, "gcd(q_{n+1}, q'_{n+1}) = 1", Rat(gcd_int(st.q_next, qp_next)), "==", Rat(1));
    push(out, "step bound", Rat(8 * st.l * constant_C(st.l, st.d) * qq) * norm_bound, "<=", Rat(st.q_next));
    push(out, "derivative gate",
         Rat(4 * st.d * pow_int(st.n + 1, 4)) * norm_bound * norm_bound, "<",
         Rat(st.q_next) * Rat(st.q_next));

    Rat bracket = Rat(qq) * (Rat(1, st.qbar_next) + st.D - Rat(1, st.q_next));
    push(out, "increment bracket below", -eps / (Rat(8) * m * Rat(qq)), "<", bracket);
    push(out, "increment bracket below (fiber-scaled)", -st.eps_tilde() / (Rat(8) * m * Rat(qq)), "<", bracket);
    push(out, "increment bracket above", bracket, "<", Rat(0));
    push(out, "drift term m^2 D", m * m * st.D, "<", eps / (Rat(2) * Rat(st.qbar_next)));
    push(out, "Delta positive", Rat(0), "<", st.Delta);

    Rat a_next = st.alpha_next();
    Rat ap_next = st.alphap_next();
    push(out, "rotation identity a1", mod1(mm1 * a_next), "==", mod1(Rat(st.r, st.q) + Rat(1, qq)));
    push(out, "rotation identity a2", mod1(mm1 * ap_next), "==",
         mod1(Rat(st.rp, st.qp) + Rat(1, qq) - st.Delta));
    push(out, "rotation identity a3", mod1(m * a_next), "==",
         mod1(Rat(st.r + st.p, st.q) + Rat(1, qq) + Rat(1, st.q_next)));
    push(out, "rotation identity a4", mod1(m * ap_next), "==",
         mod1(Rat(st.rp + st.pp, st.qp) + Rat(1, qq) + m * st.D));
    push(out, "wraparound alpha integral", mod1(Rat(qq) * mm1 * a_next), "==", Rat(0));
    push(out, "wraparound alpha' drift", mod1(Rat(qq) * mm1 * ap_next), "==", mod1(-Rat(qq) * st.Delta));
    return cert;
}

void commit_stage(Ladder& lad, const StageParams& st, const Rat& norm_bound) {
    size_t n = lad.count() + 1;
    if (st.n != Int(n) || st.d != lad.d || st.alpha() != lad.alpha_at(n) || st.alphap() != lad.alphap_at(n))
        throw InvalidInput("commit_stage: proposal does not extend this ladder");
    if (lad.l_seq.size() < n || st.l != lad.l_seq[n - 1])
        throw InvalidInput("commit_stage: schedule length does not match the ladder");
    StageCert cert = audit_stage(lad, st, norm_bound);
    for (const CertEntry& e : cert.entries)
        if (!e.pass) throw ConditionViolation(e.label, describe(e));
    lad.stages.push_back(st);
    lad.certs.push_back(std::move(cert));
    if (lad.l_auto && lad.l_seq.size() < n + 1) lad.l_seq.push_back(schedule_l(lad, n + 1));
    check_l_tails(lad);
}

StageParams next_stage(Ladder& lad, const Rat& norm_bound) {
    StageParams st = propose_stage(lad, norm_bound);
    commit_stage(lad, st, norm_bound);
    return lad.stages.back();
}

bool audit_ladder(const Ladder& lad) {
    if (lad.certs.size() != lad.stages.size()) return false;
    if (lad.l_seq.size() < lad.stages.size()) return false;
    bool ok = true;
    for (size_t i = 0; i < lad.stages.size(); ++i) {
        const StageParams& st = lad.stages[i];
        ok = ok && st.n == Int(i + 1) && st.l == lad.l_seq[i];
        ok = ok && st.alpha() == lad.alpha_at(i + 1) && st.alphap() == lad.alphap_at(i + 1);
        for (const CertEntry& e : lad.certs[i].entries) ok = ok && e.pass && recheck(e);
        StageCert fresh = audit_stage(lad, st, lad.certs[i].norm_bound);
        ok = ok && fresh.pass() && fresh.entries.size() == lad.certs[i].entries.size();
    }
    try {
        check_l_tails(lad);
    } catch (const ConditionViolation&) {
        ok = false;
    }
    return ok;
}

RotationDistanceReport check_rotation_distance(const Ladder& lad) {
    if (lad.certs.size() != lad.stages.size())
        throw InvalidInput("check_rotation_distance: ladder missing stage certs");
    RotationDistanceReport rep;
    rep.telescoped_bound = Rat(4) * lad.eps_global;
    Rat da = abs_rat(lad.A - lad.alpha_at(1));
    Rat db = abs_rat(lad.B - lad.alphap_at(1));
    rep.seed_dist = std::max(da, db);
    push(rep.entries, "target distance |A - alpha_1|", da, "<", lad.eps_global);
    push(rep.entries, "target distance |B - alpha'_1|", db, "<", lad.eps_global);

    rep.alpha_drift = Rat(0);
    rep.alphap_drift = Rat(0);
    for (size_t i = 0; i < lad.stages.size(); ++i) {
        const StageParams& st = lad.stages[i];
        std::string tag = "stage " + std::to_string(i + 1) + " ";
        rep.alpha_drift += Rat(1, st.q_next);
        rep.alphap_drift += Rat(1, st.qbar_next) + st.D;
        Rat step_cap = Rat(1) / (Rat(8 * st.l * constant_C(st.l, st.d) * st.qqp()) * lad.certs[i].norm_bound);
        push(rep.entries, tag + "step 1/q_{n+1}", Rat(1, st.q_next), "<=", step_cap);
        Rat bracket = Rat(st.qqp()) * (Rat(1, st.qbar_next) + st.D - Rat(1, st.q_next));
        push(rep.entries, tag + "increment bracket below", -st.eps / (Rat(8) * Rat(st.m) * Rat(st.qqp())), "<",
             bracket);
        push(rep.entries, tag + "increment bracket above", bracket, "<", Rat(0));
    }
    push(rep.entries, "alpha drift below eps_global", rep.alpha_drift, "<", lad.eps_global);
    push(rep.entries, "alpha' drift below eps_global", rep.alphap_drift, "<", lad.eps_global);
    size_t top = lad.count() + 1;
    push(rep.entries, "telescoped |A - alpha_top|", abs_rat(lad.A - lad.alpha_at(top)), "<=", da + rep.alpha_drift);
    push(rep.entries, "telescoped |B - alpha'_top|", abs_rat(lad.B - lad.alphap_at(top)), "<=",
         db + rep.alphap_drift);

    rep.pass = true;
    for (const CertEntry& e : rep.entries) {
        if (!e.pass) {
            rep.pass = false;
            rep.witnesses.push_back(describe(e));
        }
    }
    return rep;
}

}  // namespace tlab
