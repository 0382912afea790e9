#include "tlab/approximation.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "tlab/errors.hpp"
#include "tlab/parallel.hpp"
#include "tlab/rng.hpp"

namespace tlab {

namespace {

int64_t to_i64(const Int& v) { return v.convert_to<int64_t>(); }

unsigned fiber_dims(const StageParams& st) { return (st.d - 2).convert_to<unsigned>(); }

void push(std::vector<CertEntry>& es, const std::string& label, const Rat& lhs, const char* rel,
          const Rat& rhs) {
    CertEntry e{label, lhs, rel, rhs, false};
    e.pass = recheck(e);
    es.push_back(std::move(e));
}

bool entries_pass(const std::vector<CertEntry>& es) {
    for (const CertEntry& e : es)
        if (!e.pass) return false;
    return true;
}

// one tower's wraparound: consecutive base boxes are exact rotates of each
// other, so the union-level symmetric difference collapses to the q q'-step
// return of a single base box, and the anchor cell cancels
Rat wrap_term(const StageParams& st, int s) {
    Box base = tower_base_box(st, s, 0, 0, Int(0));
    Int steps = s == 1 ? Int(st.m - 1) : st.m;
    Int power = st.qqp() * steps;
    Box image = rotate(base, st.alpha_next(), st.alphap_next(), power);
    return 2 * (base.measure() - intersection_measure(image, base));
}

// --------------------------------------------------------------------------
// Monte Carlo plumbing

// exact value of a finite IEEE double (doubles are dyadic rationals)
Rat rat_from_double(double x) {
    if (!std::isfinite(x)) throw InvalidInput("confidence must be finite");
    if (x == 0.0) return Rat(0);
    int e = 0;
    double f = std::frexp(x, &e);  // x = f * 2^e with |f| in [1/2, 1)
    long long mant = std::llround(std::ldexp(f, 53));
    Rat r{Int(mant)};
    int shift = e - 53;
    if (shift >= 0) return r * Rat(pow_int(Int(2), static_cast<unsigned>(shift)));
    return r / Rat(pow_int(Int(2), static_cast<unsigned>(-shift)));
}

// exact upper bound on the two-sided Hoeffding radius
// range * sqrt(ln(2/(1-confidence)) / (2 samples))
Rat hoeffding_halfwidth(const Rat& range, const Int& samples, double confidence) {
    if (!(confidence > 0.0 && confidence < 1.0))
        throw InvalidInput("confidence must lie in (0, 1)");
    Rat gamma = 1 - rat_from_double(confidence);
    Rat log_term = rat_ln_upper(2 / gamma);
    Rat two_n = 2 * Rat(samples);
    return range * rat_sqrt_upper(log_term / two_n);
}

enum class Tri { in, out, boundary };

// closed-window membership in (lo, lo + len) with exact edge detection
Tri tri_window(const Rat& x, const Rat& lo, const Rat& len) {
    Rat hi = lo + len;
    if (x == lo || x == hi) return Tri::boundary;
    if (x > lo && x < hi) return Tri::in;
    return Tri::out;
}

Tri tri_circle(const CircleInterval& iv, const Rat& x) {
    if (iv.len == 1) return Tri::in;
    Rat d = mod1(x - iv.lo.value);
    if (d == 0 || d == iv.len) return Tri::boundary;
    if (d < iv.len) return Tri::in;
    return Tri::out;
}

Tri tri_box(const Box& b, const TorusPoint& p) {
    bool edge = false;
    Tri t1 = tri_circle(b.theta1, p.t1);
    if (t1 == Tri::out) return Tri::out;
    if (t1 == Tri::boundary) edge = true;
    Tri t2 = tri_circle(b.theta2, p.t2);
    if (t2 == Tri::out) return Tri::out;
    if (t2 == Tri::boundary) edge = true;
    for (size_t i = 0; i < b.fiber.size(); ++i) {
        const Rat& x = p.fiber[i];
        if (x < b.fiber[i].lo || x > b.fiber[i].hi) return Tri::out;
        if (x == b.fiber[i].lo || x == b.fiber[i].hi) edge = true;
    }
    return edge ? Tri::boundary : Tri::in;
}

struct CellLoc {
    int s = 0;
    int64_t a = 0, b = 0, ell = 0;
    friend bool operator==(const CellLoc& x, const CellLoc& y) {
        return x.s == y.s && x.a == y.a && x.b == y.b && x.ell == y.ell;
    }
};

// which good half-cell the point lies in, if any; samples exactly on a
// window edge cannot be attributed and raise IndicatorUndefined
std::optional<CellLoc> locate_good_cell(const StageParams& st, const TorusPoint& p) {
    Rat qq = Rat(st.qqp());
    Rat s1 = mod1(p.t1) * qq;
    Int c1 = floor_rat(s1);
    Rat u = s1 - Rat(c1);
    Tri tu = tri_window(u, st.eps / 2, 1 - st.eps);
    if (tu == Tri::boundary) throw IndicatorUndefined("theta1 window edge");
    if (tu == Tri::out) return std::nullopt;
    Rat s2 = mod1(p.t2) * qq;
    Int c2 = floor_rat(s2);
    Rat v = s2 - Rat(c2);
    int s = 0;
    for (int cand = 1; cand <= 2; ++cand) {
        Tri tv = tri_window(v, half_cell_lo(st, cand), half_cell_len(st));
        if (tv == Tri::boundary) throw IndicatorUndefined("theta2 half-cell edge");
        if (tv == Tri::in) {
            s = cand;
            break;
        }
    }
    if (s == 0) return std::nullopt;
    int64_t ell = 0;
    int64_t scale = 1;
    int64_t base = p.fiber.empty() ? 1 : to_i64(fiber_blocks_per_axis(st));
    for (const Rat& f : p.fiber) {
        Rat scaled = f * Rat(base);
        Int digit = floor_rat(scaled);
        if (digit < 0 || digit >= base) return std::nullopt;
        Rat within = scaled - Rat(digit);
        Tri tf = tri_window(within, st.eps, 1 - 2 * st.eps);
        if (tf == Tri::boundary) throw IndicatorUndefined("fiber block edge");
        if (tf == Tri::out) return std::nullopt;
        ell += to_i64(digit) * scale;
        scale *= base;
    }
    return CellLoc{s, to_i64(c1), to_i64(c2), ell};
}

// undoes the stage rotation and the two conjugation factors, then locates
// the source half-cell; nullopt means definitively outside every good cell
std::optional<CellLoc> pull_back_cell(const StageParams& st, const CellAssignment& ca,
                                      const TorusPoint& z) {
    TorusPoint y;
    y.t1 = mod1(z.t1 - st.alpha());
    y.t2 = mod1(z.t2 - st.alphap());
    y.fiber = z.fiber;
    TorusPoint p;
    try {
        p = h1_inverse_point(st, ca, h2_inverse_point(st, y));
    } catch (const OutsideGoodDomain&) {
        return std::nullopt;
    }
    return locate_good_cell(st, p);
}

// exact bounding box of the rotated shear image of one good half-cell: the
// shear's corner extents, tracked before the mod-1 reduction
Box image_bounding_box(const StageParams& st, const CellAssignment& ca, int s, int64_t a,
                       int64_t b, int64_t ell) {
    int64_t q = to_i64(st.q), qp = to_i64(st.qp);
    Box part = h1_forward_cell(st, ca, s, a % qp, b % q, a / qp, b / q, ell);
    Rat qq = Rat(st.qqp());
    Int x_cell = floor_rat(part.theta1.lo.value * qq);
    Int y_cell = floor_rat(part.theta2.lo.value * qq);
    Rat u_lo = part.theta1.lo.value * qq - Rat(x_cell);
    Rat u_len = part.theta1.len * qq;
    Rat v_lo = part.theta2.lo.value * qq - Rat(y_cell);
    Rat v_len = part.theta2.len * qq;
    Rat lo1, len1, lo2, len2;
    if (s == 1) {
        // (u, v) -> (u, v + u - 1/2): theta2 picks up the theta1 spread
        lo1 = (Rat(x_cell) + u_lo) / qq;
        len1 = u_len / qq;
        lo2 = (Rat(y_cell) + v_lo + u_lo - Rat(1, 2)) / qq;
        len2 = (v_len + u_len) / qq;
    } else {
        // (u, v) -> (u + 1/2 - v, u): theta1 picks up both spreads
        lo1 = (Rat(x_cell) + u_lo + Rat(1, 2) - v_lo - v_len) / qq;
        len1 = (u_len + v_len) / qq;
        lo2 = (Rat(y_cell) + u_lo) / qq;
        len2 = u_len / qq;
    }
    Rat shifted1 = mod1(lo1 + st.alpha());
    Rat shifted2 = mod1(lo2 + st.alphap());
    return Box{CircleInterval(shifted1, len1), CircleInterval(shifted2, len2), part.fiber};
}

CircleInterval expand_interval(const CircleInterval& iv, const Rat& d) {
    Rat lo = iv.lo.value;
    if (d < 0) lo += d;
    Rat len = iv.len + abs_rat(d);
    if (len > 1) len = 1;
    return CircleInterval(mod1(lo), len);
}

// smallest box containing both b and its (d1, d2) torus translate
Box shift_hull(const Box& b, const Rat& d1, const Rat& d2) {
    return Box{expand_interval(b.theta1, d1), expand_interval(b.theta2, d2), b.fiber};
}

TorusPoint draw_point(const Box& domain, std::mt19937_64& gen) {
    static const Int kTwo64 = Int(1) << 64;
    TorusPoint p;
    p.t1 = mod1(domain.theta1.lo.value + domain.theta1.len * Rat(Int(gen()), kTwo64));
    p.t2 = mod1(domain.theta2.lo.value + domain.theta2.len * Rat(Int(gen()), kTwo64));
    for (const FiberInterval& f : domain.fiber)
        p.fiber.push_back(f.lo + (f.hi - f.lo) * Rat(Int(gen()), kTwo64));
    return p;
}

struct McCounts {
    int64_t mismatch = 0;
    int64_t undefined = 0;
};

// chunked deterministic sampling; fn(point) returns the charged mismatch
// weight of one sample and may raise IndicatorUndefined
template <typename Fn>
McCounts sample_counts(const Box& domain, const Int& samples, uint64_t seed, const Fn& fn) {
    int64_t total = to_i64(samples);
    int64_t chunks = static_cast<int64_t>(kChunkCount);
    std::vector<McCounts> parts =
        map_chunks<McCounts>(kChunkCount, [&](size_t chunk) {
            int64_t mine = total / chunks + (static_cast<int64_t>(chunk) < total % chunks ? 1 : 0);
            std::mt19937_64 gen = make_stream(seed, chunk);
            McCounts out;
            for (int64_t i = 0; i < mine; ++i) {
                TorusPoint x = draw_point(domain, gen);
                try {
                    out.mismatch += fn(x);
                } catch (const IndicatorUndefined&) {
                    ++out.undefined;
                }
            }
            return out;
        });
    McCounts sum;
    for (const McCounts& c : parts) {
        sum.mismatch += c.mismatch;
        sum.undefined += c.undefined;
    }
    return sum;
}

}  // namespace

// --------------------------------------------------------------------------
// wraparound discrepancy

Int speed_constant(const StageParams& st) {
    Int qq2 = st.qqp() * st.qqp();
    Int numv = 6 * qq2 * st.m * (st.m - 1);
    Int denv = st.q_next * st.qbar_next;
    Int out = (numv + denv - 1) / denv;
    return out;
}

SpeedReport speed_certificate(const StageParams& st) {
    SpeedReport rep;
    rep.n = st.n;
    rep.wrap1 = wrap_term(st, 1);
    rep.wrap2 = wrap_term(st, 2);
    rep.discrepancy = rep.wrap1 + rep.wrap2;
    Int qq2 = st.qqp() * st.qqp();
    Int bound_den = st.q_next * st.qbar_next;
    rep.bound = Rat(Int(6 * qq2), bound_den);
    Int mm1 = st.m * (st.m - 1);
    rep.ratio = rep.discrepancy * Rat(mm1);
    rep.a_const = speed_constant(st);
    Rat fiber_factor = pow_rat(1 - 2 * st.eps, fiber_dims(st));
    Rat cap1 = 2 * Rat(st.qqp(), st.qbar_next) * Rat(st.qqp(), st.q_next) * fiber_factor;
    Rat cap2 = Rat(Int(4 * qq2), bound_den);
    push(rep.entries, "tower-1 wraparound below relayer drift cap", rep.wrap1, "<=", cap1);
    push(rep.entries, "tower-2 wraparound below shift overlap cap", rep.wrap2, "<=", cap2);
    push(rep.entries, "total wraparound below speed bound", rep.discrepancy, "<=", rep.bound);
    push(rep.entries, "level count identity m (m-1) (q q')^2 == q_next qbar'_next",
         Rat(Int(mm1 * qq2)), "==", Rat(bound_den));
    push(rep.entries, "speed ratio positive", rep.ratio, ">", Rat(0));
    push(rep.entries, "speed ratio at most six", rep.ratio, "<=", Rat(6));
    rep.pass = entries_pass(rep.entries);
    return rep;
}

SpeedReport speed_certificate(const StageParams& st, const StageParams& next) {
    if (next.n != st.n + 1 || next.q != st.q_next || next.d != st.d)
        throw InvalidInput("speed_certificate: `next` is not the committed successor stage");
    SpeedReport rep = speed_certificate(st);
    rep.has_next = true;
    rep.eps_next = next.eps;
    Int mm1 = st.m * (st.m - 1);
    rep.eps_next_ratio = next.eps * Rat(mm1);
    Int dyadic_den = 2 * (st.n + 1) * st.qqp() * st.qqp();
    rep.eps_next_bound = Rat(1, dyadic_den);
    rep.tail_bound = 2 * next.eps;
    push(rep.entries, "next-stage shrink ratio below dyadic bound", rep.eps_next_ratio, "<",
         rep.eps_next_bound);
    rep.pass = entries_pass(rep.entries);
    return rep;
}

Rat speed_exact(const TowerPair& tp) {
    const StageParams& st = tp.st;
    BoxUnion turned1 = tp.base1.rotated(st.alpha_next(), st.alphap_next(), Int(st.m - 1));
    BoxUnion turned2 = tp.base2.rotated(st.alpha_next(), st.alphap_next(), st.m);
    Rat w1 = symmetric_difference_measure(turned1, tp.base1);
    Rat w2 = symmetric_difference_measure(turned2, tp.base2);
    SpeedReport closed = speed_certificate(st);
    if (w1 != closed.wrap1 || w2 != closed.wrap2)
        throw std::logic_error("tower wraparound departs from its closed form");
    return w1 + w2;
}

// --------------------------------------------------------------------------
// rigidity and the neighborhood predicate

RigidityReport rigidity_check(const StageParams& st, const Int& qp_next) {
    if (qp_next <= 0) throw InvalidInput("rigidity_check: q'_next must be positive");
    RigidityReport rep;
    rep.n = st.n;
    rep.period = st.q_next * qp_next;
    rep.d0_budget = st.eps / 4;
    Rat a = st.alpha_next();
    Rat ap = st.alphap_next();
    push(rep.entries, "q_next multiple of the next alpha is an integer", mod1(a * Rat(st.q_next)),
         "==", Rat(0));
    push(rep.entries, "q'_next multiple of the next alpha' is an integer", mod1(ap * Rat(qp_next)),
         "==", Rat(0));
    push(rep.entries, "full period returns alpha to zero", mod1(a * Rat(rep.period)), "==", Rat(0));
    push(rep.entries, "full period returns alpha' to zero", mod1(ap * Rat(rep.period)), "==",
         Rat(0));
    rep.alpha_integral = rep.entries[0].pass;
    rep.alphap_integral = rep.entries[1].pass;
    rep.pass = entries_pass(rep.entries);
    return rep;
}

NeighborhoodReport neighborhood_predicate(const StageParams& st, const Int& l_next,
                                          const Rat& jet_distance, const Rat& rigid_distance,
                                          const Rat& speed_sum, const Int& a_const) {
    if (l_next <= 0) throw InvalidInput("neighborhood_predicate: l_next must be positive");
    if (a_const < 0) throw InvalidInput("neighborhood_predicate: a_const must be nonnegative");
    NeighborhoodReport rep;
    rep.jet_bound = Rat(2, l_next);
    rep.rigid_bound = st.eps;
    Int mm1 = st.m * (st.m - 1);
    rep.speed_bound = Rat(Int(a_const + 1), mm1);
    push(rep.entries, "jet distance below 2/l", jet_distance, "<", rep.jet_bound);
    push(rep.entries, "identity-power displacement below eps", rigid_distance, "<",
         rep.rigid_bound);
    push(rep.entries, "level discrepancy sum below neighborhood cap", speed_sum, "<",
         rep.speed_bound);
    rep.pass = entries_pass(rep.entries);
    return rep;
}

// --------------------------------------------------------------------------
// Monte Carlo translation comparisons

Box good_half_cell(const StageParams& st, int s, int64_t a, int64_t b, int64_t ell) {
    if (s != 1 && s != 2) throw InvalidInput("good_half_cell: kind must be 1 or 2");
    Int qq = st.qqp();
    if (a < 0 || b < 0 || Int(a) >= qq || Int(b) >= qq)
        throw InvalidInput("good_half_cell: cell index out of range");
    if (ell < 0 || Int(ell) >= slab_count(st))
        throw InvalidInput("good_half_cell: fiber block out of range");
    Rat qqr = Rat(qq);
    Rat lo1 = mod1((Rat(a) + st.eps / 2) / qqr);
    Rat len1 = (1 - st.eps) / qqr;
    Rat lo2 = mod1((Rat(b) + half_cell_lo(st, s)) / qqr);
    Rat len2 = half_cell_len(st) / qqr;
    std::vector<FiberInterval> fib;
    unsigned fd = fiber_dims(st);
    if (fd > 0) {
        int64_t base = to_i64(fiber_blocks_per_axis(st));
        Rat denom = Rat(base);
        int64_t rest = ell;
        for (unsigned t = 0; t < fd; ++t) {
            int64_t digit = rest % base;
            rest /= base;
            Rat flo = (Rat(digit) + st.eps) / denom;
            Rat fhi = (Rat(digit) + 1 - st.eps) / denom;
            fib.push_back(FiberInterval{flo, fhi});
        }
    }
    return Box{CircleInterval(lo1, len1), CircleInterval(lo2, len2), fib};
}

TranslationMcReport translation_continuity_mc(const StageParams& st, const CellAssignment& ca,
                                              const Rat& delta1, const Rat& delta2, int s,
                                              int64_t a, int64_t b, int64_t ell,
                                              const Int& samples, uint64_t seed,
                                              double confidence) {
    if (samples <= 0) throw InvalidInput("translation_continuity_mc: need a positive sample count");
    Box cell = good_half_cell(st, s, a, b, ell);
    TranslationMcReport rep;
    rep.samples = samples;
    rep.seed = seed;
    rep.confidence = confidence;
    rep.mismatch_count = 0;
    rep.undefined_count = 0;
    rep.budget = st.eps * cell.measure();
    if (delta1 == 0 && delta2 == 0) {
        rep.exact = true;
        rep.sample_domain = 0;
        rep.estimate = 0;
        rep.halfwidth = 0;
        push(rep.entries, "zero translation gives zero discrepancy", Rat(0), "<=", rep.budget);
        rep.pass = entries_pass(rep.entries);
        return rep;
    }
    Box domain = shift_hull(image_bounding_box(st, ca, s, a, b, ell), delta1, delta2);
    rep.sample_domain = domain.measure();
    CellLoc target{s, a, b, ell};
    auto charged = [&](const TorusPoint& x) -> int64_t {
        std::optional<CellLoc> direct = pull_back_cell(st, ca, x);
        TorusPoint back;
        back.t1 = mod1(x.t1 - delta1);
        back.t2 = mod1(x.t2 - delta2);
        back.fiber = x.fiber;
        std::optional<CellLoc> shifted = pull_back_cell(st, ca, back);
        bool in_set = direct.has_value() && *direct == target;
        bool in_translate = shifted.has_value() && *shifted == target;
        return in_set != in_translate ? 1 : 0;
    };
    McCounts counts = sample_counts(domain, samples, seed, charged);
    rep.mismatch_count = counts.mismatch;
    rep.undefined_count = counts.undefined;
    Int charged_total = Int(counts.mismatch) + Int(counts.undefined);
    rep.estimate = rep.sample_domain * Rat(charged_total, samples);
    rep.halfwidth = rep.sample_domain * hoeffding_halfwidth(Rat(1), samples, confidence);
    push(rep.entries, "translation discrepancy below stage budget", rep.estimate + rep.halfwidth,
         "<", rep.budget);
    rep.pass = entries_pass(rep.entries);
    return rep;
}

TranslationMcReport translation_sum_mc(const StageParams& st, const CellAssignment& ca,
                                       const Int& samples, uint64_t seed, double confidence) {
    if (samples <= 0) throw InvalidInput("translation_sum_mc: need a positive sample count");
    TranslationMcReport rep;
    rep.samples = samples;
    rep.seed = seed;
    rep.confidence = confidence;
    rep.mismatch_count = 0;
    rep.undefined_count = 0;
    Rat good_total = (1 - st.eps) * pow_rat(1 - 2 * st.eps, (st.d - 1).convert_to<unsigned>());
    rep.budget = st.eps * good_total;
    Rat d1 = Rat(1, st.q_next);
    Rat d2 = Rat(1, st.qbar_next) + st.D;
    std::vector<FiberInterval> whole(fiber_dims(st), FiberInterval{Rat(0), Rat(1)});
    Box domain{CircleInterval(Rat(0), Rat(1)), CircleInterval(Rat(0), Rat(1)), whole};
    rep.sample_domain = 1;
    auto charged = [&](const TorusPoint& x) -> int64_t {
        std::optional<CellLoc> direct = pull_back_cell(st, ca, x);
        TorusPoint back;
        back.t1 = mod1(x.t1 - d1);
        back.t2 = mod1(x.t2 - d2);
        back.fiber = x.fiber;
        std::optional<CellLoc> shifted = pull_back_cell(st, ca, back);
        if (direct == shifted) return 0;
        int64_t hits = 0;
        if (direct.has_value()) ++hits;
        if (shifted.has_value()) ++hits;
        return hits;
    };
    McCounts counts = sample_counts(domain, samples, seed, charged);
    rep.mismatch_count = counts.mismatch;
    rep.undefined_count = counts.undefined;
    Int charged_total = Int(counts.mismatch) + 2 * Int(counts.undefined);
    rep.estimate = Rat(charged_total, samples);
    rep.halfwidth = hoeffding_halfwidth(Rat(2), samples, confidence);
    push(rep.entries, "translation discrepancy sum below stage budget",
         rep.estimate + rep.halfwidth, "<", rep.budget);
    rep.pass = entries_pass(rep.entries);
    return rep;
}

Rat box_translation_exact(const Box& box, const Rat& delta1, const Rat& delta2) {
    Box shifted = rotate(box, delta1, delta2, Int(1));
    return 2 * (box.measure() - intersection_measure(shifted, box));
}

TranslationMcReport box_translation_mc(const Box& box, const Rat& delta1, const Rat& delta2,
                                       const Int& samples, uint64_t seed, double confidence) {
    if (samples <= 0) throw InvalidInput("box_translation_mc: need a positive sample count");
    TranslationMcReport rep;
    rep.samples = samples;
    rep.seed = seed;
    rep.confidence = confidence;
    rep.mismatch_count = 0;
    rep.undefined_count = 0;
    rep.budget = box_translation_exact(box, delta1, delta2);
    if (delta1 == 0 && delta2 == 0) {
        rep.exact = true;
        rep.sample_domain = 0;
        rep.estimate = 0;
        rep.halfwidth = 0;
        push(rep.entries, "estimate within confidence bound of exact value", Rat(0), "<=", Rat(0));
        rep.pass = entries_pass(rep.entries);
        return rep;
    }
    Box domain = shift_hull(box, delta1, delta2);
    rep.sample_domain = domain.measure();
    auto charged = [&](const TorusPoint& x) -> int64_t {
        Tri direct = tri_box(box, x);
        if (direct == Tri::boundary) throw IndicatorUndefined("box face");
        TorusPoint back;
        back.t1 = mod1(x.t1 - delta1);
        back.t2 = mod1(x.t2 - delta2);
        back.fiber = x.fiber;
        Tri shifted = tri_box(box, back);
        if (shifted == Tri::boundary) throw IndicatorUndefined("box face");
        return direct != shifted ? 1 : 0;
    };
    McCounts counts = sample_counts(domain, samples, seed, charged);
    rep.mismatch_count = counts.mismatch;
    rep.undefined_count = counts.undefined;
    Int charged_total = Int(counts.mismatch) + Int(counts.undefined);
    rep.estimate = rep.sample_domain * Rat(charged_total, samples);
    rep.halfwidth = rep.sample_domain * hoeffding_halfwidth(Rat(1), samples, confidence);
    Rat err = abs_rat(rep.estimate - rep.budget);
    push(rep.entries, "estimate within confidence bound of exact value", err, "<=", rep.halfwidth);
    rep.pass = entries_pass(rep.entries);
    return rep;
}

void attach_translation_mc(SpeedReport& rep, const TranslationMcReport& mc) {
    rep.has_mc = true;
    rep.translation_mc = mc;
    Rat charged = mc.estimate + mc.halfwidth;
    push(rep.entries, "stage translation Monte Carlo within budget", charged, "<", mc.budget);
    rep.pass = entries_pass(rep.entries);
}

}  // namespace tlab
