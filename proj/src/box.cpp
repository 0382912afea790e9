#include "tlab/box.hpp"

#include <algorithm>
#include <tuple>

namespace tlab {

Rat Box::measure() const {
    Rat m = theta1.len * theta2.len;
    for (const auto& f : fiber) m *= f.length();
    return m;
}

Box make_box(const Rat& t1_lo, const Rat& t1_len, const Rat& t2_lo, const Rat& t2_len,
             const std::vector<FiberInterval>& fiber) {
    Box b;
    b.theta1 = CircleInterval(t1_lo, t1_len);
    b.theta2 = CircleInterval(t2_lo, t2_len);
    b.fiber = fiber;
    return b;
}

Box rotate(const Box& b, const Rat& alpha, const Rat& alpha_prime, const Int& power) {
    Box r = b;
    r.theta1 = b.theta1.shifted(mod1(Rat(power) * alpha));
    r.theta2 = b.theta2.shifted(mod1(Rat(power) * alpha_prime));
    return r;
}

Rat intersection_measure(const Box& a, const Box& b) {
    Rat m = overlap_length(a.theta1, b.theta1);
    if (m == 0) return m;
    m *= overlap_length(a.theta2, b.theta2);
    if (m == 0) return m;
    for (std::size_t i = 0; i < a.fiber.size(); ++i) {
        const Rat lo = std::max(a.fiber[i].lo, b.fiber[i].lo);
        const Rat hi = std::min(a.fiber[i].hi, b.fiber[i].hi);
        if (hi <= lo) return Rat(0);
        m *= hi - lo;
    }
    return m;
}

namespace {

using Key = std::tuple<Rat, Rat, Rat, Rat>;

bool box_less(const Box& a, const Box& b) {
    const Key ka{a.theta1.lo.value, a.theta2.lo.value, a.theta1.len, a.theta2.len};
    const Key kb{b.theta1.lo.value, b.theta2.lo.value, b.theta1.len, b.theta2.len};
    if (ka != kb) return ka < kb;
    for (std::size_t i = 0; i < a.fiber.size() && i < b.fiber.size(); ++i) {
        if (!(a.fiber[i] == b.fiber[i]))
            return std::tie(a.fiber[i].lo, a.fiber[i].hi) < std::tie(b.fiber[i].lo, b.fiber[i].hi);
    }
    return false;
}

bool same_cross_section_t2(const Box& a, const Box& b) {
    return a.theta1 == b.theta1 && a.fiber == b.fiber;
}

bool same_cross_section_t1(const Box& a, const Box& b) {
    return a.theta2 == b.theta2 && a.fiber == b.fiber;
}

// merge b into a if b starts exactly where a ends (same axis geometry)
bool try_merge_t2(Box& a, const Box& b) {
    if (!same_cross_section_t2(a, b)) return false;
    if (a.theta2.len + b.theta2.len > 1) return false;
    if (!(CircleValue(a.theta2.lo.value + a.theta2.len) == b.theta2.lo)) return false;
    a.theta2.len += b.theta2.len;
    return true;
}

bool try_merge_t1(Box& a, const Box& b) {
    if (!same_cross_section_t1(a, b)) return false;
    if (a.theta1.len + b.theta1.len > 1) return false;
    if (!(CircleValue(a.theta1.lo.value + a.theta1.len) == b.theta1.lo)) return false;
    a.theta1.len += b.theta1.len;
    return true;
}

void enforce_disjoint(const std::vector<Box>& boxes) {
    struct Ev {
        Rat lo, hi;
        std::size_t idx;
    };
    std::vector<Ev> ev;
    ev.reserve(boxes.size() * 2);
    for (std::size_t i = 0; i < boxes.size(); ++i) {
        for (const auto& p : boxes[i].theta1.pieces()) ev.push_back({p.lo, p.hi, i});
    }
    std::sort(ev.begin(), ev.end(), [](const Ev& a, const Ev& b) { return a.lo < b.lo; });
    std::vector<const Ev*> active;
    for (const auto& e : ev) {
        active.erase(std::remove_if(active.begin(), active.end(),
                                    [&](const Ev* a) { return a->hi <= e.lo; }),
                     active.end());
        for (const Ev* a : active) {
            if (a->idx == e.idx) continue;
            if (intersection_measure(boxes[a->idx], boxes[e.idx]) > 0)
                throw InvalidInput("box union members overlap");
        }
        active.push_back(&e);
    }
}

}  // namespace

BoxUnion::BoxUnion(std::vector<Box> boxes) {
    if (boxes.empty()) throw InvalidInput("use BoxUnion::empty for the empty union");
    fiber_dims_ = boxes.front().fiber.size();
    for (const auto& b : boxes) {
        if (b.fiber.size() != fiber_dims_) throw InvalidInput("mixed box dimensions in union");
    }
    enforce_disjoint(boxes);
    // canonical order, then one merge pass per torus axis
    std::sort(boxes.begin(), boxes.end(), box_less);
    std::vector<Box> merged;
    for (auto& b : boxes) {
        if (!merged.empty() && try_merge_t2(merged.back(), b)) continue;
        merged.push_back(std::move(b));
    }
    std::sort(merged.begin(), merged.end(), [](const Box& a, const Box& b) {
        const Key ka{a.theta2.lo.value, a.theta1.lo.value, a.theta2.len, a.theta1.len};
        const Key kb{b.theta2.lo.value, b.theta1.lo.value, b.theta2.len, b.theta1.len};
        return ka < kb || (ka == kb && box_less(a, b));
    });
    boxes_.clear();
    for (auto& b : merged) {
        if (!boxes_.empty() && try_merge_t1(boxes_.back(), b)) continue;
        boxes_.push_back(std::move(b));
    }
    std::sort(boxes_.begin(), boxes_.end(), box_less);
}

Rat BoxUnion::measure() const {
    Rat m = 0;
    for (const auto& b : boxes_) m += b.measure();
    return m;
}

BoxUnion BoxUnion::rotated(const Rat& alpha, const Rat& alpha_prime, const Int& power) const {
    if (boxes_.empty()) return *this;
    std::vector<Box> out;
    out.reserve(boxes_.size());
    for (const auto& b : boxes_) out.push_back(rotate(b, alpha, alpha_prime, power));
    return BoxUnion(std::move(out));
}

Rat intersection_measure(const BoxUnion& a, const BoxUnion& b) {
    Rat m = 0;
    for (const auto& ba : a.boxes()) {
        for (const auto& bb : b.boxes()) m += intersection_measure(ba, bb);
    }
    return m;
}

Rat symmetric_difference_measure(const BoxUnion& a, const BoxUnion& b) {
    return a.measure() + b.measure() - 2 * intersection_measure(a, b);
}

}  // namespace tlab
