#include "tlab/circle.hpp"

#include <algorithm>

namespace tlab {

Rat overlap_length(const CircleInterval& a, const CircleInterval& b) {
    Rat total = 0;
    for (const auto& pa : a.pieces()) {
        for (const auto& pb : b.pieces()) {
            const Rat lo = std::max(pa.lo, pb.lo);
            const Rat hi = std::min(pa.hi, pb.hi);
            if (hi > lo) total += hi - lo;
        }
    }
    return total;
}

bool interval_contains(const CircleInterval& iv, const CircleValue& x) {
    for (const auto& p : iv.pieces()) {
        if (p.lo <= x.value && x.value <= p.hi) return true;
    }
    // the closure may contain 0 as the point 1
    if (x.value == 0) {
        for (const auto& p : iv.pieces()) {
            if (p.hi == 1) return true;
        }
    }
    return false;
}

}  // namespace tlab
