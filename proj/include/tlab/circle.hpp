#pragma once

/**
 * @file circle.hpp
 * @brief Points and intervals on the circle R/Z with exact arithmetic.
 *
 * A CircleInterval is stored as (lo, len) with 0 <= lo < 1 and 0 < len <= 1;
 * before any intersection it is split at the 0/1 seam into at most two plain
 * intervals inside [0, 1].  All set algebra then runs on plain intervals.
 */

#include <vector>

#include "tlab/rational.hpp"

namespace tlab {

// canonical representative of a point on R/Z
struct CircleValue {
    Rat value;  // 0 <= value < 1

    CircleValue() : value(0) {}
    explicit CircleValue(const Rat& x) : value(mod1(x)) {}
    friend bool operator==(const CircleValue& a, const CircleValue& b) {
        return a.value == b.value;
    }
};

// closed subinterval of [0,1] (no wraparound)
struct PlainInterval {
    Rat lo, hi;  // lo <= hi
    Rat length() const { return hi - lo; }
};

struct CircleInterval {
    CircleValue lo;
    Rat len;  // 0 < len <= 1

    CircleInterval() : lo(), len(1) {}
    CircleInterval(const Rat& start, const Rat& length) : lo(start), len(length) {
        if (len <= 0 || len > 1) throw InvalidInput("circle interval length must be in (0,1]");
    }

    bool wraps() const { return lo.value + len > 1; }

    // split at the seam; 1 or 2 pieces, each inside [0,1]
    std::vector<PlainInterval> pieces() const {
        if (!wraps()) return {{lo.value, lo.value + len}};
        return {{lo.value, Rat(1)}, {Rat(0), lo.value + len - 1}};
    }

    CircleInterval shifted(const Rat& delta) const {
        CircleInterval r;
        r.lo = CircleValue(lo.value + delta);
        r.len = len;
        return r;
    }

    friend bool operator==(const CircleInterval& a, const CircleInterval& b) {
        if (a.len == 1 && b.len == 1) return true;  // both are the full circle
        return a.lo == b.lo && a.len == b.len;
    }
};

// total length of the overlap, exact
Rat overlap_length(const CircleInterval& a, const CircleInterval& b);

// closed-membership test: x in the closure of iv
bool interval_contains(const CircleInterval& iv, const CircleValue& x);

}  // namespace tlab
