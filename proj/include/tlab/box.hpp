#pragma once

/**
 * @file box.hpp
 * @brief Axis-aligned rational cuboids on T^2 x [0,1]^(d-2) and finite
 *        disjoint unions with exact measure algebra.
 */

#include <cstddef>
#include <vector>

#include "tlab/circle.hpp"

namespace tlab {

// closed rational subinterval of [0,1] (fiber factor)
struct FiberInterval {
    Rat lo, hi;  // 0 <= lo <= hi <= 1
    Rat length() const { return hi - lo; }
    friend bool operator==(const FiberInterval& a, const FiberInterval& b) {
        return a.lo == b.lo && a.hi == b.hi;
    }
};

struct Box {
    CircleInterval theta1;
    CircleInterval theta2;
    std::vector<FiberInterval> fiber;  // d-2 entries

    std::size_t dims() const { return 2 + fiber.size(); }
    Rat measure() const;

    friend bool operator==(const Box& a, const Box& b) {
        return a.theta1 == b.theta1 && a.theta2 == b.theta2 && a.fiber == b.fiber;
    }
};

// convenience constructor used throughout the tests
Box make_box(const Rat& t1_lo, const Rat& t1_len, const Rat& t2_lo, const Rat& t2_len,
             const std::vector<FiberInterval>& fiber = {});

// exact image under R_{alpha,alpha'}^power; measure preserved
Box rotate(const Box& b, const Rat& alpha, const Rat& alpha_prime, const Int& power);

// mu(a cap b), exact (products of per-axis overlap lengths)
Rat intersection_measure(const Box& a, const Box& b);

// Finite union of pairwise (measure-)disjoint boxes.  Construction
// canonicalizes: boxes are sorted, abutting boxes with identical
// cross-sections are merged, and any positive-measure overlap is an error.
class BoxUnion {
public:
    explicit BoxUnion(std::size_t fiber_dims) : fiber_dims_(fiber_dims) {}
    explicit BoxUnion(std::vector<Box> boxes);

    static BoxUnion empty(std::size_t fiber_dims) { return BoxUnion(fiber_dims); }

    const std::vector<Box>& boxes() const { return boxes_; }
    std::size_t fiber_dims() const { return fiber_dims_; }
    Rat measure() const;

    BoxUnion rotated(const Rat& alpha, const Rat& alpha_prime, const Int& power) const;

private:
    std::vector<Box> boxes_;
    std::size_t fiber_dims_ = 0;
};

Rat intersection_measure(const BoxUnion& a, const BoxUnion& b);

// mu(a DELTA b) = mu(a) + mu(b) - 2 mu(a cap b), exact
Rat symmetric_difference_measure(const BoxUnion& a, const BoxUnion& b);

}  // namespace tlab
