#pragma once

/**
 * @file parallelogram.hpp
 * @brief Slope-1 diagonal strips on T^2: membership and margin arithmetic.
 *
 * A kind-1 strip constrains w = theta2 - theta1, a kind-2 strip constrains
 * w = theta1 - theta2; both live in the anti-diagonal coordinate where every
 * axis-aligned box projects to an interval, so containment reduces to exact
 * interval comparisons mod 1.
 */

#include "tlab/box.hpp"

namespace tlab {

struct Parallelogram {
    int kind;    // 1 or 2
    Int j1, j2;  // 0 <= j1 < q, 0 <= j2 < q'
    Rat eps;     // 0 <= eps < 1/4
    Int q, qp;

    Parallelogram(int kind_, const Int& j1_, const Int& j2_, const Rat& eps_, const Int& q_,
                  const Int& qp_)
        : kind(kind_), j1(j1_), j2(j2_), eps(eps_), q(q_), qp(qp_) {
        if (kind != 1 && kind != 2) throw InvalidInput("parallelogram kind must be 1 or 2");
        if (j1 < 0 || j1 >= q || j2 < 0 || j2 >= qp) throw InvalidInput("parallelogram index range");
        if (eps < 0 || eps >= Rat(1, 4)) throw InvalidInput("parallelogram eps range");
    }

    // offset of the strip in its w coordinate
    Rat offset() const {
        return kind == 1 ? Rat(j2, qp) - Rat(j1, q) : Rat(j1, q) - Rat(j2, qp);
    }

    Rat strip_lo() const { return eps / (2 * Rat(q) * Rat(qp)); }
    Rat strip_hi() const { return (1 - eps) / (2 * Rat(q) * Rat(qp)); }

    // open w-window of the strip as a circle interval (closure)
    CircleInterval delta_interval() const {
        return CircleInterval(offset() + strip_lo(), strip_hi() - strip_lo());
    }
};

// signed distances from the box's w-range to the strip's open bounds;
// both positive iff the box's theta-factor lies strictly inside the strip
struct StripMargins {
    Rat lower, upper;
};

// throws SeamStraddle when a theta interval of b wraps 0/1 (pre-split first)
StripMargins strip_margins(const Parallelogram& p, const Box& b);

// strict strip containment plus fiber factor within [eps, 1-eps]
bool contains(const Parallelogram& p, const Box& b);

// split a box with wrapping theta intervals into up to 4 seam-free boxes
std::vector<Box> split_at_seam(const Box& b);

}  // namespace tlab
