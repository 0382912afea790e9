#include "tlab/parallelogram.hpp"

namespace tlab {

StripMargins strip_margins(const Parallelogram& p, const Box& b) {
    if (b.theta1.wraps() || b.theta2.wraps())
        throw SeamStraddle("box straddles the mod-1 cut; split before testing strip membership");
    // w-range of the box: width len1+len2, anchored at the corner minimizing w
    Rat width = b.theta1.len + b.theta2.len;
    Rat w_min = p.kind == 1 ? b.theta2.lo.value - (b.theta1.lo.value + b.theta1.len)
                            : b.theta1.lo.value - (b.theta2.lo.value + b.theta2.len);
    Rat u = mod1(w_min - p.offset());
    return StripMargins{u - p.strip_lo(), p.strip_hi() - u - width};
}

bool contains(const Parallelogram& p, const Box& b) {
    StripMargins m = strip_margins(p, b);
    if (m.lower <= 0 || m.upper <= 0) return false;
    for (const FiberInterval& f : b.fiber)
        if (f.lo < p.eps || f.hi > 1 - p.eps) return false;
    return true;
}

std::vector<Box> split_at_seam(const Box& b) {
    auto axis_parts = [](const CircleInterval& iv) {
        std::vector<CircleInterval> out;
        for (const PlainInterval& piece : iv.pieces())
            out.push_back(CircleInterval(piece.lo, piece.hi - piece.lo));
        return out;
    };
    std::vector<Box> out;
    for (const CircleInterval& t1 : axis_parts(b.theta1))
        for (const CircleInterval& t2 : axis_parts(b.theta2)) {
            Box part = b;
            part.theta1 = t1;
            part.theta2 = t2;
            out.push_back(part);
        }
    return out;
}

}  // namespace tlab
