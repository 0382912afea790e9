#include "tlab/conjugations.hpp"

#include <cmath>

namespace tlab {
namespace {

int64_t to_i64(const Int& v) { return v.convert_to<int64_t>(); }

unsigned fiber_dims(const StageParams& st) { return (st.d - 2).convert_to<unsigned>(); }

int64_t floor_div(int64_t a, int64_t b) {
    int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

int64_t mod_i64(int64_t a, int64_t b) {
    int64_t r = a % b;
    return r < 0 ? r + b : r;
}

struct CellCoord {
    int64_t cell;  // absolute cell index in [0, q q')
    Rat unit;      // in-cell position, [0, 1)
};

CellCoord split_cell(const Rat& theta, const Int& qqp) {
    Rat scaled = mod1(theta) * Rat(qqp);
    Int c = floor_rat(scaled);
    return CellCoord{to_i64(c), scaled - Rat(c)};
}

// theta2 window of the s-half (cell units)
Rat half_lo(const StageParams& st, int s) {
    if (s == 1) return (1 + st.eps) / 2;
    return st.eps / 2;
}
Rat half_len(const StageParams& st) { return (1 - 2 * st.eps) / 2; }

// theta1 slab window (cell units): slab ell of width (n q q')^(2-d)
Rat slab_width(const StageParams& st) {
    Int base = st.n * st.qqp();
    return Rat(1) / Rat(pow_int(base, fiber_dims(st)));
}

Rat slab_lo(const StageParams& st, int64_t ell) {
    Rat w = slab_width(st);
    return Rat(ell) * w + st.eps * w / 2;
}
Rat slab_len(const StageParams& st) { return slab_width(st) * (1 - st.eps); }

std::vector<FiberInterval> full_fiber(const StageParams& st) {
    std::vector<FiberInterval> f;
    for (unsigned t = 0; t < fiber_dims(st); ++t) f.push_back(FiberInterval{st.eps, 1 - st.eps});
    return f;
}

std::vector<int64_t> block_digits(const StageParams& st, int64_t ell) {
    int64_t base = to_i64(fiber_blocks_per_axis(st));
    std::vector<int64_t> out;
    for (unsigned t = 0; t < fiber_dims(st); ++t) {
        out.push_back(mod_i64(ell, base));
        ell = floor_div(ell, base);
    }
    return out;
}

bool in_closed(const Rat& x, const Rat& lo, const Rat& len) { return x >= lo && x <= lo + len; }

[[noreturn]] void outside(const char* who) { throw OutsideGoodDomain(who); }

}  // namespace

Int slab_count(const StageParams& st) {
    Int base = st.n * st.qqp();
    return pow_int(base, fiber_dims(st));
}

Int fiber_blocks_per_axis(const StageParams& st) { return st.n * st.qqp(); }

Rat half_cell_lo(const StageParams& st, int s) {
    if (s != 1 && s != 2) throw InvalidInput("half_cell_lo: kind must be 1 or 2");
    return half_lo(st, s);
}

Rat half_cell_len(const StageParams& st) { return half_len(st); }

Rat SlantBox::measure() const {
    Rat m = bounded_len * diag_len / (Rat(qqp) * Rat(qqp));
    for (const FiberInterval& f : fiber) m *= f.length();
    return m;
}

Box part_box(const StageParams& st, int s, int64_t x, int64_t y, int64_t ell) {
    Rat qqp = Rat(st.qqp());
    return Box{CircleInterval(mod1((Rat(x) + slab_lo(st, ell)) / qqp), slab_len(st) / qqp),
               CircleInterval(mod1((Rat(y) + half_lo(st, s)) / qqp), half_len(st) / qqp),
               full_fiber(st)};
}

Box tilde_cell(const StageParams& st, int s, int64_t i, int64_t j, int64_t ell) {
    Rat qqp = Rat(st.qqp());
    Rat B = Rat(fiber_blocks_per_axis(st));
    std::vector<FiberInterval> fiber;
    for (int64_t b : block_digits(st, ell))
        fiber.push_back(FiberInterval{(Rat(b) + st.eps) / B, (Rat(b) + 1 - st.eps) / B});
    return Box{CircleInterval(mod1((Rat(i) + st.eps / 2) / qqp), (1 - st.eps) / qqp),
               CircleInterval(mod1((Rat(j) + half_lo(st, s)) / qqp), half_len(st) / qqp), fiber};
}

SlantBox icell_slant(const StageParams& st, const ICell& cell) {
    SlantBox sb;
    sb.s = cell.s;
    sb.j1 = cell.j1;
    sb.j2 = cell.j2;
    sb.qqp = st.qqp();
    sb.bounded_lo = slab_lo(st, cell.ell);
    sb.bounded_len = slab_len(st);
    sb.diag_lo = st.eps / 2;
    sb.diag_len = (1 - 2 * st.eps) / 2;
    sb.fiber = full_fiber(st);
    return sb;
}

bool icell_contains(const StageParams& st, const ICell& cell, const Box& b) {
    if (b.theta1.wraps() || b.theta2.wraps())
        throw SeamStraddle("icell_contains: split the box at the mod-1 seam first");
    SlantBox sb = icell_slant(st, cell);
    Rat qqp = Rat(st.qqp());
    const CircleInterval& bounded = cell.s == 1 ? b.theta1 : b.theta2;
    int64_t anchor = cell.s == 1 ? cell.j1 : cell.j2;
    Rat u = mod1(bounded.lo.value - Rat(anchor) / qqp) * qqp;
    if (!(u >= sb.bounded_lo && u + bounded.len * qqp <= sb.bounded_lo + sb.bounded_len))
        return false;
    // diagonal window, measured from the box corner minimizing the diagonal
    Rat diag_min;
    if (cell.s == 1)
        diag_min = b.theta2.lo.value - (b.theta1.lo.value + b.theta1.len);
    else
        diag_min = b.theta1.lo.value - (b.theta2.lo.value + b.theta2.len);
    int64_t rel = cell.s == 1 ? cell.j2 - cell.j1 : cell.j1 - cell.j2;
    Rat w = mod1(diag_min - Rat(rel) / qqp) * qqp;
    Rat spread = (b.theta1.len + b.theta2.len) * qqp;
    if (!(w >= sb.diag_lo && w + spread <= sb.diag_lo + sb.diag_len)) return false;
    for (const FiberInterval& f : b.fiber)
        if (f.lo < st.eps || f.hi > 1 - st.eps) return false;
    return true;
}

Box h1_forward_cell(const StageParams& st, const CellAssignment& ca, int s, int64_t i, int64_t j,
                    int64_t t1, int64_t t2, int64_t ell) {
    int64_t q = to_i64(st.q), qp = to_i64(st.qp), qqp = q * qp;
    int64_t k = ca.k_of(i, j);
    const CellAssignment::Row& row = ca.at(s, k);
    int64_t x = mod_i64(row.u + t1 * qp, qqp);
    int64_t y = mod_i64(row.v + t2 * q, qqp);
    return part_box(st, s, x, y, ell);
}

namespace {

struct TildeLocation {
    int s;
    int64_t i, j, t1, t2, ell;
    Rat u, v;                // cell units
    std::vector<Rat> block;  // in-block fiber positions, each in [eps, 1-eps]
};

TildeLocation locate_tilde(const StageParams& st, const TorusPoint& p) {
    int64_t q = to_i64(st.q), qp = to_i64(st.qp);
    CellCoord c1 = split_cell(p.t1, st.qqp());
    CellCoord c2 = split_cell(p.t2, st.qqp());
    TildeLocation loc;
    loc.i = mod_i64(c1.cell, qp);
    loc.j = mod_i64(c2.cell, q);
    loc.t1 = floor_div(c1.cell, qp);
    loc.t2 = floor_div(c2.cell, q);
    loc.u = c1.unit;
    loc.v = c2.unit;
    if (!in_closed(loc.u, st.eps / 2, 1 - st.eps)) outside("h1: theta1 in a cell gap");
    if (in_closed(loc.v, half_lo(st, 1), half_len(st)))
        loc.s = 1;
    else if (in_closed(loc.v, half_lo(st, 2), half_len(st)))
        loc.s = 2;
    else
        outside("h1: theta2 in a half-cell gap");
    Rat B = Rat(fiber_blocks_per_axis(st));
    int64_t base = to_i64(fiber_blocks_per_axis(st));
    loc.ell = 0;
    int64_t scale = 1;
    for (size_t t = 0; t < p.fiber.size(); ++t) {
        Rat scaled = p.fiber[t] * B;
        Int b = floor_rat(scaled);
        Rat within = scaled - Rat(b);
        if (!in_closed(within, st.eps, 1 - 2 * st.eps)) outside("h1: fiber in a block gap");
        loc.ell += to_i64(b) * scale;
        scale *= base;
        loc.block.push_back(within);
    }
    return loc;
}

}  // namespace

TorusPoint h1_forward_point(const StageParams& st, const CellAssignment& ca, const TorusPoint& p) {
    if (Int(p.fiber.size()) != st.d - 2) throw InvalidInput("h1_forward_point: fiber arity");
    TildeLocation loc = locate_tilde(st, p);
    int64_t k = ca.k_of(loc.i, loc.j);
    const CellAssignment::Row& row = ca.at(loc.s, k);
    Rat qqp = Rat(st.qqp());
    // psi: exchange theta1 width against fiber blocks (identity when d = 2)
    Rat u_img = Rat(loc.ell) * slab_width(st) + loc.u * slab_width(st);
    int64_t cell1 = mod_i64(loc.i + loc.t1 * to_i64(st.qp), to_i64(st.qqp()));
    TorusPoint out;
    out.t1 = mod1((Rat(cell1) + u_img) / qqp + Rat(Int(row.a), st.q));
    out.t2 = mod1(p.t2 + Rat(Int(row.ap), st.qp));
    out.fiber = loc.block;  // psi sends block position to absolute [eps, 1-eps]
    return out;
}

TorusPoint h1_inverse_point(const StageParams& st, const CellAssignment& ca, const TorusPoint& p) {
    if (Int(p.fiber.size()) != st.d - 2) throw InvalidInput("h1_inverse_point: fiber arity");
    int64_t q = to_i64(st.q), qp = to_i64(st.qp), qqp = q * qp;
    CellCoord c1 = split_cell(p.t1, st.qqp());
    CellCoord c2 = split_cell(p.t2, st.qqp());
    int s;
    if (in_closed(c2.unit, half_lo(st, 1), half_len(st)))
        s = 1;
    else if (in_closed(c2.unit, half_lo(st, 2), half_len(st)))
        s = 2;
    else
        outside("h1 inverse: theta2 in a half-cell gap");
    int64_t k = ca.k_of(mod_i64(c1.cell, qp), mod_i64(c2.cell, q));
    const CellAssignment::Row& row = ca.at(s, k);
    // psi^{-1} on theta1, then undo the cell translation
    int64_t slabs = to_i64(slab_count(st));
    Rat w = slab_width(st);
    int64_t ell = to_i64(floor_rat(c1.unit / w));
    if (ell < 0 || ell >= slabs) outside("h1 inverse: theta1 outside slabs");
    Rat within = (c1.unit - Rat(ell) * w) / w;  // rescaled to cell units
    if (!in_closed(within, st.eps / 2, 1 - st.eps)) outside("h1 inverse: theta1 in a slab gap");
    for (const Rat& f : p.fiber)
        if (!in_closed(f, st.eps, 1 - 2 * st.eps)) outside("h1 inverse: fiber outside [eps,1-eps]");
    int64_t src1 = mod_i64(c1.cell - row.a * qp, qqp);
    TorusPoint out;
    out.t1 = mod1((Rat(src1) + within) / Rat(st.qqp()));
    out.t2 = mod1(p.t2 - Rat(Int(row.ap), st.qp));
    std::vector<int64_t> digits = block_digits(st, ell);
    Rat B = Rat(fiber_blocks_per_axis(st));
    for (size_t t = 0; t < p.fiber.size(); ++t)
        out.fiber.push_back((Rat(digits[t]) + p.fiber[t]) / B);
    return out;
}

TorusPoint h2_forward_point(const StageParams& st, const TorusPoint& p) {
    if (Int(p.fiber.size()) != st.d - 2) throw InvalidInput("h2_forward_point: fiber arity");
    CellCoord c1 = split_cell(p.t1, st.qqp());
    CellCoord c2 = split_cell(p.t2, st.qqp());
    Rat u = c1.unit, v = c2.unit;
    Rat w = slab_width(st);
    int64_t ell = to_i64(floor_rat(u / w));
    Rat in_slab = u - Rat(ell) * w;
    if (!in_closed(in_slab, st.eps * w / 2, w * (1 - st.eps))) outside("h2: theta1 in a slab gap");
    for (const Rat& f : p.fiber)
        if (!in_closed(f, st.eps, 1 - 2 * st.eps)) outside("h2: fiber outside [eps,1-eps]");
    Rat qqp = Rat(st.qqp());
    TorusPoint out;
    out.fiber = p.fiber;
    if (in_closed(v, half_lo(st, 1), half_len(st))) {
        // A1 (u, v) = (u, v + u - 1/2)
        out.t1 = mod1(p.t1);
        out.t2 = mod1((Rat(c2.cell) + v + u - Rat(1, 2)) / qqp);
    } else if (in_closed(v, half_lo(st, 2), half_len(st))) {
        // A2 (u, v) = (u + 1/2 - v, u)
        out.t1 = mod1((Rat(c1.cell) + u + Rat(1, 2) - v) / qqp);
        out.t2 = mod1((Rat(c2.cell) + u) / qqp);
    } else {
        outside("h2: theta2 in a half-cell gap");
    }
    return out;
}

TorusPoint h2_inverse_point(const StageParams& st, const TorusPoint& p) {
    if (Int(p.fiber.size()) != st.d - 2) throw InvalidInput("h2_inverse_point: fiber arity");
    Rat qqp = Rat(st.qqp());
    for (const Rat& f : p.fiber)
        if (!in_closed(f, st.eps, 1 - 2 * st.eps)) outside("h2 inverse: fiber outside [eps,1-eps]");
    Rat w = slab_width(st);
    Rat d1 = mod1(p.t2 - p.t1) * qqp;  // diagonal in cell units
    Rat f1 = d1 - Rat(floor_rat(d1));
    TorusPoint out;
    out.fiber = p.fiber;
    if (in_closed(f1, st.eps / 2, (1 - 2 * st.eps) / 2)) {
        // kind 1: A1^{-1} (u, v') = (u, v' - u + 1/2); v' - u is the diagonal
        CellCoord c1 = split_cell(p.t1, st.qqp());
        int64_t j2 = mod_i64(c1.cell + to_i64(floor_rat(d1)), to_i64(st.qqp()));
        int64_t ell = to_i64(floor_rat(c1.unit / w));
        Rat in_slab = c1.unit - Rat(ell) * w;
        if (!in_closed(in_slab, st.eps * w / 2, w * (1 - st.eps)))
            outside("h2 inverse: theta1 in a slab gap");
        out.t1 = mod1(p.t1);
        out.t2 = mod1((Rat(j2) + f1 + Rat(1, 2)) / qqp);
        return out;
    }
    Rat d2 = mod1(p.t1 - p.t2) * qqp;
    Rat f2 = d2 - Rat(floor_rat(d2));
    if (in_closed(f2, st.eps / 2, (1 - 2 * st.eps) / 2)) {
        // kind 2: A2^{-1} (u', v') = (v', v' + 1/2 - u'); u' - v' is the diagonal
        CellCoord c2 = split_cell(p.t2, st.qqp());
        int64_t j1 = mod_i64(c2.cell + to_i64(floor_rat(d2)), to_i64(st.qqp()));
        int64_t ell = to_i64(floor_rat(c2.unit / w));
        Rat in_slab = c2.unit - Rat(ell) * w;
        if (!in_closed(in_slab, st.eps * w / 2, w * (1 - st.eps)))
            outside("h2 inverse: theta2 in a slab gap");
        out.t1 = mod1((Rat(j1) + c2.unit) / qqp);
        out.t2 = mod1((Rat(c2.cell) + Rat(1, 2) - f2) / qqp);
        return out;
    }
    outside("h2 inverse: diagonal outside both slanted families");
}

SlantBox h2_forward_box(const StageParams& st, int s, int64_t x, int64_t y, const Box& b,
                        int64_t ell) {
    Box dom = part_box(st, s, x, y, ell);
    Rat qqp = Rat(st.qqp());
    auto inside = [](const CircleInterval& part, const CircleInterval& whole) {
        Rat off = mod1(part.lo.value - whole.lo.value);
        return off + part.len <= whole.len;
    };
    if (!inside(b.theta1, dom.theta1) || !inside(b.theta2, dom.theta2))
        outside("h2_forward_box: box not inside the part cell");
    for (const FiberInterval& f : b.fiber)
        if (f.lo < st.eps || f.hi > 1 - st.eps)
            outside("h2_forward_box: fiber outside [eps,1-eps]");
    Rat u0 = mod1(b.theta1.lo.value - Rat(x) / qqp) * qqp;
    Rat v0 = mod1(b.theta2.lo.value - Rat(y) / qqp) * qqp;
    Rat ul = b.theta1.len * qqp, vl = b.theta2.len * qqp;
    SlantBox sb;
    sb.s = s;
    sb.j1 = x;
    sb.j2 = y;
    sb.qqp = st.qqp();
    sb.fiber = b.fiber;
    sb.bounded_lo = u0;
    sb.bounded_len = ul;
    if (s == 1) {
        sb.diag_lo = v0 - Rat(1, 2);
        sb.diag_len = vl;
    } else {
        sb.diag_lo = Rat(1, 2) - v0 - vl;
        sb.diag_len = vl;
    }
    return sb;
}

Box h2_inverse_slant(const StageParams& st, const SlantBox& sb) {
    Rat qqp = Rat(st.qqp());
    Rat w = slab_width(st);
    ICell home{sb.s, to_i64(sb.j1), to_i64(sb.j2), to_i64(floor_rat(sb.bounded_lo / w))};
    SlantBox cell = icell_slant(st, home);
    if (!(sb.bounded_lo >= cell.bounded_lo &&
          sb.bounded_lo + sb.bounded_len <= cell.bounded_lo + cell.bounded_len))
        outside("h2_inverse_slant: bounded coordinate outside the slab");
    if (!(sb.diag_lo >= cell.diag_lo && sb.diag_lo + sb.diag_len <= cell.diag_lo + cell.diag_len))
        outside("h2_inverse_slant: diagonal window outside the slanted cell");
    for (const FiberInterval& f : sb.fiber)
        if (f.lo < st.eps || f.hi > 1 - st.eps) outside("h2_inverse_slant: fiber outside");
    if (sb.s == 1) {
        return Box{CircleInterval(mod1((Rat(sb.j1) + sb.bounded_lo) / qqp), sb.bounded_len / qqp),
                   CircleInterval(mod1((Rat(sb.j2) + sb.diag_lo + Rat(1, 2)) / qqp),
                                  sb.diag_len / qqp),
                   sb.fiber};
    }
    return Box{CircleInterval(mod1((Rat(sb.j1) + sb.bounded_lo) / qqp), sb.bounded_len / qqp),
               CircleInterval(mod1((Rat(sb.j2) + Rat(1, 2) - sb.diag_lo - sb.diag_len) / qqp),
                              sb.diag_len / qqp),
               sb.fiber};
}

ICell hn_image_of_tilde_cell(const StageParams& st, const CellAssignment& ca, int64_t i, int64_t j,
                             int64_t ell, int s) {
    int64_t k = ca.k_of(i, j);
    const CellAssignment::Row& row = ca.at(s, k);
    // cell-index identity: j1 = i + a q', j2 = j + a' q, no wraparound
    if (row.u != i + row.a * to_i64(st.qp) || row.v != j + row.ap * to_i64(st.q))
        throw InvalidInput("hn_image_of_tilde_cell: cell-index identity failed");
    ICell out{s, row.u, row.v, ell};
    Box pre = tilde_cell(st, s, i, j, ell);
    if (pre.measure() != icell_slant(st, out).measure())
        throw InvalidInput("hn_image_of_tilde_cell: measure drift");
    return out;
}

std::vector<Box> good_domain_h1_inv(const StageParams& st) {
    int64_t qqp = to_i64(st.qqp());
    int64_t slabs = to_i64(slab_count(st));
    if (qqp > 1000 || slabs > 64) throw InvalidInput("good_domain_h1_inv: table too large");
    std::vector<Box> out;
    for (int s = 1; s <= 2; ++s)
        for (int64_t x = 0; x < qqp; ++x)
            for (int64_t y = 0; y < qqp; ++y)
                for (int64_t ell = 0; ell < slabs; ++ell) out.push_back(part_box(st, s, x, y, ell));
    return out;
}

std::vector<ICell> good_domain_h2_inv(const StageParams& st) {
    int64_t qqp = to_i64(st.qqp());
    int64_t slabs = to_i64(slab_count(st));
    if (qqp > 1000 || slabs > 64) throw InvalidInput("good_domain_h2_inv: table too large");
    std::vector<ICell> out;
    for (int s = 1; s <= 2; ++s)
        for (int64_t x = 0; x < qqp; ++x)
            for (int64_t y = 0; y < qqp; ++y)
                for (int64_t ell = 0; ell < slabs; ++ell) out.push_back(ICell{s, x, y, ell});
    return out;
}

bool verify_good_domain_chain(const StageParams& st) {
    std::vector<Box> parts = good_domain_h1_inv(st);
    std::vector<ICell> cells = good_domain_h2_inv(st);
    if (parts.size() != cells.size()) return false;
    for (size_t t = 0; t < cells.size(); ++t) {
        Box mapped = h2_inverse_slant(st, icell_slant(st, cells[t]));
        if (!(mapped == parts[t])) return false;
    }
    return true;
}

bool verify_determinants(const StageParams& st) {
    // A1 = [[1,0],[1,1]], A2 = [[1,-1],[1,0]]: exact unit determinants
    Int det1 = Int(1) * 1 - Int(0) * 1;
    Int det2 = Int(1) * 0 - Int(-1) * 1;
    if (det1 != 1 || det2 != 1) return false;
    // psi: diagonal, slab scale times the d-2 block scales
    Rat det_psi = slab_width(st) * Rat(pow_int(fiber_blocks_per_axis(st), fiber_dims(st)));
    return det_psi == 1;
}

bool verify_equivariance(const StageParams& st, const CellAssignment& ca) {
    int64_t qqp = to_i64(st.qqp());
    Rat cell = Rat(1) / Rat(st.qqp());
    Rat B = Rat(fiber_blocks_per_axis(st));
    auto shift = [](const TorusPoint& p, const Rat& d1, const Rat& d2) {
        TorusPoint out = p;
        out.t1 = mod1(p.t1 + d1);
        out.t2 = mod1(p.t2 + d2);
        return out;
    };
    auto same = [](const TorusPoint& a, const TorusPoint& b) {
        return a.t1 == b.t1 && a.t2 == b.t2 && a.fiber == b.fiber;
    };
    for (int s = 1; s <= 2; ++s)
        for (int64_t x = 0; x < qqp; ++x)
            for (int64_t y = 0; y < qqp; ++y) {
                Rat v_unit = half_lo(st, s) + half_len(st) / 3;
                // probe inside a tilde cell: full-width theta1, block-0 fiber
                TorusPoint pt;
                pt.t1 = mod1((Rat(x) + Rat(2, 5)) / Rat(st.qqp()));
                pt.t2 = mod1((Rat(y) + v_unit) / Rat(st.qqp()));
                for (unsigned t = 0; t < fiber_dims(st); ++t) pt.fiber.push_back(Rat(1, 2) / B);
                TorusPoint lhs = h1_forward_point(st, ca, shift(pt, Rat(1, st.q), Rat(1, st.qp)));
                TorusPoint rhs = shift(h1_forward_point(st, ca, pt), Rat(1, st.q), Rat(1, st.qp));
                if (!same(lhs, rhs)) return false;
                // probe inside a part box: slab-0 theta1, absolute fiber
                TorusPoint pp;
                pp.t1 = mod1((Rat(x) + slab_lo(st, 0) + slab_len(st) / 3) / Rat(st.qqp()));
                pp.t2 = pt.t2;
                for (unsigned t = 0; t < fiber_dims(st); ++t) pp.fiber.push_back(Rat(1, 2));
                lhs = h2_forward_point(st, shift(pp, cell, Rat(0)));
                rhs = shift(h2_forward_point(st, pp), cell, Rat(0));
                if (!same(lhs, rhs)) return false;
                lhs = h2_forward_point(st, shift(pp, Rat(0), cell));
                rhs = shift(h2_forward_point(st, pp), Rat(0), cell);
                if (!same(lhs, rhs)) return false;
            }
    return true;
}

bool verify_round_trip(const StageParams& st, const CellAssignment& ca) {
    int64_t qqp = to_i64(st.qqp());
    Rat B = Rat(fiber_blocks_per_axis(st));
    for (int s = 1; s <= 2; ++s)
        for (int64_t x = 0; x < qqp; ++x)
            for (int64_t y = 0; y < qqp; ++y) {
                TorusPoint p;
                p.t1 = mod1((Rat(x) + Rat(3, 7)) / Rat(st.qqp()));
                p.t2 = mod1((Rat(y) + half_lo(st, s) + half_len(st) * Rat(2, 7)) / Rat(st.qqp()));
                for (unsigned t = 0; t < fiber_dims(st); ++t) p.fiber.push_back(Rat(3, 7) / B);
                TorusPoint fwd = h1_forward_point(st, ca, p);
                TorusPoint back = h1_inverse_point(st, ca, fwd);
                if (!(back.t1 == p.t1 && back.t2 == p.t2 && back.fiber == p.fiber)) return false;
                TorusPoint fwd2 = h2_forward_point(st, fwd);
                TorusPoint back2 = h2_inverse_point(st, fwd2);
                if (!(back2.t1 == fwd.t1 && back2.t2 == fwd.t2 && back2.fiber == fwd.fiber))
                    return false;
            }
    return true;
}

bool verify_diameter_bound(const StageParams& st) {
    Box cell = tilde_cell(st, 1, 0, 0, 0);
    Rat diam2 = cell.theta1.len * cell.theta1.len + cell.theta2.len * cell.theta2.len;
    for (const FiberInterval& f : cell.fiber) diam2 += f.length() * f.length();
    Rat qqp2 = Rat(st.qqp()) * Rat(st.qqp());
    Int dd = st.d - 2;
    Int nn = st.n * st.n;
    Rat bound = (Rat(5, 4) + Rat(dd, nn)) / qqp2;
    return diam2 < bound;
}

Rat affine_opnorm_cert() { return Rat(7, 4); }

Rat stage_dh_cert(const StageParams& st) {
    Rat cert = affine_opnorm_cert();
    if (st.d > 2) {
        // psi's worst stretch, forward or inverse, of the diagonal pieces
        Int e = st.d - 2;
        if (e < 1) e = 1;
        Int base = st.n * st.qqp();
        cert *= Rat(pow_int(base, e.convert_to<unsigned>()));
    }
    return cert;
}

NormCertificate norm_bound_DH(const std::vector<StageParams>& stages) {
    Rat upper = 1;
    for (const StageParams& st : stages) upper *= stage_dh_cert(st);
    return NormCertificate{1, upper, "analytic-bound"};
}

double sampled_dh_sup(const StageParams& st, int directions) {
    double sup = 0.0;
    for (int i = 0; i < directions; ++i) {
        double phi = 2.0 * M_PI * (double(i) + 0.5) / double(directions);
        double c = std::cos(phi), s = std::sin(phi);
        double n1 = std::hypot(c, c + s);  // A1 v
        double n2 = std::hypot(c - s, c);  // A2 v
        sup = std::max(sup, std::max(n1, n2));
    }
    if (st.d > 2) {
        Int base = st.n * st.qqp();
        sup *= to_double(Rat(base));
    }
    return sup;
}

Rat stage_translation_cert(const StageParams& st) {
    return 1 + 8 * Rat(st.qqp()) / st.eps_tilde();
}

Rat stage_shear_cert(const StageParams& st) {
    BumpProfile pf{st.eps, st.eps};
    Rat one_plus = 1 + pf.beta_deriv_cert();
    return one_plus * one_plus;
}

}  // namespace tlab
