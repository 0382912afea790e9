#include "tlab/fbar.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <utility>

#include "tlab/approximation.hpp"
#include "tlab/errors.hpp"
#include "tlab/parallel.hpp"
#include "tlab/rng.hpp"

namespace tlab {

namespace {

constexpr uint32_t kNoNode = 0xffffffffu;
constexpr uint64_t kPairBudget = uint64_t(1) << 26;   // sparse-engine match pairs
constexpr uint64_t kCellBudget = uint64_t(1) << 25;   // quadratic-table cells
constexpr uint64_t kNameBudget = uint64_t(1) << 24;   // generated name length

int64_t to_i64(const Int& v) { return v.convert_to<int64_t>(); }

Int iabs(const Int& x) {
    Int r = x;
    if (r < 0) r = -r;
    return r;
}

// representative of x in [0, mod)
Int imod(const Int& x, const Int& mod) {
    Int r = x % mod;
    if (r < 0) r += mod;
    return r;
}

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

void require_same_shape(const SymbolName& a, const SymbolName& b) {
    if (a.size() != b.size()) throw InvalidInput("names must have equal length");
    if (a.size() == 0) throw InvalidInput("names must be non-empty");
}

// smallest L >= 0 with L^2 >= alpha m^2
Int ceil_sqrt_scaled(const Rat& alpha, const Int& m) {
    Int t = numerator(alpha) * m * m;
    Int d = denominator(alpha);
    Int quot = t / d;
    Int lo = sqrt(quot);
    while (lo * lo * d < t) ++lo;
    return lo;
}

// b-positions sorted by (symbol, position); equal-symbol runs are contiguous
std::vector<uint32_t> occurrence_order(const SymbolName& b) {
    std::vector<uint32_t> order(b.size());
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](uint32_t x, uint32_t y) {
        if (b.symbols[x] != b.symbols[y]) return b.symbols[x] < b.symbols[y];
        return x < y;
    });
    return order;
}

std::pair<const uint32_t*, const uint32_t*> occurrence_range(const SymbolName& b,
                                                             const std::vector<uint32_t>& order,
                                                             uint32_t sym) {
    const uint32_t* first = order.data();
    const uint32_t* last = order.data() + order.size();
    const uint32_t* lo = std::lower_bound(
        first, last, sym, [&](uint32_t idx, uint32_t s) { return b.symbols[idx] < s; });
    const uint32_t* hi = std::upper_bound(
        lo, last, sym, [&](uint32_t s, uint32_t idx) { return s < b.symbols[idx]; });
    return {lo, hi};
}

// mirrors the column-set budget: floor((1-4 eps) scale / (2 (q q')^2)) with
// scale = qbar_{n+1} for tower 1 and q_{n+1} for tower 2
Int t_star_bound(const StageParams& st, int tower) {
    Int qqp = st.qqp();
    Int qq2 = qqp * qqp;
    Rat shrink = Rat(1) - Rat(4) * st.eps;
    Int scale = tower == 1 ? st.qbar_next : st.q_next;
    Rat ratio = shrink * Rat(scale) / (Rat(2) * Rat(qq2));
    return floor_rat(ratio);
}

void validate_point(const StageParams& st, const PointDescriptor& pt) {
    if (pt.tower != 1 && pt.tower != 2) throw InvalidInput("point tower must be 1 or 2");
    Int h = st.m;
    if (pt.tower == 1) h -= 1;
    if (pt.level < 0 || pt.level >= h) throw InvalidInput("point level out of range");
    Int qqp = st.qqp();
    if (pt.col_k < 0 || pt.col_k >= qqp) throw InvalidInput("point column index out of range");
    Int ts = t_star_bound(st, pt.tower);
    if (pt.col_t < 0 || pt.col_t >= ts) throw InvalidInput("point strip index out of range");
}

// signed diagonal d with name1[p] == name2[p - d]; minimal-|d| representative
// in (-n, n) when one exists. Unique whenever 2n <= (m-1) m.
bool crt_diagonal(const Int& lx, const Int& ly, const Int& lxt, const Int& lyt, const Int& m,
                  const Int& n, Int& out) {
    Int h1 = m - 1;
    Int d1 = imod(lxt - lx, h1);
    Int d2 = imod(lyt - ly, m);
    Int j = imod(d1 - d2, h1);  // m == 1 (mod m-1)
    Int d = d2 + m * j;         // canonical representative in [0, (m-1) m)
    Int lcm = h1 * m;
    bool have = false;
    Int best = 0;
    if (d < n) {
        best = d;
        have = true;
    }
    Int dneg = d - lcm;
    if (dneg > -n) {
        Int an = iabs(dneg);
        Int ab = iabs(best);
        if (!have || an < ab) {
            best = dneg;
            have = true;
        }
    }
    out = best;
    return have;
}

// quadratic value-only LCS (two rolling rows)
uint32_t lcs_value(const SymbolName& a, const SymbolName& b) {
    size_t n = a.size();
    std::vector<uint32_t> prev(n + 1, 0), cur(n + 1, 0);
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) {
            uint32_t best = prev[j + 1];
            if (cur[j] > best) best = cur[j];
            if (a.symbols[i] == b.symbols[j] && prev[j] + 1 > best) best = prev[j] + 1;
            cur[j + 1] = best;
        }
        std::swap(prev, cur);
    }
    return prev[n];
}

Rat distance_from_matched(size_t matched, size_t n) {
    Int num = Int(n) - Int(matched);
    Int den(n);
    return Rat(num, den);
}

// adaptive exact engine: quadratic while the table fits, sparse beyond
Rat exact_distance(const SymbolName& a, const SymbolName& b) {
    uint64_t side = a.size() + 1;
    if (side * side <= kCellBudget) return fbar_distance(a, b).distance;
    return fbar_sparse(a, b).distance;
}

// columns of tower s whose cells all lie in the pulled-back seam window;
// span m (L+2) covers the m-step pasts of the m (L+1)-step futures of the
// seam cell at cycle position h q q' - 1
std::vector<char> saturation_mask(const StageParams& st, int s, const Int& big_l) {
    if (s != 1 && s != 2) throw InvalidInput("tower index must be 1 or 2");
    if (big_l < 1) throw InvalidInput("block length must be positive");
    if (st.m < 2 || st.m > (Int(1) << 31)) throw InvalidInput("stage scale out of range");
    Int qqp_i = st.qqp();
    if (qqp_i > (Int(1) << 20)) throw InvalidInput("column scan infeasible at this stage scale");
    int64_t m = to_i64(st.m);
    int64_t h = s == 1 ? m - 1 : m;
    int64_t qqp = to_i64(qqp_i);
    std::vector<char> mask(static_cast<size_t>(qqp), 0);
    Int cycle_i = Int(h) * qqp_i;
    Int span_i = st.m * (big_l + 2);
    if (span_i >= cycle_i) {
        std::fill(mask.begin(), mask.end(), 1);
        return mask;
    }
    int64_t cycle = h * qqp;
    int64_t span = to_i64(span_i);
    int64_t win = to_i64(st.m * (big_l + 1));
    int64_t lo = ((cycle - 1 - win) % cycle + cycle) % cycle;
    for (int64_t k = 0; k < qqp; ++k) {
        int64_t first = k * h;
        int64_t last = first + h - 1;
        int64_t off_first = ((first - lo) % cycle + cycle) % cycle;
        int64_t off_last = ((last - lo) % cycle + cycle) % cycle;
        if (off_first < span && off_last < span && off_first <= off_last)
            mask[static_cast<size_t>(k)] = 1;
    }
    return mask;
}

}  // namespace

// ---------------------------------------------------------------------------
// witnesses and matching engines

bool valid_witness(const SymbolName& a, const SymbolName& b, const MatchWitness& w) {
    if (w.k_indices.size() != w.l_indices.size()) return false;
    for (size_t t = 0; t < w.k_indices.size(); ++t) {
        uint32_t k = w.k_indices[t];
        uint32_t l = w.l_indices[t];
        if (k >= a.size() || l >= b.size()) return false;
        if (a.symbols[k] != b.symbols[l]) return false;
        if (t > 0 && (k <= w.k_indices[t - 1] || l <= w.l_indices[t - 1])) return false;
    }
    return true;
}

FbarResult fbar_distance(const SymbolName& a, const SymbolName& b) {
    require_same_shape(a, b);
    size_t n = a.size();
    uint64_t side = n + 1;
    if (side * side > kCellBudget)
        throw InvalidInput("quadratic table exceeds the cell budget; use fbar_sparse");
    std::vector<uint32_t> dp(static_cast<size_t>(side * side), 0);
    auto at = [&](size_t i, size_t j) -> uint32_t& { return dp[i * side + j]; };
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) {
            uint32_t best = at(i, j + 1);
            if (at(i + 1, j) > best) best = at(i + 1, j);
            if (a.symbols[i] == b.symbols[j] && at(i, j) + 1 > best) best = at(i, j) + 1;
            at(i + 1, j + 1) = best;
        }
    }
    FbarResult out;
    size_t i = n, j = n;
    while (i > 0 && j > 0) {
        if (a.symbols[i - 1] == b.symbols[j - 1] && at(i, j) == at(i - 1, j - 1) + 1) {
            out.witness.k_indices.push_back(static_cast<uint32_t>(i - 1));
            out.witness.l_indices.push_back(static_cast<uint32_t>(j - 1));
            --i;
            --j;
        } else if (at(i - 1, j) >= at(i, j - 1)) {
            --i;
        } else {
            --j;
        }
    }
    std::reverse(out.witness.k_indices.begin(), out.witness.k_indices.end());
    std::reverse(out.witness.l_indices.begin(), out.witness.l_indices.end());
    out.distance = distance_from_matched(at(n, n), n);
    return out;
}

FbarResult fbar_sparse(const SymbolName& a, const SymbolName& b) {
    require_same_shape(a, b);
    size_t n = a.size();
    std::vector<uint32_t> order = occurrence_order(b);
    std::vector<uint32_t> node_i, node_j, node_parent;
    std::vector<uint32_t> tails;  // arena ids; their j values are strictly increasing
    uint64_t pairs = 0;
    for (size_t i = 0; i < n; ++i) {
        auto [lo, hi] = occurrence_range(b, order, a.symbols[i]);
        // descending j within one i keeps same-i nodes off each other's chains
        for (const uint32_t* it = hi; it != lo;) {
            uint32_t j = *--it;
            if (++pairs > kPairBudget)
                throw InvalidInput("equal-symbol pairs exceed the sparse budget");
            auto pos = std::lower_bound(tails.begin(), tails.end(), j,
                                        [&](uint32_t id, uint32_t jj) { return node_j[id] < jj; });
            uint32_t parent = pos == tails.begin() ? kNoNode : *(pos - 1);
            node_i.push_back(static_cast<uint32_t>(i));
            node_j.push_back(j);
            node_parent.push_back(parent);
            uint32_t id = static_cast<uint32_t>(node_i.size() - 1);
            if (pos == tails.end())
                tails.push_back(id);
            else
                *pos = id;
        }
    }
    FbarResult out;
    if (!tails.empty()) {
        uint32_t id = tails.back();
        while (id != kNoNode) {
            out.witness.k_indices.push_back(node_i[id]);
            out.witness.l_indices.push_back(node_j[id]);
            id = node_parent[id];
        }
        std::reverse(out.witness.k_indices.begin(), out.witness.k_indices.end());
        std::reverse(out.witness.l_indices.begin(), out.witness.l_indices.end());
    }
    out.distance = distance_from_matched(tails.size(), n);
    return out;
}

Rat fbar_banded(const SymbolName& a, const SymbolName& b, const Int& center,
                const Int& halfwidth) {
    require_same_shape(a, b);
    if (halfwidth < 0) throw InvalidInput("band halfwidth must be non-negative");
    size_t n = a.size();
    std::vector<uint32_t> order = occurrence_order(b);
    std::vector<uint32_t> tails_j;
    uint64_t pairs = 0;
    for (size_t i = 0; i < n; ++i) {
        auto [lo, hi] = occurrence_range(b, order, a.symbols[i]);
        for (const uint32_t* it = hi; it != lo;) {
            uint32_t j = *--it;
            if (++pairs > kPairBudget)
                throw InvalidInput("equal-symbol pairs exceed the sparse budget");
            Int diff = Int(static_cast<int64_t>(i)) - Int(static_cast<int64_t>(j)) - center;
            if (iabs(diff) > halfwidth) continue;
            auto pos = std::lower_bound(tails_j.begin(), tails_j.end(), j);
            if (pos == tails_j.end())
                tails_j.push_back(j);
            else
                *pos = j;
        }
    }
    return distance_from_matched(tails_j.size(), n);
}

// ---------------------------------------------------------------------------
// sigma-orbit names

PartitionSpec level_partition(const StageParams& st) {
    if (st.m < 2) throw InvalidInput("stage m must be at least 2");
    if (st.m > (Int(1) << 30)) throw InvalidInput("stage scale too large for a level alphabet");
    int64_t m = to_i64(st.m);
    PartitionSpec p;
    p.t1_base = 0;
    p.t2_base = static_cast<uint32_t>(m - 1);
    p.junk_id = static_cast<uint32_t>(2 * m - 1);
    p.mark_wraparound = false;
    return p;
}

PartitionSpec level_partition_with_junk(const StageParams& st) {
    PartitionSpec p = level_partition(st);
    p.mark_wraparound = true;
    return p;
}

uint32_t partition_stride(const StageParams& st) {
    if (st.m < 2) throw InvalidInput("stage m must be at least 2");
    if (st.m > (Int(1) << 30)) throw InvalidInput("stage scale too large for a level alphabet");
    return static_cast<uint32_t>(2 * to_i64(st.m));
}

SymbolName names_from_towers(const TowerPair& pair, const PartitionSpec& part,
                             const PointDescriptor& pt, const Int& length) {
    const StageParams& st = pair.st;
    validate_point(st, pt);
    if (length < 1) throw InvalidInput("name length must be positive");
    if (length > Int(kNameBudget)) throw InvalidInput("name length exceeds the generation budget");
    if (st.m > (Int(1) << 30)) throw InvalidInput("stage scale too large for symbolic names");
    if (st.qqp() > (Int(1) << 20)) throw InvalidInput("column scale too large for symbolic names");
    int64_t m = to_i64(st.m);
    int64_t h = pt.tower == 1 ? m - 1 : m;
    uint32_t base = pt.tower == 1 ? part.t1_base : part.t2_base;
    if (Int(base) + Int(h) - 1 > Int(0xffffffffu))
        throw InvalidInput("symbol base overflows 32 bits");
    int64_t cycle = h * to_i64(st.qqp());
    int64_t pos = to_i64(pt.col_k) * h + to_i64(pt.level);  // < cycle by validation
    size_t n = length.convert_to<size_t>();
    SymbolName out;
    out.symbols.reserve(n);
    for (size_t p = 0; p < n; ++p) {
        if (part.mark_wraparound && p >= 1 && pos == 0)
            out.symbols.push_back(part.junk_id);
        else
            out.symbols.push_back(base + static_cast<uint32_t>(pos % h));
        if (++pos == cycle) pos = 0;
    }
    return out;
}

SymbolName product_name(const SymbolName& a, const SymbolName& b, uint32_t stride) {
    require_same_shape(a, b);
    if (stride == 0) throw InvalidInput("product stride must be positive");
    SymbolName out;
    out.symbols.reserve(a.size());
    for (size_t i = 0; i < a.size(); ++i) {
        uint64_t y = b.symbols[i];
        if (y >= stride) throw InvalidInput("second component exceeds the product stride");
        uint64_t s = uint64_t(a.symbols[i]) * stride + y;
        if (s > 0xffffffffull) throw InvalidInput("product symbol overflows 32 bits");
        out.symbols.push_back(static_cast<uint32_t>(s));
    }
    return out;
}

// ---------------------------------------------------------------------------
// offset block bound

AlignmentBound alignment_bound(const Int& m, const Rat& alpha, const Rat& r, const Int& k) {
    if (m < 2) throw InvalidInput("alignment bound needs m >= 2");
    if (alpha <= 0 || alpha >= 1) throw InvalidInput("alpha must lie in (0, 1)");
    if (r <= 0 || r >= 1) throw InvalidInput("substantiality r must lie in (0, 1)");
    Rat r2 = r * r;
    Rat r4 = r2 * r2;
    Int m1 = m - 1;
    Rat cap_rat = alpha * Rat(m1) / r4;
    Int k_cap = ceil_rat(cap_rat);
    if (k < 0 || k > k_cap)
        throw InvalidInput("offset k outside [0, ceil(alpha (m-1) / r^4)]");
    Int big_l = ceil_sqrt_scaled(alpha, m);
    Int num = (k + 1) * m;
    Int den = m * big_l;
    AlignmentBound out;
    out.exact = Rat(num, den);
    Rat ctilde2 = Rat(2) / r4;
    Rat root = rat_sqrt_upper(alpha);
    out.simplified_upper = ctilde2 * root;
    out.k_cap = k_cap;
    out.block_length = big_l;
    Rat lhs = out.exact * out.exact;
    Rat rhs = ctilde2 * ctilde2;
    rhs = rhs * alpha;
    out.below_simplified = lhs <= rhs;
    Rat thresh = r4 / 4;
    out.asymptotic_alpha = alpha < thresh;
    return out;
}

// ---------------------------------------------------------------------------
// quadruples

QuadrupleSample quadruple_at(const StageParams& st, const PointDescriptor& x,
                             const PointDescriptor& y, const PointDescriptor& xt,
                             const PointDescriptor& yt) {
    if (x.tower != 1 || xt.tower != 1) throw InvalidInput("x points must lie in tower 1");
    if (y.tower != 2 || yt.tower != 2) throw InvalidInput("y points must lie in tower 2");
    validate_point(st, x);
    validate_point(st, y);
    validate_point(st, xt);
    validate_point(st, yt);
    Int m = st.m;
    Int h1 = m - 1;
    QuadrupleSample qs;
    qs.x = x;
    qs.y = y;
    qs.xt = xt;
    qs.yt = yt;
    qs.s = imod(-y.level, m);
    qs.s_tilde = imod(-yt.level, m);
    Int ax = imod(x.level + qs.s, h1);
    Int axt = imod(xt.level + qs.s_tilde, h1);
    Int delta = imod(ax - axt, h1);
    Int half = h1 / 2;
    if (delta <= half)
        qs.offset = delta;
    else
        qs.offset = delta - h1;
    return qs;
}

MatchLemmaRow lemma_quadruple_check(const TowerPair& pair, const QuadrupleSample& quad,
                                    const Rat& alpha, const Rat& r) {
    const StageParams& st = pair.st;
    QuadrupleSample fresh = quadruple_at(st, quad.x, quad.y, quad.xt, quad.yt);
    if (fresh.s != quad.s || fresh.s_tilde != quad.s_tilde || fresh.offset != quad.offset)
        throw InvalidInput("quadruple anchors disagree with its points");
    Int m = st.m;
    Int koff = iabs(quad.offset);
    AlignmentBound ab = alignment_bound(m, alpha, r, koff);
    Int n = m * ab.block_length;
    if (n > Int(kNameBudget)) throw InvalidInput("name length exceeds the generation budget");

    MatchLemmaRow row;
    row.quad = quad;
    row.bound = ab.exact;

    // the lemma's alignment: match from the later of the two anchor times on
    Int block;
    if (quad.offset >= 0) {
        Int cand = quad.s_tilde + quad.offset * m;
        block = quad.s;
        if (cand > block) block = cand;
    } else {
        Int cand = quad.s + (-quad.offset) * m;
        block = quad.s_tilde;
        if (cand > block) block = cand;
    }
    Int clamped = block;
    if (clamped > n) clamped = n;
    row.constructed = Rat(clamped, n);

    Int d(0);
    row.has_diag = crt_diagonal(quad.x.level, quad.y.level, quad.xt.level, quad.yt.level, m, n, d);
    row.diag = d;

    PartitionSpec part = level_partition(st);
    uint32_t stride = partition_stride(st);
    SymbolName nx = names_from_towers(pair, part, quad.x, n);
    SymbolName ny = names_from_towers(pair, part, quad.y, n);
    SymbolName nxt = names_from_towers(pair, part, quad.xt, n);
    SymbolName nyt = names_from_towers(pair, part, quad.yt, n);
    SymbolName a = product_name(nx, ny, stride);
    SymbolName b = product_name(nxt, nyt, stride);

    FbarResult sparse = fbar_sparse(a, b);
    row.dp = sparse.distance;
    bool sparse_ok = valid_witness(a, b, sparse.witness);
    Int matched_sparse(sparse.witness.size());
    Rat sparse_from_witness = Rat(Int(n - matched_sparse), n);
    sparse_ok = sparse_ok && sparse_from_witness == row.dp;

    // single-diagonal regime: the closed form and the unit band are exact
    Int lcm = (m - 1) * m;
    bool single = 2 * n <= lcm;
    Rat closed(1);
    if (row.has_diag) {
        Int ad = iabs(d);
        closed = Rat(ad, n);
    }
    row.closed_form_agrees = !single || row.dp == closed;
    Int center = d;
    Rat banded = fbar_banded(a, b, center, Int(0));
    row.banded_agrees = !single || banded == row.dp;

    // explicit offset-block witness: pairs (s + km + j, s~ + j) for k < 0,
    // (s + j, s~ + km + j) for k >= 0
    MatchWitness cw;
    if (clamped < n) {
        int64_t nn = to_i64(n);
        Int shift_i = quad.offset * m;
        int64_t shift = to_i64(shift_i);
        int64_t ia = quad.offset >= 0 ? to_i64(quad.s) : to_i64(quad.s) - shift;
        int64_t ib = quad.offset >= 0 ? to_i64(quad.s_tilde) + shift : to_i64(quad.s_tilde);
        int64_t count = nn - (ia > ib ? ia : ib);
        cw.k_indices.reserve(static_cast<size_t>(count));
        cw.l_indices.reserve(static_cast<size_t>(count));
        for (int64_t j = 0; j < count; ++j) {
            cw.k_indices.push_back(static_cast<uint32_t>(ia + j));
            cw.l_indices.push_back(static_cast<uint32_t>(ib + j));
        }
    }
    Int expect_len = n - clamped;
    Int got_len(cw.k_indices.size());
    row.witness_valid = valid_witness(a, b, cw) && got_len == expect_len;

    Rat gap1 = row.dp - row.constructed;
    Rat gap2 = row.constructed - row.bound;
    row.pass = sparse_ok && row.closed_form_agrees && row.banded_agrees && row.witness_valid &&
               gap1 <= 0 && gap2 <= 0 && ab.below_simplified;
    return row;
}

Int saturated_columns(const StageParams& st, int s, const Int& big_l) {
    std::vector<char> mask = saturation_mask(st, s, big_l);
    int64_t count = 0;
    for (char c : mask) count += c;
    return Int(count);
}

// ---------------------------------------------------------------------------
// match-lemma sampling

namespace {

struct TrialOut {
    MatchLemmaRow row;
    uint64_t draws = 0;
};

PointDescriptor draw_point(std::mt19937_64& gen, int tower, uint64_t h, uint64_t qqp, uint64_t ts,
                           const std::vector<char>* excluded) {
    PointDescriptor pt;
    pt.tower = tower;
    pt.level = Int(uniform_below(gen, h));
    uint64_t col = uniform_below(gen, qqp);
    if (excluded != nullptr) {
        while ((*excluded)[static_cast<size_t>(col)]) col = uniform_below(gen, qqp);
    }
    pt.col_k = Int(col);
    pt.col_t = Int(uniform_below(gen, ts));
    return pt;
}

}  // namespace

MatchLemmaReport verify_match_lemma(const TowerPair& pair, const Rat& alpha, const Int& trials,
                                    uint64_t seed, const Rat& r) {
    const StageParams& st = pair.st;
    if (trials < 1 || trials > 100000) throw InvalidInput("trial count must lie in [1, 100000]");
    MatchLemmaReport rep;
    rep.alpha = alpha;
    rep.r = r;
    rep.m = st.m;

    AlignmentBound ab0 = alignment_bound(st.m, alpha, r, Int(0));
    rep.block_length = ab0.block_length;
    rep.name_length = st.m * ab0.block_length;
    rep.k_cap = ab0.k_cap;

    SpeedReport spd = speed_certificate(st);
    Rat mm = Rat(st.m);
    Rat m2 = mm * mm;
    rep.c1 = spd.discrepancy * m2;
    Rat r2 = r * r;
    Rat r4 = r2 * r2;
    Rat quarter_r4 = r4 / 4;
    Rat r20 = r / 20;
    Rat c1sq = rep.c1 * rep.c1;
    Rat term = (r20 * r20) / c1sq;
    rep.alpha0 = quarter_r4 < term ? quarter_r4 : term;
    Rat ctilde2 = Rat(2) / r4;
    rep.c2 = ctilde2 + r2;
    rep.mismatch_mass_1 = spd.wrap1 / 2;
    rep.mismatch_mass_2 = spd.wrap2 / 2;
    rep.tower_measure_1 = Rat(pair.height1) * pair.base1.measure();
    rep.tower_measure_2 = Rat(pair.height2) * pair.base2.measure();

    std::vector<char> sat1 = saturation_mask(st, 1, rep.block_length);
    std::vector<char> sat2 = saturation_mask(st, 2, rep.block_length);
    int64_t c1n = 0, c2n = 0;
    for (char c : sat1) c1n += c;
    for (char c : sat2) c2n += c;
    rep.saturated_1 = Int(c1n);
    rep.saturated_2 = Int(c2n);
    Int qqp_i = st.qqp();
    rep.f_filter_active = rep.saturated_1 < qqp_i && rep.saturated_2 < qqp_i;

    Int ts1 = t_star_bound(st, 1);
    Int ts2 = t_star_bound(st, 2);
    if (ts1 < 1 || ts2 < 1) throw InvalidInput("stage has no interior tower columns");
    if (rep.name_length > Int(kNameBudget))
        throw InvalidInput("name length exceeds the generation budget");
    uint64_t h1 = static_cast<uint64_t>(to_i64(st.m)) - 1;
    uint64_t h2 = h1 + 1;
    uint64_t qqp = static_cast<uint64_t>(to_i64(qqp_i));
    uint64_t ts1u = static_cast<uint64_t>(to_i64(ts1));
    uint64_t ts2u = static_cast<uint64_t>(to_i64(ts2));
    const std::vector<char>* ex1 = rep.f_filter_active ? &sat1 : nullptr;
    const std::vector<char>* ex2 = rep.f_filter_active ? &sat2 : nullptr;

    size_t count = trials.convert_to<size_t>();
    std::function<TrialOut(size_t)> fn = [&](size_t t) -> TrialOut {
        std::mt19937_64 gen = make_stream(seed, t);
        TrialOut out;
        for (int attempt = 0; attempt < 1000000; ++attempt) {
            PointDescriptor x = draw_point(gen, 1, h1, qqp, ts1u, ex1);
            PointDescriptor y = draw_point(gen, 2, h2, qqp, ts2u, ex2);
            PointDescriptor xt = draw_point(gen, 1, h1, qqp, ts1u, ex1);
            PointDescriptor yt = draw_point(gen, 2, h2, qqp, ts2u, ex2);
            QuadrupleSample q = quadruple_at(st, x, y, xt, yt);
            ++out.draws;
            Int ko = iabs(q.offset);
            if (ko <= rep.k_cap) {
                out.row = lemma_quadruple_check(pair, q, alpha, r);
                return out;
            }
        }
        // acceptance has probability at least 3/(m-1); an exhausted budget is
        // reported as a failing row rather than thrown across the worker pool
        out.row.pass = false;
        return out;
    };
    std::vector<TrialOut> outs = map_chunks<TrialOut>(count, fn);

    uint64_t draws = 0;
    Int violations(0);
    Rat max_dp(0);
    Int max_off(0);
    Rat gap_dp_con(-1), gap_con_bound(-1), gap_bound_simpl;
    Int closed_bad(0), banded_bad(0), witness_bad(0);
    Rat sq_alpha = ctilde2 * ctilde2;
    sq_alpha = sq_alpha * alpha;
    bool first = true;
    for (const TrialOut& t : outs) {
        draws += t.draws;
        const MatchLemmaRow& row = t.row;
        if (!row.pass) ++violations;
        if (row.dp > max_dp) max_dp = row.dp;
        Int ko = iabs(row.quad.offset);
        if (ko > max_off) max_off = ko;
        Rat g1 = row.dp - row.constructed;
        Rat g2 = row.constructed - row.bound;
        Rat g3 = row.bound * row.bound;
        g3 = g3 - sq_alpha;
        if (first || g1 > gap_dp_con) gap_dp_con = g1;
        if (first || g2 > gap_con_bound) gap_con_bound = g2;
        if (first || g3 > gap_bound_simpl) gap_bound_simpl = g3;
        first = false;
        if (!row.closed_form_agrees) ++closed_bad;
        if (!row.banded_agrees) ++banded_bad;
        if (!row.witness_valid) ++witness_bad;
        rep.rows.push_back(row);
    }
    rep.draws = Int(draws);
    rep.accepted = Int(static_cast<int64_t>(outs.size()));
    rep.violations = violations;
    rep.max_dp = max_dp;

    Int h1_i = st.m - 1;
    Int twoK1 = 2 * rep.k_cap + 1;
    Int accept_num = twoK1;
    if (accept_num > h1_i) accept_num = h1_i;
    rep.accept_exact = Rat(accept_num, h1_i);
    Rat floor_rhs = Rat(2) * alpha / r4;
    rep.accept_floor = floor_rhs;

    // triangle through the first sampled left pairs
    Rat tri_gap(0);
    if (rep.rows.size() >= 3) {
        PartitionSpec part = level_partition(st);
        uint32_t stride = partition_stride(st);
        Int n = rep.name_length;
        std::vector<SymbolName> names;
        for (size_t i = 0; i < 3; ++i) {
            const QuadrupleSample& q = rep.rows[i].quad;
            SymbolName nx = names_from_towers(pair, part, q.x, n);
            SymbolName ny = names_from_towers(pair, part, q.y, n);
            names.push_back(product_name(nx, ny, stride));
        }
        Rat d01 = fbar_sparse(names[0], names[1]).distance;
        Rat d12 = fbar_sparse(names[1], names[2]).distance;
        Rat d02 = fbar_sparse(names[0], names[2]).distance;
        Rat lhs = d02 - d01;
        lhs = lhs - d12;
        tri_gap = lhs;
    }

    Rat residue_ratio = Rat(twoK1, h1_i);
    push(rep.entries, "closelevel acceptance at least the residue-count floor", residue_ratio, ">",
         floor_rhs);
    push(rep.entries, "every sampled offset within the closelevel cap", Rat(max_off), "<=",
         Rat(rep.k_cap));
    push(rep.entries, "dynamic program at most the constructed alignment on every row", gap_dp_con,
         "<=", Rat(0));
    push(rep.entries, "constructed alignment at most the offset block bound on every row",
         gap_con_bound, "<=", Rat(0));
    push(rep.entries, "offset block bound at most the simplified bound on every row",
         gap_bound_simpl, "<=", Rat(0));
    push(rep.entries, "sparse and closed-form distances agree on every row", Rat(closed_bad), "==",
         Rat(0));
    push(rep.entries, "banded window distance agrees on every row", Rat(banded_bad), "==", Rat(0));
    push(rep.entries, "constructed alignment is a valid monotone witness on every row",
         Rat(witness_bad), "==", Rat(0));
    push(rep.entries, "triangle inequality through sampled anchors", tri_gap, "<=", Rat(0));

    rep.pass = entries_pass(rep.entries) && rep.violations == 0;
    return rep;
}

// ---------------------------------------------------------------------------
// product partitions

SymbolName apply_partition(const SymbolName& name, const ProductPartition& part,
                           const StageParams& st) {
    PartitionSpec spec = level_partition(st);  // also guards the stage scale
    uint32_t stride = partition_stride(st);
    int64_t m = to_i64(st.m);
    int64_t h1 = m - 1;
    int64_t h2 = m;
    uint32_t junk = spec.junk_id;
    auto check_cuts = [](const std::vector<Int>& cuts, int64_t h) {
        int64_t prev = 0;
        for (const Int& c : cuts) {
            if (c <= prev || c >= h) throw InvalidInput("partition cuts must ascend strictly inside the tower");
            prev = to_i64(c);
        }
    };
    check_cuts(part.t1_cuts, h1);
    check_cuts(part.t2_cuts, h2);
    std::vector<int64_t> cuts1, cuts2;
    for (const Int& c : part.t1_cuts) cuts1.push_back(to_i64(c));
    for (const Int& c : part.t2_cuts) cuts2.push_back(to_i64(c));
    uint32_t n1 = static_cast<uint32_t>(cuts1.size() + 1);
    uint32_t n2 = static_cast<uint32_t>(cuts2.size() + 1);
    uint32_t out_stride = n2 + (part.refine_junk ? 1 : 0);
    auto cls = [](const std::vector<int64_t>& cuts, int64_t level) -> uint32_t {
        auto it = std::upper_bound(cuts.begin(), cuts.end(), level);
        return static_cast<uint32_t>(it - cuts.begin());
    };
    SymbolName out;
    out.symbols.reserve(name.size());
    for (uint32_t sym : name.symbols) {
        uint32_t x = sym / stride;
        uint32_t y = sym % stride;
        uint32_t xcode, ycode;
        if (x == junk) {
            // an unrefined partition sees the abstract base level instead
            xcode = part.refine_junk ? n1 : cls(cuts1, 0);
        } else {
            if (x >= static_cast<uint32_t>(h1))
                throw InvalidInput("name symbol is not from the canonical level alphabet");
            xcode = cls(cuts1, static_cast<int64_t>(x));
        }
        if (y == junk) {
            ycode = part.refine_junk ? n2 : cls(cuts2, 0);
        } else {
            if (y < static_cast<uint32_t>(h1) || y >= static_cast<uint32_t>(h1 + h2))
                throw InvalidInput("name symbol is not from the canonical level alphabet");
            ycode = cls(cuts2, static_cast<int64_t>(y) - h1);
        }
        out.symbols.push_back(xcode * out_stride + ycode);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Katok-Sataev probe

namespace {

struct ProbeSample {
    Rat dist;
    bool guard = false;     // single-diagonal regime applies to this length
    bool closed_ok = true;  // engine distance equals the closed form
    bool close_ok = true;   // both members within the closelevel cap
    std::vector<Rat> part_dist;
    std::vector<char> part_coarse_ok;
};

}  // namespace

KsProbeReport ks_criterion_probe(const TowerPair& pair, const std::vector<Rat>& epsilons,
                                 const std::vector<ProductPartition>& partitions,
                                 const Int& samples_per_eps, uint64_t seed) {
    const StageParams& st = pair.st;
    if (epsilons.empty()) throw InvalidInput("probe needs at least one epsilon");
    if (epsilons.size() > 64) throw InvalidInput("probe accepts at most 64 epsilons");
    for (const Rat& e : epsilons)
        if (e <= 0 || e > 1) throw InvalidInput("epsilon must lie in (0, 1]");
    if (samples_per_eps < 1 || samples_per_eps > 100000)
        throw InvalidInput("samples per epsilon must lie in [1, 100000]");
    Rat r(1, 4);
    Rat r2 = r * r;
    Rat r4 = r2 * r2;

    KsProbeReport rep;
    SpeedReport spd = speed_certificate(st);
    Rat mm = Rat(st.m);
    Rat m2 = mm * mm;
    rep.c1 = spd.discrepancy * m2;
    Rat quarter_r4 = r4 / 4;
    Rat c1sq = rep.c1 * rep.c1;
    Rat r20 = r / 20;
    Rat term = (r20 * r20) / c1sq;
    rep.alpha0 = quarter_r4 < term ? quarter_r4 : term;
    Rat ctilde2 = Rat(2) / r4;
    rep.c2 = ctilde2 + r2;

    Int ts1 = t_star_bound(st, 1);
    Int ts2 = t_star_bound(st, 2);
    if (ts1 < 1 || ts2 < 1) throw InvalidInput("stage has no interior tower columns");
    Int m = st.m;
    Int h1 = m - 1;
    Rat mu1 = Rat(pair.height1) * pair.base1.measure();
    Rat mu2 = Rat(pair.height2) * pair.base2.measure();
    Rat level_mass = (mu1 / Rat(h1)) * (mu2 / mm);
    Int lcm = h1 * m;
    uint64_t qqp = static_cast<uint64_t>(to_i64(st.qqp()));
    PartitionSpec pure = level_partition(st);
    PartitionSpec junked = level_partition_with_junk(st);
    uint32_t stride = partition_stride(st);

    // surface bad cut lists here; the sampling workers must not throw
    {
        SymbolName probe_sym;
        probe_sym.symbols.push_back(pure.t2_base);  // levels (0, 0)
        for (const ProductPartition& pp : partitions) apply_partition(probe_sym, pp, st);
    }

    size_t samples = samples_per_eps.convert_to<size_t>();
    Rat ratio_max(0);
    Rat measure_gap_min;
    bool measure_first = true;
    Int close_bad(0), closed_bad(0), coarse_bad(0);

    for (size_t ei = 0; ei < epsilons.size(); ++ei) {
        const Rat& eps = epsilons[ei];
        KsProbeRow row;
        row.eps = eps;
        Rat c2sq = rep.c2 * rep.c2;
        Rat scaled = eps * eps / (Rat(4) * c2sq);
        row.alpha = rep.alpha0 < scaled ? rep.alpha0 : scaled;
        AlignmentBound ab = alignment_bound(m, row.alpha, r, Int(0));
        row.block_length = ab.block_length;
        Int n = m * ab.block_length;
        row.name_length = n;
        if (n > Int(kNameBudget)) throw InvalidInput("name length exceeds the generation budget");
        // largest w with 2w/N < eps
        Int wnum = numerator(eps) * n - 1;
        Int wden = 2 * denominator(eps);
        Int w = wnum / wden;
        row.window = w;
        Int members = 2 * w + 1;
        row.k_measure = Rat(members) * level_mass;
        row.samples = Int(static_cast<int64_t>(samples + 1));
        bool guard = 2 * n <= lcm;
        uint64_t span = static_cast<uint64_t>(to_i64(members));
        int64_t wi = to_i64(w);
        int64_t n64 = to_i64(n);

        std::function<ProbeSample(size_t)> fn = [&](size_t si) -> ProbeSample {
            std::mt19937_64 gen =
                make_stream(seed, (static_cast<uint64_t>(ei) << 20) + static_cast<uint64_t>(si));
            int64_t di, dj;
            uint64_t cxa, cya, cxb, cyb;
            if (si == 0) {
                di = -wi;
                dj = wi;
                cxa = cya = cxb = cyb = 0;
            } else {
                di = static_cast<int64_t>(uniform_below(gen, span)) - wi;
                dj = static_cast<int64_t>(uniform_below(gen, span)) - wi;
                cxa = uniform_below(gen, qqp);
                cya = uniform_below(gen, qqp);
                cxb = uniform_below(gen, qqp);
                cyb = uniform_below(gen, qqp);
            }
            PointDescriptor xa, ya, xb, yb;
            xa.tower = 1;
            xa.level = imod(Int(-di), h1);
            ya.tower = 2;
            ya.level = imod(Int(-di), m);
            xb.tower = 1;
            xb.level = imod(Int(-dj), h1);
            yb.tower = 2;
            yb.level = imod(Int(-dj), m);
            ProbeSample out;
            out.guard = guard;
            SymbolName a = product_name(names_from_towers(pair, pure, xa, n),
                                        names_from_towers(pair, pure, ya, n), stride);
            SymbolName b = product_name(names_from_towers(pair, pure, xb, n),
                                        names_from_towers(pair, pure, yb, n), stride);
            out.dist = exact_distance(a, b);
            if (guard) {
                int64_t dd = di - dj;
                if (dd < 0) dd = -dd;
                Rat closed(1);
                if (dd < n64) {
                    Int num(dd);
                    closed = Rat(num, n);
                }
                out.closed_ok = out.dist == closed;
            }
            PointDescriptor anchor_x, anchor_y;
            anchor_x.tower = 1;
            anchor_y.tower = 2;
            Int off_a = quadruple_at(st, xa, ya, anchor_x, anchor_y).offset;
            Int off_b = quadruple_at(st, xb, yb, anchor_x, anchor_y).offset;
            Int oa = iabs(off_a);
            Int ob = iabs(off_b);
            out.close_ok = oa <= ab.k_cap && ob <= ab.k_cap;
            for (const ProductPartition& pp : partitions) {
                SymbolName ca, cb;
                if (pp.refine_junk) {
                    PointDescriptor jxa = xa, jya = ya, jxb = xb, jyb = yb;
                    jxa.col_k = Int(cxa);
                    jya.col_k = Int(cya);
                    jxb.col_k = Int(cxb);
                    jyb.col_k = Int(cyb);
                    SymbolName ja = product_name(names_from_towers(pair, junked, jxa, n),
                                                 names_from_towers(pair, junked, jya, n), stride);
                    SymbolName jb = product_name(names_from_towers(pair, junked, jxb, n),
                                                 names_from_towers(pair, junked, jyb, n), stride);
                    ca = apply_partition(ja, pp, st);
                    cb = apply_partition(jb, pp, st);
                } else {
                    ca = apply_partition(a, pp, st);
                    cb = apply_partition(b, pp, st);
                }
                size_t matched = lcs_value(ca, cb);
                Rat dist_c = distance_from_matched(matched, ca.size());
                out.part_dist.push_back(dist_c);
                char ok = 1;
                if (!pp.refine_junk && dist_c > out.dist) ok = 0;
                out.part_coarse_ok.push_back(ok);
            }
            return out;
        };
        std::vector<ProbeSample> outs = map_chunks<ProbeSample>(samples + 1, fn);

        Rat max_fbar(0);
        std::vector<KsPartitionRow> prows(partitions.size());
        for (size_t pi = 0; pi < partitions.size(); ++pi) {
            prows[pi].partition = partitions[pi].name;
            prows[pi].max_fbar = Rat(0);
            prows[pi].failures = Int(0);
            prows[pi].samples = row.samples;
        }
        bool row_ok = true;
        for (const ProbeSample& smp : outs) {
            if (smp.dist > max_fbar) max_fbar = smp.dist;
            if (smp.guard && !smp.closed_ok) {
                ++closed_bad;
                row_ok = false;
            }
            if (!smp.close_ok) {
                ++close_bad;
                row_ok = false;
            }
            for (size_t pi = 0; pi < partitions.size(); ++pi) {
                const Rat& dc = smp.part_dist[pi];
                if (dc > prows[pi].max_fbar) prows[pi].max_fbar = dc;
                if (dc >= eps) prows[pi].failures += 1;
                if (!smp.part_coarse_ok[pi]) ++coarse_bad;
            }
        }
        row.max_fbar = max_fbar;
        row.partitions = std::move(prows);
        Rat mgap = row.k_measure - row.alpha;
        if (measure_first || mgap < measure_gap_min) measure_gap_min = mgap;
        measure_first = false;
        Rat ratio = max_fbar / eps;
        if (ratio > ratio_max) ratio_max = ratio;
        row.pass = row_ok && max_fbar < eps && mgap > 0;
        rep.rows.push_back(std::move(row));
    }

    push(rep.entries, "every window distance below its epsilon", ratio_max, "<", Rat(1));
    push(rep.entries, "every exhibited measure above its alpha", measure_gap_min, ">", Rat(0));
    push(rep.entries, "every sampled member within the closelevel cap", Rat(close_bad), "==",
         Rat(0));
    push(rep.entries, "engine distance equals the diagonal closed form on every pair",
         Rat(closed_bad), "==", Rat(0));
    push(rep.entries, "coarsening never increases the distance", Rat(coarse_bad), "==", Rat(0));
    Rat slack = Rat(2) * rat_sqrt_upper(rep.alpha0);
    push(rep.entries, "anchor slack covers the measure correction", slack, "<=", r2);

    bool rows_ok = true;
    for (const KsProbeRow& row : rep.rows)
        if (!row.pass) rows_ok = false;
    rep.pass = entries_pass(rep.entries) && rows_ok;
    return rep;
}

}  // namespace tlab
