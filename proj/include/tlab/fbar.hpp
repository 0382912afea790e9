#pragma once

/**
 * @file fbar.hpp
 * @brief The f-bar (order-preserving match) distance on symbolic names,
 *        sigma-orbit name generation from the tower pair, the offset
 *        block-matching bound, and the finite-scale match-lemma and
 *        Katok-Sataev style checkers.
 *
 * Names are generated from the abstract periodic process (level and column
 * indices only), never from pointwise conjugation images, so every distance
 * here is an exact rational.  A point's sigma-orbit walks its tower
 * cyclically: the level advances each step, the column advances at the top
 * of a pass, and the step out of the last column is the one place the
 * finite stage's map differs from the abstract permutation.  Names of the
 * abstract permutation are pure level sequences; the divergence model marks
 * exactly those seam-exit arrivals with a junk symbol and carries the exact
 * wraparound mismatch mass alongside.
 *
 * Because the two tower heights m-1 and m are coprime, a pair of product
 * names of length N with 2N <= (m-1) m can only match along one diagonal;
 * the checkers exploit the closed form and cross-verify it against the
 * sparse matching engine.
 */

#include <cstdint>
#include <string>
#include <vector>

#include "tlab/towers.hpp"

namespace tlab {

// ---------------------------------------------------------------------------
// names and witnesses

struct SymbolName {
    std::vector<uint32_t> symbols;  // non-empty

    size_t size() const { return symbols.size(); }
};

// strictly increasing index sequences of equal length; position k_indices[i]
// of the first name carries the same symbol as l_indices[i] of the second
struct MatchWitness {
    std::vector<uint32_t> k_indices;
    std::vector<uint32_t> l_indices;

    size_t size() const { return k_indices.size(); }
};

bool valid_witness(const SymbolName& a, const SymbolName& b, const MatchWitness& w);

struct FbarResult {
    Rat distance;  // 1 - matched/length
    MatchWitness witness;
};

// quadratic dynamic program with full witness reconstruction; throws
// InvalidInput on a length mismatch or when the table would exceed 2^25
// cells (the sparse engine has no such limit)
FbarResult fbar_distance(const SymbolName& a, const SymbolName& b);

// sparse matching (occurrence lists + patience chains); same value and a
// witness, cost proportional to the number of equal-symbol position pairs
FbarResult fbar_sparse(const SymbolName& a, const SymbolName& b);

// distance using only match pairs with |i - j - center| <= halfwidth; an
// upper bound on fbar, exact when every equal-symbol pair lies in the band
Rat fbar_banded(const SymbolName& a, const SymbolName& b, const Int& center,
                const Int& halfwidth);

// ---------------------------------------------------------------------------
// sigma-orbit names

// symbol IDs: tower-1 levels get t1_base..t1_base+m-2, tower-2 levels
// t2_base..t2_base+m-1; seam-exit arrivals emit junk_id when marked
struct PartitionSpec {
    uint32_t t1_base = 0;
    uint32_t t2_base = 0;
    uint32_t junk_id = 0;
    bool mark_wraparound = false;
};

// pure level names: t1 0..m-2, t2 m-1..2m-2, junk unused
PartitionSpec level_partition(const StageParams& st);
// same IDs plus junk_id = 2m-1 at seam-exit arrivals
PartitionSpec level_partition_with_junk(const StageParams& st);

// componentwise pair alphabet stride: one past the largest single-point ID
uint32_t partition_stride(const StageParams& st);

struct PointDescriptor {
    int tower = 1;  // 1 or 2
    Int level;      // 0 <= level < height(tower)
    Int col_k;      // 0 <= col_k < q q'
    Int col_t;      // 0 <= col_t < t*_s; names do not depend on it
};

// the length-N sigma-orbit name of one point
SymbolName names_from_towers(const TowerPair& pair, const PartitionSpec& part,
                             const PointDescriptor& pt, const Int& length);

// componentwise pairing into the product alphabet: a[i] * stride + b[i]
SymbolName product_name(const SymbolName& a, const SymbolName& b, uint32_t stride);

// ---------------------------------------------------------------------------
// offset block bound

struct AlignmentBound {
    Rat exact;             // (k+1) m / (m ceil(sqrt(alpha) m))
    Rat simplified_upper;  // (2/r^4) sqrt(alpha), rounded up within 2^-32
    Int k_cap;             // ceil(alpha (m-1) / r^4)
    Int block_length;      // ceil(sqrt(alpha) m)
    bool below_simplified;  // exact^2 <= (2/r^4)^2 alpha, compared exactly
    bool asymptotic_alpha;  // alpha < r^4 / 4
};

// bound on the unmatched fraction after aligning at offset k; throws
// InvalidInput when m < 2, alpha outside (0,1), r outside (0,1), or
// k outside [0, k_cap]
AlignmentBound alignment_bound(const Int& m, const Rat& alpha, const Rat& r,
                               const Int& k);

// ---------------------------------------------------------------------------
// quadruples and the match-lemma checker

// levels and columns of (x, y, xt, yt) with x, xt in tower 1 and y, yt in
// tower 2; s / s_tilde are the steps bringing y / yt to level 0 of tower 2
// and offset is the minimal-absolute-value level difference of the x-parts
// at those anchors, a residue mod (m-1)
struct QuadrupleSample {
    PointDescriptor x, y, xt, yt;
    Int s, s_tilde;
    Int offset;
};

// validates towers and ranges, computes the anchors and the offset
QuadrupleSample quadruple_at(const StageParams& st, const PointDescriptor& x,
                             const PointDescriptor& y, const PointDescriptor& xt,
                             const PointDescriptor& yt);

struct MatchLemmaRow {
    QuadrupleSample quad;
    bool has_diag = false;  // a matching diagonal lies inside the window
    Int diag;               // signed; name1[p] pairs with name2[p - diag]
    Rat dp;                 // exact distance from the sparse engine
    Rat constructed;        // distance of the lemma's offset-block witness
    Rat bound;              // (|offset|+1) m / N
    bool closed_form_agrees = false;  // sparse == |diag|/N (single-diagonal regime)
    bool banded_agrees = false;       // band around diag reproduces the distance
    bool witness_valid = false;       // explicit offset-block witness checks out
    bool pass = false;                // dp <= constructed <= bound <= simplified
};

// checks one quadruple at name length N = m ceil(sqrt(alpha) m); throws
// InvalidInput when |offset| exceeds ceil(alpha (m-1) / r^4)
MatchLemmaRow lemma_quadruple_check(const TowerPair& pair, const QuadrupleSample& quad,
                                    const Rat& alpha, const Rat& r = Rat(1, 4));

// columns of tower s whose every cell lies in the pulled-back seam window
// of length m (block_length + 2); saturated columns are excluded from
// sampling while any remain free
Int saturated_columns(const StageParams& st, int s, const Int& block_length);

struct MatchLemmaReport {
    Rat alpha;
    Rat r;
    Int m;
    Int block_length;  // ceil(sqrt(alpha) m)
    Int name_length;   // m * block_length
    Int k_cap;         // ceil(alpha (m-1) / r^4)
    Rat c1;            // wraparound sum * m^2
    Rat alpha0;        // min(r^4/4, (r/20)^2 / c1^2)
    Rat c2;            // 2/r^4 + r^2
    Rat mismatch_mass_1, mismatch_mass_2;  // per-tower seam mass / 2
    Rat tower_measure_1, tower_measure_2;  // exact; informational vs r
    Int saturated_1, saturated_2;          // per q q' columns
    bool f_filter_active = false;          // both towers keep a free column
    Int draws;     // raw samples before the closelevel filter
    Int accepted;  // rows below
    Rat accept_exact;  // min(2 k_cap + 1, m-1) / (m-1): sampling acceptance probability
    Rat accept_floor;  // 2 alpha / r^4: the closelevel residue floor
    Int violations;
    Rat max_dp;
    std::vector<MatchLemmaRow> rows;
    std::vector<CertEntry> entries;
    bool pass = false;
};

// samples `trials` closelevel quadruples (one rejection stream per trial
// index) and checks the offset block bound chain on each
MatchLemmaReport verify_match_lemma(const TowerPair& pair, const Rat& alpha,
                                    const Int& trials, uint64_t seed,
                                    const Rat& r = Rat(1, 4));

// ---------------------------------------------------------------------------
// finite-scale Katok-Sataev probe

// product box partition: interior breakpoints on the within-tower level
// indices of each factor; refine_junk additionally separates the seam-exit
// junk symbol (the one refinement a coarsening never absorbs)
struct ProductPartition {
    std::string name;
    std::vector<Int> t1_cuts;
    std::vector<Int> t2_cuts;
    bool refine_junk = false;
};

// relabels a product name through the box partition
SymbolName apply_partition(const SymbolName& name, const ProductPartition& part,
                           const StageParams& st);

struct KsPartitionRow {
    std::string partition;
    Rat max_fbar;
    Int failures;  // sampled pairs at or above epsilon
    Int samples;
};

struct KsProbeRow {
    Rat eps;
    Rat alpha;         // min(alpha0, eps^2 / (4 c2^2))
    Int block_length;  // ceil(sqrt(alpha) m)
    Int name_length;
    Int window;        // w: members sit on diagonals -w..w around the anchor
    Rat k_measure;     // (2w+1) mu(level1) mu(level2)
    Int samples;
    Rat max_fbar;      // over the sampled level-name pairs
    bool pass = false;
    std::vector<KsPartitionRow> partitions;
};

struct KsProbeReport {
    Rat c1, alpha0, c2;
    std::vector<KsProbeRow> rows;
    std::vector<CertEntry> entries;
    bool pass = false;
};

// for each epsilon, exhibits the diagonal-window member set around a fixed
// anchor, samples member pairs, and verifies the distance stays below
// epsilon on the level names; extra partitions are relabeled diagnostics
// (junk-refining ones report their failure fraction without gating pass)
KsProbeReport ks_criterion_probe(const TowerPair& pair, const std::vector<Rat>& epsilons,
                                 const std::vector<ProductPartition>& partitions,
                                 const Int& samples_per_eps, uint64_t seed);

}  // namespace tlab
