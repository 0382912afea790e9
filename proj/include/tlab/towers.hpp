#pragma once

/**
 * @file towers.hpp
 * @brief Two interlocking Rokhlin towers for the rotation R_{alpha+,alpha'+},
 *        their disjointness certificate, generating diagnostics, and the
 *        column refinement used by the approximation estimates.
 *
 * Tower s has q*q' base boxes (one per assignment cell) and height m-1
 * (s = 1) resp. m (s = 2).  Level i of tower s is R^i applied to the base
 * union; levels are never materialized eagerly.  All geometry is exact
 * rational.  Certificates come in two flavours:
 *   - enumerated: every level is rotated and checked box-by-box (small
 *     q_{n+1} only),
 *   - algebraic: closed-form margin minima over all levels; valid at any
 *     scale because per-level margins are exact affine functions of the
 *     level index.
 */

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "tlab/box.hpp"
#include "tlab/combinatorics.hpp"
#include "tlab/parallelogram.hpp"
#include "tlab/scheduler.hpp"

namespace tlab {

// ---------------------------------------------------------------------------
// exact counting helpers (exposed for tests)

// sum_{i=0}^{n-1} floor((a*i + b) / m), m > 0; a, b may be negative.
// O(log max(a,m)) Euclidean recursion, exact at any operand size.
Int floor_sum(const Int& n, const Int& a, const Int& b, const Int& m);

// #{ 0 <= i < n : frac(x0 + i*step) in [lo, hi] }  (closed window),
// requiring 0 <= lo and hi < 1; returns 0 when hi < lo.
Int count_progression_hits(const Int& n, const Rat& x0, const Rat& step,
                           const Rat& lo, const Rat& hi);

// ---------------------------------------------------------------------------
// tower pair

struct TowerPair {
    StageParams st;
    CellAssignment ca;
    Int height1;  // m - 1
    Int height2;  // m
    std::vector<Box> boxes1;  // base boxes of tower 1, indexed by k
    std::vector<Box> boxes2;  // base boxes of tower 2, indexed by k
    BoxUnion base1;
    BoxUnion base2;

    TowerPair() : base1(0), base2(0) {}

    const Int& height(int s) const { return s == 1 ? height1 : height2; }

    // cyclic successor of a level index within tower s
    Int sigma_next(int s, const Int& i) const {
        Int h = height(s);
        Int j = i + 1;
        return j == h ? Int(0) : j;
    }

    // R^i(base_s); cached by (i mod qq', i div qq') since the qq'-step
    // translate is the same for every residue class
    const BoxUnion& level(int s, const Int& i) const;

private:
    mutable std::map<std::pair<Int, Int>, BoxUnion> level_cache_[2];
};

// Base box of tower s over the assignment cell (u, v), tower index k.
Box tower_base_box(const StageParams& st, int s, std::int64_t u, std::int64_t v,
                   const Int& k);

// Builds both towers.  Throws ConditionViolation when Delta <= 0, when
// 1/q_{n+1} - m D <= 0, when the base-width inequalities fail, or when a
// base box escapes its slanted cell.
TowerPair build_bases(const StageParams& st, const CellAssignment& ca);

// ---------------------------------------------------------------------------
// disjointness

struct DisjointnessReport {
    bool pass = false;
    bool tower1_internal = false;  // all (m-1) qq' tower-1 boxes disjoint
    bool tower2_internal = false;  // all m qq' tower-2 boxes disjoint
    bool cross_tower = false;      // no tower-1 / tower-2 overlap
    bool enumerated = false;       // every level was materialized and checked
    bool brute_force = false;      // pairwise measures (degenerate m = 2 path)

    // corner-margin algebra: per-level lower/upper strip margins are
    // margin(M) = margin(0) -/+ M*iota; minima over the level range
    Rat guard;          // 3 eps / (8 q q')
    Rat drift_total_1;  // (q_{n+1} - 1) * iota
    Rat drift_total_2;  // (qbar'_{n+1} - 1) * iota
    Rat lower0_1, upper0_1, min_lower_1, min_upper_1;
    Rat lower0_2, upper0_2, min_lower_2, min_upper_2;
    Rat gap_2, wrapgap_2;  // theta2 stacking gaps of tower 2 within a strip

    std::vector<CertEntry> entries;
    std::vector<std::string> witnesses;  // non-empty iff a check failed
};

// Closed-form certificate from stage parameters alone; any scale.
DisjointnessReport disjointness_certificate(const StageParams& st);

// Full verification of the built towers.  Uses the enumerated path when
// q_{n+1} + qbar'_{n+1} is small enough, the brute-force pairwise path when
// m = 2, and the algebraic certificate otherwise.  The enumerated path also
// cross-checks every level's strip margins against the affine closed forms.
DisjointnessReport verify_disjointness(const TowerPair& tp);

// ---------------------------------------------------------------------------
// generating diagnostics

struct GeneratingReport {
    bool enumerated = false;  // eta counted level-by-level (eta_lo == eta_hi)

    Int xi1_total, xi1_hits;   // tower-1 levels inside a scaled good cell
    Int xi2_total, xi2_hits;   // tower-2 levels, theta2-projection window
    Int eta_total;             // tower-1 levels, simultaneous eps-shrunk fit
    Int eta_hits_lo, eta_hits_hi;  // exact sandwich; equal when enumerated

    Rat xi1_fraction, xi2_fraction, eta_lower, eta_upper;
    Rat diameter_bound;  // 1/(2 n^2), certified by the norm chain

    std::vector<CertEntry> entries;
};

// Exact window counts via floor sums; any scale. `dh_norm_bound` caps the
// derivative norm of the conjugation scaling the good cells (identity: 1).
GeneratingReport generating_certificate(const StageParams& st,
                                        const Rat& dh_norm_bound = Rat(1));

// Same counts, plus enumerated eta when the tower is small; validates that
// `st` matches the pair's stage.
GeneratingReport generating_diagnostics(const TowerPair& tp, const StageParams& st,
                                        const Rat& dh_norm_bound = Rat(1));

// ---------------------------------------------------------------------------
// column refinement

struct ColumnSet {
    bool pass = false;
    Int t_star1;    // floor((1-4e) qbar'_{n+1} / (2 (qq')^2))
    Int t_star2;    // floor((1-4e) q_{n+1}   / (2 (qq')^2))
    Int n_columns;  // qq' * min(t_star1, t_star2)
    Rat c_lower;    // (1-4e)/2 - 1/m; n_columns > c_lower * m
    bool materialized = false;  // per-(k,t) box grids below are populated
    bool inclusions1 = false;   // R^{t qq'(m-1)} C_{0,t*-1} subset tilde C_{0,t*-t-1}
    bool inclusions2 = false;   // R^{t qq' m}   C_{0,0}    subset tilde C_{0,t}

    // materialized grids, indexed [k][t] (empty at large scale)
    std::vector<std::vector<Box>> col1, tilde1, col2, tilde2;

    std::vector<CertEntry> entries;
    std::vector<std::string> witnesses;
};

// Column (k, t) of tower s anchored at assignment cell (u, v); `tilde`
// selects the enlarged section that tiles the base in the split direction.
Box column_box(const StageParams& st, int s, std::int64_t u, std::int64_t v,
               const Int& k, const Int& t, bool tilde);

// Closed-form column certificate; any scale.
ColumnSet column_certificate(const StageParams& st);

// Certificate plus materialized grids and per-t inclusion checks when the
// column count is small.
ColumnSet build_columns(const TowerPair& tp, const StageParams& st);

// ---------------------------------------------------------------------------
// eps = 0 closure tiling

// Verifies that the 2 q q' closed strips at eps = 0 tile the w-circle
// exactly and that their measures sum to (1-2eps)^(d-2) with the fiber
// factor kept at eps.  Enumerates all q q' offsets per kind; desk scale only.
bool verify_strip_closure_tiling(const StageParams& st,
                                 std::vector<CertEntry>* entries = nullptr);

}  // namespace tlab
