#pragma once

/**
 * @file combinatorics.hpp
 * @brief Stage-level combinatorial skeleton: derived numbers, CRT cell
 *        assignment, translation offsets, rectangle families, lattice cosets.
 *
 * A stage carries the current rotation denominators (q, q'), the committed
 * next denominator q_next, and the exact drift D. Everything downstream
 * (towers, conjugation cells, strips) is indexed through the tables built
 * here.
 */

#include <cstdint>
#include <vector>

#include "tlab/box.hpp"

namespace tlab {

struct StageParams {
    Int n;       // stage index, >= 1
    Int d;       // dimension, >= 2
    Int p, q;    // alpha_n = p/q, reduced
    Int pp, qp;  // alpha'_n = p'/q', reduced
    Int q_next;
    Int qbar_next;  // q_next + q*q'
    Rat D;
    Rat eps;   // 2/(n q q')
    Int m;     // q_next/(q q') + 1
    Int r;     // (m-1) p mod q
    Int rp;    // (m-1) p' mod q'
    Rat Delta;  // 1/qbar_next - (m-1) D, > 0 unless D = 0 stub
    Int l;      // schedule length, 0 until the scheduler fills it

    Rat alpha() const { return Rat(p, q); }
    Rat alphap() const { return Rat(pp, qp); }
    Rat alpha_next() const { return alpha() + Rat(1, q_next); }
    Rat alphap_next() const { return alphap() + Rat(1, qbar_next) + D; }
    Int qqp() const { return q * qp; }
    // eps * (n q q')^(2-d); equals eps when d = 2
    Rat eps_tilde() const {
        Int base = n * qqp();
        return eps / Rat(pow_int(base, (d - 2).convert_to<unsigned>()));
    }
};

// derives all stage numbers and asserts the four rotation-number congruences;
// throws ConditionViolation("A"|"B"|"C") on a failed precondition
StageParams derive_stage(const Int& p, const Int& q, const Int& pp, const Int& qp,
                         const Int& q_next, const Rat& D, const Int& n = 1, const Int& d = 2);

// unique 0 <= k < q q' with k = i mod q', k = j mod q; rejects non-coprime q, q'
Int crt_index(const Int& i, const Int& j, const Int& q, const Int& qp);

struct CellAssignment {
    Int q, qp;
    // row k: absolute theta1 cell u, theta2 cell v, residues (i, j), offsets (a, a')
    struct Row {
        int64_t u, v, i, j, a, ap;
    };
    std::vector<Row> rows1, rows2;  // indexed by k, one table per tower kind

    int64_t k_of(int64_t i, int64_t j) const;
    const Row& at(int s, int64_t k) const { return (s == 1 ? rows1 : rows2)[size_t(k)]; }
};

// materializes the per-k tables; guarded against non-desk-scale q q'
CellAssignment build_assignment(const StageParams& st);

// the q q' translated rectangles S^(s)_k on the torus (theta factors only)
std::vector<Box> rectangles(const StageParams& st, int s);

struct CombidisjReport {
    bool pass;
    std::vector<std::string> witnesses;  // collision descriptions, empty on pass
};

// bijectivity of the rectangle positions mod (1/q, 1/q'), both kinds
CombidisjReport verify_combidisj(const StageParams& st);

struct LatticeGroups {
    int64_t qqp;
    std::vector<std::pair<int64_t, int64_t>> gamma1, gamma2;  // in units of 1/(q q')
};

LatticeGroups build_lattice_groups(const StageParams& st);

// exhaustive coset-partition check of Lambda by Gamma^(s); q q' <= 10^3
bool verify_lattice_cosets(const StageParams& st);

}  // namespace tlab
