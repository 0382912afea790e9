#pragma once

/**
 * @file scheduler.hpp
 * @brief Parameter-ladder construction: picks q_{n+1} = k_n q_n q'_n, the
 *        drift D_n (hence alpha'_{n+1}), and the schedule lengths l_n, and
 *        stores every checked inequality as exact rationals so the whole
 *        ladder can be re-audited in one pass.
 */

#include <string>
#include <vector>

#include "tlab/combinatorics.hpp"

namespace tlab {

// one audited comparison; pass is recomputable from the stored sides
struct CertEntry {
    std::string label;
    Rat lhs;
    std::string rel;  // "<", "<=", "==", ">", ">="
    Rat rhs;
    bool pass = false;
};

// re-evaluates lhs rel rhs
bool recheck(const CertEntry& e);

std::string describe(const CertEntry& e);

struct StageCert {
    Int n;           // stage whose committed parameters were audited
    Rat norm_bound;  // bound used for the step-size and derivative gates
    std::vector<CertEntry> entries;

    bool pass() const;
};

struct Ladder {
    Int d;
    Int p1, q1, pp1, qp1;  // seed alpha_1 = p1/q1, alpha'_1 = p'1/q'1
    Rat A, B;              // rotation target
    Rat eps_global;
    Int k_ceiling;
    bool l_auto = true;               // false when an explicit l sequence was supplied
    std::vector<Int> l_seq;           // l_1..; always one entry ready past the built stages
    std::vector<StageParams> stages;  // stages[i] holds stage n = i+1
    std::vector<StageCert> certs;     // parallel to stages

    size_t count() const { return stages.size(); }
    // alpha_n / alpha'_n, 1-based; n = count()+1 addresses the frontier values
    Rat alpha_at(size_t n) const;
    Rat alphap_at(size_t n) const;
    // 2/(n q_n q'_n)
    Rat eps_at(size_t n) const;
};

// (d+k-1)!/(d-1)!; C_0 = 1
Int constant_C(const Int& k, const Int& d);

// l_n = max(n^2, ceil(2^{n+2}/eps_global), max_{j<n} ceil(2^{n+2-j}/eps_j));
// the dyadic decay makes every tail sum_{i>j} 1/l_i at most eps_j/4
Int schedule_l(const Ladder& lad, size_t n);

// validates the seed and the explicit l sequence if one is given; an l
// sequence whose already-checkable tail sums fail is rejected here
Ladder make_ladder(const Int& d, const Int& p1, const Int& q1, const Int& pp1,
                   const Int& qp1, const Rat& A, const Rat& B, const Rat& eps_global,
                   const Int& k_ceiling, std::vector<Int> l_override = {});

// phase 1 of the two-phase commit: minimal k_n >= k_floor passing the growth
// bound, the squared derivative gate q^2_{n+1} > 4 d (n+1)^4 norm_bound^2 and
// the step bound 1/q_{n+1} <= 1/(8 l_n C_{l_n} q_n q'_n norm_bound), bumped
// past gcd collisions; then the prime q'_{n+1} and D_n. Nothing is written
// into the ladder, so a failed downstream check can re-propose with a larger
// k_floor.
StageParams propose_stage(const Ladder& lad, const Rat& norm_bound, const Int& k_floor = 0);

// phase 2: full audit of the proposal; throws ConditionViolation on any
// failed entry, otherwise appends stage + cert and schedules l_{n+1}
void commit_stage(Ladder& lad, const StageParams& st, const Rat& norm_bound);

// propose + commit
StageParams next_stage(Ladder& lad, const Rat& norm_bound);

// recomputes the cert for a stage from scratch (no ladder mutation)
StageCert audit_stage(const Ladder& lad, const StageParams& st, const Rat& norm_bound);

// one-pass re-check: every stored entry re-evaluated, stage certs recomputed
// against the recorded norm bounds, l-tail sums verified
bool audit_ladder(const Ladder& lad);

struct RotationDistanceReport {
    bool pass = false;
    Rat seed_dist;         // max(|A - alpha_1|, |B - alpha'_1|)
    Rat alpha_drift;       // sum over stages of 1/q_{n+1}
    Rat alphap_drift;      // sum over stages of 1/qbar_{n+1} + D_n
    Rat telescoped_bound;  // 4 eps_global
    std::vector<CertEntry> entries;
    std::vector<std::string> witnesses;  // descriptions of failed entries
};

// seed-to-target distance, per-stage increment inequalities, exact drift sums
RotationDistanceReport check_rotation_distance(const Ladder& lad);

}  // namespace tlab
