#pragma once

/**
 * @file approximation.hpp
 * @brief Speed-of-approximation accounting for the tower pair: exact
 *        wraparound discrepancy of the level permutation with its closed-form
 *        bound and normalized ratio, uniform-rigidity integrality, Monte
 *        Carlo small-translation estimates with exact confidence radii, and
 *        the genericity neighborhood predicate.
 *
 * The level permutation pushes every level of each tower up by one and wraps
 * the top back to the base.  On all non-top levels it agrees with the stage
 * rotation, and consecutive base boxes are exact rotates of each other, so
 * the full discrepancy sum telescopes to a single rotated box pair per tower.
 * That pair is computed upstairs, where the conjugation preserves measure,
 * and the anchor cell cancels, so the closed form evaluates at any scale.
 *
 * Monte Carlo comparisons draw exact rational samples (2^-64 grid per axis)
 * from a certified bounding box of both compared sets; the only approximate
 * ingredient is the Hoeffding radius, which is stored as an exact rational
 * upper bound built without floating-point transcendentals.  Samples that
 * land exactly on a membership boundary are charged as mismatches, so the
 * estimate only ever moves toward the fail side.
 */

#include <cstdint>
#include <vector>

#include "tlab/box.hpp"
#include "tlab/conjugations.hpp"
#include "tlab/scheduler.hpp"
#include "tlab/towers.hpp"

namespace tlab {

// verdict of one Monte Carlo translation comparison; every bound is an exact
// rational, `confidence` is the two-sided coverage target of the radius
struct TranslationMcReport {
    Int samples;
    uint64_t seed = 0;
    double confidence = 0.99;
    Int mismatch_count;   // samples whose two memberships disagree
    Int undefined_count;  // boundary landings, charged as mismatches
    Rat sample_domain;    // measure of the certified bounding box sampled
    Rat estimate;         // sample_domain * charged mismatch fraction
    Rat halfwidth;        // exact upper bound on the Hoeffding radius
    Rat budget;           // pass target: stage budget, or the oracle value
    bool exact = false;   // zero-translation short circuit, no sampling
    bool pass = false;
    std::vector<CertEntry> entries;
};

// wraparound discrepancy of the level permutation and its normalizations
struct SpeedReport {
    Int n;
    Rat wrap1;        // mu(R^(m-1)(base 1) DELTA base 1)
    Rat wrap2;        // mu(R^m(base 2) DELTA base 2)
    Rat discrepancy;  // wrap1 + wrap2: the full permutation mismatch sum
    Rat bound;        // 6 (q q')^2 / (q_next qbar'_next)
    Rat ratio;        // discrepancy * m (m-1); lies in (0, 6] for valid stages
    Int a_const;      // ceil(bound * m (m-1)); the level identities make it 6
    bool has_next = false;  // the three next-stage fields below are filled
    Rat eps_next;           // shrink parameter of the committed next stage
    Rat eps_next_ratio;     // eps_next * m (m-1)
    Rat eps_next_bound;     // 1/(2 (n+1) (q q')^2)
    Rat tail_bound;         // 2 eps_next: telescoped later-stage mismatch total
    bool has_mc = false;
    TranslationMcReport translation_mc;  // attached small-translation verdict
    std::vector<CertEntry> entries;
    bool pass = false;
};

// exact integrality certificate for the rotation power that is the identity
struct RigidityReport {
    Int n;
    Int period;  // q_next * q'_next
    bool alpha_integral = false;
    bool alphap_integral = false;
    Rat d0_budget;  // eps_n / 4: allowed displacement of the identity power
    std::vector<CertEntry> entries;
    bool pass = false;
};

// three strict inequalities on declared measurements of a candidate map
struct NeighborhoodReport {
    Rat jet_bound;    // 2 / l_next
    Rat rigid_bound;  // eps_n
    Rat speed_bound;  // (a_const + 1) / (m (m - 1))
    std::vector<CertEntry> entries;
    bool pass = false;
};

// ceil(6 (q q')^2 m (m-1) / (q_next qbar'_next)); the spacing identities
// (m-1) q q' = q_next and m q q' = qbar'_next make this 6 at every stage
Int speed_constant(const StageParams& st);

// closed-form wraparound discrepancy, valid at any stage scale
SpeedReport speed_certificate(const StageParams& st);

// also checks the next stage's shrink ratio and the telescoped tail bound;
// `next` must be the committed stage n+1 of the same ladder
SpeedReport speed_certificate(const StageParams& st, const StageParams& next);

// materialized cross-check against the full base unions; throws
// std::logic_error if the symmetric differences depart from the closed forms
Rat speed_exact(const TowerPair& tp);

inline Rat speed_ratio(const SpeedReport& rep) { return rep.ratio; }

// q_next * alpha_next and q'_next * alpha'_next are integers, so the
// (q_next q'_next)-th power of the next rotation is exactly the identity
RigidityReport rigidity_check(const StageParams& st, const Int& qp_next);

// the eps-shrunk half-cell of kind s at absolute cell (a, b), fiber block
// ell: one good piece of the stage conjugation's domain
Box good_half_cell(const StageParams& st, int s, std::int64_t a, std::int64_t b,
                   std::int64_t ell = 0);

// mu(R_delta(X) DELTA X) for X the rotated conjugation image of one good
// half-cell, estimated by sampling a certified bounding box of both sets;
// membership pulls each sample back through the inverse maps.  Passes when
// estimate + halfwidth stays below the stage budget eps_n * mu(half-cell).
TranslationMcReport translation_continuity_mc(const StageParams& st, const CellAssignment& ca,
                                              const Rat& delta1, const Rat& delta2, int s,
                                              std::int64_t a, std::int64_t b, std::int64_t ell,
                                              const Int& samples, uint64_t seed,
                                              double confidence = 0.99);

// the same comparison summed over all good half-cells at once, with delta
// the next-stage rotation increment (1/q_next, 1/qbar'_next + D); a sample
// is charged once per set whose membership flips.  Budget: eps_n times the
// total good measure.
TranslationMcReport translation_sum_mc(const StageParams& st, const CellAssignment& ca,
                                       const Int& samples, uint64_t seed,
                                       double confidence = 0.99);

// calibration oracle on a plain box: budget is set to the exactly known
// discrepancy and the verdict asks |estimate - exact| <= halfwidth
TranslationMcReport box_translation_mc(const Box& box, const Rat& delta1, const Rat& delta2,
                                       const Int& samples, uint64_t seed,
                                       double confidence = 0.99);
Rat box_translation_exact(const Box& box, const Rat& delta1, const Rat& delta2);

// attaches a translation verdict to a speed report and folds it into pass
void attach_translation_mc(SpeedReport& rep, const TranslationMcReport& mc);

// jet distance below 2/l_next, displacement of the identity power below
// eps_n, level discrepancy sum below (a_const + 1)/(m (m-1)); all strict, so
// exact boundary hits fail.  Accepts declared measurements; it never samples.
NeighborhoodReport neighborhood_predicate(const StageParams& st, const Int& l_next,
                                          const Rat& jet_distance, const Rat& rigid_distance,
                                          const Rat& speed_sum, const Int& a_const);

}  // namespace tlab
