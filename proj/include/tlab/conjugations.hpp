#pragma once

/**
 * @file conjugations.hpp
 * @brief The two per-stage conjugation maps on their good domains.
 *
 * h1 translates the epsilon-shrunk half-cells onto their target cells (pure
 * translation in the torus factor; for d > 2 it is preceded by the
 * determinant-one diagonal exchange of theta1 slabs against fiber blocks).
 * h2 acts cell-locally as one of two unit-determinant affine maps sending
 * straight half-cells to slope-1 slanted cells. Everything here is exact;
 * outside the good domains the maps are represented only by an error.
 *
 * Cell conventions: absolute cells (x, y) in [0, q q')^2 of side 1/(q q');
 * within a cell, coordinates are cell units in [0, 1]. Kind s = 1 lives in
 * the upper theta2 half-cell, s = 2 in the lower. Theta1 slabs (d > 2) are
 * indexed by ell in [0, (n q q')^(d-2)); fiber blocks carry the same ell.
 */

#include "tlab/bump.hpp"
#include "tlab/combinatorics.hpp"
#include "tlab/parallelogram.hpp"

namespace tlab {

struct TorusPoint {
    Rat t1, t2;
    std::vector<Rat> fiber;
};

// rectangle in (bounded-coordinate, diagonal-coordinate) cell units:
// s = 1 bounds theta1 and theta2 - theta1, s = 2 bounds theta2 and
// theta1 - theta2; exact image of a straight box under the cell shear
struct SlantBox {
    int s;
    Int j1, j2;  // absolute cell indices
    Int qqp;
    Rat bounded_lo, bounded_len;  // cell units within the bounded coordinate
    Rat diag_lo, diag_len;        // cell units of the diagonal window
    std::vector<FiberInterval> fiber;

    Rat measure() const;
};

struct ICell {
    int s;
    int64_t j1, j2;
    int64_t ell;
};

struct NormCertificate {
    int k;
    Rat upper;
    std::string method;  // "exact" | "analytic-bound" | "sampled"
};

// number of theta1 slabs / fiber blocks per axis: (n q q')^(d-2) and n q q'
Int slab_count(const StageParams& st);
Int fiber_blocks_per_axis(const StageParams& st);

// theta2 window of the kind-s half-cell in cell units: [lo, lo + len]
Rat half_cell_lo(const StageParams& st, int s);
Rat half_cell_len(const StageParams& st);

// epsilon-shrunk half-cell at absolute cell (x, y), theta1 slab ell,
// full fiber [eps, 1-eps]^(d-2): the h2 pre-image of the I-cell there
Box part_box(const StageParams& st, int s, int64_t x, int64_t y, int64_t ell = 0);

// fundamental-domain tilde cell: full-width theta1, fiber blocks ell
Box tilde_cell(const StageParams& st, int s, int64_t i, int64_t j, int64_t ell = 0);

// the slanted image cell of part_box under the cell shear
SlantBox icell_slant(const StageParams& st, const ICell& cell);

// exact slant-coordinate containment, fiber within [eps, 1-eps]
bool icell_contains(const StageParams& st, const ICell& cell, const Box& b);

// h1 on boxes: tilde cell (i, j) in fundamental copy (t1, t2) lands on the
// part box at the assignment-translated absolute cell; returns that box
Box h1_forward_cell(const StageParams& st, const CellAssignment& ca, int s, int64_t i, int64_t j,
                    int64_t t1, int64_t t2, int64_t ell = 0);

// point maps; throw OutsideGoodDomain off the good cells
TorusPoint h1_forward_point(const StageParams& st, const CellAssignment& ca, const TorusPoint& p);
TorusPoint h1_inverse_point(const StageParams& st, const CellAssignment& ca, const TorusPoint& p);
TorusPoint h2_forward_point(const StageParams& st, const TorusPoint& p);
TorusPoint h2_inverse_point(const StageParams& st, const TorusPoint& p);

// h2 on boxes: exact shear images; sub-boxes of a part cell map to slant
// boxes and back
SlantBox h2_forward_box(const StageParams& st, int s, int64_t x, int64_t y, const Box& b,
                        int64_t ell = 0);
Box h2_inverse_slant(const StageParams& st, const SlantBox& sb);

// full composed image h_n(tilde cell) with the cell-index identity
ICell hn_image_of_tilde_cell(const StageParams& st, const CellAssignment& ca, int64_t i, int64_t j,
                             int64_t ell, int s);

// good-domain tables over all absolute cells (desk scale only)
std::vector<Box> good_domain_h1_inv(const StageParams& st);
std::vector<ICell> good_domain_h2_inv(const StageParams& st);

// h2^{-1}(D(h2^{-1})) = D(h1^{-1}) as exact box-list equality
bool verify_good_domain_chain(const StageParams& st);

// unit determinants of every good piece (both shears, psi)
bool verify_determinants(const StageParams& st);

// h1 commutes with R_{1/q,1/q'}, h2 with all cell translations, exactly
bool verify_equivariance(const StageParams& st, const CellAssignment& ca);

// round trips forward(inverse(p)) = p on rational probes in every good cell
bool verify_round_trip(const StageParams& st, const CellAssignment& ca);

// diam(h1^{-1}(S-cell))^2 < (5/4 + (d-2)/n^2)/(q q')^2, exact
bool verify_diameter_bound(const StageParams& st);

// 7/4 >= golden-ratio operator norm of the two shear matrices:
// (7/4)^2 = 49/16 >= (3+sqrt5)/2 since (25/8)^2 >= 5
Rat affine_opnorm_cert();

// first-derivative certificate of the good pieces of stage h_n
Rat stage_dh_cert(const StageParams& st);

// product certificate for D(h_ladder) over the given stages, k = 1
NormCertificate norm_bound_DH(const std::vector<StageParams>& stages);

// directional-sampling floor for the same sup (affine pieces evaluated on a
// direction grid); must stay below the certificate
double sampled_dh_sup(const StageParams& st, int directions);

// Lipschitz factors for the small-translation certificate
Rat stage_translation_cert(const StageParams& st);  // 1 + 8 q q' / eps~
Rat stage_shear_cert(const StageParams& st);        // (1 + sup|beta~'|)^2 at rho = eps
inline Rat stage_affine_cert() { return Rat(2); }   // Lipschitz ceiling of the cell shears

}  // namespace tlab
