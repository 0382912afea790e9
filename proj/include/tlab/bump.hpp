#pragma once

/**
 * @file bump.hpp
 * @brief Smooth plateau/shear profiles sigma_delta and beta~_rho.
 *
 * Both are assembled from the standard e^{-1/v} transition step. Plateau
 * segments are tracked symbolically (piece tags with exact rational
 * boundaries); only the two transition segments need floating-point
 * evaluation. Derivative suprema carry certified rational upper bounds used
 * by the norm certificates.
 */

#include <string>
#include <vector>

#include "tlab/rational.hpp"

namespace tlab {

// s(v) = e^{-1/v} / (e^{-1/v} + e^{-1/(1-v)}), clamped to {0,1} outside (0,1)
double smooth_step(double v);
double smooth_step_deriv(double v);

// certified sup of s': s' = s(1-s)(v^-2 + (1-v)^-2) <= 8, splitting at v = 1/2
// with s <= e^{2-1/v} and t^2 e^{-t} <= 4 e^{-2} for t >= 2
inline Rat smooth_step_deriv_cert() { return Rat(8); }

enum class SigmaPiece { ZeroLow, Rise, One, Fall, ZeroHigh };
enum class BetaPiece { ZeroLow, Rise, Linear, Fall, ZeroHigh };

struct BumpProfile {
    Rat rho;    // beta~ transition scale, 0 < rho < 1
    Rat delta;  // sigma plateau margin, 0 < delta < 1/2

    SigmaPiece sigma_piece(const Rat& x) const;
    BetaPiece beta_piece(const Rat& x) const;

    double sigma(double x) const;
    double beta(double x) const;
    double beta_deriv(double x) const;

    // certified: sup |sigma'| <= 16/delta
    Rat sigma_deriv_cert() const { return Rat(16) / delta; }
    // certified: sup |beta~'| <= max(9, 1 + 16/rho)
    Rat beta_deriv_cert() const {
        Rat fall = 1 + Rat(16) / rho;
        return fall < 9 ? Rat(9) : fall;
    }
};

struct BumpAuditReport {
    bool pass;
    int grid;
    std::vector<std::string> violations;
};

// the nine plateau/inequality constraints, symbolic on plateaus and sampled
// on the transition segments; grid >= 10^3
BumpAuditReport bump_audit(const BumpProfile& profile, int grid);

}  // namespace tlab
