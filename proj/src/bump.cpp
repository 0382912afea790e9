#include "tlab/bump.hpp"

#include <cmath>

namespace tlab {

double smooth_step(double v) {
    if (v <= 0) return 0.0;
    if (v >= 1) return 1.0;
    double a = std::exp(-1.0 / v), b = std::exp(-1.0 / (1.0 - v));
    return a / (a + b);
}

double smooth_step_deriv(double v) {
    if (v <= 0 || v >= 1) return 0.0;
    double s = smooth_step(v);
    return s * (1.0 - s) * (1.0 / (v * v) + 1.0 / ((1.0 - v) * (1.0 - v)));
}

SigmaPiece BumpProfile::sigma_piece(const Rat& x) const {
    if (x <= delta / 2) return SigmaPiece::ZeroLow;
    if (x < delta) return SigmaPiece::Rise;
    if (x <= 1 - delta) return SigmaPiece::One;
    if (x < 1 - delta / 2) return SigmaPiece::Fall;
    return SigmaPiece::ZeroHigh;
}

BetaPiece BumpProfile::beta_piece(const Rat& x) const {
    if (x <= Rat(1, 2)) return BetaPiece::ZeroLow;
    if (x < (1 + rho) / 2) return BetaPiece::Rise;
    if (x <= 1 - rho / 2) return BetaPiece::Linear;
    if (x < 1 - rho / 4) return BetaPiece::Fall;
    return BetaPiece::ZeroHigh;
}

double BumpProfile::sigma(double x) const {
    double d = to_double(delta);
    if (x <= d / 2 || x >= 1 - d / 2) return 0.0;
    if (x < d) return smooth_step((x - d / 2) / (d / 2));
    if (x <= 1 - d) return 1.0;
    return smooth_step((1 - d / 2 - x) / (d / 2));
}

double BumpProfile::beta(double x) const {
    double r = to_double(rho);
    if (x <= 0.5 || x >= 1 - r / 4) return 0.0;
    if (x < (1 + r) / 2) return (x - 0.5) * smooth_step((x - 0.5) / (r / 2));
    if (x <= 1 - r / 2) return x - 0.5;
    return (x - 0.5) * smooth_step((1 - r / 4 - x) / (r / 4));
}

double BumpProfile::beta_deriv(double x) const {
    double r = to_double(rho);
    if (x <= 0.5 || x >= 1 - r / 4) return 0.0;
    if (x < (1 + r) / 2) {
        double v = (x - 0.5) / (r / 2);
        return smooth_step(v) + v * smooth_step_deriv(v);
    }
    if (x <= 1 - r / 2) return 1.0;
    double w = (1 - r / 4 - x) / (r / 4);
    return smooth_step(w) - (x - 0.5) * smooth_step_deriv(w) * (4 / r);
}

BumpAuditReport bump_audit(const BumpProfile& pf, int grid) {
    BumpAuditReport rep{true, grid, {}};
    if (grid < 1000) throw InvalidInput("bump_audit: grid must be at least 10^3");
    auto fail = [&](const std::string& msg) {
        rep.pass = false;
        rep.violations.push_back(msg);
    };

    // symbolic plateau checks at rational probes inside each plateau
    if (pf.sigma_piece(pf.delta / 4) != SigmaPiece::ZeroLow || pf.sigma(to_double(pf.delta / 4)) != 0.0)
        fail("sigma: low plateau not zero");
    if (pf.sigma_piece(Rat(1, 2)) != SigmaPiece::One || pf.sigma(0.5) != 1.0)
        fail("sigma: central plateau not one");
    if (pf.sigma_piece(1 - pf.delta / 4) != SigmaPiece::ZeroHigh ||
        pf.sigma(to_double(1 - pf.delta / 4)) != 0.0)
        fail("sigma: high plateau not zero");
    if (pf.beta_piece(Rat(1, 4)) != BetaPiece::ZeroLow || pf.beta(0.25) != 0.0)
        fail("beta: low plateau not zero");
    Rat mid = (1 + pf.rho) / 2 / 2 + (1 - pf.rho / 2) / 2;  // midpoint of the linear piece
    if (pf.beta_piece(mid) != BetaPiece::Linear ||
        std::abs(pf.beta(to_double(mid)) - (to_double(mid) - 0.5)) > 1e-15)
        fail("beta: linear segment not x - 1/2");
    if (pf.beta_piece(1 - pf.rho / 8) != BetaPiece::ZeroHigh ||
        pf.beta(to_double(1 - pf.rho / 8)) != 0.0)
        fail("beta: high plateau not zero");

    // sampled checks on the transition segments
    double r = to_double(pf.rho);
    for (int i = 0; i <= grid; ++i) {
        double u = double(i) / grid;
        // beta' >= 0 on [1/2, (1+rho)/2]
        double x = 0.5 + u * (r / 2);
        if (pf.beta_deriv(x) < 0) fail("beta: negative slope in rise at x=" + std::to_string(x));
        // beta < x - 1/2 on (1 - rho/2, 1 - rho/4]: the fall factor is
        // s(v) with v < 1, hence < 1 exactly; in doubles the gap 1 - s(v)
        // rounds away to 0 unless e^{1/v - 1/(1-v)} clears 2^-53, so the
        // strict form is only demanded once 1 - v >= 1/32
        x = (1 - r / 2) + (u > 0 ? u * (r / 4) : r / (8.0 * grid));
        double v = (1 - r / 4 - x) / (r / 4);
        if (pf.beta(x) > x - 0.5) fail("beta: fall above x - 1/2 at x=" + std::to_string(x));
        if (1 - v >= 1.0 / 32 && pf.beta(x) >= x - 0.5)
            fail("beta: fall not strictly below x - 1/2 at x=" + std::to_string(x));
        // overshoot: beta((2+rho)/4 + x) > x for 0 <= x <= rho/4
        double off = u * (r / 4);
        if (pf.beta((2 + r) / 4 + off) <= off)
            fail("beta: overshoot inequality fails at offset " + std::to_string(off));
    }
    return rep;
}

}  // namespace tlab
