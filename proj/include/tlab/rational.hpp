#pragma once

/**
 * @file rational.hpp
 * @brief Arbitrary-precision integers and rationals used for every angle,
 *        coordinate and measure in the library.
 *
 * Thin veneer over boost::multiprecision: cpp_int / cpp_rational already
 * keep fractions reduced with positive denominator.  Everything here is
 * exact; doubles appear only in report approximations.
 */

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

#include "tlab/errors.hpp"

namespace tlab {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int num(const Rat& x) { return boost::multiprecision::numerator(x); }
inline Int den(const Rat& x) { return boost::multiprecision::denominator(x); }

inline Rat make_rat(const Int& n, const Int& d) {
    if (d == 0) throw InvalidInput("rational with zero denominator");
    return Rat(n, d);
}

inline bool is_integer(const Rat& x) { return den(x) == 1; }

// floor(x) as an integer (exact, works for negative x)
inline Int floor_rat(const Rat& x) {
    Int q = num(x) / den(x);
    if (num(x) < 0 && q * den(x) != num(x)) --q;
    return q;
}

inline Int ceil_rat(const Rat& x) { return -floor_rat(-x); }

// canonical representative in [0, 1)
inline Rat mod1(const Rat& x) { return x - Rat(floor_rat(x)); }

inline Rat abs_rat(const Rat& x) { return x < 0 ? Rat(-x) : x; }

inline Int pow_int(Int base, unsigned k) {
    Int r = 1;
    while (k) {
        if (k & 1u) r *= base;
        base *= base;
        k >>= 1u;
    }
    return r;
}

inline Rat pow_rat(const Rat& base, unsigned k) {
    return Rat(pow_int(num(base), k), pow_int(den(base), k));
}

inline Int factorial(unsigned n) {
    Int r = 1;
    for (unsigned i = 2; i <= n; ++i) r *= i;
    return r;
}

inline Int gcd_int(const Int& a, const Int& b) {
    return boost::multiprecision::gcd(a, b);
}

// "num/den" (or just "num" when integral); used in oracles and reports
std::string rat_string(const Rat& x);

// fixed-point decimal with `digits` fractional digits, round half to even;
// deterministic across platforms (pure integer arithmetic)
std::string dec_string(const Rat& x, int digits);

// parse "p/q", "p", or a decimal literal like "0.25"
Rat parse_rat(const std::string& text);

// lossy; for report convenience fields only
double to_double(const Rat& x);

// rational r with r^2 >= x, within 2^-32 of sqrt(x)
Rat rat_sqrt_upper(const Rat& x);

// rational r with r^2 <= x, within 2^-32 of sqrt(x)
Rat rat_sqrt_lower(const Rat& x);

// rational upper bound on ln(x) for x >= 1: dyadic reduction against an
// upward-rounded ln 2, then ln(y) <= (y-1)/sqrt(y) on the tail y in [1,2]
Rat rat_ln_upper(const Rat& x);

}  // namespace tlab
