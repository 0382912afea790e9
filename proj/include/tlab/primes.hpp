#pragma once

/**
 * @file primes.hpp
 * @brief Deterministic primality and prime search for arbitrary-size integers.
 *
 * Trial division below 10^5, then Baillie-PSW (strong base-2 Fermat test plus
 * a strong Lucas test with Selfridge parameters) reinforced with fixed
 * Miller-Rabin bases up to 97. No randomized component: results are stable
 * across runs and platforms.
 */

#include "tlab/rational.hpp"

namespace tlab {

bool is_prime(const Int& n);

// smallest prime strictly greater than n
Int next_prime_above(const Int& n);

}  // namespace tlab
