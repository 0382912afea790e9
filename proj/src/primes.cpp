#include "tlab/primes.hpp"

#include <array>
#include <vector>

namespace tlab {
namespace {

const std::vector<uint32_t>& small_primes() {
    static const std::vector<uint32_t> table = [] {
        const uint32_t limit = 100000;
        std::vector<bool> composite(limit, false);
        std::vector<uint32_t> out;
        for (uint32_t i = 2; i < limit; ++i) {
            if (composite[i]) continue;
            out.push_back(i);
            for (uint64_t j = uint64_t(i) * i; j < limit; j += i) composite[size_t(j)] = true;
        }
        return out;
    }();
    return table;
}

Int pow_mod(Int base, Int exp, const Int& mod) {
    Int result = 1;
    base %= mod;
    if (base < 0) base += mod;
    while (exp > 0) {
        if ((exp & 1) != 0) result = result * base % mod;
        base = base * base % mod;
        exp >>= 1;
    }
    return result;
}

// strong probable-prime test to the given base; n odd, > 2, coprime to base
bool miller_rabin(const Int& n, const Int& base) {
    Int d = n - 1;
    unsigned s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    Int x = pow_mod(base, d, n);
    if (x == 1 || x == n - 1) return true;
    for (unsigned i = 1; i < s; ++i) {
        x = x * x % n;
        if (x == n - 1) return true;
    }
    return false;
}

int jacobi(Int a, Int n) {
    a %= n;
    if (a < 0) a += n;
    int result = 1;
    while (a != 0) {
        while ((a & 1) == 0) {
            a >>= 1;
            Int r = n % 8;
            if (r == 3 || r == 5) result = -result;
        }
        std::swap(a, n);
        if ((a & 3) == 3 && (n & 3) == 3) result = -result;
        a %= n;
    }
    return n == 1 ? result : 0;
}

// strong Lucas probable-prime test with Selfridge parameters; n odd, not a square
bool strong_lucas(const Int& n) {
    // D = 5, -7, 9, -11, ... with jacobi(D, n) == -1
    Int D = 5;
    while (true) {
        int j = jacobi(D, n);
        if (j == 0) return false;  // shares a factor with n
        if (j == -1) break;
        if (D > 0)
            D = -(D + 2);
        else
            D = -(D - 2);
    }
    Int P = 1;
    Int Q = (1 - D) / 4;

    Int d = n + 1;
    unsigned s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }

    auto norm = [&](Int v) {
        v %= n;
        if (v < 0) v += n;
        return v;
    };
    // half of v mod odd n
    auto halve = [&](Int v) { return ((v & 1) != 0 ? (v + n) : v) >> 1; };

    // compute U_d, V_d by binary ladder over the bits of d
    Int U = 1, V = P, Qk = norm(Q);
    size_t bits = 0;
    for (Int t = d; t > 1; t >>= 1) ++bits;
    for (size_t i = bits; i-- > 0;) {
        U = norm(U * V);
        V = norm(V * V - 2 * Qk);
        Qk = norm(Qk * Qk);
        if (((d >> i) & 1) != 0) {
            Int U2 = halve(norm(P * U + V));
            Int V2 = halve(norm(D * U + P * V));
            U = U2;
            V = V2;
            Qk = norm(Qk * Q);
        }
    }

    if (U == 0 || V == 0) return true;
    for (unsigned r = 1; r < s; ++r) {
        V = norm(V * V - 2 * Qk);
        if (V == 0) return true;
        Qk = norm(Qk * Qk);
    }
    return false;
}

bool is_square(const Int& n) {
    if (n < 0) return false;
    Int r = boost::multiprecision::sqrt(n);
    return r * r == n;
}

}  // namespace

bool is_prime(const Int& n) {
    if (n < 2) return false;
    for (uint32_t p : small_primes()) {
        Int pp = p;
        if (pp * pp > n) return true;
        if (n % pp == 0) return n == pp;
    }
    if (!miller_rabin(n, 2)) return false;
    if (is_square(n)) return false;
    if (!strong_lucas(n)) return false;
    // belt-and-braces for the scheduler path: fixed extra bases
    static const std::array<int, 24> bases = {3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41,
                                              43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97};
    for (int b : bases) {
        if (n % b == 0) return n == b;
        if (!miller_rabin(n, b)) return false;
    }
    return true;
}

Int next_prime_above(const Int& n) {
    Int c = n + 1;
    if (c <= 2) return 2;
    if ((c & 1) == 0) ++c;
    while (!is_prime(c)) c += 2;
    return c;
}

}  // namespace tlab
