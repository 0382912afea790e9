#include "tlab/rational.hpp"

#include <cmath>
#include <cstddef>

namespace tlab {

std::string rat_string(const Rat& x) {
    std::string s = num(x).str();
    if (den(x) != 1) s += "/" + den(x).str();
    return s;
}

std::string dec_string(const Rat& x, int digits) {
    if (digits < 0) digits = 0;
    const bool neg = x < 0;
    const Rat a = neg ? Rat(-x) : x;
    const Int scale = pow_int(10, static_cast<unsigned>(digits));
    // round half to even on the scaled value
    const Int n = num(a) * scale;
    const Int d = den(a);
    Int q = n / d;
    const Int r2 = (n - q * d) * 2;
    if (r2 > d || (r2 == d && (q & 1) != 0)) ++q;
    std::string body = q.str();
    const std::size_t width = static_cast<std::size_t>(digits) + 1;
    if (body.size() < width) body.insert(0, width - body.size(), '0');
    if (digits > 0) body.insert(body.size() - static_cast<std::size_t>(digits), ".");
    return neg && q != 0 ? "-" + body : body;
}

Rat parse_rat(const std::string& text) {
    if (text.empty()) throw InvalidInput("empty rational literal");
    const auto slash = text.find('/');
    try {
        if (slash != std::string::npos) {
            Int n(text.substr(0, slash));
            Int d(text.substr(slash + 1));
            return make_rat(n, d);
        }
        const auto dot = text.find('.');
        if (dot == std::string::npos) return Rat(Int(text));
        std::string whole = text.substr(0, dot);
        std::string frac = text.substr(dot + 1);
        bool neg = !whole.empty() && whole[0] == '-';
        if (whole == "-" || whole.empty()) whole = "0";
        Int scale = pow_int(10, static_cast<unsigned>(frac.size()));
        Int n = Int(whole) * scale;
        Int f = frac.empty() ? Int(0) : Int(frac);
        if (neg)
            n -= f;
        else
            n += f;
        return make_rat(n, scale);
    } catch (const std::exception&) {
        throw InvalidInput("bad rational literal '" + text + "'");
    }
}

double to_double(const Rat& x) {
    return static_cast<double>(x);
}

Rat rat_sqrt_upper(const Rat& x) {
    if (x < 0) throw InvalidInput("rat_sqrt_upper of negative");
    Int K = Int(1) << 32;
    Int c = (num(x) * K * K + den(x) - 1) / den(x);
    Int r = boost::multiprecision::sqrt(c);
    if (r * r < c) ++r;
    return Rat(r, K);
}

Rat rat_sqrt_lower(const Rat& x) {
    if (x < 0) throw InvalidInput("rat_sqrt_lower of negative");
    Int K = Int(1) << 32;
    Int c = (num(x) * K * K) / den(x);
    return Rat(boost::multiprecision::sqrt(c), K);
}

Rat rat_ln_upper(const Rat& x) {
    if (x < 1) throw InvalidInput("rat_ln_upper needs x >= 1");
    // ln 2 = 0.6931471805599453094...; numerator rounded up at the 16th digit
    static const Rat kLn2Upper = Rat(Int(6931471805599454LL), Int(10000000000000000LL));
    // (y-1)/sqrt(y) - ln y has derivative (sqrt(y)-1)^2/(2 y sqrt(y)) >= 0
    // and vanishes at y = 1, so the tail bound holds on all of [1, 2]
    Rat y = x;
    Int k = 0;
    while (y > 2) {
        y /= 2;
        ++k;
    }
    return Rat(k) * kLn2Upper + (y - 1) / rat_sqrt_lower(y);
}

}  // namespace tlab
