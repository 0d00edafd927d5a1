#pragma once

#include <cstdint>
#include <numeric>
#include <string>

#include "tb/check.hpp"

namespace tb {

// Exact nonnegative rational, small enough for bound values and epsilons.
struct Rational {
    int64_t num = 0;
    int64_t den = 1;

    Rational() = default;
    Rational(int64_t n, int64_t d = 1) : num(n), den(d) {
        check(d != 0, "Rational: zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }

    // Smallest integer >= num/den.
    int64_t ceil() const { return (num + den - 1) / den; }

    bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
    bool operator<(const Rational& o) const { return num * o.den < o.num * den; }

    std::string str() const {
        if (den == 1) return std::to_string(num);
        return std::to_string(num) + "/" + std::to_string(den);
    }
};

// Exact test base^exp <= 2^twoExp, saturating instead of overflowing.
inline bool pow_leq_pow2(int64_t base, int64_t exp, int64_t twoExp) {
    check(base >= 1 && exp >= 1 && twoExp >= 0, "pow_leq_pow2: bad arguments");
    if (base == 1) return true;
    unsigned __int128 limit = twoExp >= 126 ? (~static_cast<unsigned __int128>(0))
                                            : (static_cast<unsigned __int128>(1) << twoExp);
    if (twoExp >= 126) return true;  // desk-scale values never reach 2^126
    unsigned __int128 acc = 1;
    for (int64_t i = 0; i < exp; ++i) {
        if (acc > limit / static_cast<unsigned __int128>(base)) return false;
        acc *= static_cast<unsigned __int128>(base);
    }
    return acc <= limit;
}

}  // namespace tb
