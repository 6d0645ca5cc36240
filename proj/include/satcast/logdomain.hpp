#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>

// Base-2 log-domain arithmetic for probability masses and node counts that
// overflow double (branches reach depth 2000+, estimates reach 2^1000+).

namespace satcast {

inline constexpr double kNegInfLog2 = -std::numeric_limits<double>::infinity();

// log2(2^a + 2^b).
inline double log2_add(double a, double b) {
    if (a == kNegInfLog2) return b;
    if (b == kNegInfLog2) return a;
    if (a < b) std::swap(a, b);
    return a + std::log2(1.0 + std::exp2(b - a));
}

// log2(2^a - 2^b), requiring b <= a. A removal exceeding the running sum by
// more than the guard means estimator state desynced from the trace; that is
// an error, not something to clamp.
inline double log2_sub(double a, double b) {
    if (b == kNegInfLog2) return a;
    if (b > a) {
        if (b - a <= 1e-9) return kNegInfLog2;
        throw std::logic_error("log2_sub: removing more mass than present");
    }
    if (b == a) return kNegInfLog2;
    const double d = -std::expm1((b - a) * M_LN2);  // 1 - 2^(b-a), computed stably
    return a + std::log2(d);
}

// log2 of a sum of powers of two given as exponents.
inline double log2_sum(std::span<const double> exponents) {
    double acc = kNegInfLog2;
    for (double e : exponents) acc = log2_add(acc, e);
    return acc;
}

}  // namespace satcast
