#pragma once

// Exact reference values computed independently of the library.

#include <cmath>
#include <cstdint>
#include <vector>

#include <boost/rational.hpp>

namespace oracle {

using Rational = boost::rational<long long>;

/// E W^r for W a sum of n Rademacher signs, by enumerating all 2^n patterns.
inline Rational rademacher_moment(int n, int r) {
    long long total = 0;
    for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
        long long w = 0;
        for (int i = 0; i < n; ++i) w += (mask >> i & 1U) ? 1 : -1;
        long long p = 1;
        for (int j = 0; j < r; ++j) p *= (w < 0 ? -w : w);
        total += p;
    }
    return Rational(total, 1LL << n);
}

/// P(|W| > t) for the Rademacher sum, by enumeration.
inline double rademacher_tail(int n, double t) {
    long long count = 0;
    for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
        long long w = 0;
        for (int i = 0; i < n; ++i) w += (mask >> i & 1U) ? 1 : -1;
        if (std::fabs(static_cast<double>(w)) > t) ++count;
    }
    return static_cast<double>(count) / static_cast<double>(1LL << n);
}

/// (2k)! / (k! 2^k) as an exact integer (k <= 10).
inline long long double_factorial_odd(int k) {
    long long v = 1;
    for (int j = 1; j <= 2 * k - 1; j += 2) v *= j;
    return v;
}

/// E Y^ell for Y ~ Bi(n, p) by summing the pmf.
inline long double binomial_raw_moment(int n, long double p, int ell) {
    long double total = 0.0L;
    for (int y = 0; y <= n; ++y) {
        long double choose = 1.0L;
        for (int i = 1; i <= y; ++i) choose = choose * (n - y + i) / i;
        const long double pmf = choose * std::pow(p, static_cast<long double>(y)) *
                                std::pow(1.0L - p, static_cast<long double>(n - y));
        total += pmf * std::pow(static_cast<long double>(y), static_cast<long double>(ell));
    }
    return total;
}

/// Number of circular m-runs in the bit pattern `mask` of length n.
inline int circular_runs(std::uint32_t mask, int n, int m) {
    int count = 0;
    for (int j = 0; j < n; ++j) {
        bool all = true;
        for (int s = 0; s < m; ++s) all = all && (mask >> ((j + s) % n) & 1U);
        count += all;
    }
    return count;
}

}  // namespace oracle
