#include "stein/rng.hpp"

#include <cmath>
#include <limits>

namespace stein {

Rng Rng::stream(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                      0x5731u};
    return Rng(seq);
}

std::uint64_t Rng::below(std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
        x = engine_();
    } while (x >= limit);
    return x % n;
}

double Rng::exponential(double rate) { return -std::log1p(-uniform()) / rate; }

std::uint64_t Rng::geometric(double p) {
    if (p >= 1.0) return 0;
    const double u = uniform();
    const double g = std::floor(std::log1p(-u) / std::log1p(-p));
    if (!(g < 9.0e18)) return std::numeric_limits<std::uint64_t>::max();
    return static_cast<std::uint64_t>(g);
}

std::uint64_t Rng::binomial(std::uint64_t n, double p) {
    if (p <= 0.0 || n == 0) return 0;
    if (p >= 1.0) return n;
    std::uint64_t count = 0;
    std::uint64_t pos = geometric(p);
    while (pos < n) {
        ++count;
        const std::uint64_t gap = geometric(p);
        if (gap >= n) break;
        pos += gap + 1;
    }
    return count;
}

}  // namespace stein
