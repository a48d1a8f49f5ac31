#include "stein/er_moments.hpp"

#include <cmath>

#include "stein/errors.hpp"
#include "stein/graph.hpp"
#include "stein/parallel.hpp"

namespace stein {

MomentEstimate neighbourhood_size_moments_mc(long long n, double lambda, int r, int ell, long long n_samples,
                                             std::uint64_t seed, int n_batches, int workers) {
    if (n < 1) throw ConfigError("n must be >= 1");
    if (!(lambda >= 0.0) || lambda > static_cast<double>(n)) throw ConfigError("lambda must be in [0, n]");
    if (r < 0) throw ConfigError("r must be >= 0");
    if (ell < 1) throw ConfigError("ell must be >= 1");
    if (n_batches < 1 || n_samples <= 0 || n_samples % n_batches != 0) {
        throw ConfigError("n_samples must be a positive multiple of n_batches");
    }
    const long long per_batch = n_samples / n_batches;
    const double p = lambda / static_cast<double>(n);
    std::vector<double> batch(n_batches);
    parallel_for_batches(
        n_batches, resolve_worker_count(workers),
        [&] { return std::pair{NeighbourhoodScratch(n), RootedNeighbourhood{}}; },
        [&](auto& state, int b) {
            auto& [scratch, nbhd] = state;
            Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(b));
            CompensatedSum acc;
            for (long long s = 0; s < per_batch; ++s) {
                const SparseGraph g = generate_er(n, p, rng);
                scratch.build(g, 0, r, nbhd);
                acc.add(std::pow(static_cast<double>(nbhd.size()), ell));
            }
            batch[b] = acc.value() / static_cast<double>(per_batch);
        });
    CompensatedSum total;
    for (double v : batch) total.add(v);
    return moment_from_batches(MomentOrder(ell), total.value() / n_batches, batch, n_samples);
}

}  // namespace stein
