#pragma once

#include <cstdint>

#include "stein/estimate.hpp"

namespace stein {

/// Monte Carlo estimate of || |V(N_r(0))| ||_ell over fresh ER(n, lambda/n) graphs,
/// with a batch-means standard error. Batch b uses Rng::stream(seed, b).
MomentEstimate neighbourhood_size_moments_mc(long long n, double lambda, int r, int ell, long long n_samples,
                                             std::uint64_t seed, int n_batches = 50, int workers = 0);

}  // namespace stein
