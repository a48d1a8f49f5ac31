#pragma once

#include <span>

#include "stein/core.hpp"

namespace stein {

/// Monte Carlo estimate of ||X||_r with a batch-means standard error.
struct MomentEstimate {
    MomentOrder order{1};
    double point = 0.0;
    double std_error = 0.0;
    long long n_samples = 0;
    int n_batches = 0;
};

/// Minimum number of batches for an estimate that feeds a verdict.
inline constexpr int kMinBatches = 30;

/// Builds ||X||_r from the grand mean M of |X|^r and per-batch linearized values whose
/// spread gives SE(M); SE(point) = (1/r) M^{1/r - 1} SE(M) by the delta method.
MomentEstimate moment_from_batches(MomentOrder order, double grand_mean,
                                   std::span<const double> batch_values, long long n_samples);

/// Sample standard deviation of the values divided by sqrt(count).
double standard_error_of_mean(std::span<const double> values);

}  // namespace stein
