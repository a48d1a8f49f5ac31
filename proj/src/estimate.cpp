#include "stein/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stein {

double standard_error_of_mean(std::span<const double> values) {
    const std::size_t b = values.size();
    if (b < 2) return 0.0;
    CompensatedSum sum;
    for (double v : values) sum.add(v);
    const double mean = sum.value() / b;
    CompensatedSum sq;
    for (double v : values) sq.add((v - mean) * (v - mean));
    return std::sqrt(sq.value() / (b - 1.0) / b);
}

MomentEstimate moment_from_batches(MomentOrder order, double grand_mean,
                                   std::span<const double> batch_values, long long n_samples) {
    if (batch_values.empty()) throw std::domain_error("no batches");
    MomentEstimate est;
    est.order = order;
    est.n_samples = n_samples;
    est.n_batches = static_cast<int>(batch_values.size());
    const double r = order.value();
    const double m = std::max(grand_mean, 0.0);
    est.point = std::pow(m, 1.0 / r);
    const double se_moment = standard_error_of_mean(batch_values);
    est.std_error = m > 0.0 ? std::pow(m, 1.0 / r - 1.0) * se_moment / r : 0.0;
    return est;
}

}  // namespace stein
