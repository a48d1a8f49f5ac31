#include "stein/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace stein {

namespace {

void require_non_negative(double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
        throw std::domain_error(std::string("CouplingParams.") + name + " must be finite and >= 0");
    }
}

// Largest r * log|x| for which |x|^r is safely representable.
constexpr double kMaxLogTerm = 700.0;

}  // namespace

void CouplingParams::validate() const {
    require_non_negative(a_norm, "a_norm");
    require_non_negative(b_norm, "b_norm");
    require_non_negative(sigma, "sigma");
    require_non_negative(eps, "eps");
    require_non_negative(eps_prime, "eps_prime");
    require_non_negative(eps1, "eps1");
    require_non_negative(eps2, "eps2");
    require_non_negative(eps3, "eps3");
    require_non_negative(eps4, "eps4");
    require_non_negative(t_norm, "t_norm");
    require_non_negative(t1_norm, "t1_norm");
    require_non_negative(t2_norm, "t2_norm");
    if (eps >= 1.0) throw std::domain_error("CouplingParams.eps must be < 1");
}

MomentOrder::MomentOrder(int value) : value_(value) {
    if (value < 1) throw std::domain_error("moment order must be >= 1, got " + std::to_string(value));
}

MomentOrder MomentOrder::require_even() const {
    if (!is_even()) {
        throw std::domain_error("moment order must be even, got " + std::to_string(value_));
    }
    return *this;
}

double normal_abs_norm(int two_k) {
    if (two_k < 2 || two_k % 2 != 0) {
        throw std::domain_error("normal_abs_norm needs an even order >= 2, got " +
                                std::to_string(two_k));
    }
    const int k = two_k / 2;
    // (2k)! / (k! 2^k) = (2k - 1)!!, exact in a double up to k = 10.
    if (k <= 10) {
        double double_factorial = 1.0;
        for (int j = 3; j < two_k; j += 2) double_factorial *= j;
        return std::pow(double_factorial, 1.0 / two_k);
    }
    const double log_moment = std::lgamma(two_k + 1.0) - std::lgamma(k + 1.0) - k * std::log(2.0);
    return std::exp(log_moment / two_k);
}

double c1(int k) {
    if (k < 1) throw std::domain_error("c1 needs k >= 1, got " + std::to_string(k));
    return std::sqrt(2.0 * k - 1.0) / normal_abs_norm(2 * k);
}

double empirical_norm(std::span<const double> samples, MomentOrder order) {
    if (samples.empty()) throw std::domain_error("empirical_norm of an empty sample");
    const double r = order.value();
    double max_abs = 0.0;
    for (double x : samples) max_abs = std::max(max_abs, std::abs(x));
    if (max_abs == 0.0) return 0.0;
    const double n = static_cast<double>(samples.size());

    if (r * std::log(max_abs) < kMaxLogTerm) {
        CompensatedSum acc;
        for (double x : samples) acc.add(std::pow(std::abs(x), r));
        return std::pow(acc.value() / n, 1.0 / r);
    }
    // log-sum-exp of r log|x_i|
    const double shift = r * std::log(max_abs);
    CompensatedSum acc;
    for (double x : samples) {
        if (x != 0.0) acc.add(std::exp(r * std::log(std::abs(x)) - shift));
    }
    return std::exp((shift + std::log(acc.value()) - std::log(n)) / r);
}

void CompensatedSum::add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
        comp_ += (sum_ - t) + x;
    } else {
        comp_ += (x - t) + sum_;
    }
    sum_ = t;
}

void CompensatedSum::merge(const CompensatedSum& other) noexcept {
    add(other.sum_);
    add(other.comp_);
}

}  // namespace stein
