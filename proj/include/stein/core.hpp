#pragma once

#include <cstdint>
#include <span>

namespace stein {

/// One draw (W, W', G, D, R) from a Stein coupling.
struct CouplingSample {
    double w = 0.0;
    double w_prime = 0.0;
    double g = 0.0;
    double d = 0.0;  // always w_prime - w
    double r_term = 0.0;

    static CouplingSample make(double w, double w_prime, double g, double r_term = 0.0) {
        return {w, w_prime, g, w_prime - w, r_term};
    }
};

/// Deterministic inputs to the moment and tail bounds.
///
/// a_norm and b_norm bound the 2k-norms of G and D. eps is the remainder slope of
/// |E[R|W]| <= eps|W - mu| + T; eps1..eps4 are the refined remainder constants used by
/// the normal-comparison bounds, with eps4 bounding sigma^-2 ||T2||_k.
struct CouplingParams {
    double a_norm = 0.0;
    double b_norm = 0.0;
    double sigma = 0.0;
    double eps = 0.0;
    double eps_prime = 0.0;
    double eps1 = 0.0;
    double eps2 = 0.0;
    double eps3 = 0.0;
    double eps4 = 0.0;
    double t_norm = 0.0;
    double t1_norm = 0.0;
    double t2_norm = 0.0;

    /// Throws std::domain_error when a field is negative/non-finite or eps >= 1.
    void validate() const;
};

/// Order r of a norm ||X||_r (also used for 2k). Always >= 1.
class MomentOrder {
public:
    explicit MomentOrder(int value);

    int value() const noexcept { return value_; }
    bool is_even() const noexcept { return value_ % 2 == 0; }
    /// Throws std::domain_error for odd orders.
    MomentOrder require_even() const;

    friend bool operator==(MomentOrder, MomentOrder) = default;
    friend auto operator<=>(MomentOrder, MomentOrder) = default;

private:
    int value_;
};

/// ||N||_{2k} for N standard normal, i.e. ((2k)! / (k! 2^k))^{1/(2k)}.
double normal_abs_norm(int two_k);

/// sqrt(2k - 1) / ||N||_{2k}; increasing in k from 1 towards sqrt(e).
double c1(int k);

/// ((1/n) sum |x_i|^r)^{1/r} with compensated accumulation.
double empirical_norm(std::span<const double> samples, MomentOrder order);

/// Neumaier-compensated running sum. Merging is order dependent only at the ulp level
/// of the compensation term; callers that need bitwise determinism merge in a fixed order.
class CompensatedSum {
public:
    void add(double x) noexcept;
    void merge(const CompensatedSum& other) noexcept;
    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace stein
