#pragma once

#include <span>
#include <string>
#include <vector>

#include "stein/bounds.hpp"
#include "stein/couplings.hpp"
#include "stein/estimate.hpp"

namespace stein {

/// Sample budget shared by every estimator. n_samples must be divisible by n_batches.
/// Batch b always draws from Rng::stream(seed, b), whatever the worker count.
struct McOptions {
    long long n_samples = 100000;
    int n_batches = 50;
    /// 0 means resolve_worker_count().
    int workers = 0;
};

struct TailEstimate {
    double t = 0.0;
    double p_hat = 0.0;
    double std_error = 0.0;
    long long n_samples = 0;
};

/// Both sides of E[G(f(W') - f(W))] = E[(W - mu) f(W)] for f(w) = (w - mu)^j.
struct IdentityTerm {
    int degree = 1;
    double lhs = 0.0;
    double rhs = 0.0;
    double z_score = 0.0;
};

struct IdentityReport {
    std::vector<IdentityTerm> terms;
    long long n_samples = 0;
    /// Largest |z| over the terms.
    double max_abs_z() const;
};

/// Plain mean with batch-means standard error.
struct MeanEstimate {
    double mean = 0.0;
    double std_error = 0.0;
};

/// Everything one simulation pass produces.
struct SimulationResult {
    double mu = 0.0;
    bool mu_exact = true;
    MeanEstimate mean_w;
    MeanEstimate mean_d;
    /// E(GD), the coupling's estimate of Var W.
    MeanEstimate mean_gd;
    std::vector<MomentEstimate> moments;
    std::vector<TailEstimate> tails;
    IdentityReport identity;
};

/// Orders above this are rejected: their standard errors are unusable in practice.
inline constexpr int kMaxMomentOrder = 12;
inline constexpr int kMaxIdentityDegree = 6;
inline constexpr long long kMinTailSamples = 10000;

/// One pass (two when E W has no closed form: the first estimates it) over the
/// model's coupling samples, filling every requested estimate from the same draws.
SimulationResult simulate(const PreparedModel& model, std::span<const MomentOrder> orders,
                          std::span<const double> thresholds, int max_f_degree, const McOptions& opt);

std::vector<MomentEstimate> estimate_central_moments(const PreparedModel& model,
                                                     std::span<const MomentOrder> orders,
                                                     const McOptions& opt);
IdentityReport check_stein_identity(const PreparedModel& model, int max_f_degree, const McOptions& opt);
std::vector<TailEstimate> estimate_tail(const PreparedModel& model, std::span<const double> thresholds,
                                        const McOptions& opt);

// ---- verdicts ----------------------------------------------------------------------

enum class VerdictStatus { holds, violated, inconclusive, bound_inapplicable };
std::string to_string(VerdictStatus s);

struct Verdict {
    BoundValue bound;
    MomentEstimate estimate;
    VerdictStatus status = VerdictStatus::inconclusive;
    /// estimate + 3 SE <= bound.
    bool strictly_dominated = false;
};

/// A bound on ||W - mu||_order.
struct OrderedBound {
    MomentOrder order{1};
    BoundValue bound;
};

inline constexpr double kVerdictSigmas = 3.0;

/// Status from a point estimate and its standard error.
VerdictStatus classify(const BoundValue& bound, double point, double std_error, bool* strictly_dominated = nullptr);

/// Pairs bounds and estimates index by index; throws ConfigError on a size or order mismatch.
std::vector<Verdict> verify_bounds(std::span<const OrderedBound> bounds, std::span<const MomentEstimate> estimates);

// ---- exhaustive harness for the random-subset Minkowski inequality ------------------

/// Finite law of one Y_i.
struct DiscreteLaw {
    std::vector<double> values;
    std::vector<double> probs;
};

struct SubsetSumNorms {
    double lhs = 0.0;  // || sum_{i in E} Y_i ||_ell
    double rhs = 0.0;  // max_i ||Y_i||_ell * || |E| ||_ell
};

/// Exact evaluation by enumerating every subset (subset_probs indexed by bit mask over
/// the |laws| indices) and every joint value of the independent Y_i.
SubsetSumNorms subset_sum_norms(std::span<const DiscreteLaw> laws, std::span<const double> subset_probs, int ell);

}  // namespace stein
