#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "stein/bounds.hpp"
#include "stein/core.hpp"
#include "stein/graph.hpp"
#include "stein/rng.hpp"
#include "stein/statistics.hpp"

namespace stein {

enum class ModelKind { independent_sum, local_dependence_runs, size_bias_runs, er_neighbourhood };

std::string to_string(ModelKind kind);
ModelKind parse_model_kind(const std::string& name);

enum class SummandKind { rademacher, centered_bernoulli, centered_exponential };

/// Mean-zero summand law. `param` is p for Bernoulli, the rate for exponential.
struct Summand {
    SummandKind kind = SummandKind::rademacher;
    double param = 0.0;
};

struct IndependentSumParams {
    long long n = 50;
    Summand summand;
};

/// m-runs in n Bernoulli(p) trials, indices taken mod n.
struct RunsParams {
    long long n = 1000;
    int m = 2;
    double p = 0.5;
    bool circular = true;
};

/// Closed form for E X_i; an empty value asks for the built-in formula.
struct ExactMean {
    std::optional<double> value;
};
/// Pilot Monte Carlo estimate of E X_i from n_pilot independent graphs.
struct EstimatedMean {
    long long n_pilot = 0;
};

struct ERParams {
    long long n = 200;
    double lambda = 2.0;
    int r = 1;
    StatisticSpec statistic = StatisticSpec::isolated_vertices();
    std::variant<ExactMean, EstimatedMean> mu_x = ExactMean{};
};

struct ModelSpec {
    ModelKind kind = ModelKind::independent_sum;
    std::variant<IndependentSumParams, RunsParams, ERParams> params = IndependentSumParams{};
    std::uint64_t seed = 1;
    /// Multiplies G. Anything but 1 breaks the coupling; used for negative controls.
    double g_scale = 1.0;

    /// Throws ConfigError on invalid parameters.
    void validate() const;
    std::string label() const;
};

/// Draws coupling samples. One instance per thread.
class CouplingSampler {
public:
    virtual ~CouplingSampler() = default;
    virtual CouplingSample draw(Rng& rng) = 0;
};

/// A named closed-form bound matched to a model at one moment order.
struct ModelBound {
    std::string theorem;
    BoundValue bound;
};

/// A ModelSpec with everything resolved that must be computed once per run
/// (e.g. a pilot estimate of E X_i). Immutable and shareable across threads.
class PreparedModel {
public:
    /// Validates and, for estimated ER means, runs the pilot on stream (seed, 2^62).
    static PreparedModel prepare(const ModelSpec& spec);

    const ModelSpec& spec() const noexcept { return spec_; }
    std::unique_ptr<CouplingSampler> make_sampler() const;

    /// E W when known in closed form.
    std::optional<double> exact_mean() const noexcept { return exact_mean_; }
    /// sd(W) when known in closed form.
    std::optional<double> exact_sd() const noexcept { return exact_sd_; }
    /// E X_i used in G for ER models, and the pilot standard error (0 if exact).
    double mu_x() const noexcept { return mu_x_; }
    double mu_x_std_error() const noexcept { return mu_x_se_; }

    /// Bounds on ||W - mu||_{2k} that apply to this model, from its analytic A, B, sigma.
    std::vector<ModelBound> moment_bounds(int k) const;
    /// Tail bounds on P[|W - mu| > t] that apply to this model.
    std::vector<ModelBound> tail_bounds(double t) const;

private:
    ModelSpec spec_;
    std::optional<double> exact_mean_;
    std::optional<double> exact_sd_;
    double mu_x_ = 0.0;
    double mu_x_se_ = 0.0;
};

// ---- building blocks shared by samplers and exhaustive tests -------------------------

/// ||X||_r of one summand (exact).
double summand_norm(const Summand& s, int r);
/// Number of windows j (mod n) with bits[j..j+m-1] all one.
long long count_runs(std::span<const std::uint8_t> bits, int m);
/// Size-bias move: force bits[i..i+m-1] to one. Returns W^s - W.
long long size_bias_increment(std::span<const std::uint8_t> bits, int m, std::size_t i);
/// Local-dependence coupling for fixed trials and index i (exact, R = 0).
CouplingSample local_dependence_coupling(std::span<const std::uint8_t> bits, int m, double p,
                                         std::size_t i);
/// Exact Var W for circular m-run counts, n >= 2m.
double circular_runs_variance(long long n, int m, double p);

/// The ER edge-resampling coupling, exposed so tests can inspect both graphs.
class ErNeighbourhoodSampler final : public CouplingSampler {
public:
    ErNeighbourhoodSampler(const ERParams& params, double mu_x, double g_scale);
    CouplingSample draw(Rng& rng) override;

    const SparseGraph& base_graph() const noexcept { return base_; }
    SparseGraph resampled_graph() const { return overlay_.materialize(); }
    Vertex last_root() const noexcept { return last_root_; }
    /// W computed from scratch on a graph (all n neighbourhoods).
    double full_statistic_sum(const SparseGraph& g);

private:
    ERParams params_;
    double p_;
    double mu_x_;
    double g_scale_;
    SparseGraph base_;
    GraphOverlay overlay_;
    NeighbourhoodScratch scratch_;
    RootedNeighbourhood nbhd_;
    std::vector<double> x_;
    std::vector<char> in_ball_;
    Vertex last_root_ = 0;
};

}  // namespace stein
