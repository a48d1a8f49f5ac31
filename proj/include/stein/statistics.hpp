#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "stein/graph.hpp"

namespace stein {

/// U = 1{deg(root) in degrees}. Growth (c, beta, r) = (1, 0, 1).
struct DegreeIndicator {
    std::vector<int> degrees;  // sorted, unique
};

/// U = number of copies of a connected pattern H containing the root.
/// Growth (|V(H)|, |V(H)| - 1, diam H).
struct RootedSubgraphCount {
    int pattern_vertices = 0;
    std::vector<std::pair<int, int>> pattern_edges;
};

/// U = 1{deg(root) >= d and at most k neighbours have degree <= d}. Growth (1, 0, 2).
struct HighDegreeFewSmallNeighbours {
    int d = 0;
    int k = 0;
};

/// User statistic with a declared growth bound |U| <= c |V|^beta, checked on every call.
struct CustomStatistic {
    std::string name;
    double c = 1.0;
    double beta = 0.0;
    int r = 1;
    std::function<double(const RootedNeighbourhood&)> fn;
};

/// Neighbourhood statistic U with its declared growth constants.
class StatisticSpec {
public:
    using Variant =
        std::variant<DegreeIndicator, RootedSubgraphCount, HighDegreeFewSmallNeighbours, CustomStatistic>;

    /// Validates the variant (pattern connected, d, k >= 0, ...); throws std::invalid_argument.
    explicit StatisticSpec(Variant v);

    static StatisticSpec isolated_vertices() { return StatisticSpec(DegreeIndicator{{0}}); }
    /// Named patterns: "edge", "triangle", "path3", "star3", "square".
    static StatisticSpec subgraph(const std::string& pattern_name);

    const Variant& variant() const noexcept { return v_; }
    double c() const noexcept { return c_; }
    double beta() const noexcept { return beta_; }
    int radius() const noexcept { return r_; }
    std::string describe() const;

    /// |Aut(H)| for subgraph counts, 1 otherwise.
    long long automorphisms() const noexcept { return automorphisms_; }

private:
    Variant v_;
    double c_ = 1.0;
    double beta_ = 0.0;
    int r_ = 1;
    long long automorphisms_ = 1;
};

/// U(nbhd). Throws std::domain_error if nbhd.radius != spec.radius(), and
/// std::logic_error if the value breaks the declared bound |U| <= c |V|^beta.
double evaluate_statistic(const StatisticSpec& spec, const RootedNeighbourhood& nbhd);

/// Exact mean of X_i = U(N_r(i)) under ER(n, p) when a closed form is known
/// (degree indicators: binomial degree law). Empty otherwise.
std::optional<double> exact_statistic_mean(const StatisticSpec& spec, std::size_t n, double p);

}  // namespace stein
