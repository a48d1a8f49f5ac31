#include "stein/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace stein {

namespace {

using PatternAdjacency = std::vector<std::vector<int>>;

PatternAdjacency pattern_adjacency(const RootedSubgraphCount& h) {
    PatternAdjacency adj(h.pattern_vertices);
    for (auto [a, b] : h.pattern_edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    for (auto& list : adj) std::sort(list.begin(), list.end());
    return adj;
}

std::vector<int> bfs_distances(const PatternAdjacency& adj, int source) {
    std::vector<int> dist(adj.size(), -1);
    std::vector<int> queue{source};
    dist[source] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        for (int w : adj[queue[head]]) {
            if (dist[w] < 0) {
                dist[w] = dist[queue[head]] + 1;
                queue.push_back(w);
            }
        }
    }
    return dist;
}

// Counts injective maps phi: pattern -> target with phi(start) = anchor and every pattern
// edge sent to a target edge. `order` lists pattern vertices so that each one after the
// first has an earlier neighbour.
template <class HasEdge, class Candidates>
long long count_embeddings(const PatternAdjacency& pattern, const std::vector<int>& order,
                           int anchor, std::size_t target_size, HasEdge has_edge,
                           Candidates candidates) {
    const int h = static_cast<int>(pattern.size());
    std::vector<int> image(h, -1);
    std::vector<char> used(target_size, 0);
    std::vector<int> position(h);
    for (int i = 0; i < h; ++i) position[order[i]] = i;

    long long count = 0;
    auto extend = [&](auto&& self, int depth) -> void {
        if (depth == h) {
            ++count;
            return;
        }
        const int x = order[depth];
        // An already-placed neighbour of x supplies the candidate list.
        int parent = -1;
        for (int y : pattern[x]) {
            if (position[y] < depth) {
                parent = y;
                break;
            }
        }
        for (int cand : candidates(image[parent])) {
            if (used[cand]) continue;
            bool ok = true;
            for (int y : pattern[x]) {
                if (position[y] < depth && !has_edge(image[y], cand)) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;
            image[x] = cand;
            used[cand] = 1;
            self(self, depth + 1);
            used[cand] = 0;
            image[x] = -1;
        }
    };
    image[order[0]] = anchor;
    used[anchor] = 1;
    extend(extend, 1);
    return count;
}

std::vector<int> bfs_order(const PatternAdjacency& adj, int source) {
    std::vector<int> order{source};
    std::vector<char> seen(adj.size(), 0);
    seen[source] = 1;
    for (std::size_t head = 0; head < order.size(); ++head) {
        for (int w : adj[order[head]]) {
            if (!seen[w]) {
                seen[w] = 1;
                order.push_back(w);
            }
        }
    }
    return order;
}

long long pattern_automorphisms(const RootedSubgraphCount& h) {
    const PatternAdjacency adj = pattern_adjacency(h);
    const std::vector<int> order = bfs_order(adj, 0);
    auto has_edge = [&](int a, int b) { return std::binary_search(adj[a].begin(), adj[a].end(), b); };
    auto candidates = [&](int v) -> const std::vector<int>& { return adj[v]; };
    long long total = 0;
    for (int anchor = 0; anchor < h.pattern_vertices; ++anchor) {
        if (adj[anchor].size() != adj[0].size()) continue;
        total += count_embeddings(adj, order, anchor, adj.size(), has_edge, candidates);
    }
    return total;
}

double count_rooted_copies(const RootedSubgraphCount& h, long long automorphisms,
                           const RootedNeighbourhood& nbhd) {
    const PatternAdjacency pattern = pattern_adjacency(h);
    const auto& adj = nbhd.adjacency;
    auto has_edge = [&](int a, int b) { return std::binary_search(adj[a].begin(), adj[a].end(), b); };
    auto candidates = [&](int v) -> const std::vector<int>& { return adj[v]; };
    long long maps = 0;
    // Each injective map hits the root from exactly one pattern vertex.
    for (int start = 0; start < h.pattern_vertices; ++start) {
        if (static_cast<int>(adj[0].size()) < static_cast<int>(pattern[start].size())) continue;
        maps += count_embeddings(pattern, bfs_order(pattern, start), 0, nbhd.size(), has_edge, candidates);
    }
    return static_cast<double>(maps / automorphisms);
}

double binomial_pmf(long long n, long long k, double p) {
    if (k < 0 || k > n) return 0.0;
    if (p == 0.0) return k == 0 ? 1.0 : 0.0;
    if (p == 1.0) return k == n ? 1.0 : 0.0;
    const double log_choose = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
    return std::exp(log_choose + k * std::log(p) + (n - k) * std::log1p(-p));
}

}  // namespace

StatisticSpec::StatisticSpec(Variant v) : v_(std::move(v)) {
    std::visit(
        [this](auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, DegreeIndicator>) {
                for (int d : s.degrees) {
                    if (d < 0) throw std::invalid_argument("degree set entries must be >= 0");
                }
                std::sort(s.degrees.begin(), s.degrees.end());
                s.degrees.erase(std::unique(s.degrees.begin(), s.degrees.end()), s.degrees.end());
                c_ = 1.0;
                beta_ = 0.0;
                r_ = 1;
            } else if constexpr (std::is_same_v<T, RootedSubgraphCount>) {
                if (s.pattern_vertices < 2) throw std::invalid_argument("pattern needs >= 2 vertices");
                for (auto& [a, b] : s.pattern_edges) {
                    if (a < 0 || b < 0 || a >= s.pattern_vertices || b >= s.pattern_vertices || a == b) {
                        throw std::invalid_argument("bad pattern edge");
                    }
                    if (a > b) std::swap(a, b);
                }
                std::sort(s.pattern_edges.begin(), s.pattern_edges.end());
                if (std::adjacent_find(s.pattern_edges.begin(), s.pattern_edges.end()) !=
                    s.pattern_edges.end()) {
                    throw std::invalid_argument("duplicate pattern edge");
                }
                const PatternAdjacency adj = pattern_adjacency(s);
                int diameter = 0;
                for (int src = 0; src < s.pattern_vertices; ++src) {
                    for (int d : bfs_distances(adj, src)) {
                        if (d < 0) throw std::invalid_argument("pattern must be connected");
                        diameter = std::max(diameter, d);
                    }
                }
                c_ = s.pattern_vertices;
                beta_ = s.pattern_vertices - 1.0;
                r_ = diameter;
                automorphisms_ = pattern_automorphisms(s);
            } else if constexpr (std::is_same_v<T, HighDegreeFewSmallNeighbours>) {
                if (s.d < 0 || s.k < 0) throw std::invalid_argument("d and k must be >= 0");
                c_ = 1.0;
                beta_ = 0.0;
                r_ = 2;
            } else {
                if (!s.fn) throw std::invalid_argument("custom statistic needs a function");
                if (!(s.c > 0.0) || !(s.beta >= 0.0) || s.r < 0) {
                    throw std::invalid_argument("custom statistic needs c > 0, beta >= 0, r >= 0");
                }
                c_ = s.c;
                beta_ = s.beta;
                r_ = s.r;
            }
        },
        v_);
}

StatisticSpec StatisticSpec::subgraph(const std::string& name) {
    RootedSubgraphCount h;
    if (name == "edge") {
        h = {2, {{0, 1}}};
    } else if (name == "triangle") {
        h = {3, {{0, 1}, {1, 2}, {0, 2}}};
    } else if (name == "path3") {
        h = {3, {{0, 1}, {1, 2}}};
    } else if (name == "star3") {
        h = {4, {{0, 1}, {0, 2}, {0, 3}}};
    } else if (name == "square") {
        h = {4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}}};
    } else {
        throw std::invalid_argument("unknown pattern '" + name + "'");
    }
    return StatisticSpec(std::move(h));
}

std::string StatisticSpec::describe() const {
    std::ostringstream out;
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, DegreeIndicator>) {
                out << "degree_indicator{";
                for (std::size_t i = 0; i < s.degrees.size(); ++i) out << (i ? "," : "") << s.degrees[i];
                out << "}";
            } else if constexpr (std::is_same_v<T, RootedSubgraphCount>) {
                out << "subgraph_count(" << s.pattern_vertices << "v," << s.pattern_edges.size() << "e)";
            } else if constexpr (std::is_same_v<T, HighDegreeFewSmallNeighbours>) {
                out << "high_degree(d=" << s.d << ",k=" << s.k << ")";
            } else {
                out << "custom(" << s.name << ")";
            }
        },
        v_);
    return out.str();
}

double evaluate_statistic(const StatisticSpec& spec, const RootedNeighbourhood& nbhd) {
    if (nbhd.radius != spec.radius()) {
        throw std::domain_error("statistic needs radius " + std::to_string(spec.radius()) +
                                ", neighbourhood has radius " + std::to_string(nbhd.radius));
    }
    const double value = std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, DegreeIndicator>) {
                const int deg = static_cast<int>(nbhd.adjacency[0].size());
                return std::binary_search(s.degrees.begin(), s.degrees.end(), deg) ? 1.0 : 0.0;
            } else if constexpr (std::is_same_v<T, RootedSubgraphCount>) {
                return count_rooted_copies(s, spec.automorphisms(), nbhd);
            } else if constexpr (std::is_same_v<T, HighDegreeFewSmallNeighbours>) {
                const auto& root_adj = nbhd.adjacency[0];
                if (static_cast<int>(root_adj.size()) < s.d) return 0.0;
                int small = 0;
                // Neighbours sit at distance 1, so their full degree is visible at radius 2.
                for (int j : root_adj) {
                    if (static_cast<int>(nbhd.adjacency[j].size()) <= s.d) ++small;
                }
                return small <= s.k ? 1.0 : 0.0;
            } else {
                return s.fn(nbhd);
            }
        },
        spec.variant());
    const double cap = spec.c() * std::pow(static_cast<double>(nbhd.size()), spec.beta());
    if (!(std::abs(value) <= cap * (1.0 + 1e-12))) {
        throw std::logic_error("statistic " + spec.describe() + " broke its growth bound |U| <= c|V|^beta");
    }
    return value;
}

std::optional<double> exact_statistic_mean(const StatisticSpec& spec, std::size_t n, double p) {
    if (const auto* s = std::get_if<DegreeIndicator>(&spec.variant())) {
        double mean = 0.0;
        for (int d : s->degrees) mean += binomial_pmf(static_cast<long long>(n) - 1, d, p);
        // (1 - p)^{n-1} directly for the isolated-vertex case keeps full precision.
        if (s->degrees.size() == 1 && s->degrees[0] == 0) {
            mean = std::pow(1.0 - p, static_cast<double>(n) - 1.0);
        }
        return mean;
    }
    return std::nullopt;
}

}  // namespace stein
