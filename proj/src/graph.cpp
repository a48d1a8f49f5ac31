#include "stein/graph.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace stein {

SparseGraph SparseGraph::from_edges(std::size_t n, std::span<const Edge> edges) {
    SparseGraph g(n);
    for (auto [u, v] : edges) {
        if (u >= n || v >= n) throw std::invalid_argument("edge endpoint out of range");
        if (u == v) throw std::invalid_argument("self-loop");
        g.adj_[u].push_back(v);
        g.adj_[v].push_back(u);
    }
    for (auto& list : g.adj_) {
        std::sort(list.begin(), list.end());
        if (std::adjacent_find(list.begin(), list.end()) != list.end()) {
            throw std::invalid_argument("duplicate edge");
        }
    }
    return g;
}

SparseGraph SparseGraph::from_adjacency(std::vector<std::vector<Vertex>> adj) {
    SparseGraph g;
    g.adj_ = std::move(adj);
    return g;
}

std::size_t SparseGraph::num_edges() const noexcept {
    std::size_t twice = 0;
    for (const auto& list : adj_) twice += list.size();
    return twice / 2;
}

bool SparseGraph::has_edge(Vertex u, Vertex v) const {
    return std::binary_search(adj_[u].begin(), adj_[u].end(), v);
}

std::vector<Edge> SparseGraph::edges() const {
    std::vector<Edge> out;
    for (Vertex u = 0; u < adj_.size(); ++u) {
        for (Vertex v : adj_[u]) {
            if (u < v) out.emplace_back(u, v);
        }
    }
    return out;
}

void SparseGraph::check_invariants() const {
    const std::size_t n = adj_.size();
    for (Vertex u = 0; u < n; ++u) {
        const auto& list = adj_[u];
        for (std::size_t i = 0; i < list.size(); ++i) {
            const Vertex v = list[i];
            if (v >= n) throw std::logic_error("neighbour out of range");
            if (v == u) throw std::logic_error("self-loop at " + std::to_string(u));
            if (i > 0 && list[i - 1] >= v) throw std::logic_error("unsorted or duplicate adjacency");
            if (!has_edge(v, u)) throw std::logic_error("asymmetric edge");
        }
    }
}

SparseGraph generate_er(std::size_t n, double p, Rng& rng) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("edge probability must be in [0, 1]");
    std::vector<std::vector<Vertex>> adj(n);
    if (n < 2 || p == 0.0) return SparseGraph::from_adjacency(std::move(adj));
    if (p == 1.0) {
        for (Vertex u = 0; u < n; ++u) {
            adj[u].reserve(n - 1);
            for (Vertex v = 0; v < n; ++v) {
                if (v != u) adj[u].push_back(v);
            }
        }
        return SparseGraph::from_adjacency(std::move(adj));
    }
    // Walk the pairs (v, w), w < v, in row-major order, skipping geometric gaps.
    std::uint64_t v = 1;
    std::uint64_t w = 0;
    bool first = true;
    while (v < n) {
        const std::uint64_t skip = rng.geometric(p);
        if (skip >= std::uint64_t(n) * n) break;
        w += first ? skip : skip + 1;
        first = false;
        while (w >= v && v < n) {
            w -= v;
            ++v;
        }
        if (v < n) {
            adj[v].push_back(static_cast<Vertex>(w));
            adj[w].push_back(static_cast<Vertex>(v));
        }
    }
    // Rows are generated in increasing v and, within a row, increasing w, so adj[u]
    // receives its smaller neighbours in order followed by larger ones in order.
    return SparseGraph::from_adjacency(std::move(adj));
}

std::string to_edge_list(const SparseGraph& g) {
    std::ostringstream out;
    for (auto [u, v] : g.edges()) out << u << ' ' << v << '\n';
    return out.str();
}

GraphOverlay::GraphOverlay(const SparseGraph& base) : base_(&base), slot_(base.num_vertices(), -1) {}

std::vector<Vertex>& GraphOverlay::edit(Vertex v) {
    if (slot_[v] < 0) {
        if (used_ == lists_.size()) lists_.emplace_back();
        auto& list = lists_[used_];
        const auto src = base_->neighbours(v);
        list.assign(src.begin(), src.end());
        slot_[v] = static_cast<std::int32_t>(used_++);
        touched_.push_back(v);
    }
    return lists_[slot_[v]];
}

void GraphOverlay::reset() {
    for (Vertex v : touched_) slot_[v] = -1;
    touched_.clear();
    used_ = 0;
}

void GraphOverlay::rebind(const SparseGraph& base) {
    reset();
    base_ = &base;
    slot_.assign(base.num_vertices(), -1);
}

SparseGraph GraphOverlay::materialize() const {
    std::vector<std::vector<Vertex>> adj(num_vertices());
    for (Vertex v = 0; v < adj.size(); ++v) {
        const auto list = neighbours(v);
        adj[v].assign(list.begin(), list.end());
    }
    return SparseGraph::from_adjacency(std::move(adj));
}

std::size_t RootedNeighbourhood::num_edges() const {
    std::size_t twice = 0;
    for (const auto& list : adjacency) twice += list.size();
    return twice / 2;
}

std::vector<Edge> RootedNeighbourhood::edges() const {
    std::vector<Edge> out;
    for (std::size_t i = 0; i < adjacency.size(); ++i) {
        for (int j : adjacency[i]) {
            const Vertex a = vertices[i];
            const Vertex b = vertices[j];
            if (a < b) out.emplace_back(a, b);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

template <class GraphView>
RootedNeighbourhood neighbourhood_of(const GraphView& g, Vertex v, int r) {
    if (v >= g.num_vertices()) throw std::domain_error("vertex out of range");
    if (r < 0) throw std::domain_error("radius must be >= 0");
    NeighbourhoodScratch scratch(g.num_vertices());
    RootedNeighbourhood out;
    scratch.build(g, v, r, out);
    return out;
}

}  // namespace

RootedNeighbourhood r_neighbourhood(const SparseGraph& g, Vertex v, int r) {
    return neighbourhood_of(g, v, r);
}

RootedNeighbourhood r_neighbourhood(const GraphOverlay& g, Vertex v, int r) {
    return neighbourhood_of(g, v, r);
}

}  // namespace stein
