#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "stein/rng.hpp"

namespace stein {

using Vertex = std::uint32_t;
using Edge = std::pair<Vertex, Vertex>;

/// Simple undirected graph on vertices 0..n-1 with sorted adjacency lists.
class SparseGraph {
public:
    SparseGraph() = default;
    explicit SparseGraph(std::size_t n) : adj_(n) {}

    /// Builds from an edge list; throws std::invalid_argument on self-loops,
    /// duplicate edges or out-of-range endpoints.
    static SparseGraph from_edges(std::size_t n, std::span<const Edge> edges);
    /// Takes ownership of adjacency lists that are already sorted and symmetric.
    static SparseGraph from_adjacency(std::vector<std::vector<Vertex>> adj);

    std::size_t num_vertices() const noexcept { return adj_.size(); }
    std::size_t num_edges() const noexcept;
    std::span<const Vertex> neighbours(Vertex v) const { return adj_[v]; }
    std::size_t degree(Vertex v) const { return adj_[v].size(); }
    bool has_edge(Vertex u, Vertex v) const;
    /// All edges (u, v) with u < v in lexicographic order.
    std::vector<Edge> edges() const;

    /// Full scan of the symmetry / no-loop / no-duplicate / sortedness invariants.
    /// Throws std::logic_error on the first violation.
    void check_invariants() const;

private:
    std::vector<std::vector<Vertex>> adj_;
};

/// Erdos-Renyi G(n, p) by geometric skipping over the pairs; expected cost O(n + p n^2).
SparseGraph generate_er(std::size_t n, double p, Rng& rng);

/// "u v" per line, 0-indexed, u < v, sorted.
std::string to_edge_list(const SparseGraph& g);

/// Copy-on-write view of a base graph with some adjacency lists replaced.
/// The base graph must outlive the overlay. Not thread-safe; one per worker.
class GraphOverlay {
public:
    explicit GraphOverlay(const SparseGraph& base);

    std::size_t num_vertices() const noexcept { return base_->num_vertices(); }
    std::span<const Vertex> neighbours(Vertex v) const {
        const std::int32_t s = slot_[v];
        return s < 0 ? base_->neighbours(v) : std::span<const Vertex>(lists_[s]);
    }
    bool is_modified(Vertex v) const { return slot_[v] >= 0; }

    /// Mutable copy of v's list (copied from the base on first touch). Callers keep it
    /// sorted and symmetric.
    std::vector<Vertex>& edit(Vertex v);
    /// Drops every override; O(number of touched vertices).
    void reset();
    void rebind(const SparseGraph& base);
    SparseGraph materialize() const;

private:
    const SparseGraph* base_;
    std::vector<std::int32_t> slot_;
    std::vector<std::vector<Vertex>> lists_;
    std::vector<Vertex> touched_;
    std::size_t used_ = 0;
};

/// r-neighbourhood of a root: the subgraph induced by vertices within distance r,
/// including edges between two vertices at distance exactly r.
struct RootedNeighbourhood {
    Vertex root = 0;
    int radius = 0;
    std::vector<Vertex> vertices;  // BFS order, vertices[0] == root
    std::vector<int> distance;     // parallel to vertices
    /// Local adjacency (indices into vertices), sorted.
    std::vector<std::vector<int>> adjacency;

    std::size_t size() const noexcept { return vertices.size(); }
    std::size_t num_edges() const;
    /// Induced edges as global vertex pairs (u < v), sorted.
    std::vector<Edge> edges() const;
};

/// Reusable buffers for repeated BFS on graphs with the same vertex count.
class NeighbourhoodScratch {
public:
    explicit NeighbourhoodScratch(std::size_t n = 0) : local_(n, -1) {}
    void ensure(std::size_t n) {
        if (local_.size() < n) local_.assign(n, -1);
    }

    template <class GraphView>
    void build(const GraphView& g, Vertex root, int r, RootedNeighbourhood& out);

private:
    std::vector<int> local_;
};

/// Throws std::domain_error if v is out of range or r < 0.
RootedNeighbourhood r_neighbourhood(const SparseGraph& g, Vertex v, int r);
RootedNeighbourhood r_neighbourhood(const GraphOverlay& g, Vertex v, int r);

/// Vertices within distance r of any source (multi-source BFS), sorted ascending.
template <class GraphView>
std::vector<Vertex> ball(const GraphView& g, std::span<const Vertex> sources, int r);

// ---- template implementations --------------------------------------------------------

template <class GraphView>
void NeighbourhoodScratch::build(const GraphView& g, Vertex root, int r, RootedNeighbourhood& out) {
    ensure(g.num_vertices());
    out.root = root;
    out.radius = r;
    out.vertices.clear();
    out.distance.clear();
    out.vertices.push_back(root);
    out.distance.push_back(0);
    local_[root] = 0;
    for (std::size_t head = 0; head < out.vertices.size(); ++head) {
        if (out.distance[head] >= r) break;  // BFS order: the rest are at distance r too
        for (Vertex w : g.neighbours(out.vertices[head])) {
            if (local_[w] < 0) {
                local_[w] = static_cast<int>(out.vertices.size());
                out.vertices.push_back(w);
                out.distance.push_back(out.distance[head] + 1);
            }
        }
    }
    const std::size_t m = out.vertices.size();
    if (out.adjacency.size() < m) out.adjacency.resize(m);
    for (std::size_t i = 0; i < m; ++i) out.adjacency[i].clear();
    out.adjacency.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        for (Vertex w : g.neighbours(out.vertices[i])) {
            const int j = local_[w];
            if (j >= 0) out.adjacency[i].push_back(j);
        }
        std::sort(out.adjacency[i].begin(), out.adjacency[i].end());
    }
    for (Vertex v : out.vertices) local_[v] = -1;
}

template <class GraphView>
std::vector<Vertex> ball(const GraphView& g, std::span<const Vertex> sources, int r) {
    std::vector<int> dist(g.num_vertices(), -1);
    std::vector<Vertex> order;
    for (Vertex s : sources) {
        if (dist[s] < 0) {
            dist[s] = 0;
            order.push_back(s);
        }
    }
    for (std::size_t head = 0; head < order.size(); ++head) {
        const Vertex u = order[head];
        if (dist[u] >= r) continue;
        for (Vertex w : g.neighbours(u)) {
            if (dist[w] < 0) {
                dist[w] = dist[u] + 1;
                order.push_back(w);
            }
        }
    }
    std::sort(order.begin(), order.end());
    return order;
}

}  // namespace stein
