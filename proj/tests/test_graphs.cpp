#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "stein/bounds.hpp"
#include "stein/er_moments.hpp"
#include "stein/estimate.hpp"
#include "stein/graph.hpp"
#include "stein/statistics.hpp"

using namespace stein;

namespace {

SparseGraph path4() {
    const std::vector<Edge> e{{0, 1}, {1, 2}, {2, 3}};
    return SparseGraph::from_edges(4, e);
}

SparseGraph complete(std::size_t n) {
    std::vector<Edge> e;
    for (Vertex u = 0; u < n; ++u)
        for (Vertex v = u + 1; v < n; ++v) e.emplace_back(u, v);
    return SparseGraph::from_edges(n, e);
}

}  // namespace

TEST_CASE("from_edges rejects malformed input") {
    const std::vector<Edge> loop{{1, 1}};
    const std::vector<Edge> dup{{0, 1}, {1, 0}};
    const std::vector<Edge> range{{0, 5}};
    CHECK_THROWS_AS(SparseGraph::from_edges(3, loop), std::invalid_argument);
    CHECK_THROWS_AS(SparseGraph::from_edges(3, dup), std::invalid_argument);
    CHECK_THROWS_AS(SparseGraph::from_edges(3, range), std::invalid_argument);
    const SparseGraph g = path4();
    CHECK(g.num_edges() == 3);
    CHECK(g.has_edge(2, 1));
    CHECK_FALSE(g.has_edge(0, 3));
    CHECK(to_edge_list(g) == "0 1\n1 2\n2 3\n");
}

TEST_CASE("generate_er extremes") {
    Rng rng = Rng::stream(1, 0);
    const SparseGraph empty = generate_er(30, 0.0, rng);
    CHECK(empty.num_edges() == 0);
    const SparseGraph full = generate_er(30, 1.0, rng);
    full.check_invariants();
    CHECK(full.num_edges() == 30 * 29 / 2);
    for (Vertex v = 0; v < 30; ++v) CHECK(full.degree(v) == 29);
}

TEST_CASE("generate_er edge count matches the binomial mean") {
    const int reps = 10000;
    std::vector<double> counts(reps);
    for (int i = 0; i < reps; ++i) {
        Rng rng = Rng::stream(7, static_cast<std::uint64_t>(i));
        const SparseGraph g = generate_er(200, 0.01, rng);
        if (i < 50) g.check_invariants();
        counts[i] = static_cast<double>(g.num_edges());
    }
    const double mean = std::accumulate(counts.begin(), counts.end(), 0.0) / reps;
    const double se = standard_error_of_mean(counts);
    CHECK(std::fabs(mean - 199.0) <= 3.0 * se);
}

TEST_CASE("generate_er is deterministic per stream") {
    Rng a = Rng::stream(3, 9), b = Rng::stream(3, 9);
    CHECK(generate_er(100, 0.05, a).edges() == generate_er(100, 0.05, b).edges());
}

TEST_CASE("r_neighbourhood examples") {
    const SparseGraph p = path4();
    const RootedNeighbourhood r0 = r_neighbourhood(p, 2, 0);
    CHECK(r0.vertices == std::vector<Vertex>{2});
    CHECK(r0.num_edges() == 0);

    const RootedNeighbourhood n1 = r_neighbourhood(p, 1, 1);
    CHECK(n1.vertices.front() == 1);
    CHECK(n1.distance.front() == 0);
    CHECK(n1.size() == 3);
    CHECK(n1.edges() == std::vector<Edge>{{0, 1}, {1, 2}});

    const RootedNeighbourhood tri = r_neighbourhood(complete(3), 0, 1);
    CHECK(tri.size() == 3);
    CHECK(tri.edges() == std::vector<Edge>{{0, 1}, {0, 2}, {1, 2}});

    CHECK_THROWS_AS(r_neighbourhood(p, 4, 1), std::domain_error);
    CHECK_THROWS_AS(r_neighbourhood(p, 0, -1), std::domain_error);
}

TEST_CASE("neighbourhoods grow with r") {
    Rng rng = Rng::stream(5, 0);
    const SparseGraph g = generate_er(400, 3.0 / 400, rng);
    for (Vertex v = 0; v < 400; v += 37) {
        std::vector<Vertex> prev;
        for (int r = 0; r <= 4; ++r) {
            RootedNeighbourhood nb = r_neighbourhood(g, v, r);
            std::vector<Vertex> cur = nb.vertices;
            std::sort(cur.begin(), cur.end());
            CHECK(std::includes(cur.begin(), cur.end(), prev.begin(), prev.end()));
            const Vertex src[] = {v};
            CHECK(ball(g, std::span<const Vertex>(src), r) == cur);
            prev = cur;
        }
    }
}

TEST_CASE("overlay edits leave the base untouched") {
    const SparseGraph p = path4();
    GraphOverlay o(p);
    o.edit(0).push_back(3);
    o.edit(3).insert(o.edit(3).begin(), 0);
    CHECK(o.is_modified(0));
    CHECK(p.degree(0) == 1);
    const SparseGraph m = o.materialize();
    m.check_invariants();
    CHECK(m.has_edge(0, 3));
    CHECK(r_neighbourhood(o, 0, 1).size() == 3);
    o.reset();
    CHECK_FALSE(o.is_modified(0));
    CHECK(o.materialize().edges() == p.edges());
}

TEST_CASE("statistic examples") {
    const SparseGraph iso(1);
    CHECK(evaluate_statistic(StatisticSpec::isolated_vertices(), r_neighbourhood(iso, 0, 1)) == 1.0);
    CHECK(evaluate_statistic(StatisticSpec::isolated_vertices(), r_neighbourhood(path4(), 0, 1)) == 0.0);

    const StatisticSpec tri = StatisticSpec::subgraph("triangle");
    CHECK(tri.radius() == 1);
    CHECK(tri.c() == 3.0);
    CHECK(tri.beta() == 2.0);
    CHECK(evaluate_statistic(tri, r_neighbourhood(complete(4), 0, 1)) == 3.0);

    const std::vector<Edge> star{{0, 1}, {0, 2}, {0, 3}};
    const StatisticSpec hd(HighDegreeFewSmallNeighbours{2, 1});
    CHECK(hd.radius() == 2);
    const SparseGraph s = SparseGraph::from_edges(4, star);
    CHECK(evaluate_statistic(hd, r_neighbourhood(s, 0, 2)) == 0.0);
    CHECK(evaluate_statistic(StatisticSpec(HighDegreeFewSmallNeighbours{2, 3}), r_neighbourhood(s, 0, 2)) == 1.0);

    CHECK_THROWS_AS(evaluate_statistic(hd, r_neighbourhood(s, 0, 1)), std::domain_error);
}

TEST_CASE("custom statistics are checked against their growth bound") {
    CustomStatistic c;
    c.name = "size";
    c.c = 1.0;
    c.beta = 0.5;
    c.r = 1;
    c.fn = [](const RootedNeighbourhood& nb) { return static_cast<double>(nb.size()); };
    const StatisticSpec spec(c);
    CHECK_THROWS_AS(evaluate_statistic(spec, r_neighbourhood(complete(4), 0, 1)), std::logic_error);
    CHECK(evaluate_statistic(spec, r_neighbourhood(SparseGraph(2), 0, 1)) == 1.0);
}

TEST_CASE("exact mean of the isolated-vertex indicator") {
    const auto mu = exact_statistic_mean(StatisticSpec::isolated_vertices(), 200, 0.01);
    REQUIRE(mu.has_value());
    CHECK(*mu == doctest::Approx(std::pow(0.99, 199)).epsilon(1e-14));
    CHECK_FALSE(exact_statistic_mean(StatisticSpec::subgraph("triangle"), 200, 0.01).has_value());
}

TEST_CASE("neighbourhood size moments") {
    const MomentEstimate r0 = neighbourhood_size_moments_mc(100, 2.0, 0, 3, 3000, 1, 30, 1);
    CHECK(r0.point == 1.0);
    CHECK(r0.std_error == 0.0);
    const MomentEstimate l0 = neighbourhood_size_moments_mc(100, 0.0, 2, 3, 3000, 1, 30, 1);
    CHECK(l0.point == 1.0);

    const MomentEstimate m = neighbourhood_size_moments_mc(300, 2.0, 2, 4, 20000, 2, 50, 0);
    CHECK(m.point + 3.0 * m.std_error <= neighbourhood_norm_bound(2.0, 2, 4));

    // Branching domination of the mean: E N_r <= sum_s lambda^s.
    const MomentEstimate mean = neighbourhood_size_moments_mc(10000, 2.0, 2, 1, 20000, 3, 50, 0);
    CHECK(mean.point <= 1.0 + 2.0 + 4.0 + 3.0 * mean.std_error);
}
