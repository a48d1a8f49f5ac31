#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "stein/errors.hpp"
#include "stein/mc.hpp"

using namespace stein;

namespace {

ModelSpec rademacher(long long n, std::uint64_t seed = 1) {
    ModelSpec m;
    m.params = IndependentSumParams{n, Summand{SummandKind::rademacher, 0}};
    m.seed = seed;
    return m;
}

ModelSpec exponential(long long n, std::uint64_t seed = 1) {
    ModelSpec m;
    m.params = IndependentSumParams{n, Summand{SummandKind::centered_exponential, 1.0}};
    m.seed = seed;
    return m;
}

ModelSpec runs(ModelKind kind, long long n, int len, double p, std::uint64_t seed = 1) {
    ModelSpec m;
    m.kind = kind;
    m.params = RunsParams{n, len, p, true};
    m.seed = seed;
    return m;
}

McOptions opts(long long samples, int batches = 50, int workers = 0) {
    McOptions o;
    o.n_samples = samples;
    o.n_batches = batches;
    o.workers = workers;
    return o;
}

MomentEstimate estimate(double point, double se, int order = 4) {
    MomentEstimate e;
    e.order = MomentOrder(order);
    e.point = point;
    e.std_error = se;
    return e;
}

}  // namespace

TEST_CASE("Rademacher n = 3 fourth moment") {
    const PreparedModel pm = PreparedModel::prepare(rademacher(3));
    const MomentOrder orders[] = {MomentOrder(4)};
    const auto est = estimate_central_moments(pm, orders, opts(1000000));
    REQUIRE(est.size() == 1);
    const double exact = std::pow(boost::rational_cast<double>(oracle::rademacher_moment(3, 4)), 0.25);
    CHECK(exact == doctest::Approx(std::pow(21.0, 0.25)).epsilon(1e-15));
    CHECK(std::fabs(est[0].point - exact) <= 3.0 * est[0].std_error);
    CHECK(est[0].std_error > 0.0);
    CHECK(est[0].n_batches == 50);
}

TEST_CASE("constant model has zero central moments") {
    const PreparedModel pm = PreparedModel::prepare(runs(ModelKind::local_dependence_runs, 20, 2, 1.0));
    const MomentOrder orders[] = {MomentOrder(2), MomentOrder(4)};
    for (const auto& e : estimate_central_moments(pm, orders, opts(3000, 30))) {
        CHECK(e.point == 0.0);
        CHECK(e.std_error == 0.0);
    }
    const IdentityReport id = check_stein_identity(pm, 3, opts(3000, 30));
    for (const auto& t : id.terms) {
        CHECK(t.lhs == 0.0);
        CHECK(t.rhs == 0.0);
        CHECK(t.z_score == 0.0);
    }
}

TEST_CASE("centered exponential sum: second moment") {
    const PreparedModel pm = PreparedModel::prepare(exponential(50));
    const MomentOrder orders[] = {MomentOrder(2)};
    const auto est = estimate_central_moments(pm, orders, opts(200000));
    CHECK(std::fabs(est[0].point - std::sqrt(50.0)) <= 3.0 * est[0].std_error);
}

TEST_CASE("size-bias runs: second central moment") {
    const PreparedModel pm = PreparedModel::prepare(runs(ModelKind::size_bias_runs, 1000, 2, 0.5));
    const MomentOrder orders[] = {MomentOrder(2)};
    const auto est = estimate_central_moments(pm, orders, opts(100000));
    CHECK(std::fabs(est[0].point - std::sqrt(312.5)) <= 3.0 * est[0].std_error);
}

TEST_CASE("Stein identity holds for the built-in couplings") {
    std::vector<ModelSpec> specs{rademacher(50), exponential(50),
                                 runs(ModelKind::local_dependence_runs, 1000, 2, 0.5),
                                 runs(ModelKind::size_bias_runs, 1000, 2, 0.5)};
    ModelSpec bern;
    bern.params = IndependentSumParams{50, Summand{SummandKind::centered_bernoulli, 0.2}};
    specs.push_back(bern);
    for (const ModelSpec& s : specs) {
        const IdentityReport r = check_stein_identity(PreparedModel::prepare(s), 3, opts(100000));
        REQUIRE(r.terms.size() == 3);
        CHECK(r.n_samples == 100000);
        for (const auto& t : r.terms) CHECK(std::fabs(t.z_score) <= 4.0);
    }
}

TEST_CASE("Stein identity holds for the ER coupling") {
    ModelSpec m;
    m.kind = ModelKind::er_neighbourhood;
    ERParams p;
    p.n = 100;
    p.lambda = 2.0;
    m.params = p;
    const IdentityReport r = check_stein_identity(PreparedModel::prepare(m), 3, opts(30000));
    for (const auto& t : r.terms) CHECK(std::fabs(t.z_score) <= 4.0);
}

TEST_CASE("negative control: G scaled by 1.1") {
    ModelSpec s = rademacher(50);
    s.g_scale = 1.1;
    const IdentityReport r = check_stein_identity(PreparedModel::prepare(s), 1, opts(1000000));
    CHECK(std::fabs(r.terms[0].z_score) > 4.0);
    CHECK(r.max_abs_z() > 4.0);
}

TEST_CASE("identity degree 1 compares E GD with the variance") {
    const IdentityReport r = check_stein_identity(PreparedModel::prepare(rademacher(10)), 1, opts(200000));
    CHECK(std::fabs(r.terms[0].lhs - 10.0) < 0.2);
    CHECK(std::fabs(r.terms[0].rhs - 10.0) < 0.2);
}

TEST_CASE("tail estimates") {
    const PreparedModel pm = PreparedModel::prepare(rademacher(3));
    const double ts[] = {0.0, 2.0, 4.0};
    const auto tails = estimate_tail(pm, ts, opts(100000));
    REQUIRE(tails.size() == 3);
    CHECK(tails[0].p_hat == 1.0);
    CHECK(std::fabs(tails[1].p_hat - oracle::rademacher_tail(3, 2.0)) <= 3.0 * tails[1].std_error);
    CHECK(oracle::rademacher_tail(3, 2.0) == 0.25);
    CHECK(tails[2].p_hat == 0.0);
    CHECK(tails[2].std_error == 0.0);

    const double t0[] = {0.0};
    CHECK(estimate_tail(PreparedModel::prepare(exponential(5)), t0, opts(10000))[0].p_hat == 1.0);
    CHECK_THROWS_AS(estimate_tail(pm, t0, opts(9000, 30)), ConfigError);
}

TEST_CASE("sample budget validation") {
    const PreparedModel pm = PreparedModel::prepare(rademacher(3));
    const MomentOrder orders[] = {MomentOrder(2)};
    CHECK_THROWS_AS(estimate_central_moments(pm, orders, opts(1000, 20)), ConfigError);
    CHECK_THROWS_AS(estimate_central_moments(pm, orders, opts(1001, 50)), ConfigError);
    CHECK_THROWS_AS(estimate_central_moments(pm, orders, opts(0, 50)), ConfigError);
    const MomentOrder big[] = {MomentOrder(14)};
    CHECK_THROWS_AS(estimate_central_moments(pm, big, opts(1000)), ConfigError);
    CHECK_THROWS_AS(check_stein_identity(pm, 7, opts(1000)), ConfigError);
}

TEST_CASE("results do not depend on the worker count") {
    ModelSpec er;
    er.kind = ModelKind::er_neighbourhood;
    ERParams p;
    p.n = 60;
    p.lambda = 2.0;
    p.r = 2;
    p.statistic = StatisticSpec(HighDegreeFewSmallNeighbours{2, 1});
    p.mu_x = EstimatedMean{100};
    er.params = p;
    for (const ModelSpec& spec : {exponential(20, 5), er}) {
        const PreparedModel pm = PreparedModel::prepare(spec);
        const MomentOrder orders[] = {MomentOrder(2), MomentOrder(4)};
        const double ts[] = {1.0, 3.0};
        const SimulationResult a = simulate(pm, orders, ts, 3, opts(15000, 30, 1));
        for (int w : {4, 16}) {
            const SimulationResult b = simulate(pm, orders, ts, 3, opts(15000, 30, w));
            CHECK(a.mu == b.mu);
            CHECK(a.mean_gd.mean == b.mean_gd.mean);
            for (std::size_t i = 0; i < a.moments.size(); ++i) {
                CHECK(a.moments[i].point == b.moments[i].point);
                CHECK(a.moments[i].std_error == b.moments[i].std_error);
            }
            for (std::size_t i = 0; i < a.tails.size(); ++i) CHECK(a.tails[i].p_hat == b.tails[i].p_hat);
            for (std::size_t i = 0; i < a.identity.terms.size(); ++i) {
                CHECK(a.identity.terms[i].z_score == b.identity.terms[i].z_score);
            }
        }
    }
}

TEST_CASE("batch-means standard errors cover the truth") {
    // ||W||_2 = sqrt(10) for the Rademacher sum of 10 signs.
    const MomentOrder orders[] = {MomentOrder(2)};
    int covered = 0;
    const int reps = 200;
    for (int i = 0; i < reps; ++i) {
        const PreparedModel pm = PreparedModel::prepare(rademacher(10, 1000 + i));
        const auto e = estimate_central_moments(pm, orders, opts(5000, 100, 1));
        covered += std::fabs(e[0].point - std::sqrt(10.0)) <= 3.0 * e[0].std_error;
    }
    CHECK(covered >= 198);
}

TEST_CASE("verdicts") {
    const BoundValue b = BoundValue::ok(37.0 / 9.0, "form1");
    bool strict = false;
    CHECK(classify(b, 2.1407, 0.001, &strict) == VerdictStatus::holds);
    CHECK(strict);
    CHECK(classify(b, 5.0, 0.01) == VerdictStatus::violated);
    CHECK(classify(b, 4.1, 0.01) == VerdictStatus::inconclusive);
    CHECK(classify(BoundValue::inapplicable("x"), 1.0, 0.0) == VerdictStatus::bound_inapplicable);
    CHECK(to_string(VerdictStatus::bound_inapplicable) == "bound_inapplicable");

    const OrderedBound bounds[] = {{MomentOrder(4), b}, {MomentOrder(4), BoundValue::inapplicable("no")}};
    const MomentEstimate ests[] = {estimate(2.1407, 0.001), estimate(2.1407, 0.001)};
    const auto v = verify_bounds(bounds, ests);
    CHECK(v[0].status == VerdictStatus::holds);
    CHECK(v[0].strictly_dominated);
    CHECK(v[1].status == VerdictStatus::bound_inapplicable);

    const MomentEstimate wrong[] = {estimate(2.1, 0.1, 2), estimate(2.1, 0.1)};
    CHECK_THROWS_AS(verify_bounds(bounds, wrong), ConfigError);
    CHECK_THROWS_AS(verify_bounds(std::span<const OrderedBound>(bounds, 1), ests), ConfigError);
}

TEST_CASE("subset-sum norms: equality and exhaustive property") {
    // E = full set a.s. and Y_i = 1: both sides equal |I|.
    std::vector<DiscreteLaw> ones(3, DiscreteLaw{{1.0}, {1.0}});
    std::vector<double> full(8, 0.0);
    full[7] = 1.0;
    const SubsetSumNorms eq = subset_sum_norms(ones, full, 3);
    CHECK(eq.lhs == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(eq.rhs == doctest::Approx(3.0).epsilon(1e-14));

    // Hand value: one Rademacher Y, E = {0} with probability 1/2, ell = 2: lhs = sqrt(1/2).
    const std::vector<DiscreteLaw> one{DiscreteLaw{{-1.0, 1.0}, {0.5, 0.5}}};
    const std::vector<double> half{0.5, 0.5};
    CHECK(subset_sum_norms(one, half, 2).lhs == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));

    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> u(0.0, 1.0), val(-2.0, 2.0);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 1 + static_cast<int>(gen() % 4);
        std::vector<DiscreteLaw> laws(n);
        for (auto& law : laws) {
            const int k = 1 + static_cast<int>(gen() % 3);
            double total = 0;
            for (int j = 0; j < k; ++j) {
                law.values.push_back(val(gen));
                law.probs.push_back(u(gen) + 0.01);
                total += law.probs.back();
            }
            for (auto& pr : law.probs) pr /= total;
        }
        std::vector<double> sub(std::size_t{1} << n);
        double total = 0;
        for (auto& s : sub) total += (s = u(gen));
        for (auto& s : sub) s /= total;
        const int ell = 1 + static_cast<int>(gen() % 6);
        const SubsetSumNorms r = subset_sum_norms(laws, sub, ell);
        CHECK(r.lhs <= r.rhs * (1.0 + 1e-12));
    }
    CHECK_THROWS_AS(subset_sum_norms(one, full, 2), std::domain_error);
}
