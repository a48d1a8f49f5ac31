#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "stein/bounds.hpp"

using namespace stein;

namespace {

const double kE = std::exp(1.0);

CouplingParams ab(double a, double b) {
    CouplingParams p;
    p.a_norm = a;
    p.b_norm = b;
    return p;
}

CouplingParams sab(double sigma, double a, double b) {
    CouplingParams p = ab(a, b);
    p.sigma = sigma;
    return p;
}

// 2k int_0^inf t^{2k-1} min(1, c exp(-b log(1+t)^a)) dt by composite Simpson in x = log(1 + t).
double log_weibull_moment_simpson(double a, double b, double c, int two_k) {
    const double upper = 60.0;
    const int steps = 600000;
    const double h = upper / steps;
    auto f = [&](double x) {
        const double t = std::expm1(x);
        const double tail = std::min(1.0, c * std::exp(-b * std::pow(x, a)));
        return two_k * std::pow(t, two_k - 1) * tail * std::exp(x);
    };
    double s = f(0.0) + f(upper);
    for (int i = 1; i < steps; ++i) s += f(i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

}  // namespace

TEST_CASE("thm1 examples") {
    const BoundValue one = thm1_moment_bound(ab(1, 1), 1);
    REQUIRE(one.applicable());
    CHECK(*one.value == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(one.form == "form1");

    const BoundValue b = thm1_moment_bound(ab(3, 1), 2);
    CHECK(*b.value == doctest::Approx(37.0 / 9.0).epsilon(1e-14));
    CHECK(b.form == "form1");
    CHECK(*thm1_form2(ab(3, 1), 2).value == doctest::Approx(3.0 * kE).epsilon(1e-14));
    CHECK(*thm1_form2(ab(3, 1), 2).value == doctest::Approx(8.1548455).epsilon(1e-8));
}

TEST_CASE("thm1 applicability") {
    CouplingParams p = ab(1, 1);
    p.eps = 1.0;
    CHECK_FALSE(thm1_moment_bound(p, 2).applicable());
    CHECK_FALSE(thm1_moment_bound(ab(0, 1), 2).applicable());
    CouplingParams zero;
    zero.t_norm = 0.5;
    const BoundValue d = thm1_moment_bound(zero, 3);
    REQUIRE(d.applicable());
    CHECK(*d.value == 0.5);
    CHECK_THROWS_AS(thm1_moment_bound(ab(1, -1), 1), std::domain_error);
    CHECK_THROWS_AS(thm1_moment_bound(ab(1, 1), 0), std::domain_error);
}

TEST_CASE("thm1 with remainder terms") {
    CouplingParams p = ab(3, 1);
    p.eps = 0.25;
    p.t_norm = 0.5;
    // A/(1-e) [(1 + sqrt(B(1-e)/(A(2k-1))))^{2k-1} - 1] + T/(1-e) at k = 2.
    const double s = std::sqrt(0.75 / 9.0);
    const double expected = 3.0 / 0.75 * (std::pow(1.0 + s, 3) - 1.0) + 0.5 / 0.75;
    CHECK(*thm1_form1(p, 2).value == doctest::Approx(expected).epsilon(1e-14));
    const double expected2 = std::sqrt(3.0 * 3.0 / 0.75) * std::exp(std::sqrt(0.75 * 3.0 / 3.0)) + 0.5 / 0.75;
    CHECK(*thm1_form2(p, 2).value == doctest::Approx(expected2).epsilon(1e-14));
}

TEST_CASE("thm1 form1 never exceeds form2") {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> u(0.01, 100.0), ue(0.0, 0.95);
    for (int i = 0; i < 2000; ++i) {
        CouplingParams p = ab(u(gen), u(gen));
        p.eps = ue(gen);
        p.t_norm = u(gen) / 10.0;
        const int k = 1 + static_cast<int>(gen() % 10);
        CHECK(*thm1_form1(p, k).value <= *thm1_form2(p, k).value * (1.0 + 1e-12));
    }
}

TEST_CASE("moment bounds are non-decreasing in k") {
    CouplingParams p = sab(5.0, 40.0, 0.3);
    double prev1 = 0.0, prev3 = 0.0;
    for (int k = 1; k <= 10; ++k) {
        const double v1 = *thm1_moment_bound(p, k).value;
        const double v3 = *thm3_moment_bound(p, k).value;
        CHECK(v1 >= prev1);
        CHECK(v3 >= prev3);
        prev1 = v1;
        prev3 = v3;
        CHECK(*local_dep_moment_bound(100, 3, 0.5, k + 1).value >= *local_dep_moment_bound(100, 3, 0.5, k).value);
    }
}

TEST_CASE("thm1 at k = 1 dominates sigma for exact couplings") {
    // Rademacher sum: A = n, B = 1 and sigma = sqrt(n) = sqrt(E GD).
    for (int n : {1, 3, 10, 1000}) {
        CHECK(*thm1_moment_bound(ab(n, 1), 1).value >= std::sqrt(static_cast<double>(n)) * (1.0 - 1e-12));
    }
}

TEST_CASE("thm2 examples") {
    CHECK(*thm2_moment_bound(1, 1, 0, 0, 2).value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK(*thm2_moment_bound(3, 1, 0, 0, 4).value == doctest::Approx(std::sqrt(18.0)).epsilon(1e-14));
    CHECK(*thm2_moment_bound(5, 2, 0.2, 0.3, 4).value == doctest::Approx(std::sqrt(120.0)).epsilon(1e-14));
    CHECK_THROWS_AS(thm2_moment_bound(1, 1, 0, 0, 1), std::domain_error);
    CHECK_FALSE(thm2_moment_bound(1, 1, 0.6, 0.4, 2).applicable());
}

TEST_CASE("thm3 examples") {
    const BoundValue a = thm3_moment_bound(sab(1, 7, 0), 3);
    CHECK(*a.value == doctest::Approx(std::sqrt(5.0)).epsilon(1e-14));
    const double expected =
        std::sqrt(3.0) * std::sqrt(1.0 + 10.0 * 0.01 / std::sqrt(3.0) * std::exp(0.1 * std::sqrt(3.0)));
    const BoundValue b = thm3_moment_bound(sab(1, 10, 0.1), 2);
    CHECK(*b.value == doctest::Approx(expected).epsilon(1e-14));
    CHECK(*b.value == doctest::Approx(1.7905).epsilon(1e-4));
    CouplingParams c = sab(1, 1, 1);
    c.eps1 = 0.5;
    c.eps2 = 0.5;
    CHECK_FALSE(thm3_moment_bound(c, 1).applicable());
    CHECK_FALSE(thm3_moment_bound(sab(0, 1, 1), 1).applicable());
}

TEST_CASE("h_k examples") {
    CHECK(h_k(sab(1, 1, 1), 1) == 0.0);
    CHECK(h_k(sab(1, 1, 0.1), 2) == doctest::Approx(std::exp(2.5) / std::sqrt(2.0) * 0.01).epsilon(1e-14));
    CHECK(h_k(sab(1, 1, 0.1), 2) == doctest::Approx(0.0861432).epsilon(1e-6));
    CHECK(h_k(sab(2, 8, 1), 5) == doctest::Approx(17.228648).epsilon(1e-7));
    CHECK(h_k(sab(2, 8, 1), 5) == doctest::Approx(std::exp(2.5) / std::sqrt(2.0) * 2.0).epsilon(1e-14));
    CHECK_THROWS_AS(h_k(sab(0, 1, 1), 2), std::domain_error);
}

TEST_CASE("thm4 examples") {
    CHECK(*thm4_normal_comparison_bound(sab(1, 1, 0), 3).value ==
          doctest::Approx(std::pow(15.0, 1.0 / 6.0)).epsilon(1e-14));
    const BoundValue b = thm4_normal_comparison_bound(sab(1, 1, 0.1), 2);
    REQUIRE(b.applicable());
    CHECK(*b.value == doctest::Approx(std::pow(3.0, 0.25) / std::sqrt(1.0 - h_k(sab(1, 1, 0.1), 2))).epsilon(1e-14));
    CHECK(*b.value == doctest::Approx(1.3767).epsilon(1e-4));
    const BoundValue c = thm4_normal_comparison_bound(sab(0.2, 1, 0.1), 2);
    CHECK_FALSE(c.applicable());
    CHECK(c.reason.find("sigma") != std::string::npos);
    CouplingParams d = sab(1, 1, 0);
    d.eps4 = 0.4;
    CHECK_FALSE(thm4_normal_comparison_bound(d, 2).applicable());  // E = 3 * 0.4 >= 1
}

TEST_CASE("markov_tail") {
    CHECK(markov_tail(1, MomentOrder(4), 2) == 0.0625);
    CHECK(markov_tail(2, MomentOrder(2), 1) == 1.0);
    CHECK(markov_tail(std::pow(21.0, 0.25), MomentOrder(4), 3) == doctest::Approx(21.0 / 81.0).epsilon(1e-14));
    CHECK_THROWS_AS(markov_tail(1, MomentOrder(2), 0), std::domain_error);
}

TEST_CASE("moment_bound_from_tail") {
    CHECK(moment_bound_from_tail(WeibullTail{1, 1, 1}, 2) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK(moment_bound_from_tail(WeibullTail{1, 1, 1}, 4) == doctest::Approx(std::pow(24.0, 0.25)).epsilon(1e-14));
    CHECK(moment_bound_from_tail(BoundedTail{3}, 100) == 3.0);
    CHECK_THROWS_AS(moment_bound_from_tail(BoundedTail{3}, 3), std::domain_error);
    CHECK_THROWS_AS(moment_bound_from_tail(WeibullTail{0, 1, 1}, 2), std::domain_error);
    CHECK_THROWS_AS(moment_bound_from_tail(LogWeibullTail{1, 1, 1}, 2), std::domain_error);
}

TEST_CASE("moment_bound_from_tail is tight for Exponential(1)") {
    for (int k = 1; k <= 8; ++k) {
        const double v = std::pow(moment_bound_from_tail(WeibullTail{1, 1, 1}, 2 * k), 2 * k);
        const double fact = std::tgamma(2.0 * k + 1.0);
        CHECK(std::fabs(v / fact - 1.0) < 1e-9);
    }
}

TEST_CASE("log-Weibull profile matches an independent quadrature") {
    struct Case {
        double a, b, c;
        int two_k;
    };
    for (const Case& cs : {Case{2, 1, 1, 2}, Case{2, 1, 1, 4}, Case{2.5, 2, 3, 6}, Case{3, 0.5, 0.2, 2}}) {
        const double lib = std::pow(moment_bound_from_tail(LogWeibullTail{cs.a, cs.b, cs.c}, cs.two_k), cs.two_k);
        const double ref = log_weibull_moment_simpson(cs.a, cs.b, cs.c, cs.two_k);
        CHECK(std::fabs(lib / ref - 1.0) < 1e-7);
    }
}

TEST_CASE("optimized_markov_tail") {
    const TailProfile one = BoundedTail{1};
    const OptimizedTail r = optimized_markov_tail(100, one, one, 60, 50);
    REQUIRE(r.bound.applicable());
    for (int k = 1; k <= 50; ++k) CHECK(*r.bound.value <= std::min(1.0, markov_tail_at_k(100, one, one, 60, k)));
    const int k_ref = static_cast<int>(std::ceil(3600.0 / (2.0 * 100 * kE)));
    CHECK(*r.bound.value <= markov_tail_at_k(100, one, one, 60, k_ref));
    CHECK(*optimized_markov_tail(100, one, one, 80, 50).bound.value <= *r.bound.value);

    const OptimizedTail small = optimized_markov_tail(100, one, one, 12, 50);
    CHECK(small.k_star == 1);
    CHECK(*small.bound.value == doctest::Approx(markov_tail_at_k(100, one, one, 12, 1)).epsilon(1e-15));
    CHECK(*small.bound.value == doctest::Approx(100.0 / 144.0 * std::exp(0.2)).epsilon(1e-14));

    CHECK_FALSE(optimized_markov_tail(100, one, one, 60, 0).bound.applicable());
}

TEST_CASE("optimized_markov_tail breaks ties towards the smallest k") {
    // Far below the threshold every k gives a value >= 1 only after clamping; the raw
    // values still differ, so use a profile where k = 1 and k = 2 tie exactly: t such
    // that both equal. Instead check the contract on a clamped-everywhere case.
    const TailProfile one = BoundedTail{1};
    const OptimizedTail r = optimized_markov_tail(100, one, one, 1e-3, 5);
    CHECK(r.k_star == 1);
    CHECK(*r.bound.value == 1.0);
}

TEST_CASE("cor_bounded_tail") {
    // At the threshold the exponent is at most 1, so the bound is vacuous there.
    const double t0 = std::sqrt(2 * 50 * 2 * 0.5 * kE);
    CHECK(*cor_bounded_tail(50, 2, 0.5, t0).value == 1.0);
    CHECK(*cor_bounded_tail(1e4, 1, 1, std::sqrt(2e4 * kE)).value == 1.0);
    const double expected = kE * std::exp(-(160000.0 / (2e4 * kE)) * (1.0 - 0.04 * std::sqrt(6.0 / kE)));
    CHECK(*cor_bounded_tail(1e4, 1, 1, 400).value == doctest::Approx(expected).epsilon(1e-13));
    CHECK(*cor_bounded_tail(1e4, 1, 1, 400).value == doctest::Approx(0.1707).epsilon(1e-3));
    CHECK(*cor_bounded_tail(10, 1, 1, 9).value == 1.0);
    CHECK_FALSE(cor_bounded_tail(1e4, 1, 1, 100).applicable());
}

TEST_CASE("cor_normal_tail") {
    auto zero = [](int) { return 0.0; };
    CHECK(*cor_normal_tail(2, zero, zero).value == doctest::Approx(std::sqrt(2.0) * std::exp(-1.5)).epsilon(1e-14));
    CHECK(*cor_normal_tail(2, zero, zero).value == doctest::Approx(0.3155537).epsilon(1e-6));
    CHECK(*cor_normal_tail(3, zero, zero).value ==
          doctest::Approx(std::sqrt(2.0) * std::exp(-4.5 + 2.0 / 9.0)).epsilon(1e-14));
    CHECK(*cor_normal_tail(3, zero, zero).value == doctest::Approx(0.0196200).epsilon(1e-6));
    CHECK_FALSE(cor_normal_tail(2, [](int) { return 0.9; }, [](int) { return 0.2; }).applicable());
    int seen_k = 0;
    cor_normal_tail(3, [&](int k) { seen_k = k; return 0.0; }, zero);
    CHECK(seen_k == 5);
}

TEST_CASE("weak_concentration_scale") {
    const TailProfile one = BoundedTail{1};
    const double expected = std::sqrt(403.0 * 11.0) * std::exp(std::sqrt(11.0 / 403.0));
    CHECK(weak_concentration_scale(403, one, one) == doctest::Approx(expected).epsilon(1e-14));
    CHECK(weak_concentration_scale(403, one, one) == doctest::Approx(78.5).epsilon(1e-3));
    for (long long n : {1000LL, 10000LL, 100000LL}) {
        CHECK(weak_concentration_scale(4 * n, one, one) / weak_concentration_scale(n, one, one) <= 2.2);
    }
    CHECK(std::isfinite(weak_concentration_scale(1000, BoundedTail{1e-320}, one)));
    CHECK(std::isfinite(weak_concentration_scale(1000, BoundedTail{1e-3}, one)));
    CHECK_THROWS_AS(weak_concentration_scale(2, one, one), std::domain_error);
}

TEST_CASE("prop_independent_bound") {
    CHECK(*prop_independent_bound(1, 10, 1).value == 1.0);
    const double h = 5.0 * std::sqrt(2.0 * kE * kE * kE) * 0.01;
    CHECK(h == doctest::Approx(0.3169031).epsilon(1e-6));
    CHECK(*prop_independent_bound(1, 10000, 2).value == doctest::Approx(std::pow(3.0, 0.25) / std::sqrt(1.0 - h)).epsilon(1e-14));
    CHECK(*prop_independent_bound(1, 10000, 2).value == doctest::Approx(1.59235).epsilon(1e-5));
    CHECK_FALSE(prop_independent_bound(2, 100, 2).applicable());
    CHECK_THROWS_AS(prop_independent_bound(0.5, 100, 2), std::domain_error);
}

TEST_CASE("local dependence bounds") {
    CHECK(*local_dep_moment_bound(3, 1, 1, 2).value == doctest::Approx(37.0 / 9.0).epsilon(1e-14));
    CHECK(std::isfinite(*local_dep_moment_bound(20, 20, 1, 3).value));
    for (int k = 1; k <= 6; ++k) {
        for (long long d : {1LL, 3LL, 9LL}) {
            CHECK(*local_dep_moment_bound(100, d, 0.7, k).value <= local_dep_moment_bound_relaxed(100, d, 0.7, k) * (1 + 1e-12));
        }
    }
    CHECK(*local_dep_tail(1000, 3, 0.75, 200).value == *cor_bounded_tail(1000, 2.25, 0.75, 200).value);
    const double expected = kE * std::exp(-(1e6 / (1e5 * kE)) * (1.0 - 0.1 * std::sqrt(6.0 / kE)));
    CHECK(*local_dep_tail(10000, 5, 1, 1000).value == doctest::Approx(expected).epsilon(1e-13));
    CHECK(*local_dep_tail(10000, 5, 1, 1000).value == doctest::Approx(0.1186).epsilon(1e-3));
    CHECK(*local_dep_tail(100, 5, 1, 100 * std::sqrt(kE / 6.0)).value == 1.0);
    CHECK_FALSE(local_dep_tail(10000, 5, 1, 100).applicable());
}

TEST_CASE("size_bias_tail") {
    const SizeBiasTail r = size_bias_tail(100, 3, 60);
    CHECK(*r.ours.value == 1.0);
    CHECK(r.arratia_baxendale == doctest::Approx(2.0 * std::exp(-5.0)).epsilon(1e-14));
    CHECK(r.arratia_baxendale == doctest::Approx(0.01348).epsilon(1e-3));
    CHECK(*r.ours.value == *cor_bounded_tail(1.0, 3, 100, 60).value);
    const double t0 = std::sqrt(2 * 100 * 3 * kE);
    const double delta = std::sqrt(2 * 3 * kE / 100) * std::sqrt(6.0 / kE);
    CHECK(*size_bias_tail(100, 3, t0).ours.value == doctest::Approx(std::min(1.0, kE * std::exp(-(1 - delta)))).epsilon(1e-12));
    const double c = 1e12;
    const SizeBiasTail huge = size_bias_tail(100, c, std::sqrt(2 * 100 * c * kE));
    CHECK(*huge.ours.value == 1.0);
    CHECK(huge.arratia_baxendale == 1.0);
    CHECK_FALSE(size_bias_tail(100, 3, 10).ours.applicable());
}

TEST_CASE("ER constants") {
    const double ca = kE > 0 ? 3.14159265358979323846 * std::exp(kE - 2.0) / std::log(kE - 1.0) : 0.0;
    CHECK(binomial_constant() == doctest::Approx(ca).epsilon(1e-15));
    CHECK(binomial_constant() == doctest::Approx(11.9024).epsilon(1e-5));
    CHECK(er_constant(1, 0) == doctest::Approx(ca * std::sqrt(48.0)).epsilon(1e-14));
    CHECK(er_constant(1, 0) == doctest::Approx(82.46).epsilon(1e-4));
    for (double beta : {0.0, 0.5, 2.0}) {
        for (int r = 1; r <= 3; ++r) {
            CHECK(er_constant(r + 1, beta) == doctest::Approx(std::pow(ca, 1 + 2 * beta) * er_constant(r, beta)).epsilon(1e-12));
        }
    }
}

TEST_CASE("er_moment_bound") {
    const ErMomentBound b = er_moment_bound(500, 2, 1, 1, 0, 4);
    CHECK(*b.theorem.value == doctest::Approx(std::sqrt(500.0) * er_constant(1, 0) * 8.0).epsilon(1e-14));
    CHECK(*b.theorem.value == doctest::Approx(14751).epsilon(1e-4));
    // Intermediate: sqrt(2(q-1) * 2nc * 12 c (C_A max(lambda, q))^{2r}) at beta = 0.
    const double ca = binomial_constant();
    CHECK(*b.intermediate.value == doctest::Approx(std::sqrt(6.0 * 1000.0 * 12.0 * std::pow(ca * 4.0, 2))).epsilon(1e-14));
    CHECK(*b.intermediate.value <= *b.theorem.value);
    CHECK_THROWS_AS(er_moment_bound(500, 2, 1, 1, 0, 1), std::domain_error);
    for (double beta : {0.0, 1.0}) {
        for (int q : {2, 4, 8}) {
            const double ratio = *er_moment_bound(500, 2, 1, 2, beta, 2 * q).theorem.value /
                                 *er_moment_bound(500, 2, 1, 2, beta, q).theorem.value;
            CHECK(ratio <= std::pow(2.0, (1 + 2 * beta) * 2 + 0.5) * (1 + 1e-12));
        }
    }
    // beta = 0: proportional to max(lambda, q)^{r + 1/2}.
    CHECK(*er_moment_bound(100, 1, 1, 2, 0, 6).theorem.value / *er_moment_bound(100, 1, 1, 2, 0, 3).theorem.value ==
          doctest::Approx(std::pow(2.0, 2.5)).epsilon(1e-12));
}

TEST_CASE("binomial_A and neighbourhood_norm_bound") {
    const double lead = 3.14159265358979323846 * std::exp(kE - 2.0);
    CHECK(binomial_A(2, 2) == doctest::Approx(lead * 2).epsilon(1e-15));
    CHECK(binomial_A(2, 2) == doctest::Approx(12.886).epsilon(1e-4));
    CHECK(binomial_A(1, 5) == doctest::Approx(binomial_constant() * 5).epsilon(1e-15));
    CHECK(binomial_A(1, 5) == doctest::Approx(59.512).epsilon(1e-4));
    for (double x : {0.0, 0.5, 2.0, 7.5, 30.0}) {
        for (int ell = 1; ell <= 12; ++ell) CHECK(binomial_A(x, ell) <= binomial_constant() * (x + ell));
    }
    CHECK(neighbourhood_norm_bound(2, 0, 2) == 1.0);
    const double a = binomial_A(2, 2);
    CHECK(neighbourhood_norm_bound(2, 2, 2) == doctest::Approx((a * a * a - 1) / (a - 1)).epsilon(1e-14));
    CHECK(neighbourhood_norm_bound(2, 2, 2) == doctest::Approx(179.95).epsilon(1e-4));
    for (double lambda : {0.5, 2.0, 6.0}) {
        for (int r = 0; r <= 4; ++r) {
            for (int ell = 1; ell <= 8; ++ell) {
                CHECK(neighbourhood_norm_bound(lambda, r, ell) <= 2.0 * std::pow(binomial_A(lambda, ell), r));
            }
        }
    }
}

TEST_CASE("binomial moments never exceed A(np, l)") {
    for (int n = 1; n <= 50; ++n) {
        for (long double p : {0.1L, 0.5L, 0.9L}) {
            for (int ell = 1; ell <= 10; ++ell) {
                const long double norm = std::pow(oracle::binomial_raw_moment(n, p, ell), 1.0L / ell);
                CHECK(static_cast<double>(norm) <= binomial_A(static_cast<double>(n * p), ell));
            }
        }
    }
}
