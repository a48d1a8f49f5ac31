#include "stein/bounds.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "stein/errors.hpp"

namespace stein {

namespace {

using std::numbers::e;
using std::numbers::pi;

void require_k(int k) {
    if (k < 1) throw std::domain_error("moment index k must be >= 1, got " + std::to_string(k));
}

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw std::domain_error(std::string(name) + " must be finite and > 0");
    }
}

void require_non_negative(double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
        throw std::domain_error(std::string(name) + " must be finite and >= 0");
    }
}

// Everything except eps < 1, which the moment bounds report as inapplicability.
void check_fields(const CouplingParams& p) {
    CouplingParams relaxed = p;
    relaxed.eps = 0.0;
    relaxed.validate();
    require_non_negative(p.eps, "CouplingParams.eps");
}

// sqrt(6/e), the slack factor of the bounded-coupling large-deviation bound.
const double kSqrtSixOverE = std::sqrt(6.0 / e);

double log_weibull_moment(const LogWeibullTail& p, int two_k) {
    // In u = log(1 + t) the moment integral 2k int t^{2k-1} min(1, c e^{-b log(1+t)^a}) dt
    // becomes int exp(L(u)) du; integrate exp(L - max L) to stay in range.
    const double m = two_k;
    auto log_integrand = [&](double u) {
        if (u <= 0.0) return -std::numeric_limits<double>::infinity();
        const double tail = std::min(0.0, std::log(p.c) - p.b * std::pow(u, p.a));
        return std::log(m) + (m - 1.0) * std::log(std::expm1(u)) + u + tail;
    };

    const double kink = p.c > 1.0 ? std::pow(std::log(p.c) / p.b, 1.0 / p.a) : 0.0;
    // Stationary point of m u - b u^a, where the integrand peaks for large u.
    const double peak_guess = std::max(kink, std::pow(m / (p.a * p.b), 1.0 / (p.a - 1.0)));

    double upper = std::max(1.0, 2.0 * peak_guess);
    double log_max = -std::numeric_limits<double>::infinity();
    std::vector<double> grid;
    for (int attempt = 0; attempt < 60; ++attempt) {
        constexpr int kGrid = 4000;
        log_max = -std::numeric_limits<double>::infinity();
        for (int i = 1; i <= kGrid; ++i) log_max = std::max(log_max, log_integrand(upper * i / kGrid));
        if (log_integrand(upper) < log_max - 80.0) break;
        upper *= 2.0;
    }
    if (!std::isfinite(log_max) || log_integrand(upper) >= log_max - 80.0) {
        throw NumericError("log-Weibull moment integral: could not bracket the integrand");
    }

    auto f = [&](double u) { return std::exp(log_integrand(u) - log_max); };
    std::vector<double> breaks{0.0};
    if (kink > 0.0 && kink < upper) breaks.push_back(kink);
    if (peak_guess > breaks.back() && peak_guess < upper) breaks.push_back(peak_guess);
    breaks.push_back(upper);

    double total = 0.0;
    double total_error = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        double err = 0.0;
        total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
            f, breaks[i], breaks[i + 1], 25, 1e-12, &err);
        total_error += err;
    }
    if (!(total > 0.0) || !std::isfinite(total) || total_error > 1e-8 * total) {
        throw NumericError("log-Weibull moment integral did not converge to relative 1e-8");
    }
    return std::exp((log_max + std::log(total)) / m);
}

}  // namespace

BoundValue BoundValue::ok(double v, std::string form) {
    if (!std::isfinite(v) || v < 0.0) {
        throw NumericError("bound '" + form + "' evaluated to a non-finite or negative value");
    }
    return BoundValue{v, std::move(form), {}};
}

BoundValue BoundValue::inapplicable(std::string reason) {
    return BoundValue{std::nullopt, {}, std::move(reason)};
}

void validate(const TailProfile& profile) {
    std::visit(
        [](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, BoundedTail>) {
                require_positive(p.x, "bounded tail x");
            } else {
                require_positive(p.a, "tail parameter a");
                require_positive(p.b, "tail parameter b");
                require_positive(p.c, "tail parameter c");
                if constexpr (std::is_same_v<T, LogWeibullTail>) {
                    if (p.a <= 1.0) throw std::domain_error("log-Weibull tail needs a > 1");
                }
            }
        },
        profile);
}

// ---- Moment bounds ----------------------------------------------------------------

BoundValue thm1_form1(const CouplingParams& p, int k) {
    require_k(k);
    check_fields(p);
    if (p.eps >= 1.0) return BoundValue::inapplicable("eps must be < 1");
    const double one_minus = 1.0 - p.eps;
    const double remainder = p.t_norm / one_minus;
    if (p.a_norm == 0.0) {
        if (p.b_norm > 0.0) return BoundValue::inapplicable("A = 0 with B > 0");
        return BoundValue::ok(remainder, "degenerate");
    }
    const double m = 2.0 * k - 1.0;
    const double s = std::sqrt(p.b_norm * one_minus / (p.a_norm * m));
    const double bracket = std::expm1(m * std::log1p(s));
    return BoundValue::ok(p.a_norm / one_minus * bracket + remainder, "form1");
}

BoundValue thm1_form2(const CouplingParams& p, int k) {
    require_k(k);
    check_fields(p);
    if (p.eps >= 1.0) return BoundValue::inapplicable("eps must be < 1");
    const double one_minus = 1.0 - p.eps;
    const double remainder = p.t_norm / one_minus;
    if (p.a_norm == 0.0) {
        if (p.b_norm > 0.0) return BoundValue::inapplicable("A = 0 with B > 0");
        return BoundValue::ok(remainder, "degenerate");
    }
    const double m = 2.0 * k - 1.0;
    const double lead = std::sqrt(m * p.a_norm * p.b_norm / one_minus);
    const double growth = std::exp(std::sqrt(p.b_norm * one_minus * m / p.a_norm));
    return BoundValue::ok(lead * growth + remainder, "form2");
}

BoundValue thm1_moment_bound(const CouplingParams& p, int k) {
    BoundValue first = thm1_form1(p, k);
    if (!first.applicable() || first.form == "degenerate") return first;
    BoundValue second = thm1_form2(p, k);
    return *second.value < *first.value ? second : first;
}

BoundValue thm2_moment_bound(double norm_g_r, double norm_d_r, double eps, double eps_prime,
                             int r) {
    if (r < 2) {
        throw std::domain_error("thm2 needs r >= 2 (r = 1 gives no usable bound), got r = " +
                                std::to_string(r));
    }
    require_non_negative(norm_g_r, "||G||_r");
    require_non_negative(norm_d_r, "||D||_r");
    require_non_negative(eps, "eps");
    require_non_negative(eps_prime, "eps'");
    const double slack = 1.0 - eps - eps_prime;
    if (slack <= 0.0) return BoundValue::inapplicable("eps + eps' must be < 1");
    return BoundValue::ok(std::sqrt(2.0 * (r - 1) * norm_g_r * norm_d_r / slack), "thm2");
}

BoundValue thm3_moment_bound(const CouplingParams& p, int k) {
    require_k(k);
    check_fields(p);
    if (p.sigma == 0.0) return BoundValue::inapplicable("sigma must be > 0");
    const double m = 2.0 * k - 1.0;
    const double slack = 1.0 - p.eps1 - p.eps2 - m * p.eps3;
    if (slack <= 0.0) return BoundValue::inapplicable("eps1 + eps2 + (2k-1) eps3 must be < 1");
    const double s = p.sigma;
    const double correction = (k - 1.0) * p.a_norm * p.b_norm * p.b_norm / (s * s * s * std::sqrt(m)) *
                              std::exp(p.b_norm * std::sqrt(m) / s);
    const double inner = 1.0 + correction + p.t2_norm / (s * s);
    return BoundValue::ok(s * std::sqrt(m) / std::sqrt(slack) * std::sqrt(inner), "thm3");
}

double h_k(const CouplingParams& p, int k) {
    require_k(k);
    check_fields(p);
    if (p.sigma == 0.0) throw std::domain_error("h_k needs sigma > 0");
    const double s = p.sigma;
    return std::exp(2.5) / std::sqrt(2.0) * p.a_norm * p.b_norm * p.b_norm / (s * s * s) *
           std::sqrt(k - 1.0);
}

BoundValue thm4_normal_comparison_bound(const CouplingParams& p, int k) {
    require_k(k);
    check_fields(p);
    if (p.sigma == 0.0) return BoundValue::inapplicable("sigma must be > 0");
    const double m = 2.0 * k - 1.0;
    if (p.sigma < p.b_norm * std::sqrt(e * m)) {
        return BoundValue::inapplicable("requires sigma >= B sqrt(e(2k-1))");
    }
    const double h = h_k(p, k);
    const double big_e = p.eps1 + p.eps2 + m * (p.eps3 + p.eps4);
    if (big_e >= 1.0 - h) return BoundValue::inapplicable("requires E < 1 - h_k");
    return BoundValue::ok(normal_abs_norm(2 * k) / std::sqrt(1.0 - big_e - h), "thm4");
}

// ---- Tails --------------------------------------------------------------------------

double markov_tail(double central_norm, MomentOrder order, double t) {
    require_non_negative(central_norm, "central norm");
    if (!(t > 0.0)) throw std::domain_error("markov_tail needs t > 0");
    return std::min(1.0, std::pow(central_norm / t, order.value()));
}

double moment_bound_from_tail(const TailProfile& profile, int two_k) {
    if (two_k < 2 || two_k % 2 != 0) {
        throw std::domain_error("moment_bound_from_tail needs an even order >= 2");
    }
    validate(profile);
    const double m = two_k;
    return std::visit(
        [&](const auto& p) -> double {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, BoundedTail>) {
                return p.x;
            } else if constexpr (std::is_same_v<T, WeibullTail>) {
                const double log_moment =
                    std::log(m * p.c / p.a) - (m / p.a) * std::log(p.b) + std::lgamma(m / p.a);
                return std::exp(log_moment / m);
            } else {
                return log_weibull_moment(p, two_k);
            }
        },
        profile);
}

double markov_tail_at_k(long long n, const TailProfile& profile_g, const TailProfile& profile_d,
                        double t, int k) {
    require_k(k);
    const double m = 2.0 * k - 1.0;
    const double alpha =
        std::max(moment_bound_from_tail(profile_g, 2 * k), std::numeric_limits<double>::epsilon());
    const double beta = moment_bound_from_tail(profile_d, 2 * k);
    const double nn = static_cast<double>(n);
    const double log_value = -2.0 * k * std::log(t) + k * std::log(nn * m * alpha * beta) +
                             (2.0 * k / std::sqrt(nn)) * std::sqrt(m * beta / alpha);
    return std::exp(log_value);
}

OptimizedTail optimized_markov_tail(long long n, const TailProfile& profile_g,
                                    const TailProfile& profile_d, double t, int k_max) {
    if (n < 1) throw std::domain_error("optimized_markov_tail needs n >= 1");
    if (!(t > 0.0)) throw std::domain_error("optimized_markov_tail needs t > 0");
    validate(profile_g);
    validate(profile_d);
    if (k_max < 1) return {BoundValue::inapplicable("empty range of k"), 0};

    double best = std::numeric_limits<double>::infinity();
    int best_k = 0;
    for (int k = 1; k <= k_max; ++k) {
        const double v = markov_tail_at_k(n, profile_g, profile_d, t, k);
        if (v < best) {
            best = v;
            best_k = k;
        }
    }
    return {BoundValue::ok(std::min(1.0, best), "k=" + std::to_string(best_k)), best_k};
}

BoundValue cor_bounded_tail(double n, double x1, double x2, double t) {
    require_positive(n, "n");
    require_positive(x1, "x1");
    require_positive(x2, "x2");
    require_non_negative(t, "t");
    const double scale = 2.0 * n * x1 * x2 * e;
    if (t < std::sqrt(scale)) return BoundValue::inapplicable("requires t >= sqrt(2 n x1 x2 e)");
    const double exponent = -(t * t / scale) * (1.0 - (t / (x2 * n)) * kSqrtSixOverE);
    return BoundValue::ok(std::min(1.0, e * std::exp(exponent)), "bounded-coupling");
}

BoundValue cor_normal_tail(double y, const std::function<double(int)>& e_of_k,
                           const std::function<double(int)>& h_of_k) {
    if (!(y > 0.0)) throw std::domain_error("cor_normal_tail needs y > 0");
    const int k = std::max(1, static_cast<int>(std::ceil(y * y / 2.0)));
    const double big_e = e_of_k(k);
    const double h = h_of_k(k);
    if (big_e + h >= 1.0) return BoundValue::inapplicable("requires E + h_k < 1 at k = ceil(y^2/2)");
    const double log_value = 0.5 * std::log(2.0) - y * y / 2.0 + 2.0 / (y * y) - k * std::log1p(-(big_e + h));
    return BoundValue::ok(std::min(1.0, std::exp(log_value)), "k=" + std::to_string(k));
}

double weak_concentration_scale(long long n, const TailProfile& profile_g,
                                const TailProfile& profile_d) {
    if (n < 3) throw std::domain_error("weak_concentration_scale needs n >= 3");
    const int k = static_cast<int>(std::ceil(std::log(static_cast<double>(n))));
    const double m = 2.0 * k - 1.0;
    const double alpha =
        std::max(moment_bound_from_tail(profile_g, 2 * k), std::numeric_limits<double>::epsilon());
    const double beta = moment_bound_from_tail(profile_d, 2 * k);
    const double nn = static_cast<double>(n);
    const double d = std::sqrt(nn * m * alpha * beta) * std::exp(std::sqrt(m * beta / alpha) / std::sqrt(nn));
    // A near-zero alpha overflows the exponential; report the largest finite scale instead.
    return std::min(d, std::numeric_limits<double>::max());
}

// ---- Applications ------------------------------------------------------------------

double h_prime_k(double rho_k, long long n, int k) {
    require_k(k);
    if (n < 1) throw std::domain_error("n must be >= 1");
    if (!(rho_k >= 1.0 - 1e-12) || !std::isfinite(rho_k)) {
        throw std::domain_error("rho_k = ||X||_2k / ||X||_2 must be >= 1");
    }
    return 5.0 * std::sqrt(2.0 * e * e * e) * rho_k * rho_k * rho_k *
           std::sqrt((k - 1.0) / static_cast<double>(n));
}

BoundValue prop_independent_bound(double rho_k, long long n, int k) {
    const double h = h_prime_k(rho_k, n, k);
    if (h >= 1.0) return BoundValue::inapplicable("requires h'_k < 1 (n too small for this k)");
    return BoundValue::ok(normal_abs_norm(2 * k) / std::sqrt(1.0 - h), "prop-independent");
}

BoundValue local_dep_moment_bound(long long n, long long d, double x, int k) {
    if (n < 1) throw std::domain_error("n must be >= 1");
    if (d < 1) throw std::domain_error("neighbourhood size d must be >= 1");
    require_positive(x, "x");
    CouplingParams p;
    p.a_norm = static_cast<double>(n) * x;
    p.b_norm = static_cast<double>(d) * x;
    BoundValue v = thm1_form1(p, k);
    v.form = "local-dependence";
    return v;
}

double local_dep_moment_bound_relaxed(long long n, long long d, double x, int k) {
    require_k(k);
    const double m = 2.0 * k - 1.0;
    const double nn = static_cast<double>(n);
    const double dd = static_cast<double>(d);
    return std::sqrt(nn) * x * std::sqrt(dd * m) * std::exp(std::sqrt(dd * m / nn));
}

BoundValue local_dep_tail(long long n, long long d, double x, double t) {
    if (d < 1) throw std::domain_error("neighbourhood size d must be >= 1");
    require_positive(x, "x");
    return cor_bounded_tail(static_cast<double>(n), static_cast<double>(d) * x, x, t);
}

SizeBiasTail size_bias_tail(double mu, double c, double t) {
    require_positive(mu, "mu");
    require_positive(c, "c");
    require_non_negative(t, "t");
    SizeBiasTail out;
    // |D| <= c and G = mu: the bounded-coupling bound with n = 1, x1 = c, x2 = mu.
    out.ours = cor_bounded_tail(1.0, c, mu, t);
    out.arratia_baxendale = std::min(1.0, 2.0 * std::exp(-t * t / (2.0 * mu * c + 2.0 * c * t / 3.0)));
    return out;
}

double binomial_constant() { return pi * std::exp(e - 2.0) / std::log(e - 1.0); }

double er_constant(int r, double beta) {
    if (r < 1) throw std::domain_error("r must be >= 1");
    require_non_negative(beta, "beta");
    return std::pow(binomial_constant(), (1.0 + 2.0 * beta) * r) *
           std::sqrt(std::pow(2.0, 2.0 + beta) * (std::pow(10.0, 1.0 + beta) + std::pow(2.0, 1.0 + beta)));
}

ErMomentBound er_moment_bound(long long n, double lambda, double c, int r, double beta, int q) {
    if (q < 2) throw std::domain_error("er_moment_bound needs q >= 2, got " + std::to_string(q));
    if (n < 1) throw std::domain_error("n must be >= 1");
    require_positive(lambda, "lambda");
    require_positive(c, "c");
    if (r < 1) throw std::domain_error("r must be >= 1");
    require_non_negative(beta, "beta");

    const double nn = static_cast<double>(n);
    const double ca = binomial_constant();
    const double lambda1 = std::max(lambda, q * beta);
    const double lambda2 = std::max(lambda, q * (1.0 + beta));

    ErMomentBound out;
    out.g_norm_bound = std::pow(2.0, 1.0 + beta) * nn * c * std::pow(ca * lambda1, r * beta);
    out.d_norm_bound = (std::pow(10.0, 1.0 + beta) + std::pow(2.0, 1.0 + beta)) * c *
                       std::pow(ca * lambda2, 2.0 * r + 3.0 * r * beta);
    const double exponent = (1.0 + 2.0 * beta) * r + 0.5;
    out.theorem = BoundValue::ok(std::sqrt(nn) * c * er_constant(r, beta) * std::pow(lambda2, exponent),
                                 "er-theorem");
    out.intermediate =
        BoundValue::ok(std::sqrt(2.0 * (q - 1) * out.g_norm_bound * out.d_norm_bound), "er-intermediate");
    return out;
}

double binomial_A(double x, int ell) {
    require_non_negative(x, "x");
    if (ell < 1) throw std::domain_error("binomial_A needs l >= 1");
    const double lead = pi * std::exp(e - 2.0);
    return ell > x ? lead * ell / std::log(e - 1.0) : lead * x;
}

double neighbourhood_norm_bound(double lambda, int r, int ell) {
    if (r < 0) throw std::domain_error("radius r must be >= 0");
    const double a = binomial_A(lambda, ell);
    return (std::pow(a, r + 1.0) - 1.0) / (a - 1.0);
}

}  // namespace stein
