#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>

#include "stein/core.hpp"

namespace stein {

/// Result of evaluating one closed-form bound.
///
/// An inapplicable bound carries no value, only a reason. A vacuous tail bound is a
/// different thing: it is applicable and clamped to 1.
struct BoundValue {
    std::optional<double> value;
    std::string form;
    std::string reason;

    bool applicable() const noexcept { return value.has_value(); }

    static BoundValue ok(double v, std::string form);
    static BoundValue inapplicable(std::string reason);
};

// Tail profiles P[|X| > x] <= ... used to bound ||X||_{2k}.
struct BoundedTail {
    double x;  // |X| <= x a.s.
};
struct WeibullTail {
    double a, b, c;  // c exp(-b x^a)
};
struct LogWeibullTail {
    double a, b, c;  // c exp(-b log(1 + x)^a), a > 1
};
using TailProfile = std::variant<BoundedTail, WeibullTail, LogWeibullTail>;

/// Throws std::domain_error on non-positive parameters (or a <= 1 for log-Weibull).
void validate(const TailProfile& profile);

// ---- Moment bounds ----------------------------------------------------------------

/// Minimum of the two bounds on ||W - mu||_{2k} from ||G||_{2k} <= A, ||D||_{2k} <= B.
/// form is "form1" (binomial bracket) or "form2" (exponential relaxation).
BoundValue thm1_moment_bound(const CouplingParams& params, int k);

/// The binomial-bracket form alone; local_dep_moment_bound reuses it.
BoundValue thm1_form1(const CouplingParams& params, int k);
/// The exponential relaxation alone.
BoundValue thm1_form2(const CouplingParams& params, int k);

/// sqrt(2(r-1) ||G||_r ||D||_r / (1 - eps - eps')). Valid for r >= 2 when
/// E|W' - mu|^r <= E|W - mu|^r, which the caller vouches for.
BoundValue thm2_moment_bound(double norm_g_r, double norm_d_r, double eps, double eps_prime, int r);

/// Bound on ||W - mu||_{2k} with sigma^2 in the leading term.
BoundValue thm3_moment_bound(const CouplingParams& params, int k);

/// 2^{-1/2} e^{5/2} sigma^{-3} A B^2 sqrt(k - 1).
double h_k(const CouplingParams& params, int k);

/// Bound on ||sigma^{-1}(W - mu)||_{2k} relative to the normal 2k-norm.
BoundValue thm4_normal_comparison_bound(const CouplingParams& params, int k);

// ---- Tails --------------------------------------------------------------------------

/// min(1, (central_norm / t)^order).
double markov_tail(double central_norm, MomentOrder order, double t);

/// Upper bound on ||X||_{2k} implied by a tail profile. Log-Weibull profiles are
/// integrated numerically (relative tolerance 1e-8); throws NumericError if the
/// quadrature does not converge.
double moment_bound_from_tail(const TailProfile& profile, int two_k);

struct OptimizedTail {
    BoundValue bound;
    int k_star = 0;
};

/// Minimizes the Markov/moment tail over integer k in [1, k_max], with
/// ||n^-1 G||_{2k} and ||D||_{2k} taken from the two profiles. Ties go to the smaller k.
OptimizedTail optimized_markov_tail(long long n, const TailProfile& profile_g,
                                    const TailProfile& profile_d, double t, int k_max);

/// Single-k value of the quantity minimized by optimized_markov_tail (not clamped).
double markov_tail_at_k(long long n, const TailProfile& profile_g, const TailProfile& profile_d,
                        double t, int k);

/// Large-deviation bound for |D| <= x1 and |n^-1 G| <= x2, valid for t >= sqrt(2 n x1 x2 e).
BoundValue cor_bounded_tail(double n, double x1, double x2, double t);

/// Bound on P[sigma^-1 |W - mu| > y] using k = ceil(y^2 / 2).
BoundValue cor_normal_tail(double y, const std::function<double(int)>& e_of_k,
                           const std::function<double(int)>& h_of_k);

/// Deviation scale d_n with k_n = ceil(log n).
double weak_concentration_scale(long long n, const TailProfile& profile_g,
                                const TailProfile& profile_d);

// ---- Applications ------------------------------------------------------------------

/// ||N||_{2k} / sqrt(1 - h'_k) for sums of independent mean-zero summands, rho_k >= 1.
BoundValue prop_independent_bound(double rho_k, long long n, int k);
/// The correction term h'_k = 5 sqrt(2 e^3) rho^3 sqrt((k - 1) / n).
double h_prime_k(double rho_k, long long n, int k);

/// n x [(1 + sqrt(d / (n(2k - 1))))^{2k-1} - 1] for local dependence with
/// neighbourhoods of size <= d and summand 2k-norms <= x.
BoundValue local_dep_moment_bound(long long n, long long d, double x, int k);
/// The relaxed second line sqrt(n) x sqrt(d(2k-1)) exp(sqrt(d(2k-1)/n)).
double local_dep_moment_bound_relaxed(long long n, long long d, double x, int k);

/// cor_bounded_tail with x1 = d x, x2 = x.
BoundValue local_dep_tail(long long n, long long d, double x, double t);

struct SizeBiasTail {
    BoundValue ours;
    double arratia_baxendale = 1.0;
};

/// Bounded size-bias coupling |W^s - W| <= c: our bound next to 2 exp(-t^2/(2 mu c + 2ct/3)).
SizeBiasTail size_bias_tail(double mu, double c, double t);

/// C_A = pi e^{e-2} / log(e - 1).
double binomial_constant();

/// C(r, beta) = C_A^{(1+2 beta) r} sqrt(2^{2+beta} (10^{1+beta} + 2^{1+beta})).
double er_constant(int r, double beta);

struct ErMomentBound {
    BoundValue theorem;       // sqrt(n) c C(r,beta) max{lambda, q(1+beta)}^{(1+2beta)r + 1/2}
    BoundValue intermediate;  // sqrt(2(q-1) |G-norm bound| |D-norm bound|)
    double g_norm_bound = 0.0;
    double d_norm_bound = 0.0;
};

/// Bound on ||W - EW||_q for sums of r-neighbourhood statistics in ER(n, lambda/n)
/// with |U(G)| <= c |V(G)|^beta. Throws std::domain_error for q < 2.
ErMomentBound er_moment_bound(long long n, double lambda, double c, int r, double beta, int q);

/// A(x, l): bound on ||Bi(n, p)||_l with x = np.
double binomial_A(double x, int ell);

/// (A^{r+1} - 1) / (A - 1) with A = binomial_A(lambda, l): bound on ||N_r||_l.
double neighbourhood_norm_bound(double lambda, int r, int ell);

}  // namespace stein
