#include "stein/couplings.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "stein/errors.hpp"
#include "stein/estimate.hpp"

namespace stein {

namespace {

constexpr std::uint64_t kPilotStream = std::uint64_t{1} << 62;


// Inverse-CDF sampler for Binomial(n, q), used to draw the number of "high" summands.
class BinomialTable {
public:
    BinomialTable(long long n, double q) : cdf_(static_cast<std::size_t>(n) + 1) {
        CompensatedSum acc;
        for (long long s = 0; s <= n; ++s) {
            double pmf;
            if (q <= 0.0) {
                pmf = s == 0 ? 1.0 : 0.0;
            } else if (q >= 1.0) {
                pmf = s == n ? 1.0 : 0.0;
            } else {
                pmf = std::exp(std::lgamma(n + 1.0) - std::lgamma(s + 1.0) - std::lgamma(n - s + 1.0) +
                               s * std::log(q) + (n - s) * std::log1p(-q));
            }
            acc.add(pmf);
            cdf_[s] = acc.value();
        }
        cdf_.back() = 1.0;
    }

    long long draw(Rng& rng) const {
        const double u = rng.uniform();
        return std::upper_bound(cdf_.begin(), cdf_.end(), u) - cdf_.begin();
    }

private:
    std::vector<double> cdf_;
};

class IndependentSumSampler final : public CouplingSampler {
public:
    IndependentSumSampler(const IndependentSumParams& p, double g_scale)
        : params_(p), g_scale_(g_scale) {
        if (p.summand.kind != SummandKind::centered_exponential) {
            const double q = p.summand.kind == SummandKind::rademacher ? 0.5 : p.summand.param;
            table_.emplace(p.n, q);
        }
    }

    CouplingSample draw(Rng& rng) override {
        const long long n = params_.n;
        const double nn = static_cast<double>(n);
        double w = 0.0;
        double x_i = 0.0;
        switch (params_.summand.kind) {
            case SummandKind::rademacher: {
                // Only the number of +1's matters; X_I is +1 with probability S/n given S.
                const long long s = table_->draw(rng);
                w = static_cast<double>(2 * s - n);
                x_i = static_cast<long long>(rng.below(n)) < s ? 1.0 : -1.0;
                break;
            }
            case SummandKind::centered_bernoulli: {
                const double p = params_.summand.param;
                const long long s = table_->draw(rng);
                w = static_cast<double>(s) - nn * p;
                x_i = static_cast<long long>(rng.below(n)) < s ? 1.0 - p : -p;
                break;
            }
            case SummandKind::centered_exponential: {
                const double rate = params_.summand.param;
                xs_.resize(n);
                for (auto& x : xs_) {
                    x = rng.exponential(rate) - 1.0 / rate;
                    w += x;
                }
                x_i = xs_[rng.below(n)];
                break;
            }
        }
        return CouplingSample::make(w, w - x_i, -nn * x_i * g_scale_);
    }

private:
    IndependentSumParams params_;
    double g_scale_;
    std::optional<BinomialTable> table_;
    std::vector<double> xs_;
};

class LocalRunsSampler final : public CouplingSampler {
public:
    LocalRunsSampler(const RunsParams& p, double g_scale) : params_(p), g_scale_(g_scale), bits_(p.n) {}

    CouplingSample draw(Rng& rng) override {
        for (auto& b : bits_) b = rng.bernoulli(params_.p) ? 1 : 0;
        const std::size_t i = rng.below(params_.n);
        CouplingSample s = local_dependence_coupling(bits_, params_.m, params_.p, i);
        s.g *= g_scale_;
        return s;
    }

private:
    RunsParams params_;
    double g_scale_;
    std::vector<std::uint8_t> bits_;
};

class SizeBiasRunsSampler final : public CouplingSampler {
public:
    SizeBiasRunsSampler(const RunsParams& p, double g_scale)
        : params_(p), mu_(p.n * std::pow(p.p, p.m)), g_scale_(g_scale), bits_(p.n) {}

    CouplingSample draw(Rng& rng) override {
        for (auto& b : bits_) b = rng.bernoulli(params_.p) ? 1 : 0;
        const std::size_t i = rng.below(params_.n);
        const double w = static_cast<double>(count_runs(bits_, params_.m));
        const double ws = w + static_cast<double>(size_bias_increment(bits_, params_.m, i));
        return CouplingSample::make(w, ws, mu_ * g_scale_);
    }

private:
    RunsParams params_;
    double mu_;
    double g_scale_;
    std::vector<std::uint8_t> bits_;
};

double bernoulli_centered_norm(double q, int r) {
    return std::pow(q * std::pow(1.0 - q, r) + (1.0 - q) * std::pow(q, r), 1.0 / r);
}

}  // namespace

// ---- ModelSpec ---------------------------------------------------------------------

std::string to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::independent_sum: return "independent_sum";
        case ModelKind::local_dependence_runs: return "local_dependence_runs";
        case ModelKind::size_bias_runs: return "size_bias_runs";
        case ModelKind::er_neighbourhood: return "er_neighbourhood";
    }
    return "unknown";
}

ModelKind parse_model_kind(const std::string& name) {
    for (ModelKind k : {ModelKind::independent_sum, ModelKind::local_dependence_runs,
                        ModelKind::size_bias_runs, ModelKind::er_neighbourhood}) {
        if (to_string(k) == name) return k;
    }
    throw ConfigError("unknown model kind '" + name + "'");
}

void ModelSpec::validate() const {
    if (!std::isfinite(g_scale)) throw ConfigError("g_scale must be finite");
    switch (kind) {
        case ModelKind::independent_sum: {
            const auto* p = std::get_if<IndependentSumParams>(&params);
            if (!p) throw ConfigError("independent_sum needs IndependentSumParams");
            if (p->n < 1) throw ConfigError("independent_sum: n must be >= 1");
            if (p->summand.kind == SummandKind::centered_bernoulli &&
                !(p->summand.param >= 0.0 && p->summand.param <= 1.0)) {
                throw ConfigError("centered_bernoulli: p must be in [0, 1]");
            }
            if (p->summand.kind == SummandKind::centered_exponential && !(p->summand.param > 0.0)) {
                throw ConfigError("centered_exponential: rate must be > 0");
            }
            break;
        }
        case ModelKind::local_dependence_runs:
        case ModelKind::size_bias_runs: {
            const auto* p = std::get_if<RunsParams>(&params);
            if (!p) throw ConfigError(to_string(kind) + " needs RunsParams");
            if (p->m < 1) throw ConfigError("runs: m must be >= 1");
            if (p->n < 2LL * p->m) throw ConfigError("runs: n must be >= 2m");
            if (!(p->p > 0.0 && p->p <= 1.0)) throw ConfigError("runs: p must be in (0, 1]");
            if (!p->circular) throw ConfigError("runs: only circular trials are supported");
            break;
        }
        case ModelKind::er_neighbourhood: {
            const auto* p = std::get_if<ERParams>(&params);
            if (!p) throw ConfigError("er_neighbourhood needs ERParams");
            if (p->n < 2) throw ConfigError("er: n must be >= 2");
            if (!(p->lambda >= 0.0) || p->lambda > static_cast<double>(p->n)) {
                throw ConfigError("er: lambda must be in [0, n]");
            }
            if (p->r < 0) throw ConfigError("er: r must be >= 0");
            if (p->r != p->statistic.radius()) {
                throw ConfigError("er: r = " + std::to_string(p->r) + " but statistic " +
                                  p->statistic.describe() + " has radius " +
                                  std::to_string(p->statistic.radius()));
            }
            if (const auto* est = std::get_if<EstimatedMean>(&p->mu_x); est && est->n_pilot <= 0) {
                throw ConfigError("er: estimated mu_x needs n_pilot > 0");
            }
            break;
        }
    }
}

std::string ModelSpec::label() const {
    std::ostringstream out;
    out << to_string(kind);
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, IndependentSumParams>) {
                out << "(n=" << p.n << ",";
                switch (p.summand.kind) {
                    case SummandKind::rademacher: out << "rademacher"; break;
                    case SummandKind::centered_bernoulli: out << "bernoulli p=" << p.summand.param; break;
                    case SummandKind::centered_exponential: out << "exponential rate=" << p.summand.param; break;
                }
                out << ")";
            } else if constexpr (std::is_same_v<T, RunsParams>) {
                out << "(n=" << p.n << ",m=" << p.m << ",p=" << p.p << ")";
            } else {
                out << "(n=" << p.n << ",lambda=" << p.lambda << ",r=" << p.r << ","
                    << p.statistic.describe() << ")";
            }
        },
        params);
    if (g_scale != 1.0) out << "[g*" << g_scale << "]";
    return out.str();
}

// ---- building blocks ---------------------------------------------------------------

double summand_norm(const Summand& s, int r) {
    if (r < 1) throw std::domain_error("norm order must be >= 1");
    switch (s.kind) {
        case SummandKind::rademacher: return 1.0;
        case SummandKind::centered_bernoulli: return bernoulli_centered_norm(s.param, r);
        case SummandKind::centered_exponential: {
            // E|E - 1|^r = e^{-1} (r! + int_0^1 u^r e^u du), the integral as a series.
            double series = 0.0;
            double inv_fact = 1.0;
            for (int j = 0; j < 200; ++j) {
                if (j > 0) inv_fact /= j;
                series += inv_fact / (r + j + 1.0);
                if (inv_fact < 1e-20) break;
            }
            const double log_moment = -1.0 + std::log(std::exp(std::lgamma(r + 1.0)) + series);
            return std::exp(log_moment / r) / s.param;
        }
    }
    return 0.0;
}

long long count_runs(std::span<const std::uint8_t> bits, int m) {
    const std::size_t n = bits.size();
    long long count = 0;
    // Length of the current streak of ones, started at the wrap so circular windows count.
    std::size_t lead = 0;
    while (lead < n && bits[lead]) ++lead;
    if (lead == n) return static_cast<long long>(n);
    std::size_t streak = 0;
    for (std::size_t t = 0; t < n + static_cast<std::size_t>(m) - 1; ++t) {
        streak = bits[t % n] ? streak + 1 : 0;
        if (t >= static_cast<std::size_t>(m) - 1 && streak >= static_cast<std::size_t>(m)) ++count;
    }
    return count;
}

long long size_bias_increment(std::span<const std::uint8_t> bits, int m, std::size_t i) {
    const long long n = static_cast<long long>(bits.size());
    auto forced = [&](long long t) { return ((t - static_cast<long long>(i)) % n + n) % n < m; };
    long long delta = 0;
    for (long long off = -(m - 1); off <= m - 1; ++off) {
        const long long j = ((static_cast<long long>(i) + off) % n + n) % n;
        bool before = true;
        bool after = true;
        for (int s = 0; s < m; ++s) {
            const long long t = (j + s) % n;
            before = before && bits[t];
            after = after && (bits[t] || forced(t));
        }
        delta += static_cast<long long>(after) - static_cast<long long>(before);
    }
    return delta;
}

CouplingSample local_dependence_coupling(std::span<const std::uint8_t> bits, int m, double p,
                                         std::size_t i) {
    const long long n = static_cast<long long>(bits.size());
    const double q = std::pow(p, m);
    auto window = [&](long long j) {
        for (int s = 0; s < m; ++s) {
            if (!bits[(j + s) % n]) return 0;
        }
        return 1;
    };
    const long long runs = count_runs(bits, m);
    long long near = 0;
    for (long long off = -(m - 1); off <= m - 1; ++off) {
        near += window(((static_cast<long long>(i) + off) % n + n) % n);
    }
    const long long d = 2LL * m - 1;
    const double w = static_cast<double>(runs) - static_cast<double>(n) * q;
    const double w_prime = static_cast<double>(runs - near) - static_cast<double>(n - d) * q;
    const double x_i = window(static_cast<long long>(i)) - q;
    return CouplingSample::make(w, w_prime, -static_cast<double>(n) * x_i);
}

double circular_runs_variance(long long n, int m, double p) {
    const double q = std::pow(p, m);
    double cov = 0.0;
    for (int h = 1; h < m; ++h) cov += std::pow(p, m + h) - q * q;
    return static_cast<double>(n) * (q - q * q + 2.0 * cov);
}

// ---- ER coupling -------------------------------------------------------------------

ErNeighbourhoodSampler::ErNeighbourhoodSampler(const ERParams& params, double mu_x, double g_scale)
    : params_(params),
      p_(params.lambda / static_cast<double>(params.n)),
      mu_x_(mu_x),
      g_scale_(g_scale),
      base_(params.n),
      overlay_(base_),
      scratch_(params.n),
      x_(params.n),
      in_ball_(params.n, 0) {}

double ErNeighbourhoodSampler::full_statistic_sum(const SparseGraph& g) {
    double w = 0.0;
    for (Vertex i = 0; i < g.num_vertices(); ++i) {
        scratch_.build(g, i, params_.r, nbhd_);
        w += evaluate_statistic(params_.statistic, nbhd_);
    }
    return w;
}

CouplingSample ErNeighbourhoodSampler::draw(Rng& rng) {
    const std::size_t n = static_cast<std::size_t>(params_.n);
    const int r = params_.r;
    base_ = generate_er(n, p_, rng);
    overlay_.rebind(base_);

    double w = 0.0;
    for (Vertex i = 0; i < n; ++i) {
        scratch_.build(base_, i, r, nbhd_);
        x_[i] = evaluate_statistic(params_.statistic, nbhd_);
        w += x_[i];
    }

    const Vertex j = static_cast<Vertex>(rng.below(n));
    last_root_ = j;
    scratch_.build(base_, j, r, nbhd_);
    std::vector<Vertex> ball_j(nbhd_.vertices.begin(), nbhd_.vertices.end());
    std::sort(ball_j.begin(), ball_j.end());
    for (Vertex u : ball_j) in_ball_[u] = 1;

    // Endpoints of every pair whose indicator may have changed.
    std::vector<Vertex> changed(ball_j);
    for (Vertex u : ball_j) {
        for (Vertex l : base_.neighbours(u)) {
            if (!in_ball_[l]) {
                auto& list = overlay_.edit(l);
                list.erase(std::find(list.begin(), list.end(), u));
                changed.push_back(l);
            }
        }
        overlay_.edit(u).clear();
    }
    // Fresh indicators for every pair with at least one endpoint in the ball; a pair
    // inside the ball is drawn once, from its smaller endpoint.
    if (p_ > 0.0) {
        for (Vertex u : ball_j) {
            std::uint64_t pos = rng.geometric(p_);
            for (; pos < n; pos += 1) {
                const auto l = static_cast<Vertex>(pos);
                if (l != u && (!in_ball_[l] || l > u)) {
                    overlay_.edit(u).push_back(l);
                    overlay_.edit(l).push_back(u);
                    changed.push_back(l);
                }
                const std::uint64_t gap = rng.geometric(p_);
                if (gap >= n) break;
                pos += gap;
            }
        }
    }
    for (Vertex v : changed) {
        if (overlay_.is_modified(v)) {
            auto& list = overlay_.edit(v);
            std::sort(list.begin(), list.end());
        }
    }
    for (Vertex u : ball_j) in_ball_[u] = 0;

    // Only vertices within distance r of a changed pair can see a different neighbourhood.
    std::vector<Vertex> affected = ball(base_, std::span<const Vertex>(changed), r);
    const std::vector<Vertex> affected_new = ball(overlay_, std::span<const Vertex>(changed), r);
    std::vector<Vertex> merged;
    merged.reserve(affected.size() + affected_new.size());
    std::set_union(affected.begin(), affected.end(), affected_new.begin(), affected_new.end(),
                   std::back_inserter(merged));

    double delta = 0.0;
    for (Vertex i : merged) {
        scratch_.build(overlay_, i, r, nbhd_);
        delta += evaluate_statistic(params_.statistic, nbhd_) - x_[i];
    }
    const double g = -static_cast<double>(n) * (x_[j] - mu_x_) * g_scale_;
    return CouplingSample::make(w, w + delta, g);
}

// ---- PreparedModel -----------------------------------------------------------------

PreparedModel PreparedModel::prepare(const ModelSpec& spec) {
    spec.validate();
    PreparedModel m;
    m.spec_ = spec;
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, IndependentSumParams>) {
                m.exact_mean_ = 0.0;
                m.exact_sd_ = std::sqrt(static_cast<double>(p.n)) * summand_norm(p.summand, 2);
            } else if constexpr (std::is_same_v<T, RunsParams>) {
                const double q = std::pow(p.p, p.m);
                m.exact_mean_ = spec.kind == ModelKind::size_bias_runs ? static_cast<double>(p.n) * q : 0.0;
                m.exact_sd_ = std::sqrt(std::max(0.0, circular_runs_variance(p.n, p.m, p.p)));
            } else {
                const double edge_p = p.lambda / static_cast<double>(p.n);
                if (const auto* ex = std::get_if<ExactMean>(&p.mu_x)) {
                    std::optional<double> mu = ex->value;
                    if (!mu) mu = exact_statistic_mean(p.statistic, p.n, edge_p);
                    if (!mu) {
                        throw ConfigError("no closed form for E X_i of " + p.statistic.describe() +
                                          "; use an estimated mu_x");
                    }
                    m.mu_x_ = *mu;
                    m.exact_mean_ = static_cast<double>(p.n) * *mu;
                } else {
                    const auto& est = std::get<EstimatedMean>(p.mu_x);
                    ErNeighbourhoodSampler pilot(p, 0.0, 1.0);
                    Rng rng = Rng::stream(spec.seed, kPilotStream);
                    std::vector<double> means;
                    means.reserve(est.n_pilot);
                    CompensatedSum total;
                    for (long long s = 0; s < est.n_pilot; ++s) {
                        const SparseGraph g = generate_er(p.n, edge_p, rng);
                        means.push_back(pilot.full_statistic_sum(g) / static_cast<double>(p.n));
                        total.add(means.back());
                    }
                    m.mu_x_ = total.value() / static_cast<double>(est.n_pilot);
                    m.mu_x_se_ = standard_error_of_mean(means);
                }
            }
        },
        spec.params);
    return m;
}

std::unique_ptr<CouplingSampler> PreparedModel::make_sampler() const {
    switch (spec_.kind) {
        case ModelKind::independent_sum:
            return std::make_unique<IndependentSumSampler>(std::get<IndependentSumParams>(spec_.params),
                                                           spec_.g_scale);
        case ModelKind::local_dependence_runs:
            return std::make_unique<LocalRunsSampler>(std::get<RunsParams>(spec_.params), spec_.g_scale);
        case ModelKind::size_bias_runs:
            return std::make_unique<SizeBiasRunsSampler>(std::get<RunsParams>(spec_.params), spec_.g_scale);
        case ModelKind::er_neighbourhood:
            return std::make_unique<ErNeighbourhoodSampler>(std::get<ERParams>(spec_.params), mu_x_,
                                                            spec_.g_scale);
    }
    throw ConfigError("unknown model kind");
}

std::vector<ModelBound> PreparedModel::moment_bounds(int k) const {
    if (k < 1) throw std::domain_error("k must be >= 1");
    std::vector<ModelBound> out;
    const int two_k = 2 * k;
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, IndependentSumParams>) {
                const double nn = static_cast<double>(p.n);
                const double x2k = summand_norm(p.summand, two_k);
                const double x2 = summand_norm(p.summand, 2);
                const double sigma = *exact_sd_;
                // The coupling bounds use ||G|| as sampled, so a rescaled G shows up here.
                const double g_norm = std::fabs(spec_.g_scale) * nn * x2k;
                CouplingParams cp;
                cp.a_norm = g_norm;
                cp.b_norm = x2k;
                cp.sigma = sigma;
                out.push_back({"thm1", thm1_moment_bound(cp, k)});
                out.push_back({"thm2", thm2_moment_bound(g_norm, x2k, 0.0, 0.0, two_k)});
                if (x2 > 0.0) {
                    BoundValue prop = prop_independent_bound(x2k / x2, p.n, k);
                    if (prop.applicable()) prop.value = *prop.value * sigma;
                    out.push_back({"prop-independent", prop});
                }
                if (p.summand.kind == SummandKind::rademacher) {
                    // X_i^2 = 1 makes E[GD | W] = sigma^2 exactly: eps3 = 0, T2 = 0.
                    out.push_back({"thm3", thm3_moment_bound(cp, k)});
                    BoundValue t4 = thm4_normal_comparison_bound(cp, k);
                    if (t4.applicable()) t4.value = *t4.value * sigma;
                    out.push_back({"thm4", t4});
                }
            } else if constexpr (std::is_same_v<T, RunsParams>) {
                const double q = std::pow(p.p, p.m);
                const long long d = 2LL * p.m - 1;
                if (spec_.kind == ModelKind::local_dependence_runs) {
                    const double x = bernoulli_centered_norm(q, two_k);
                    if (x > 0.0) {
                        out.push_back({"local-dep", local_dep_moment_bound(p.n, d, x, k)});
                    } else {
                        out.push_back({"local-dep", BoundValue::ok(0.0, "degenerate")});
                    }
                } else {
                    CouplingParams cp;
                    cp.a_norm = std::fabs(spec_.g_scale) * static_cast<double>(p.n) * q;
                    cp.b_norm = static_cast<double>(d);
                    out.push_back({"thm1", thm1_moment_bound(cp, k)});
                }
            } else {
                if (p.lambda > 0.0) {
                    const ErMomentBound b = er_moment_bound(p.n, p.lambda, p.statistic.c(), p.r,
                                                            p.statistic.beta(), two_k);
                    out.push_back({"er-moment", b.theorem});
                    out.push_back({"er-intermediate", b.intermediate});
                } else {
                    out.push_back({"er-moment", BoundValue::inapplicable("lambda must be > 0")});
                }
            }
        },
        spec_.params);
    return out;
}

std::vector<ModelBound> PreparedModel::tail_bounds(double t) const {
    if (!(t > 0.0)) throw std::domain_error("tail threshold must be > 0");
    std::vector<ModelBound> out;
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, IndependentSumParams>) {
                const double nn = static_cast<double>(p.n);
                switch (p.summand.kind) {
                    case SummandKind::rademacher: {
                        out.push_back({"cor-bounded", cor_bounded_tail(nn, 1.0, 1.0, t)});
                        const double sigma = *exact_sd_;
                        const double y = t / sigma;
                        const int k = std::max(1, static_cast<int>(std::ceil(y * y / 2.0)));
                        if (sigma < std::sqrt(std::numbers::e * (2.0 * k - 1.0))) {
                            out.push_back({"cor-normal",
                                           BoundValue::inapplicable("requires sigma >= B sqrt(e(2k-1))")});
                            break;
                        }
                        CouplingParams cp;
                        cp.a_norm = nn;
                        cp.b_norm = 1.0;
                        cp.sigma = sigma;
                        out.push_back({"cor-normal", cor_normal_tail(
                                                         y, [](int) { return 0.0; },
                                                         [&](int kk) { return h_k(cp, kk); })});
                        break;
                    }
                    case SummandKind::centered_bernoulli: {
                        const double x = std::max(p.summand.param, 1.0 - p.summand.param);
                        out.push_back({"cor-bounded", cor_bounded_tail(nn, x, x, t)});
                        break;
                    }
                    case SummandKind::centered_exponential: {
                        // P(|E/rate - 1/rate| > x) <= e * exp(-rate x) for all x >= 0.
                        const TailProfile prof = WeibullTail{1.0, p.summand.param, std::numbers::e};
                        out.push_back({"optimized-markov", optimized_markov_tail(p.n, prof, prof, t, 50).bound});
                        break;
                    }
                }
            } else if constexpr (std::is_same_v<T, RunsParams>) {
                const double q = std::pow(p.p, p.m);
                const long long d = 2LL * p.m - 1;
                if (spec_.kind == ModelKind::local_dependence_runs) {
                    const double x = std::max(q, 1.0 - q);
                    out.push_back({"local-dep-tail", local_dep_tail(p.n, d, x, t)});
                } else {
                    const SizeBiasTail sb = size_bias_tail(static_cast<double>(p.n) * q, static_cast<double>(d), t);
                    out.push_back({"size-bias", sb.ours});
                    out.push_back({"size-bias-ab", BoundValue::ok(sb.arratia_baxendale, "arratia-baxendale")});
                }
            } else {
                if (p.lambda > 0.0) {
                    double best = 1.0;
                    int best_q = 0;
                    for (int q = 2; q <= 12; q += 2) {
                        const ErMomentBound b =
                            er_moment_bound(p.n, p.lambda, p.statistic.c(), p.r, p.statistic.beta(), q);
                        const double v = markov_tail(*b.theorem.value, MomentOrder(q), t);
                        if (v < best) {
                            best = v;
                            best_q = q;
                        }
                    }
                    out.push_back({"er-markov", BoundValue::ok(best, "q=" + std::to_string(best_q))});
                }
            }
        },
        spec_.params);
    return out;
}

}  // namespace stein
