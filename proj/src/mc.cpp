#include "stein/mc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "stein/errors.hpp"
#include "stein/parallel.hpp"

namespace stein {

namespace {

void check_budget(const McOptions& opt) {
    if (opt.n_samples <= 0) throw ConfigError("n_samples must be positive");
    if (opt.n_batches < kMinBatches) {
        throw ConfigError("n_batches must be >= " + std::to_string(kMinBatches));
    }
    if (opt.n_samples % opt.n_batches != 0) {
        throw ConfigError("n_samples (" + std::to_string(opt.n_samples) + ") must be divisible by n_batches (" +
                          std::to_string(opt.n_batches) + ")");
    }
}

double mean_of(std::span<const double> v) {
    CompensatedSum s;
    for (double x : v) s.add(x);
    return s.value() / static_cast<double>(v.size());
}

MeanEstimate mean_estimate(std::span<const double> batch_means) {
    return {mean_of(batch_means), standard_error_of_mean(batch_means)};
}

// Per-batch means of everything simulate() reports, relative to a centre c.
struct BatchResult {
    double w = 0.0;  // mean of W - c
    double d = 0.0;
    double gd = 0.0;
    std::vector<double> abs_pow;     // |W - c|^r
    std::vector<double> signed_pow;  // |W - c|^{r-1} sign(W - c)
    std::vector<long long> exceed;
    std::vector<double> lhs;  // G ((W' - c)^j - (W - c)^j)
    std::vector<double> rhs;  // (W - c)^{j+1}
    std::vector<double> dlhs;  // G ((W' - c)^{j-1} - (W - c)^{j-1})
    std::vector<double> pow_j;  // (W - c)^j
};

struct Request {
    std::vector<int> orders;
    std::vector<double> thresholds;
    int degrees = 0;
};

std::vector<BatchResult> run_batches(const PreparedModel& model, const Request& req, double centre,
                                     const McOptions& opt) {
    const long long per_batch = opt.n_samples / opt.n_batches;
    const std::size_t n_orders = req.orders.size();
    const std::size_t n_t = req.thresholds.size();
    const auto n_deg = static_cast<std::size_t>(req.degrees);
    std::vector<BatchResult> out(opt.n_batches);
    parallel_for_batches(
        opt.n_batches, resolve_worker_count(opt.workers), [&] { return model.make_sampler(); },
        [&](std::unique_ptr<CouplingSampler>& sampler, int b) {
            Rng rng = Rng::stream(model.spec().seed, static_cast<std::uint64_t>(b));
            CompensatedSum w, d, gd;
            std::vector<CompensatedSum> abs_pow(n_orders), signed_pow(n_orders);
            std::vector<CompensatedSum> lhs(n_deg), rhs(n_deg), dlhs(n_deg), pow_j(n_deg);
            std::vector<long long> exceed(n_t, 0);
            for (long long s = 0; s < per_batch; ++s) {
                const CouplingSample x = sampler->draw(rng);
                const double dev = x.w - centre;
                const double dev_prime = x.w_prime - centre;
                const double a = std::fabs(dev);
                const double sgn = dev > 0.0 ? 1.0 : (dev < 0.0 ? -1.0 : 0.0);
                w.add(dev);
                d.add(x.d);
                gd.add(x.g * x.d);
                for (std::size_t i = 0; i < n_orders; ++i) {
                    const double lower = std::pow(a, req.orders[i] - 1);
                    abs_pow[i].add(lower * a);
                    signed_pow[i].add(lower * sgn);
                }
                for (std::size_t i = 0; i < n_t; ++i) {
                    if (a > req.thresholds[i]) ++exceed[i];
                }
                double p_lo = 1.0, pp_lo = 1.0;  // (W - c)^{j-1}, (W' - c)^{j-1}
                for (std::size_t j = 0; j < n_deg; ++j) {
                    const double p = p_lo * dev;
                    const double pp = pp_lo * dev_prime;
                    lhs[j].add(x.g * (pp - p));
                    rhs[j].add(p * dev);
                    dlhs[j].add(x.g * (pp_lo - p_lo));
                    pow_j[j].add(p);
                    p_lo = p;
                    pp_lo = pp;
                }
            }
            const double inv = 1.0 / static_cast<double>(per_batch);
            BatchResult& r = out[b];
            r.w = w.value() * inv;
            r.d = d.value() * inv;
            r.gd = gd.value() * inv;
            for (const auto& v : abs_pow) r.abs_pow.push_back(v.value() * inv);
            for (const auto& v : signed_pow) r.signed_pow.push_back(v.value() * inv);
            r.exceed = std::move(exceed);
            for (std::size_t j = 0; j < n_deg; ++j) {
                r.lhs.push_back(lhs[j].value() * inv);
                r.rhs.push_back(rhs[j].value() * inv);
                r.dlhs.push_back(dlhs[j].value() * inv);
                r.pow_j.push_back(pow_j[j].value() * inv);
            }
        });
    return out;
}

template <class F>
std::vector<double> column(const std::vector<BatchResult>& batches, F f) {
    std::vector<double> v;
    v.reserve(batches.size());
    for (const auto& b : batches) v.push_back(f(b));
    return v;
}

}  // namespace

double IdentityReport::max_abs_z() const {
    double m = 0.0;
    for (const auto& t : terms) m = std::max(m, std::fabs(t.z_score));
    return m;
}

SimulationResult simulate(const PreparedModel& model, std::span<const MomentOrder> orders,
                          std::span<const double> thresholds, int max_f_degree, const McOptions& opt) {
    check_budget(opt);
    Request req;
    for (MomentOrder o : orders) {
        if (o.value() > kMaxMomentOrder) {
            throw ConfigError("moment order " + std::to_string(o.value()) + " exceeds the cap of " +
                              std::to_string(kMaxMomentOrder) + " (standard errors blow up)");
        }
        req.orders.push_back(o.value());
    }
    for (double t : thresholds) {
        if (!(t >= 0.0) || !std::isfinite(t)) throw ConfigError("tail thresholds must be finite and >= 0");
        req.thresholds.push_back(t);
    }
    if (!thresholds.empty() && opt.n_samples < kMinTailSamples) {
        throw ConfigError("tail estimates need n_samples >= " + std::to_string(kMinTailSamples));
    }
    if (max_f_degree < 0 || max_f_degree > kMaxIdentityDegree) {
        throw ConfigError("identity degree must be in [0, " + std::to_string(kMaxIdentityDegree) + "]");
    }
    req.degrees = max_f_degree;

    SimulationResult res;
    if (const auto exact = model.exact_mean()) {
        res.mu = *exact;
    } else {
        // First pass over the same streams: only the mean.
        const auto first = run_batches(model, Request{}, 0.0, opt);
        res.mu = mean_of(column(first, [](const BatchResult& b) { return b.w; }));
        res.mu_exact = false;
    }
    const auto batches = run_batches(model, req, res.mu, opt);
    const std::vector<double> dev = column(batches, [](const BatchResult& b) { return b.w; });
    const double mean_dev = mean_of(dev);

    res.mean_w = mean_estimate(dev);
    res.mean_w.mean += res.mu;
    res.mean_d = mean_estimate(column(batches, [](const BatchResult& b) { return b.d; }));
    res.mean_gd = mean_estimate(column(batches, [](const BatchResult& b) { return b.gd; }));

    for (std::size_t i = 0; i < req.orders.size(); ++i) {
        const int r = req.orders[i];
        const std::vector<double> m = column(batches, [i](const BatchResult& b) { return b.abs_pow[i]; });
        const double grand = mean_of(m);
        std::vector<double> z = m;
        if (!res.mu_exact) {
            // d/dmu E|W - mu|^r = -r E[|W - mu|^{r-1} sign(W - mu)].
            const double slope =
                r * mean_of(column(batches, [i](const BatchResult& b) { return b.signed_pow[i]; }));
            for (std::size_t b = 0; b < z.size(); ++b) z[b] -= slope * (dev[b] - mean_dev);
        }
        res.moments.push_back(moment_from_batches(MomentOrder(r), grand, z, opt.n_samples));
    }

    for (std::size_t i = 0; i < req.thresholds.size(); ++i) {
        long long count = 0;
        for (const auto& b : batches) count += b.exceed[i];
        const double n = static_cast<double>(opt.n_samples);
        const double p = static_cast<double>(count) / n;
        res.tails.push_back({req.thresholds[i], p, std::sqrt(p * (1.0 - p) / n), opt.n_samples});
    }

    res.identity.n_samples = opt.n_samples;
    for (int j = 1; j <= req.degrees; ++j) {
        const auto k = static_cast<std::size_t>(j - 1);
        const std::vector<double> l = column(batches, [k](const BatchResult& b) { return b.lhs[k]; });
        const std::vector<double> rh = column(batches, [k](const BatchResult& b) { return b.rhs[k]; });
        std::vector<double> diff(l.size());
        for (std::size_t b = 0; b < l.size(); ++b) diff[b] = l[b] - rh[b];
        if (!res.mu_exact) {
            // Both sides depend on the plug-in centre; fold its error in linearly.
            const double kappa = -j * mean_of(column(batches, [k](const BatchResult& b) { return b.dlhs[k]; })) +
                                 (j + 1) * mean_of(column(batches, [k](const BatchResult& b) { return b.pow_j[k]; }));
            for (std::size_t b = 0; b < diff.size(); ++b) diff[b] += kappa * (dev[b] - mean_dev);
        }
        IdentityTerm term;
        term.degree = j;
        term.lhs = mean_of(l);
        term.rhs = mean_of(rh);
        const double delta = term.lhs - term.rhs;
        const double se = standard_error_of_mean(diff);
        if (se > 0.0) {
            term.z_score = delta / se;
        } else {
            term.z_score = delta == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), delta);
        }
        res.identity.terms.push_back(term);
    }
    return res;
}

std::vector<MomentEstimate> estimate_central_moments(const PreparedModel& model,
                                                     std::span<const MomentOrder> orders,
                                                     const McOptions& opt) {
    return simulate(model, orders, {}, 0, opt).moments;
}

IdentityReport check_stein_identity(const PreparedModel& model, int max_f_degree, const McOptions& opt) {
    if (max_f_degree < 1) throw ConfigError("identity degree must be >= 1");
    return simulate(model, {}, {}, max_f_degree, opt).identity;
}

std::vector<TailEstimate> estimate_tail(const PreparedModel& model, std::span<const double> thresholds,
                                        const McOptions& opt) {
    if (opt.n_samples < kMinTailSamples) {
        throw ConfigError("tail estimates need n_samples >= " + std::to_string(kMinTailSamples));
    }
    return simulate(model, {}, thresholds, 0, opt).tails;
}

// ---- verdicts ----------------------------------------------------------------------

std::string to_string(VerdictStatus s) {
    switch (s) {
        case VerdictStatus::holds: return "holds";
        case VerdictStatus::violated: return "violated";
        case VerdictStatus::inconclusive: return "inconclusive";
        case VerdictStatus::bound_inapplicable: return "bound_inapplicable";
    }
    return "unknown";
}

VerdictStatus classify(const BoundValue& bound, double point, double std_error, bool* strictly_dominated) {
    if (strictly_dominated) *strictly_dominated = false;
    if (!bound.applicable()) return VerdictStatus::bound_inapplicable;
    const double v = *bound.value;
    if (point - kVerdictSigmas * std_error > v) return VerdictStatus::violated;
    if (point + kVerdictSigmas * std_error <= v) {
        if (strictly_dominated) *strictly_dominated = true;
        return VerdictStatus::holds;
    }
    return VerdictStatus::inconclusive;
}

std::vector<Verdict> verify_bounds(std::span<const OrderedBound> bounds, std::span<const MomentEstimate> estimates) {
    if (bounds.size() != estimates.size()) {
        throw ConfigError("verify_bounds: " + std::to_string(bounds.size()) + " bounds but " +
                          std::to_string(estimates.size()) + " estimates");
    }
    std::vector<Verdict> out;
    out.reserve(bounds.size());
    for (std::size_t i = 0; i < bounds.size(); ++i) {
        if (bounds[i].order != estimates[i].order) {
            throw ConfigError("verify_bounds: bound of order " + std::to_string(bounds[i].order.value()) +
                              " paired with an estimate of order " + std::to_string(estimates[i].order.value()));
        }
        Verdict v;
        v.bound = bounds[i].bound;
        v.estimate = estimates[i];
        v.status = classify(v.bound, v.estimate.point, v.estimate.std_error, &v.strictly_dominated);
        out.push_back(std::move(v));
    }
    return out;
}

// ---- subset sums -------------------------------------------------------------------

SubsetSumNorms subset_sum_norms(std::span<const DiscreteLaw> laws, std::span<const double> subset_probs, int ell) {
    const std::size_t n = laws.size();
    if (n > 16) throw std::domain_error("subset_sum_norms: at most 16 indices");
    if (subset_probs.size() != (std::size_t{1} << n)) {
        throw std::domain_error("subset_sum_norms: need one probability per subset");
    }
    if (ell < 1) throw std::domain_error("subset_sum_norms: ell must be >= 1");
    for (const auto& law : laws) {
        if (law.values.size() != law.probs.size() || law.values.empty()) {
            throw std::domain_error("subset_sum_norms: malformed law");
        }
    }

    double y = 0.0;
    for (const auto& law : laws) {
        double m = 0.0;
        for (std::size_t v = 0; v < law.values.size(); ++v) m += law.probs[v] * std::pow(std::fabs(law.values[v]), ell);
        y = std::max(y, std::pow(m, 1.0 / ell));
    }

    double lhs = 0.0;
    double size_moment = 0.0;
    std::vector<std::size_t> members;
    for (std::size_t mask = 0; mask < subset_probs.size(); ++mask) {
        const double ps = subset_probs[mask];
        if (ps == 0.0) continue;
        members.clear();
        for (std::size_t i = 0; i < n; ++i) {
            if (mask >> i & 1U) members.push_back(i);
        }
        size_moment += ps * std::pow(static_cast<double>(members.size()), ell);
        // Odometer over the joint values of the members.
        std::vector<std::size_t> idx(members.size(), 0);
        while (true) {
            double sum = 0.0;
            double prob = ps;
            for (std::size_t m = 0; m < members.size(); ++m) {
                const auto& law = laws[members[m]];
                sum += law.values[idx[m]];
                prob *= law.probs[idx[m]];
            }
            lhs += prob * std::pow(std::fabs(sum), ell);
            std::size_t m = 0;
            while (m < members.size() && ++idx[m] == laws[members[m]].values.size()) idx[m++] = 0;
            if (m == members.size()) break;
        }
    }
    return {std::pow(lhs, 1.0 / ell), y * std::pow(size_moment, 1.0 / ell)};
}

}  // namespace stein
