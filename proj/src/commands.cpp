#include "stein/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "stein/bounds.hpp"
#include "stein/errors.hpp"
#include "stein/mc.hpp"

namespace stein {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v) {
    std::ostringstream s;
    s.precision(9);
    s << v;
    return s.str();
}

// ---- closed-form theorem table ------------------------------------------------------

struct Param {
    const char* name;
    std::optional<json> def;  // empty: required
};

class Args {
public:
    explicit Args(std::map<std::string, json> values) : v_(std::move(values)) {}

    double num(const std::string& name) const {
        const json& j = v_.at(name);
        if (!j.is_number()) throw ConfigError("parameter " + name + " must be a number");
        const double d = j.get<double>();
        if (!std::isfinite(d)) throw ConfigError("parameter " + name + " must be finite");
        return d;
    }
    long long integer(const std::string& name) const {
        const double d = num(name);
        if (d != std::floor(d) || std::fabs(d) > 9e15) throw ConfigError("parameter " + name + " must be an integer");
        return static_cast<long long>(d);
    }
    int small(const std::string& name) const {
        const long long v = integer(name);
        if (v < -1000000000LL || v > 1000000000LL) throw ConfigError("parameter " + name + " out of range");
        return static_cast<int>(v);
    }
    std::string str(const std::string& name) const {
        const json& j = v_.at(name);
        if (!j.is_string()) throw ConfigError("parameter " + name + " must be a string");
        return j.get<std::string>();
    }
    TailProfile profile(const std::string& name) const {
        const std::string s = str(name);
        std::vector<std::string> parts;
        std::size_t start = 0;
        while (true) {
            const std::size_t c = s.find(':', start);
            parts.push_back(s.substr(start, c == std::string::npos ? std::string::npos : c - start));
            if (c == std::string::npos) break;
            start = c + 1;
        }
        auto number = [&](std::size_t i) {
            try {
                std::size_t used = 0;
                const double d = std::stod(parts.at(i), &used);
                if (used != parts[i].size()) throw std::invalid_argument("trailing");
                return d;
            } catch (const std::exception&) {
                throw ConfigError("bad tail profile '" + s + "'");
            }
        };
        TailProfile p;
        if (parts[0] == "bounded" && parts.size() == 2) p = BoundedTail{number(1)};
        else if (parts[0] == "weibull" && parts.size() == 4) p = WeibullTail{number(1), number(2), number(3)};
        else if (parts[0] == "log-weibull" && parts.size() == 4) p = LogWeibullTail{number(1), number(2), number(3)};
        else throw ConfigError("bad tail profile '" + s + "' (bounded:x, weibull:a:b:c, log-weibull:a:b:c)");
        validate(p);
        return p;
    }
    std::string describe() const {
        std::string out;
        for (const auto& [k, v] : v_) {
            if (!out.empty()) out += ' ';
            out += k + '=' + (v.is_string() ? v.get<std::string>() : fmt(v.get<double>()));
        }
        return out;
    }

private:
    std::map<std::string, json> v_;
};

struct Evaluated {
    std::string theorem;
    BoundValue bound;
};

struct TheoremDef {
    std::string id;
    std::vector<Param> params;
    // Which parameter fills the order / t columns, and how.
    std::function<std::optional<int>(const Args&)> order;
    std::function<std::optional<double>(const Args&)> t;
    std::function<std::vector<Evaluated>(const Args&)> eval;
};

CouplingParams coupling(const Args& a) {
    CouplingParams p;
    p.a_norm = a.num("A");
    p.b_norm = a.num("B");
    return p;
}

std::vector<Evaluated> single(const std::string& id, BoundValue b) { return {{id, std::move(b)}}; }
std::vector<Evaluated> scalar(const std::string& id, double v) { return {{id, BoundValue::ok(v, "value")}}; }

const std::vector<TheoremDef>& theorem_table() {
    auto two_k = [](const Args& a) -> std::optional<int> { return 2 * a.small("k"); };
    auto named = [](const char* n) {
        return [n](const Args& a) -> std::optional<int> { return a.small(n); };
    };
    auto none_i = [](const Args&) -> std::optional<int> { return std::nullopt; };
    auto t_of = [](const char* n) {
        return [n](const Args& a) -> std::optional<double> { return a.num(n); };
    };
    auto none_t = [](const Args&) -> std::optional<double> { return std::nullopt; };
    const json zero = 0.0;

    static const std::vector<TheoremDef> table = {
        {"thm1", {{"A", {}}, {"B", {}}, {"eps", zero}, {"T", zero}, {"k", {}}}, two_k, none_t,
         [](const Args& a) {
             CouplingParams p = coupling(a);
             p.eps = a.num("eps");
             p.t_norm = a.num("T");
             return single("thm1", thm1_moment_bound(p, a.small("k")));
         }},
        {"thm1-form1", {{"A", {}}, {"B", {}}, {"eps", zero}, {"T", zero}, {"k", {}}}, two_k, none_t,
         [](const Args& a) {
             CouplingParams p = coupling(a);
             p.eps = a.num("eps");
             p.t_norm = a.num("T");
             return single("thm1-form1", thm1_form1(p, a.small("k")));
         }},
        {"thm1-form2", {{"A", {}}, {"B", {}}, {"eps", zero}, {"T", zero}, {"k", {}}}, two_k, none_t,
         [](const Args& a) {
             CouplingParams p = coupling(a);
             p.eps = a.num("eps");
             p.t_norm = a.num("T");
             return single("thm1-form2", thm1_form2(p, a.small("k")));
         }},
        {"thm2", {{"A", {}}, {"B", {}}, {"eps", zero}, {"eps_prime", zero}, {"r", {}}}, named("r"), none_t,
         [](const Args& a) {
             return single("thm2", thm2_moment_bound(a.num("A"), a.num("B"), a.num("eps"), a.num("eps_prime"),
                                                     a.small("r")));
         }},
        {"thm3",
         {{"sigma", {}}, {"A", zero}, {"B", {}}, {"eps1", zero}, {"eps2", zero}, {"eps3", zero}, {"T2", zero}, {"k", {}}},
         two_k, none_t,
         [](const Args& a) {
             CouplingParams p = coupling(a);
             p.sigma = a.num("sigma");
             p.eps1 = a.num("eps1");
             p.eps2 = a.num("eps2");
             p.eps3 = a.num("eps3");
             p.t2_norm = a.num("T2");
             return single("thm3", thm3_moment_bound(p, a.small("k")));
         }},
        {"h-k", {{"sigma", {}}, {"A", {}}, {"B", {}}, {"k", {}}}, two_k, none_t,
         [](const Args& a) {
             CouplingParams p = coupling(a);
             p.sigma = a.num("sigma");
             return scalar("h-k", h_k(p, a.small("k")));
         }},
        {"thm4",
         {{"sigma", {}}, {"A", {}}, {"B", {}}, {"eps1", zero}, {"eps2", zero}, {"eps3", zero}, {"eps4", zero}, {"k", {}}},
         two_k, none_t,
         [](const Args& a) {
             CouplingParams p = coupling(a);
             p.sigma = a.num("sigma");
             p.eps1 = a.num("eps1");
             p.eps2 = a.num("eps2");
             p.eps3 = a.num("eps3");
             p.eps4 = a.num("eps4");
             return single("thm4", thm4_normal_comparison_bound(p, a.small("k")));
         }},
        {"markov", {{"norm", {}}, {"order", {}}, {"t", {}}}, named("order"), t_of("t"),
         [](const Args& a) {
             return scalar("markov", markov_tail(a.num("norm"), MomentOrder(a.small("order")), a.num("t")));
         }},
        {"tail-moment", {{"profile", {}}, {"two_k", {}}}, named("two_k"), none_t,
         [](const Args& a) {
             return scalar("tail-moment", moment_bound_from_tail(a.profile("profile"), a.small("two_k")));
         }},
        {"optimized-markov", {{"n", {}}, {"profile_g", {}}, {"profile_d", {}}, {"t", {}}, {"k_max", json(50)}}, none_i,
         t_of("t"),
         [](const Args& a) {
             const OptimizedTail r = optimized_markov_tail(a.integer("n"), a.profile("profile_g"),
                                                           a.profile("profile_d"), a.num("t"), a.small("k_max"));
             BoundValue b = r.bound;
             if (b.applicable()) b.form = "k*=" + std::to_string(r.k_star);
             return single("optimized-markov", b);
         }},
        {"cor-bounded", {{"n", {}}, {"x1", {}}, {"x2", {}}, {"t", {}}}, none_i, t_of("t"),
         [](const Args& a) {
             return single("cor-bounded", cor_bounded_tail(a.num("n"), a.num("x1"), a.num("x2"), a.num("t")));
         }},
        {"cor-normal", {{"y", {}}, {"E", zero}, {"h", zero}}, none_i, t_of("y"),
         [](const Args& a) {
             const double e = a.num("E");
             const double h = a.num("h");
             return single("cor-normal", cor_normal_tail(
                                             a.num("y"), [e](int) { return e; }, [h](int) { return h; }));
         }},
        {"weak-scale", {{"n", {}}, {"profile_g", {}}, {"profile_d", {}}}, none_i, none_t,
         [](const Args& a) {
             return scalar("weak-scale",
                           weak_concentration_scale(a.integer("n"), a.profile("profile_g"), a.profile("profile_d")));
         }},
        {"prop-independent", {{"rho", {}}, {"n", {}}, {"k", {}}}, two_k, none_t,
         [](const Args& a) {
             return single("prop-independent", prop_independent_bound(a.num("rho"), a.integer("n"), a.small("k")));
         }},
        {"local-dep", {{"n", {}}, {"d", {}}, {"x", {}}, {"k", {}}}, two_k, none_t,
         [](const Args& a) {
             return single("local-dep",
                           local_dep_moment_bound(a.integer("n"), a.integer("d"), a.num("x"), a.small("k")));
         }},
        {"local-dep-tail", {{"n", {}}, {"d", {}}, {"x", {}}, {"t", {}}}, none_i, t_of("t"),
         [](const Args& a) {
             return single("local-dep-tail", local_dep_tail(a.integer("n"), a.integer("d"), a.num("x"), a.num("t")));
         }},
        {"size-bias", {{"mu", {}}, {"c", {}}, {"t", {}}}, none_i, t_of("t"),
         [](const Args& a) {
             const SizeBiasTail r = size_bias_tail(a.num("mu"), a.num("c"), a.num("t"));
             return std::vector<Evaluated>{{"size-bias", r.ours},
                                           {"size-bias-ab", BoundValue::ok(r.arratia_baxendale, "arratia-baxendale")}};
         }},
        {"er-constant", {{"r", {}}, {"beta", zero}}, none_i, none_t,
         [](const Args& a) { return scalar("er-constant", er_constant(a.small("r"), a.num("beta"))); }},
        {"er-moment", {{"n", {}}, {"lambda", {}}, {"c", json(1.0)}, {"r", {}}, {"beta", zero}, {"q", {}}}, named("q"),
         none_t,
         [](const Args& a) {
             const ErMomentBound b = er_moment_bound(a.integer("n"), a.num("lambda"), a.num("c"), a.small("r"),
                                                     a.num("beta"), a.small("q"));
             return std::vector<Evaluated>{{"er-moment", b.theorem}, {"er-intermediate", b.intermediate}};
         }},
        {"binomial-A", {{"x", {}}, {"ell", {}}}, named("ell"), none_t,
         [](const Args& a) { return scalar("binomial-A", binomial_A(a.num("x"), a.small("ell"))); }},
        {"nhood-norm", {{"lambda", {}}, {"r", {}}, {"ell", {}}}, named("ell"), none_t,
         [](const Args& a) {
             return scalar("nhood-norm", neighbourhood_norm_bound(a.num("lambda"), a.small("r"), a.small("ell")));
         }},
        {"normal-norm", {{"two_k", {}}}, named("two_k"), none_t,
         [](const Args& a) { return scalar("normal-norm", normal_abs_norm(a.small("two_k"))); }},
        {"c1", {{"k", {}}}, two_k, none_t, [](const Args& a) { return scalar("c1", c1(a.small("k"))); }},
    };
    return table;
}

const TheoremDef& find_theorem(const std::string& id) {
    for (const auto& def : theorem_table()) {
        if (def.id == id) return def;
    }
    std::string known;
    for (const auto& def : theorem_table()) known += (known.empty() ? "" : ", ") + def.id;
    throw ConfigError("unknown theorem id '" + id + "' (known: " + known + ")");
}

// ---- model runs -------------------------------------------------------------------

const std::set<std::string>& model_bound_ids() {
    static const std::set<std::string> ids = {
        "thm1",          "thm2",      "thm3",           "thm4",           "prop-independent",
        "local-dep",     "er-moment", "er-intermediate", "cor-bounded",    "cor-normal",
        "optimized-markov", "local-dep-tail", "size-bias", "size-bias-ab", "er-markov"};
    return ids;
}

ReportRow verdict_row(const std::string& label, const ModelBound& mb, std::optional<int> order,
                      std::optional<double> t, double point, double se, bool* violated) {
    ReportRow row;
    row.model = label;
    row.theorem = mb.theorem;
    row.order = order;
    row.t = t;
    row.bound = mb.bound.value;
    row.applicable = mb.bound.applicable();
    row.estimate = point;
    row.se = se;
    const VerdictStatus status = classify(mb.bound, point, se);
    row.verdict = to_string(status);
    row.detail = mb.bound.applicable() ? mb.bound.form : mb.bound.reason;
    if (status == VerdictStatus::violated) *violated = true;
    return row;
}

struct ModelRun {
    PreparedModel model;
    SimulationResult sim;
    double seconds = 0.0;
};

ModelRun run_model(const RunConfig& cfg, int identity_degree) {
    const auto start = Clock::now();
    ModelRun run{PreparedModel::prepare(*cfg.model), {}, 0.0};
    std::vector<MomentOrder> orders;
    for (int o : cfg.orders) orders.emplace_back(o);
    McOptions opt;
    opt.n_samples = cfg.samples;
    opt.n_batches = cfg.batches;
    opt.workers = cfg.workers;
    run.sim = simulate(run.model, orders, cfg.thresholds, identity_degree, opt);
    run.seconds = seconds_since(start);
    return run;
}

// Rows comparing every selected bound with the matching estimate. Returns true on a violation.
bool append_bound_rows(const RunConfig& cfg, const ModelRun& run, std::vector<ReportRow>& rows) {
    for (const auto& id : cfg.bounds) {
        if (!model_bound_ids().count(id)) throw ConfigError("unknown bound id '" + id + "' for verify");
    }
    auto selected = [&](const std::string& id) {
        return cfg.bounds.empty() || std::find(cfg.bounds.begin(), cfg.bounds.end(), id) != cfg.bounds.end();
    };
    const std::string label = run.model.spec().label();
    bool violated = false;
    for (const MomentEstimate& est : run.sim.moments) {
        const int order = est.order.value();
        if (order % 2 != 0) continue;
        for (const ModelBound& mb : run.model.moment_bounds(order / 2)) {
            if (selected(mb.theorem)) {
                rows.push_back(verdict_row(label, mb, order, std::nullopt, est.point, est.std_error, &violated));
            }
        }
    }
    for (const TailEstimate& tail : run.sim.tails) {
        if (!(tail.t > 0.0)) continue;
        for (const ModelBound& mb : run.model.tail_bounds(tail.t)) {
            if (selected(mb.theorem)) {
                rows.push_back(verdict_row(label, mb, std::nullopt, tail.t, tail.p_hat, tail.std_error, &violated));
            }
        }
    }
    return violated;
}

ReportRow estimate_row(const std::string& label, const std::string& theorem, double estimate, double se,
                       std::string detail) {
    ReportRow row;
    row.model = label;
    row.theorem = theorem;
    row.estimate = estimate;
    row.se = se;
    row.detail = std::move(detail);
    return row;
}

}  // namespace

std::vector<std::string> theorem_ids() {
    std::vector<std::string> ids;
    for (const auto& def : theorem_table()) ids.push_back(def.id);
    return ids;
}

CommandOutput cmd_bound(const RunConfig& cfg) {
    const TheoremDef& def = find_theorem(cfg.theorem);
    std::set<std::string> known;
    for (const Param& p : def.params) known.insert(p.name);
    for (const auto& [name, grid] : cfg.params) {
        if (!known.count(name)) throw ConfigError("theorem " + def.id + " has no parameter '" + name + "'");
    }
    // Grid axes in name order; the last one varies fastest.
    std::vector<std::pair<std::string, std::vector<json>>> axes;
    std::map<std::string, json> fixed;
    for (const Param& p : def.params) {
        if (const auto it = cfg.params.find(p.name); it != cfg.params.end()) {
            axes.emplace_back(p.name, it->second);
        } else if (p.def) {
            fixed[p.name] = *p.def;
        } else {
            throw ConfigError("theorem " + def.id + " needs parameter '" + p.name + "'");
        }
    }
    std::sort(axes.begin(), axes.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

    CommandOutput result;
    result.report.config_hash = cfg.hash();
    std::vector<std::size_t> idx(axes.size(), 0);
    while (true) {
        std::map<std::string, json> values = fixed;
        for (std::size_t i = 0; i < axes.size(); ++i) values[axes[i].first] = axes[i].second[idx[i]];
        const Args args(values);
        const auto start = Clock::now();
        const std::vector<Evaluated> evaluated = def.eval(args);
        const double secs = seconds_since(start);
        for (const Evaluated& e : evaluated) {
            ReportRow row;
            row.model = "closed-form";
            row.theorem = e.theorem;
            row.order = def.order(args);
            row.t = def.t(args);
            row.bound = e.bound.value;
            row.applicable = e.bound.applicable();
            row.detail = args.describe() + " | " + (e.bound.applicable() ? e.bound.form : e.bound.reason);
            if (cfg.timing) row.seconds = secs;
            result.report.rows.push_back(std::move(row));
        }
        std::size_t i = axes.size();
        while (i > 0) {
            --i;
            if (++idx[i] < axes[i].second.size()) break;
            idx[i] = 0;
            if (i == 0) return result;
        }
        if (axes.empty()) return result;
    }
}

CommandOutput cmd_simulate(const RunConfig& cfg) {
    if (!cfg.model) throw ConfigError("simulate needs a model");
    const ModelRun run = run_model(cfg, cfg.identity_degree);
    const std::string label = run.model.spec().label();
    CommandOutput result;
    result.report.config_hash = cfg.hash();
    auto& rows = result.report.rows;

    const SimulationResult& sim = run.sim;
    ReportRow mean_w = estimate_row(label, "mean-W", sim.mean_w.mean, sim.mean_w.std_error,
                                    sim.mu_exact ? "centre " + fmt(sim.mu) + " (exact)"
                                                 : "centre " + fmt(sim.mu) + " (plug-in)");
    if (cfg.timing) mean_w.seconds = run.seconds;
    rows.push_back(std::move(mean_w));
    if (run.model.spec().kind == ModelKind::er_neighbourhood) {
        const bool exact = run.model.mu_x_std_error() == 0.0;
        rows.push_back(estimate_row(label, "mu-X", run.model.mu_x(), run.model.mu_x_std_error(),
                                    exact ? "closed form" : "pilot estimate"));
    }
    rows.push_back(estimate_row(label, "mean-D", sim.mean_d.mean, sim.mean_d.std_error, "E D"));
    rows.push_back(estimate_row(label, "mean-GD", sim.mean_gd.mean, sim.mean_gd.std_error,
                                run.model.exact_sd() ? "Var W = " + fmt(*run.model.exact_sd() * *run.model.exact_sd())
                                                     : "E GD"));
    for (const MomentEstimate& m : sim.moments) {
        ReportRow row = estimate_row(label, "moment", m.point, m.std_error, "||W - mu||_r");
        row.order = m.order.value();
        rows.push_back(std::move(row));
    }
    for (const TailEstimate& t : sim.tails) {
        ReportRow row = estimate_row(label, "tail", t.p_hat, t.std_error, "P[|W - mu| > t]");
        row.t = t.t;
        rows.push_back(std::move(row));
    }
    for (const IdentityTerm& term : sim.identity.terms) {
        const double diff = term.lhs - term.rhs;
        const double se = term.z_score != 0.0 && std::isfinite(term.z_score) ? std::fabs(diff / term.z_score) : 0.0;
        ReportRow row = estimate_row(label, "identity", diff, se,
                                     "lhs=" + fmt(term.lhs) + " rhs=" + fmt(term.rhs) + " z=" + fmt(term.z_score));
        row.order = term.degree;
        row.verdict = std::fabs(term.z_score) <= 4.0 ? "consistent" : "inconsistent";
        rows.push_back(std::move(row));
    }
    append_bound_rows(cfg, run, rows);
    return result;
}

CommandOutput cmd_verify(const RunConfig& cfg) {
    if (!cfg.model) throw ConfigError("verify needs a model");
    const ModelRun run = run_model(cfg, 0);
    CommandOutput result;
    result.report.config_hash = cfg.hash();
    if (append_bound_rows(cfg, run, result.report.rows)) result.exit_code = kExitViolation;
    if (cfg.timing && !result.report.rows.empty()) result.report.rows.front().seconds = run.seconds;
    return result;
}

CommandOutput run_command(const RunConfig& cfg) {
    switch (cfg.command) {
        case Command::bound: return cmd_bound(cfg);
        case Command::simulate: return cmd_simulate(cfg);
        case Command::verify: return cmd_verify(cfg);
    }
    throw ConfigError("unknown command");
}

}  // namespace stein
