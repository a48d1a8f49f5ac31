#include "stein/config.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include "stein/errors.hpp"
#include "stein/mc.hpp"

namespace stein {

namespace {

using nlohmann::json;

constexpr long long kDefaultPilot = 2000;

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
    if (!obj.is_object()) throw ConfigError(where + " must be a JSON object");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& item : obj.items()) {
        if (!ok.count(item.key())) throw ConfigError("unknown field '" + item.key() + "' in " + where);
    }
}

long long get_int(const json& obj, const char* key, long long def, const std::string& where) {
    if (!obj.contains(key)) return def;
    const json& v = obj.at(key);
    if (v.is_number_integer()) return v.get<long long>();
    if (v.is_number_float()) {
        const double d = v.get<double>();
        if (std::isfinite(d) && d == std::floor(d) && std::fabs(d) < 9e18) return static_cast<long long>(d);
    }
    throw ConfigError(where + "." + key + " must be an integer");
}

double get_double(const json& obj, const char* key, double def, const std::string& where) {
    if (!obj.contains(key)) return def;
    const json& v = obj.at(key);
    if (!v.is_number()) throw ConfigError(where + "." + key + " must be a number");
    return v.get<double>();
}

std::string get_string(const json& obj, const char* key, const std::string& def, const std::string& where) {
    if (!obj.contains(key)) return def;
    const json& v = obj.at(key);
    if (!v.is_string()) throw ConfigError(where + "." + key + " must be a string");
    return v.get<std::string>();
}

bool get_bool(const json& obj, const char* key, bool def, const std::string& where) {
    if (!obj.contains(key)) return def;
    const json& v = obj.at(key);
    if (!v.is_boolean()) throw ConfigError(where + "." + key + " must be true or false");
    return v.get<bool>();
}

template <class T, class F>
std::vector<T> get_list(const json& obj, const char* key, std::vector<T> def, const std::string& where, F read) {
    if (!obj.contains(key)) return def;
    const json& v = obj.at(key);
    std::vector<T> out;
    if (v.is_array()) {
        for (const json& e : v) out.push_back(read(e));
    } else {
        out.push_back(read(v));
    }
    (void)where;
    return out;
}

StatisticSpec statistic_from_json(const json& j) {
    try {
        if (j.is_string()) {
            const auto name = j.get<std::string>();
            if (name == "isolated_vertices") return StatisticSpec::isolated_vertices();
            throw ConfigError("unknown statistic '" + name + "'");
        }
        const std::string where = "model.statistic";
        const std::string type = get_string(j, "type", "", where);
        if (type == "degree_indicator") {
            reject_unknown(j, {"type", "degrees"}, where);
            DegreeIndicator di;
            for (const json& d : j.at("degrees")) {
                if (!d.is_number_integer()) throw ConfigError("degrees must be integers");
                di.degrees.push_back(d.get<int>());
            }
            return StatisticSpec(di);
        }
        if (type == "subgraph") {
            reject_unknown(j, {"type", "pattern", "pattern_vertices", "pattern_edges"}, where);
            if (j.contains("pattern")) return StatisticSpec::subgraph(get_string(j, "pattern", "", where));
            RootedSubgraphCount rc;
            rc.pattern_vertices = static_cast<int>(get_int(j, "pattern_vertices", 0, where));
            for (const json& e : j.at("pattern_edges")) rc.pattern_edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
            return StatisticSpec(rc);
        }
        if (type == "high_degree_few_small_neighbours") {
            reject_unknown(j, {"type", "d", "k"}, where);
            return StatisticSpec(HighDegreeFewSmallNeighbours{static_cast<int>(get_int(j, "d", 2, where)),
                                                              static_cast<int>(get_int(j, "k", 1, where))});
        }
        throw ConfigError("unknown statistic type '" + type + "'");
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("invalid statistic: ") + e.what());
    } catch (const json::exception& e) {
        throw ConfigError(std::string("invalid statistic: ") + e.what());
    }
}

json statistic_to_json(const StatisticSpec& s) {
    return std::visit(
        [](const auto& v) -> json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, DegreeIndicator>) {
                return {{"type", "degree_indicator"}, {"degrees", v.degrees}};
            } else if constexpr (std::is_same_v<T, RootedSubgraphCount>) {
                json edges = json::array();
                for (const auto& [a, b] : v.pattern_edges) edges.push_back({a, b});
                return {{"type", "subgraph"}, {"pattern_vertices", v.pattern_vertices}, {"pattern_edges", edges}};
            } else if constexpr (std::is_same_v<T, HighDegreeFewSmallNeighbours>) {
                return {{"type", "high_degree_few_small_neighbours"}, {"d", v.d}, {"k", v.k}};
            } else {
                throw ConfigError("custom statistics cannot be serialized");
            }
        },
        s.variant());
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace

std::string to_string(Command c) {
    switch (c) {
        case Command::bound: return "bound";
        case Command::simulate: return "simulate";
        case Command::verify: return "verify";
    }
    return "bound";
}

Command parse_command(const std::string& name) {
    if (name == "bound") return Command::bound;
    if (name == "simulate") return Command::simulate;
    if (name == "verify") return Command::verify;
    throw ConfigError("unknown command '" + name + "'");
}

ModelSpec model_from_json(const json& j, std::uint64_t seed) {
    const std::string where = "model";
    if (!j.is_object()) throw ConfigError("model must be a JSON object");
    ModelSpec spec;
    spec.seed = seed;
    spec.kind = parse_model_kind(get_string(j, "kind", "", where));
    spec.g_scale = get_double(j, "g_scale", 1.0, where);
    switch (spec.kind) {
        case ModelKind::independent_sum: {
            reject_unknown(j, {"kind", "g_scale", "n", "summand", "p", "rate"}, where);
            IndependentSumParams p;
            p.n = get_int(j, "n", p.n, where);
            const std::string summand = get_string(j, "summand", "rademacher", where);
            if (summand == "rademacher") {
                if (j.contains("p") || j.contains("rate")) throw ConfigError("rademacher summands take no p or rate");
                p.summand = {SummandKind::rademacher, 0.0};
            } else if (summand == "centered_bernoulli") {
                if (j.contains("rate")) throw ConfigError("centered_bernoulli takes p, not rate");
                p.summand = {SummandKind::centered_bernoulli, get_double(j, "p", 0.5, where)};
            } else if (summand == "centered_exponential") {
                if (j.contains("p")) throw ConfigError("centered_exponential takes rate, not p");
                p.summand = {SummandKind::centered_exponential, get_double(j, "rate", 1.0, where)};
            } else {
                throw ConfigError("unknown summand '" + summand + "'");
            }
            spec.params = p;
            break;
        }
        case ModelKind::local_dependence_runs:
        case ModelKind::size_bias_runs: {
            reject_unknown(j, {"kind", "g_scale", "n", "m", "p", "circular"}, where);
            RunsParams p;
            p.n = get_int(j, "n", p.n, where);
            p.m = static_cast<int>(get_int(j, "m", p.m, where));
            p.p = get_double(j, "p", p.p, where);
            p.circular = get_bool(j, "circular", true, where);
            spec.params = p;
            break;
        }
        case ModelKind::er_neighbourhood: {
            reject_unknown(j, {"kind", "g_scale", "n", "lambda", "r", "statistic", "mu_x"}, where);
            ERParams p;
            p.n = get_int(j, "n", p.n, where);
            p.lambda = get_double(j, "lambda", p.lambda, where);
            p.r = static_cast<int>(get_int(j, "r", p.r, where));
            if (j.contains("statistic")) {
                p.statistic = statistic_from_json(j.at("statistic"));
            } else if (p.r == 1) {
                p.statistic = StatisticSpec::isolated_vertices();
            } else if (p.r == 2) {
                p.statistic = StatisticSpec(HighDegreeFewSmallNeighbours{2, 1});
            } else {
                throw ConfigError("model.statistic is required for r = " + std::to_string(p.r));
            }
            const json mu = j.value("mu_x", json("auto"));
            if (mu.is_string() && mu.get<std::string>() == "auto") {
                const double edge_p = p.n > 0 ? p.lambda / static_cast<double>(p.n) : 0.0;
                const bool closed = p.n >= 1 && edge_p >= 0.0 && edge_p <= 1.0 &&
                                    exact_statistic_mean(p.statistic, p.n, edge_p).has_value();
                if (closed) p.mu_x = ExactMean{};
                else p.mu_x = EstimatedMean{kDefaultPilot};
            } else if (mu.is_string() && mu.get<std::string>() == "exact") {
                p.mu_x = ExactMean{};
            } else if (mu.is_object()) {
                reject_unknown(mu, {"exact", "estimated"}, "model.mu_x");
                if (mu.size() != 1) throw ConfigError("model.mu_x needs exactly one of exact, estimated");
                if (mu.contains("exact")) p.mu_x = ExactMean{get_double(mu, "exact", 0.0, "model.mu_x")};
                else p.mu_x = EstimatedMean{get_int(mu, "estimated", 0, "model.mu_x")};
            } else {
                throw ConfigError("model.mu_x must be \"auto\", \"exact\", {\"exact\": v} or {\"estimated\": n}");
            }
            spec.params = p;
            break;
        }
    }
    spec.validate();
    return spec;
}

json model_to_json(const ModelSpec& spec) {
    json j;
    j["kind"] = to_string(spec.kind);
    j["g_scale"] = spec.g_scale;
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, IndependentSumParams>) {
                j["n"] = p.n;
                switch (p.summand.kind) {
                    case SummandKind::rademacher: j["summand"] = "rademacher"; break;
                    case SummandKind::centered_bernoulli:
                        j["summand"] = "centered_bernoulli";
                        j["p"] = p.summand.param;
                        break;
                    case SummandKind::centered_exponential:
                        j["summand"] = "centered_exponential";
                        j["rate"] = p.summand.param;
                        break;
                }
            } else if constexpr (std::is_same_v<T, RunsParams>) {
                j["n"] = p.n;
                j["m"] = p.m;
                j["p"] = p.p;
                j["circular"] = p.circular;
            } else {
                j["n"] = p.n;
                j["lambda"] = p.lambda;
                j["r"] = p.r;
                j["statistic"] = statistic_to_json(p.statistic);
                if (const auto* ex = std::get_if<ExactMean>(&p.mu_x)) {
                    j["mu_x"] = ex->value ? json{{"exact", *ex->value}} : json("exact");
                } else {
                    j["mu_x"] = json{{"estimated", std::get<EstimatedMean>(p.mu_x).n_pilot}};
                }
            }
        },
        spec.params);
    return j;
}

RunConfig parse_config(const json& doc, Command command) {
    reject_unknown(doc,
                   {"command", "seed", "samples", "batches", "workers", "timing", "format", "out", "theorem", "params",
                    "model", "orders", "thresholds", "identity_degree", "bounds"},
                   "config");
    RunConfig cfg;
    cfg.command = command;
    if (doc.contains("command")) parse_command(get_string(doc, "command", "", "config"));

    if (doc.contains("seed")) {
        const json& s = doc.at("seed");
        if (s.is_number_unsigned()) cfg.seed = s.get<std::uint64_t>();
        else if (s.is_number_integer() && s.get<long long>() >= 0) cfg.seed = static_cast<std::uint64_t>(s.get<long long>());
        else throw ConfigError("seed must be a non-negative integer");
    }
    cfg.samples = get_int(doc, "samples", cfg.samples, "config");
    cfg.batches = static_cast<int>(get_int(doc, "batches", cfg.batches, "config"));
    cfg.workers = static_cast<int>(get_int(doc, "workers", 0, "config"));
    if (cfg.workers < 0) throw ConfigError("workers must be >= 0");
    cfg.timing = get_bool(doc, "timing", false, "config");
    cfg.format = parse_report_format(get_string(doc, "format", "csv", "config"));
    cfg.out = get_string(doc, "out", "", "config");

    if (command == Command::bound) {
        cfg.theorem = get_string(doc, "theorem", "", "config");
        if (cfg.theorem.empty()) throw ConfigError("bound needs a theorem id");
        if (doc.contains("params")) {
            const json& ps = doc.at("params");
            if (!ps.is_object()) throw ConfigError("params must be an object");
            for (const auto& item : ps.items()) {
                std::vector<json> grid;
                const json& v = item.value();
                for (const json& e : v.is_array() ? v : json::array({v})) {
                    if (!e.is_number() && !e.is_string()) {
                        throw ConfigError("params." + item.key() + " must hold numbers or strings");
                    }
                    grid.push_back(e);
                }
                if (grid.empty()) throw ConfigError("params." + item.key() + " is empty");
                cfg.params[item.key()] = std::move(grid);
            }
        }
        return cfg;
    }

    if (cfg.samples <= 0) throw ConfigError("samples must be positive");
    if (cfg.batches < kMinBatches) throw ConfigError("batches must be >= " + std::to_string(kMinBatches));
    if (cfg.samples % cfg.batches != 0) throw ConfigError("samples must be divisible by batches");
    if (!doc.contains("model")) throw ConfigError(to_string(command) + " needs a model");
    cfg.model = model_from_json(doc.at("model"), cfg.seed);
    cfg.orders = get_list<int>(doc, "orders", cfg.orders, "config", [](const json& e) {
        if (!e.is_number_integer()) throw ConfigError("orders must be integers");
        return e.get<int>();
    });
    for (int o : cfg.orders) {
        if (o < 1 || o > kMaxMomentOrder) {
            throw ConfigError("orders must lie in [1, " + std::to_string(kMaxMomentOrder) + "]");
        }
    }
    cfg.thresholds = get_list<double>(doc, "thresholds", {}, "config", [](const json& e) {
        if (!e.is_number()) throw ConfigError("thresholds must be numbers");
        return e.get<double>();
    });
    for (double t : cfg.thresholds) {
        if (!(t >= 0.0) || !std::isfinite(t)) throw ConfigError("thresholds must be finite and >= 0");
    }
    if (!cfg.thresholds.empty() && cfg.samples < kMinTailSamples) {
        throw ConfigError("tail thresholds need samples >= " + std::to_string(kMinTailSamples));
    }
    cfg.identity_degree = static_cast<int>(get_int(doc, "identity_degree", cfg.identity_degree, "config"));
    if (cfg.identity_degree < 0 || cfg.identity_degree > kMaxIdentityDegree) {
        throw ConfigError("identity_degree must lie in [0, " + std::to_string(kMaxIdentityDegree) + "]");
    }
    cfg.bounds = get_list<std::string>(doc, "bounds", {}, "config", [](const json& e) {
        if (!e.is_string()) throw ConfigError("bounds must be theorem ids");
        return e.get<std::string>();
    });
    return cfg;
}

json RunConfig::canonical() const {
    json j;
    j["command"] = to_string(command);
    j["timing"] = timing;
    if (command == Command::bound) {
        j["theorem"] = theorem;
        json ps = json::object();
        for (const auto& [name, grid] : params) ps[name] = grid;
        j["params"] = ps;
        return j;
    }
    j["seed"] = seed;
    j["samples"] = samples;
    j["batches"] = batches;
    j["model"] = model_to_json(*model);
    j["orders"] = orders;
    j["thresholds"] = thresholds;
    if (command == Command::simulate) j["identity_degree"] = identity_degree;
    if (command == Command::verify) j["bounds"] = bounds;
    return j;
}

std::string RunConfig::hash() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, fnv1a(canonical().dump()));
    return buf;
}

json load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return json::parse(buf.str());
    } catch (const json::exception& e) {
        throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
    }
}

void set_config_path(json& doc, const std::string& dotted, const std::string& value) {
    if (dotted.empty()) throw ConfigError("empty config path");
    json* node = &doc;
    std::size_t start = 0;
    while (true) {
        const std::size_t dot = dotted.find('.', start);
        const std::string key = dotted.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (key.empty()) throw ConfigError("bad config path '" + dotted + "'");
        if (!node->is_object()) {
            if (!node->is_null()) throw ConfigError("config path '" + dotted + "' crosses a non-object");
            *node = json::object();
        }
        if (dot == std::string::npos) {
            json parsed = json::parse(value, nullptr, false);
            (*node)[key] = parsed.is_discarded() ? json(value) : parsed;
            return;
        }
        node = &(*node)[key];
        start = dot + 1;
    }
}

}  // namespace stein
