#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <set>

#include <CLI11.hpp>

#include "stein/commands.hpp"
#include "stein/errors.hpp"

namespace stein {

namespace {

using nlohmann::json;

// Every parameter name any theorem accepts gets a --name flag on `bound`.
const std::vector<std::string> kParamNames = {
    "A",     "B",    "E",     "T",    "T2",   "beta",      "c",         "d",    "eps",   "eps1",
    "eps2",  "eps3", "eps4",  "eps_prime", "ell", "h",     "k",         "k_max", "lambda", "mu",
    "n",     "norm", "order", "profile", "profile_d", "profile_g", "q", "r",    "rho",   "sigma",
    "t",     "two_k", "x",    "x1",   "x2",   "y"};

json scalar_token(const std::string& token) {
    json parsed = json::parse(token, nullptr, false);
    if (!parsed.is_discarded() && parsed.is_number()) return parsed;
    return token;
}

json grid_value(const std::string& text) {
    json out = json::array();
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = text.find(',', start);
        out.push_back(scalar_token(text.substr(start, comma == std::string::npos ? std::string::npos : comma - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out.size() == 1 ? out[0] : out;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Stein coupling moment and concentration bounds: evaluation and Monte Carlo verification"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<long long> samples;
    std::optional<int> batches;
    std::optional<int> workers;
    std::string out_path;
    std::string format;
    bool timing = false;
    std::vector<std::string> sets;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON config file; flags override its fields");
        sub->add_option("--seed", seed, "Base seed (u64)");
        sub->add_option("--samples", samples, "Monte Carlo samples");
        sub->add_option("--batches", batches, "Batches (>= 30, divides samples)");
        sub->add_option("--workers", workers, "Worker threads (results do not depend on it)");
        sub->add_option("--out", out_path, "Output file (default stdout)");
        sub->add_option("--format", format, "csv | json | plotdata");
        sub->add_flag("--timing", timing, "Fill the seconds column (breaks byte reproducibility)");
        sub->add_option("--set", sets, "Override any config field: dotted.path=value")->take_all();
    };

    CLI::App* bound = app.add_subcommand("bound", "Evaluate closed-form bounds over a parameter grid");
    bound->set_help_flag("--help", "Print this help message and exit");  // -h would clash with --h
    add_common(bound);
    std::string theorem;
    bool list = false;
    bound->add_option("--theorem", theorem, "Theorem id (see --list)");
    bound->add_flag("--list", list, "List theorem ids and exit");
    std::map<std::string, std::string> param_values;
    for (const auto& name : kParamNames) {
        bound->add_option("--" + name, param_values[name], "Value or comma-separated grid for " + name);
    }

    CLI::App* simulate = app.add_subcommand("simulate", "Simulate a model: moments, tails, Stein identity, bounds");
    CLI::App* verify = app.add_subcommand("verify", "Check a model's bounds against simulation (exit 4 on violation)");
    std::string orders, thresholds, bounds_list, model_kind;
    std::optional<int> identity_degree;
    for (CLI::App* sub : {simulate, verify}) {
        add_common(sub);
        sub->add_option("--model", model_kind, "Model kind (sets model.kind)");
        sub->add_option("--orders", orders, "Comma-separated moment orders");
        sub->add_option("--thresholds", thresholds, "Comma-separated tail thresholds");
    }
    simulate->add_option("--identity-degree", identity_degree, "Largest f degree in the identity check (0..6)");
    verify->add_option("--bounds", bounds_list, "Comma-separated theorem ids to check");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        Command command = Command::bound;
        if (simulate->parsed()) command = Command::simulate;
        if (verify->parsed()) command = Command::verify;

        if (command == Command::bound && list) {
            for (const auto& id : theorem_ids()) out << id << '\n';
            return kExitOk;
        }

        json doc = config_path.empty() ? json::object() : load_config_file(config_path);
        if (seed) doc["seed"] = *seed;
        if (samples) doc["samples"] = *samples;
        if (batches) doc["batches"] = *batches;
        if (workers) doc["workers"] = *workers;
        if (!out_path.empty()) doc["out"] = out_path;
        if (!format.empty()) doc["format"] = format;
        if (timing) doc["timing"] = true;
        if (command == Command::bound) {
            if (!theorem.empty()) doc["theorem"] = theorem;
            for (const auto& [name, value] : param_values) {
                if (!value.empty()) doc["params"][name] = grid_value(value);
            }
        } else {
            if (!model_kind.empty()) doc["model"]["kind"] = model_kind;
            auto as_list = [](const std::string& s) {
                json v = grid_value(s);
                return v.is_array() ? v : json::array({v});
            };
            if (!orders.empty()) doc["orders"] = as_list(orders);
            if (!thresholds.empty()) doc["thresholds"] = as_list(thresholds);
            if (identity_degree) doc["identity_degree"] = *identity_degree;
            if (!bounds_list.empty()) doc["bounds"] = as_list(bounds_list);
        }
        for (const auto& s : sets) {
            const auto eq = s.find('=');
            if (eq == std::string::npos) throw ConfigError("--set expects path=value, got '" + s + "'");
            set_config_path(doc, s.substr(0, eq), s.substr(eq + 1));
        }

        const RunConfig cfg = parse_config(doc, command);
        const CommandOutput result = run_command(cfg);
        const std::string bytes = emit_report(result.report, cfg.format);
        if (cfg.out.empty()) {
            out << bytes;
        } else {
            std::ofstream file(cfg.out, std::ios::binary);
            if (!file) throw ConfigError("cannot write '" + cfg.out + "'");
            file << bytes;
        }
        return result.exit_code;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const NumericError& e) {
        err << "numeric error: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return 1;
    }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv;
    argv.push_back("stein_cli");
    for (const auto& a : args) argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace stein
