#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "stein/couplings.hpp"
#include "stein/report.hpp"

namespace stein {

enum class Command { bound, simulate, verify };
std::string to_string(Command c);
Command parse_command(const std::string& name);

/// Validated run configuration. Built only through parse_config, which rejects unknown
/// fields and fills defaults, so canonical() covers everything that affects the output.
struct RunConfig {
    Command command = Command::bound;
    std::uint64_t seed = 1;
    long long samples = 100000;
    int batches = 50;
    bool timing = false;

    // Not part of the hash: they change where and how results go, never the results.
    int workers = 0;
    ReportFormat format = ReportFormat::csv;
    std::string out;

    // bound
    std::string theorem;
    /// Parameter name -> grid values (numbers or strings).
    std::map<std::string, std::vector<nlohmann::json>> params;

    // simulate / verify
    std::optional<ModelSpec> model;
    std::vector<int> orders{2, 4, 6, 8};
    std::vector<double> thresholds;
    int identity_degree = 3;
    /// Theorem ids to check in verify; empty means every bound that matches the model.
    std::vector<std::string> bounds;

    nlohmann::json canonical() const;
    /// FNV-1a 64 of canonical().dump(), as 16 hex digits.
    std::string hash() const;
};

/// Throws ConfigError on unknown fields, wrong types or invalid values.
RunConfig parse_config(const nlohmann::json& doc, Command command);

/// Reads a JSON config file; throws ConfigError if unreadable or malformed.
nlohmann::json load_config_file(const std::string& path);

/// Sets a dotted path ("model.n") in a config document; the value is read as JSON when
/// it parses, as a string otherwise.
void set_config_path(nlohmann::json& doc, const std::string& dotted, const std::string& value);

nlohmann::json model_to_json(const ModelSpec& spec);
/// Reads the "model" object; the seed comes from the top level of the config.
ModelSpec model_from_json(const nlohmann::json& j, std::uint64_t seed);

}  // namespace stein
