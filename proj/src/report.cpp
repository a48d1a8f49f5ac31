#include "stein/report.hpp"

#include <cmath>
#include <cstdio>
#include <map>

#include <json.hpp>

#include "stein/errors.hpp"

namespace stein {

namespace {

using nlohmann::json;

std::string num(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string opt_num(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

json json_num(const std::optional<double>& v) {
    if (!v) return nullptr;
    if (std::isfinite(*v)) return *v;
    return num(*v);  // JSON has no infinities
}

std::optional<double> read_num(const json& j, const char* key) {
    const json& v = j.at(key);
    if (v.is_null()) return std::nullopt;
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s == "inf") return HUGE_VAL;
        if (s == "-inf") return -HUGE_VAL;
        if (s == "nan") return std::nan("");
    }
    throw ConfigError(std::string("report field '") + key + "' is not a number");
}

}  // namespace

ReportFormat parse_report_format(const std::string& name) {
    if (name == "csv") return ReportFormat::csv;
    if (name == "json") return ReportFormat::json;
    if (name == "plotdata") return ReportFormat::plotdata;
    throw ConfigError("unknown format '" + name + "' (csv, json, plotdata)");
}

std::string to_string(ReportFormat f) {
    switch (f) {
        case ReportFormat::csv: return "csv";
        case ReportFormat::json: return "json";
        case ReportFormat::plotdata: return "plotdata";
    }
    return "csv";
}

std::string emit_report(const BoundReport& report, ReportFormat format) {
    std::string out;
    switch (format) {
        case ReportFormat::csv: {
            if (!report.config_hash.empty()) out += "# config_hash=" + report.config_hash + "\r\n";
            out += kCsvHeader;
            out += "\r\n";
            for (const auto& r : report.rows) {
                out += csv_field(r.model) + ',' + csv_field(r.theorem) + ',' +
                       (r.order ? std::to_string(*r.order) : std::string()) + ',' + opt_num(r.t) + ',' +
                       opt_num(r.bound) + ',' + (r.applicable ? "true" : "false") + ',' + opt_num(r.estimate) +
                       ',' + opt_num(r.se) + ',' + csv_field(r.verdict) + ',' + opt_num(r.seconds) + "\r\n";
            }
            break;
        }
        case ReportFormat::json: {
            json rows = json::array();
            for (const auto& r : report.rows) {
                json row;
                row["model"] = r.model;
                row["theorem"] = r.theorem;
                row["order"] = r.order ? json(*r.order) : json(nullptr);
                row["t"] = json_num(r.t);
                row["bound"] = json_num(r.bound);
                row["applicable"] = r.applicable;
                row["estimate"] = json_num(r.estimate);
                row["se"] = json_num(r.se);
                row["verdict"] = r.verdict;
                row["seconds"] = json_num(r.seconds);
                row["detail"] = r.detail;
                rows.push_back(std::move(row));
            }
            json doc;
            doc["config_hash"] = report.config_hash;
            doc["rows"] = std::move(rows);
            out = doc.dump(2) + "\n";
            break;
        }
        case ReportFormat::plotdata: {
            if (!report.config_hash.empty()) out += "# config_hash=" + report.config_hash + "\n";
            // Series keep first-appearance order; rows keep input order within a series.
            std::vector<std::string> names;
            std::map<std::string, std::vector<const ReportRow*>> series;
            for (const auto& r : report.rows) {
                auto [it, fresh] = series.try_emplace(r.theorem);
                if (fresh) names.push_back(r.theorem);
                it->second.push_back(&r);
            }
            bool first = true;
            for (const auto& name : names) {
                if (!first) out += "\n\n";
                first = false;
                out += "# " + name + "\n# x bound estimate lo hi\n";
                for (const ReportRow* r : series[name]) {
                    std::optional<double> x;
                    if (r->order) x = *r->order;
                    else if (r->t) x = r->t;
                    else continue;
                    std::optional<double> lo, hi;
                    if (r->estimate) {
                        const double s = r->se.value_or(0.0);
                        lo = *r->estimate - 3.0 * s;
                        hi = *r->estimate + 3.0 * s;
                    }
                    auto cell = [](const std::optional<double>& v) { return v ? num(*v) : std::string("NaN"); };
                    out += num(*x) + ' ' + cell(r->bound) + ' ' + cell(r->estimate) + ' ' + cell(lo) + ' ' +
                           cell(hi) + '\n';
                }
            }
            break;
        }
    }
    return out;
}

BoundReport parse_json_report(const std::string& text) {
    BoundReport report;
    try {
        const json doc = json::parse(text);
        report.config_hash = doc.at("config_hash").get<std::string>();
        for (const json& row : doc.at("rows")) {
            ReportRow r;
            r.model = row.at("model").get<std::string>();
            r.theorem = row.at("theorem").get<std::string>();
            if (!row.at("order").is_null()) r.order = row.at("order").get<int>();
            r.t = read_num(row, "t");
            r.bound = read_num(row, "bound");
            r.applicable = row.at("applicable").get<bool>();
            r.estimate = read_num(row, "estimate");
            r.se = read_num(row, "se");
            r.verdict = row.at("verdict").get<std::string>();
            r.seconds = read_num(row, "seconds");
            r.detail = row.at("detail").get<std::string>();
            report.rows.push_back(std::move(r));
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed report: ") + e.what());
    }
    return report;
}

}  // namespace stein
