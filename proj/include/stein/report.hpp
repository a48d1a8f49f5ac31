#pragma once

#include <optional>
#include <string>
#include <vector>

namespace stein {

/// One line of a report. Absent fields print as empty CSV cells / JSON null.
struct ReportRow {
    std::string model;
    std::string theorem;
    std::optional<int> order;
    std::optional<double> t;
    std::optional<double> bound;
    bool applicable = true;
    std::optional<double> estimate;
    std::optional<double> se;
    std::string verdict;
    std::optional<double> seconds;
    /// Formula variant or inapplicability reason. JSON only; the CSV header is fixed.
    std::string detail;

    bool operator==(const ReportRow&) const = default;
};

struct BoundReport {
    /// Hex hash of the canonical run configuration; empty for ad-hoc reports.
    std::string config_hash;
    std::vector<ReportRow> rows;

    bool operator==(const BoundReport&) const = default;
};

enum class ReportFormat { csv, json, plotdata };

ReportFormat parse_report_format(const std::string& name);
std::string to_string(ReportFormat f);

inline constexpr const char* kCsvHeader = "model,theorem,order,t,bound,applicable,estimate,se,verdict,seconds";

/// csv: RFC 4180 with CRLF line ends, preceded by a "# config_hash=..." line when the
/// hash is set. Numbers use 9 significant digits.
/// json: {"config_hash": ..., "rows": [...]}, doubles in shortest round-trip form.
/// plotdata: one block per theorem (blank-line separated, "# theorem" title) with
/// columns x bound estimate lo hi, where x is the order or else t, lo/hi = estimate -/+ 3 se.
std::string emit_report(const BoundReport& report, ReportFormat format);

/// Inverse of emit_report(..., json). Throws ConfigError on malformed input.
BoundReport parse_json_report(const std::string& text);

}  // namespace stein
