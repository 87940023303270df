// report.hpp: structured run reports and their JSON / CSV / table renderings.
//
// A Report is a flat list of named check results plus the configuration that
// produced them.  The JSON rendering is deterministic for a fixed
// configuration and seed: every volatile datum (host platform, compiler,
// wall-clock timings) lives inside the single "environment" object, so two
// runs of the same command differ at most in that one subtree.  CSV output is
// one row per check with the fixed column order
//     check,status,value,tolerance,samples,seconds
// and the table rendering is for terminals.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace gfd {

inline constexpr const char* kToolName = "gfdlab";
inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr int kReportSchemaVersion = 1;

enum class CheckStatus { Pass, Fail, Inconclusive, Unsupported };

const char* check_status_name(CheckStatus status);

struct CheckResult {
    std::string name;
    CheckStatus status = CheckStatus::Inconclusive;
    std::optional<double> value;      // headline number, when one exists
    std::optional<double> tolerance;  // threshold the value was held against
    std::uint64_t samples = 0;        // evaluation count behind the number
    double seconds = 0.0;             // wall time spent on this check
    std::string detail;               // free-text basis for the status
};

struct Report {
    std::string command;
    std::string preset;
    // Stringified configuration in emission order (insertion-ordered so the
    // rendering is reproducible).
    std::vector<std::pair<std::string, std::string>> parameters;
    std::uint64_t seed = 0;
    std::vector<CheckResult> checks;
    double total_seconds = 0.0;
};

// Number of checks with status Fail.
int failed_count(const Report& report);

// Shortest round-trip decimal rendering of a double: deterministic and
// locale-independent, shared by every report surface.
std::string format_number(double value);

// Renderings.  to_json is byte-identical across runs of the same build and
// configuration except for the "environment" object.  render dispatches on
// format in {"json", "csv", "table"} and throws domain_error otherwise.
std::string to_json(const Report& report);
std::string to_csv(const Report& report);
std::string to_table(const Report& report);
std::string render(const Report& report, const std::string& format);

}  // namespace gfd
