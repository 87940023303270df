#include "core/report.hpp"

#include <charconv>
#include <cstdio>
#include <ctime>

#include <json.hpp>

#include "core/errors.hpp"

namespace gfd {

namespace {

std::string num(double v) { return format_number(v); }

std::string seconds_text(double s) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6f", s);
    return buf;
}

nlohmann::ordered_json environment_stamp(const Report& report) {
    nlohmann::ordered_json env;
#if defined(__linux__)
    env["platform"] = "linux";
#elif defined(__APPLE__)
    env["platform"] = "darwin";
#elif defined(_WIN32)
    env["platform"] = "windows";
#else
    env["platform"] = "unknown";
#endif
    env["compiler"] = __VERSION__;
    env["pointer_bits"] = static_cast<int>(8 * sizeof(void*));
    env["generated_unix"] = static_cast<std::int64_t>(std::time(nullptr));
    // Wall-clock timings are volatile, so they live here rather than in the
    // check rows; the CSV rendering reads them back per check.
    nlohmann::ordered_json elapsed;
    for (const CheckResult& c : report.checks) elapsed[c.name] = c.seconds;
    elapsed["total"] = report.total_seconds;
    env["elapsed_seconds"] = std::move(elapsed);
    return env;
}

std::string csv_escape(const std::string& text) {
    if (text.find_first_of(",\"\n") == std::string::npos) return text;
    std::string out = "\"";
    for (char ch : text) {
        if (ch == '"') out += '"';
        out += ch;
    }
    out += '"';
    return out;
}

}  // namespace

std::string format_number(double value) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

const char* check_status_name(CheckStatus status) {
    switch (status) {
        case CheckStatus::Pass: return "pass";
        case CheckStatus::Fail: return "fail";
        case CheckStatus::Inconclusive: return "inconclusive";
        case CheckStatus::Unsupported: return "unsupported";
    }
    return "?";
}

int failed_count(const Report& report) {
    int n = 0;
    for (const CheckResult& c : report.checks)
        if (c.status == CheckStatus::Fail) ++n;
    return n;
}

std::string to_json(const Report& report) {
    nlohmann::ordered_json doc;
    doc["schema_version"] = kReportSchemaVersion;
    doc["tool"] = kToolName;
    doc["tool_version"] = kToolVersion;
    doc["command"] = report.command;
    doc["preset"] = report.preset;
    nlohmann::ordered_json params;
    for (const auto& [key, value] : report.parameters) params[key] = value;
    doc["parameters"] = std::move(params);
    doc["seed"] = report.seed;
    nlohmann::ordered_json checks = nlohmann::ordered_json::array();
    for (const CheckResult& c : report.checks) {
        nlohmann::ordered_json row;
        row["name"] = c.name;
        row["status"] = check_status_name(c.status);
        if (c.value)
            row["value"] = *c.value;
        else
            row["value"] = nullptr;
        if (c.tolerance)
            row["tolerance"] = *c.tolerance;
        else
            row["tolerance"] = nullptr;
        row["samples"] = c.samples;
        row["detail"] = c.detail;
        checks.push_back(std::move(row));
    }
    doc["checks"] = std::move(checks);
    doc["failed"] = failed_count(report);
    doc["environment"] = environment_stamp(report);
    return doc.dump(2) + "\n";
}

std::string to_csv(const Report& report) {
    std::string out = "check,status,value,tolerance,samples,seconds\n";
    for (const CheckResult& c : report.checks) {
        out += csv_escape(c.name);
        out += ',';
        out += check_status_name(c.status);
        out += ',';
        if (c.value) out += num(*c.value);
        out += ',';
        if (c.tolerance) out += num(*c.tolerance);
        out += ',';
        out += std::to_string(c.samples);
        out += ',';
        out += seconds_text(c.seconds);
        out += '\n';
    }
    return out;
}

std::string to_table(const Report& report) {
    std::size_t name_width = 5;
    for (const CheckResult& c : report.checks) name_width = std::max(name_width, c.name.size());

    std::string out = report.command;
    if (!report.preset.empty()) out += "  preset=" + report.preset;
    for (const auto& [key, value] : report.parameters) out += "  " + key + "=" + value;
    out += "\n";

    auto pad = [](std::string text, std::size_t width) {
        if (text.size() < width) text.append(width - text.size(), ' ');
        return text;
    };
    out += pad("check", name_width) + "  " + pad("status", 12) + pad("value", 24) +
           pad("tolerance", 14) + pad("samples", 10) + "seconds\n";
    for (const CheckResult& c : report.checks) {
        out += pad(c.name, name_width) + "  " + pad(check_status_name(c.status), 12) +
               pad(c.value ? num(*c.value) : "-", 24) +
               pad(c.tolerance ? num(*c.tolerance) : "-", 14) +
               pad(std::to_string(c.samples), 10) + seconds_text(c.seconds) + "\n";
        if (!c.detail.empty()) out += pad("", name_width) + "  > " + c.detail + "\n";
    }
    int pass = 0, fail = 0, inconclusive = 0, unsupported = 0;
    for (const CheckResult& c : report.checks) {
        switch (c.status) {
            case CheckStatus::Pass: ++pass; break;
            case CheckStatus::Fail: ++fail; break;
            case CheckStatus::Inconclusive: ++inconclusive; break;
            case CheckStatus::Unsupported: ++unsupported; break;
        }
    }
    out += std::to_string(report.checks.size()) + " checks: " + std::to_string(pass) +
           " pass, " + std::to_string(fail) + " fail, " + std::to_string(inconclusive) +
           " inconclusive, " + std::to_string(unsupported) + " unsupported (" +
           seconds_text(report.total_seconds) + " s)\n";
    return out;
}

std::string render(const Report& report, const std::string& format) {
    if (format == "json") return to_json(report);
    if (format == "csv") return to_csv(report);
    if (format == "table") return to_table(report);
    throw domain_error("report: unknown format \"" + format +
                       "\" (expected json, csv, or table)");
}

}  // namespace gfd
