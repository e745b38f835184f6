// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <cstdio>
#include <set>

#include "json.hpp"
#include "skt/common/errors.hpp"
#include "skt/harness/harness.hpp"

namespace skt::harness {
namespace {

std::string fmt1(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", v);
    return buf;
}

std::string fmt2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string fmt_alpha(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

// The three reference tables the source experiments report, rendered after
// every desk-scale results table.
void append_fixture_markdown(std::string& out) {
    out += "\n## Paper-scale reference\n\n";
    out +=
        "Numbers below are fixtures from the source experiments "
        "(HumanEvalFix / CanItEdit / Aider, on a 7B model); they are context, "
        "not desk-scale targets.\n";
    const char* current = "";
    for (const auto& row : paper_fixture_rows()) {
        if (row.dimension != current) {
            current = row.dimension.c_str();
            out += "\n| " + row.dimension +
                   " | HumanEvalFix | CanItEdit | Aider |\n| --- | --- | --- | --- |\n";
        }
        out += "| " + row.setting + " | " + fmt1(row.humanevalfix) + " | " +
               fmt1(row.canitedit) + " | " + fmt1(row.aider) + " |\n";
    }
}

nlohmann::json fixtures_json() {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& row : paper_fixture_rows()) {
        arr.push_back({{"dimension", row.dimension},
                       {"setting", row.setting},
                       {"humanevalfix", row.humanevalfix},
                       {"canitedit", row.canitedit},
                       {"aider", row.aider}});
    }
    return arr;
}

}  // namespace

const std::vector<PaperFixtureRow>& paper_fixture_rows() {
    static const std::vector<PaperFixtureRow> rows = {
        {"alpha", "0.05", 81.1, 50.5, 65.7},
        {"alpha", "0.2", 76.8, 45.7, 53.4},
        {"alpha", "0.5", 81.7, 43.3, 54.9},
        {"period", "0.1epoch", 80.5, 37.1, 51.1},
        {"period", "0.5epoch", 83.5, 50.4, 59.4},
        {"period", "1epoch", 81.1, 50.5, 65.7},
        {"period", "at-end", 84.2, 50.0, 53.2},
        {"base-mode", "update", 79.5, 48.0, 55.6},
        {"base-mode", "fix", 81.1, 50.5, 65.7},
    };
    return rows;
}

ReportFormat report_format_from_string(std::string_view text) {
    if (text == "markdown" || text == "markdown-table" || text == "md") {
        return ReportFormat::Markdown;
    }
    if (text == "json") return ReportFormat::Json;
    throw DomainError("unknown report format: " + std::string(text));
}

std::string render_report(const AblationReport& report, ReportFormat format) {
    if (format == ReportFormat::Json) {
        nlohmann::json j;
        j["rows"] = nlohmann::json::array();
        for (const auto& r : report.rows) {
            j["rows"].push_back({{"method", r.method},
                                 {"alpha", r.alpha},
                                 {"period", r.period},
                                 {"seed", r.seed},
                                 {"g_retention", r.g_retention},
                                 {"e_accuracy", r.e_accuracy},
                                 {"l0_to_base", r.l0_to_base}});
        }
        j["paper_fixtures"] = fixtures_json();
        return j.dump(2);
    }

    std::string out = "# Ablation results\n\n";
    out +=
        "| method | alpha | period | seed | task-G retention | task-E accuracy "
        "| l0 to base |\n| --- | --- | --- | --- | --- | --- | --- |\n";
    for (const auto& r : report.rows) {
        out += "| " + r.method + " | " + fmt_alpha(r.alpha) + " | " + r.period +
               " | " + std::to_string(r.seed) + " | " + fmt2(r.g_retention) +
               " | " + fmt2(r.e_accuracy) + " | " + std::to_string(r.l0_to_base) +
               " |\n";
    }
    append_fixture_markdown(out);
    return out;
}

AblationReport ablation_report_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("ablation report: ") + e.what());
    }
    if (!j.is_object() || !j.contains("rows") || !j["rows"].is_array()) {
        throw ParseError("ablation report: missing rows array");
    }
    AblationReport report;
    for (const auto& r : j["rows"]) {
        AblationRow row;
        row.method = r.at("method").get<std::string>();
        row.alpha = r.at("alpha").get<double>();
        row.period = r.at("period").get<std::string>();
        row.seed = r.at("seed").get<uint64_t>();
        row.g_retention = r.at("g_retention").get<double>();
        row.e_accuracy = r.at("e_accuracy").get<double>();
        row.l0_to_base = r.at("l0_to_base").get<size_t>();
        report.rows.push_back(std::move(row));
    }
    return report;
}

std::string render_forgetting(const ForgettingReport& report, ReportFormat format) {
    if (format == ReportFormat::Json) {
        nlohmann::json j;
        j["bases"] = nlohmann::json::array();
        for (const auto& b : report.bases) {
            j["bases"].push_back({{"seed", b.seed},
                                  {"g_accuracy", b.g_accuracy},
                                  {"e_accuracy", b.e_accuracy}});
        }
        j["rows"] = nlohmann::json::array();
        for (const auto& r : report.rows) {
            j["rows"].push_back({{"method", r.method},
                                 {"seed", r.seed},
                                 {"g_retention", r.g_retention},
                                 {"e_accuracy", r.e_accuracy},
                                 {"l0_to_base", r.l0_to_base}});
        }
        return j.dump(2);
    }

    std::string out = "# Forgetting benchmark\n\n";
    out += "| seed | base task-G | base task-E |\n| --- | --- | --- |\n";
    for (const auto& b : report.bases) {
        out += "| " + std::to_string(b.seed) + " | " + fmt2(b.g_accuracy) +
               " | " + fmt2(b.e_accuracy) + " |\n";
    }
    out +=
        "\n| method | seed | task-G retention | task-E accuracy | l0 to base "
        "|\n| --- | --- | --- | --- | --- |\n";
    std::set<std::string> methods;
    for (const auto& r : report.rows) {
        methods.insert(r.method);
        out += "| " + r.method + " | " + std::to_string(r.seed) + " | " +
               fmt2(r.g_retention) + " | " + fmt2(r.e_accuracy) + " | " +
               std::to_string(r.l0_to_base) + " |\n";
    }
    if (!report.rows.empty()) {
        out += "\n| method | mean task-G retention | mean task-E accuracy |\n";
        out += "| --- | --- | --- |\n";
        for (const auto& m : methods) {
            out += "| " + m + " | " + fmt2(report.mean_g(m)) + " | " +
                   fmt2(report.mean_e(m)) + " |\n";
        }
    }
    return out;
}

ForgettingReport forgetting_report_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("forgetting report: ") + e.what());
    }
    if (!j.is_object() || !j.contains("rows") || !j["rows"].is_array()) {
        throw ParseError("forgetting report: missing rows array");
    }
    ForgettingReport report;
    if (j.contains("bases")) {
        for (const auto& b : j["bases"]) {
            SeedBase base;
            base.seed = b.at("seed").get<uint64_t>();
            base.g_accuracy = b.at("g_accuracy").get<double>();
            base.e_accuracy = b.at("e_accuracy").get<double>();
            report.bases.push_back(base);
        }
    }
    for (const auto& r : j["rows"]) {
        MethodRow row;
        row.method = r.at("method").get<std::string>();
        row.seed = r.at("seed").get<uint64_t>();
        row.g_retention = r.at("g_retention").get<double>();
        row.e_accuracy = r.at("e_accuracy").get<double>();
        row.l0_to_base = r.at("l0_to_base").get<size_t>();
        report.rows.push_back(std::move(row));
    }
    return report;
}

}  // namespace skt::harness
