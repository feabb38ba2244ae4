#include "testforge/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>

namespace testforge {

namespace {

struct Accumulator {
    std::string project;
    std::string language;
    bool mixed_project = false;
    bool mixed_language = false;
    double loc_sum = 0;
    int loc_count = 0;
    double total_sum = 0;
    int total_count = 0;
    std::array<double, 7> stage_sum{};
    std::array<int, 7> stage_count{};
    double coverage_sum = 0;
    int coverage_count = 0;
    int runs = 0;
    int successes = 0;
    int failures = 0;
};

std::string record_project(const RunRecord& record) {
    if (!record.project.empty()) return record.project;
    if (record.entities) return record.entities->project_name;
    return "(unknown)";
}

std::string record_language(const RunRecord& record) {
    if (record.entities) return std::string(to_string(record.entities->target_language));
    return "(unknown)";
}

std::string seconds_text(double ms) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.2f", ms / 1000.0);
    return buffer;
}

std::string fixed2(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.2f", value);
    return buffer;
}

void pad(std::string& text, std::size_t width) {
    if (text.size() < width) text.append(width - text.size(), ' ');
    text += "  ";
}

} // namespace

std::vector<MetricsRow> aggregate_metrics(const std::vector<RunRecord>& records,
                                          GroupBy group_by) {
    std::map<std::string, Accumulator> groups;
    for (const auto& record : records) {
        std::string project = record_project(record);
        std::string language = record_language(record);
        std::string key = group_by == GroupBy::project ? project : language;

        Accumulator& acc = groups[key];
        if (acc.runs == 0) {
            acc.project = project;
            acc.language = language;
        } else {
            if (acc.project != project) acc.mixed_project = true;
            if (acc.language != language) acc.mixed_language = true;
        }
        ++acc.runs;
        if (record.success) ++acc.successes;
        else ++acc.failures;

        // means cover successful runs; failed runs only count toward totals
        if (!record.success) continue;
        if (record.loc) {
            acc.loc_sum += static_cast<double>(*record.loc);
            ++acc.loc_count;
        }
        acc.total_sum += static_cast<double>(record.timing.total_ms);
        ++acc.total_count;
        for (Stage stage : kAllStages) {
            const auto& entry = record.timing.at(stage);
            if (!entry.recorded) continue;
            acc.stage_sum[static_cast<std::size_t>(stage)] += static_cast<double>(entry.ms);
            ++acc.stage_count[static_cast<std::size_t>(stage)];
        }
        if (record.coverage_overall) {
            acc.coverage_sum += *record.coverage_overall;
            ++acc.coverage_count;
        }
    }

    std::vector<MetricsRow> rows;
    rows.reserve(groups.size());
    for (const auto& [key, acc] : groups) {
        MetricsRow row;
        row.project = group_by == GroupBy::project ? key
                      : (acc.mixed_project ? "*" : acc.project);
        row.language = group_by == GroupBy::language ? key
                       : (acc.mixed_language ? "*" : acc.language);
        row.loc = acc.loc_count ? acc.loc_sum / acc.loc_count : 0;
        row.total_ms = acc.total_count ? acc.total_sum / acc.total_count : 0;
        for (std::size_t i = 0; i < row.stage_ms.size(); ++i)
            row.stage_ms[i] = acc.stage_count[i] ? acc.stage_sum[i] / acc.stage_count[i] : 0;
        row.coverage_percent = acc.coverage_count ? acc.coverage_sum / acc.coverage_count : 0;
        row.runs = acc.runs;
        row.successes = acc.successes;
        row.failures = acc.failures;
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string render_metrics_table(const std::vector<MetricsRow>& rows) {
    static constexpr std::array<std::pair<const char*, std::size_t>, 12> kColumns = {{
        {"Project", 14}, {"Language", 8}, {"LoC", 7}, {"Total Time", 10},
        {"Tests Gen.", 10}, {"Dot Graph", 9}, {"Entity Retrieval", 16},
        {"Test Exec.", 10}, {"PDF Report", 10}, {"Coverage %", 10},
        {"Runs", 4}, {"Failures", 8},
    }};

    std::string header;
    for (const auto& [title, width] : kColumns) {
        std::string cell = title;
        pad(cell, width);
        header += cell;
    }

    std::ostringstream out;
    out << header << "\n" << std::string(header.size(), '-') << "\n";
    for (const auto& row : rows) {
        auto stage_ms = [&row](Stage stage) {
            return row.stage_ms[static_cast<std::size_t>(stage)];
        };
        std::array<std::string, 12> cells = {
            row.project,
            row.language,
            fixed2(row.loc),
            seconds_text(row.total_ms),
            seconds_text(stage_ms(Stage::test_generation)),
            seconds_text(stage_ms(Stage::dot_graph)),
            seconds_text(stage_ms(Stage::entity_retrieval)),
            seconds_text(stage_ms(Stage::test_execution)),
            seconds_text(stage_ms(Stage::pdf_report)),
            fixed2(row.coverage_percent),
            std::to_string(row.runs),
            std::to_string(row.failures),
        };
        std::string line;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            std::string cell = cells[i];
            pad(cell, kColumns[i].second);
            line += cell;
        }
        out << line << "\n";
    }
    return out.str();
}

} // namespace testforge
