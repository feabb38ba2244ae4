#pragma once

#include <string>
#include <vector>

#include "testforge/pipeline_orchestrator.hpp"

namespace testforge {

enum class GroupBy { project, language };

/// Aggregated means for one group. Times are arithmetic means in
/// milliseconds over successful runs; coverage is the mean of the recorded
/// overall percentages. Counts include failed runs.
struct MetricsRow {
    std::string project;   // group key or "*"
    std::string language;  // group key, single value, or "*"
    double loc = 0;
    double total_ms = 0;
    std::array<double, 7> stage_ms{};  // indexed by Stage
    double coverage_percent = 0;
    int runs = 0;
    int successes = 0;
    int failures = 0;
};

/// Arithmetic means per group over the given run records, rows sorted by
/// group key.
std::vector<MetricsRow> aggregate_metrics(const std::vector<RunRecord>& records,
                                          GroupBy group_by);

/// Fixed-width table with the columns Project, Language, LoC, Total Time,
/// Tests Gen., Dot Graph, Entity Retrieval, Test Exec., PDF Report,
/// Coverage %, plus run/failure counts. Times are printed in seconds with
/// two decimals.
std::string render_metrics_table(const std::vector<MetricsRow>& rows);

} // namespace testforge
