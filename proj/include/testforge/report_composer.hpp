#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "testforge/callgraph_builder.hpp"
#include "testforge/pipeline/timing.hpp"
#include "testforge/report/pdf_writer.hpp"
#include "testforge/test_runner.hpp"
#include "testforge/test_synthesizer.hpp"

namespace testforge {

/// Composed run report: the PDF on disk plus the summary numbers the
/// manifest and run log need.
struct TestReport {
    std::string run_id;
    std::filesystem::path output_path;  // the PDF
    int passed = 0;
    int failed = 0;
    std::optional<double> coverage_overall;
    TimingLog timing;
};

/// Report colors, defined in one place. The pass/fail highlight shades are
/// presentation constants; tests only rely on green-ish vs red-ish rows.
namespace report_style {
inline constexpr report::Rgb kHeadingColor{0.10, 0.10, 0.25};
inline constexpr report::Rgb kBodyColor{0.15, 0.15, 0.15};
inline constexpr report::Rgb kPassFill{0.78, 0.91, 0.79};   // light green
inline constexpr report::Rgb kPassText{0.10, 0.37, 0.13};   // dark green
inline constexpr report::Rgb kFailFill{1.00, 0.80, 0.82};   // light red
inline constexpr report::Rgb kFailText{0.72, 0.11, 0.11};   // dark red
inline constexpr report::Rgb kTableHeadFill{0.88, 0.88, 0.92};
} // namespace report_style

/// Section headings in their fixed order; the last one is the appendix.
inline constexpr std::array<std::string_view, 5> kReportSections = {
    "Test Rationale", "Test Results", "Coverage Table", "Call Graph", "Timing Appendix",
};

/// Renders the five report sections in order into `<output_dir>/report.pdf`:
/// rationale grouped by file and function (empty edge cases shown as
/// "Not applicable"), green/red result rows with failure detail under failed
/// rows, the coverage table with its TOTAL row, the call graph image or
/// embedded DOT block, and the stage timing appendix.
TestReport compose_report(const std::string& run_id,
                          const std::vector<TestRationale>& rationales,
                          const std::vector<TestRunOutcome>& outcomes,
                          const CoverageSummary& coverage,
                          const GraphRendering& graph,
                          const TimingLog& timing,
                          const std::filesystem::path& output_dir);

/// Machine-readable sidecar for one run. Written as manifest.json next to
/// the report; failed runs get a manifest too (without a report path).
struct RunManifest {
    std::string run_id;
    std::string status;  // "success" | "failed"
    std::optional<std::string> failure_category;
    std::optional<std::string> failure_detail;
    std::optional<double> coverage_overall;
    int passed = 0;
    int failed = 0;
    std::optional<std::string> report_path;
    TimingLog timing;

    nlohmann::json to_json() const;
    static RunManifest from_json(const nlohmann::json& value);
};

/// Success-side manifest derived from a composed report.
RunManifest report_manifest(const TestReport& report);

void write_manifest(const RunManifest& manifest, const std::filesystem::path& run_dir);

} // namespace testforge
