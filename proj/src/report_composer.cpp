#include "testforge/report_composer.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

#include "testforge/errors.hpp"
#include "testforge/report/pdf_writer.hpp"
#include "testforge/util/files.hpp"
#include "testforge/util/strings.hpp"

namespace testforge {

using namespace report_style;
using report::PdfFont;
using report::PdfWriter;

namespace {

std::string two_decimals(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.2f", value);
    return buffer;
}

std::vector<std::string> wrap_text(const std::string& text, std::size_t max_chars) {
    std::vector<std::string> lines;
    for (const auto& raw_line : util::split_lines(text)) {
        std::string current;
        for (const auto& word : util::split(raw_line, " \t")) {
            if (!current.empty() && current.size() + 1 + word.size() > max_chars) {
                lines.push_back(current);
                current.clear();
            }
            if (current.empty() && word.size() > max_chars) {
                // hard-break overlong tokens
                for (std::size_t i = 0; i < word.size(); i += max_chars)
                    lines.push_back(word.substr(i, max_chars));
                continue;
            }
            if (!current.empty()) current += " ";
            current += word;
        }
        lines.push_back(current);
    }
    if (lines.empty()) lines.push_back("");
    return lines;
}

void heading(PdfWriter& pdf, std::string_view text) {
    pdf.vertical_space(10);
    pdf.text_line(std::string(text), PdfFont::bold, 14, kHeadingColor);
    pdf.vertical_space(4);
}

void body_line(PdfWriter& pdf, const std::string& text, double indent_chars = 0) {
    std::string prefix(static_cast<std::size_t>(indent_chars), ' ');
    for (const auto& line : wrap_text(text, 92))
        pdf.text_line(prefix + line, PdfFont::regular, 10, kBodyColor);
}

void rationale_section(PdfWriter& pdf, const std::vector<TestRationale>& rationales) {
    heading(pdf, kReportSections[0]);
    if (rationales.empty()) {
        body_line(pdf, "No rationale was provided for this run.");
        return;
    }
    // grouped by source file, then function, preserving suite order
    std::string last_file;
    bool first = true;
    for (const auto& rationale : rationales) {
        if (first || rationale.source_file != last_file) {
            if (!first) pdf.vertical_space(6);
            pdf.text_line("File: " + rationale.source_file, PdfFont::bold, 11, kBodyColor);
            last_file = rationale.source_file;
            first = false;
        }
        pdf.text_line("  Function: " + rationale.function_name, PdfFont::bold, 10, kBodyColor);
        for (const auto& basic : rationale.basic_cases)
            body_line(pdf, "Basic case: " + basic, 4);
        if (rationale.edge_cases.empty()) {
            body_line(pdf, "Edge cases: Not applicable", 4);
        } else {
            for (const auto& edge : rationale.edge_cases)
                body_line(pdf, "Edge cases: " + edge, 4);
        }
        pdf.vertical_space(3);
    }
}

void results_section(PdfWriter& pdf, const std::vector<TestRunOutcome>& outcomes) {
    heading(pdf, kReportSections[1]);
    if (outcomes.empty()) {
        body_line(pdf, "No tests were executed.");
        return;
    }
    const std::vector<double> widths = {348, 76, 80};
    pdf.table_row({"Test", "Status", "Duration"}, widths, PdfFont::bold, 10,
                  kBodyColor, kTableHeadFill);
    for (const auto& outcome : outcomes) {
        bool passed = outcome.passed;
        pdf.table_row({outcome.test_id, passed ? "Passed" : "Failed",
                       std::to_string(outcome.duration_ms) + " ms"},
                      widths, PdfFont::regular, 10,
                      passed ? kPassText : kFailText,
                      passed ? kPassFill : kFailFill);
        if (!passed && outcome.failure_detail)
            for (const auto& line : wrap_text(*outcome.failure_detail, 88))
                pdf.text_line("    " + line, PdfFont::regular, 9, kFailText);
    }
}

void coverage_section(PdfWriter& pdf, const CoverageSummary& coverage) {
    heading(pdf, kReportSections[2]);
    const std::vector<double> widths = {248, 92, 84, 80};
    pdf.table_row({"File", "Coverage %", "Statements", "Missed"}, widths, PdfFont::bold,
                  10, kBodyColor, kTableHeadFill);
    for (const auto& record : coverage.records)
        pdf.table_row({record.file, two_decimals(record.percent),
                       std::to_string(record.statements), std::to_string(record.missed)},
                      widths, PdfFont::regular, 10, kBodyColor, std::nullopt);
    pdf.table_row({coverage.overall.file, two_decimals(coverage.overall.percent),
                   std::to_string(coverage.overall.statements),
                   std::to_string(coverage.overall.missed)},
                  widths, PdfFont::bold, 10, kBodyColor, kTableHeadFill);
}

void callgraph_section(PdfWriter& pdf, const GraphRendering& graph) {
    heading(pdf, kReportSections[3]);
    if (graph.empty_graph) {
        body_line(pdf, "No call relations detected.");
        return;
    }
    if (!graph.image_path.empty()) {
        if (auto bytes = util::read_file(graph.image_path)) {
            if (auto png = report::parse_png(*bytes)) {
                pdf.image(*png);
                return;
            }
        }
        // unsupported image flavor: fall through to the DOT block
    }
    for (const auto& line : util::split_lines(graph.dot_text))
        pdf.text_line(line, PdfFont::mono, 9, kBodyColor);
}

void timing_section(PdfWriter& pdf, const TimingLog& timing) {
    heading(pdf, kReportSections[4]);
    const std::vector<double> widths = {260, 120};
    pdf.table_row({"Stage", "Duration"}, widths, PdfFont::bold, 10, kBodyColor,
                  kTableHeadFill);
    for (Stage stage : kAllStages) {
        const auto& entry = timing.at(stage);
        pdf.table_row({std::string(to_string(stage)),
                       entry.recorded ? std::to_string(entry.ms) + " ms" : "not reached"},
                      widths, PdfFont::regular, 10, kBodyColor, std::nullopt);
    }
    pdf.table_row({"total", std::to_string(timing.total_ms) + " ms"}, widths,
                  PdfFont::bold, 10, kBodyColor, kTableHeadFill);
    pdf.vertical_space(4);
    pdf.text_line("Durations as of report composition; the run manifest carries the "
                  "final timings.",
                  PdfFont::regular, 8, kBodyColor);
}

} // namespace

TestReport compose_report(const std::string& run_id,
                          const std::vector<TestRationale>& rationales,
                          const std::vector<TestRunOutcome>& outcomes,
                          const CoverageSummary& coverage,
                          const GraphRendering& graph,
                          const TimingLog& timing,
                          const std::filesystem::path& output_dir) {
    PdfWriter pdf;
    pdf.text_line("Automated Unit Test Report", PdfFont::bold, 18, kHeadingColor);
    pdf.text_line("Run " + run_id, PdfFont::regular, 10, kBodyColor);
    pdf.vertical_space(6);

    rationale_section(pdf, rationales);
    results_section(pdf, outcomes);
    coverage_section(pdf, coverage);
    callgraph_section(pdf, graph);
    timing_section(pdf, timing);

    TestReport report;
    report.run_id = run_id;
    report.output_path = output_dir / "report.pdf";
    for (const auto& outcome : outcomes)
        (outcome.passed ? report.passed : report.failed) += 1;
    report.coverage_overall = coverage.overall.percent;
    report.timing = timing;

    try {
        util::write_file(report.output_path, pdf.finish());
    } catch (const std::exception& err) {
        fail(ErrorKind::report_error, err.what());
    }
    return report;
}

nlohmann::json RunManifest::to_json() const {
    nlohmann::json out = {
        {"run_id", run_id},
        {"status", status},
        {"passed", passed},
        {"failed", failed},
        {"timing", timing.to_json()},
    };
    if (failure_category) out["failure_category"] = *failure_category;
    if (failure_detail) out["failure_detail"] = *failure_detail;
    if (coverage_overall) out["coverage_overall"] = *coverage_overall;
    if (report_path) out["report_path"] = *report_path;
    return out;
}

RunManifest RunManifest::from_json(const nlohmann::json& value) {
    RunManifest manifest;
    manifest.run_id = value.at("run_id").get<std::string>();
    manifest.status = value.at("status").get<std::string>();
    manifest.passed = value.value("passed", 0);
    manifest.failed = value.value("failed", 0);
    if (value.contains("failure_category"))
        manifest.failure_category = value["failure_category"].get<std::string>();
    if (value.contains("failure_detail"))
        manifest.failure_detail = value["failure_detail"].get<std::string>();
    if (value.contains("coverage_overall"))
        manifest.coverage_overall = value["coverage_overall"].get<double>();
    if (value.contains("report_path"))
        manifest.report_path = value["report_path"].get<std::string>();
    if (value.contains("timing")) manifest.timing = TimingLog::from_json(value["timing"]);
    return manifest;
}

RunManifest report_manifest(const TestReport& report) {
    RunManifest manifest;
    manifest.run_id = report.run_id;
    manifest.status = "success";
    manifest.coverage_overall = report.coverage_overall;
    manifest.passed = report.passed;
    manifest.failed = report.failed;
    manifest.report_path = report.output_path.string();
    manifest.timing = report.timing;
    return manifest;
}

void write_manifest(const RunManifest& manifest, const std::filesystem::path& run_dir) {
    try {
        util::write_file(run_dir / "manifest.json", manifest.to_json().dump(2) + "\n");
    } catch (const std::exception& err) {
        fail(ErrorKind::report_error, err.what());
    }
}

} // namespace testforge
