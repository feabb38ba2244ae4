#include <doctest.h>

#include "testforge/report_composer.hpp"
#include "testforge/util/files.hpp"

#include "support/pdf_text.hpp"
#include "support/temp_dir.hpp"

using namespace testforge;

namespace {

CoverageRecord record_of(std::string file, std::uint64_t statements, std::uint64_t missed) {
    CoverageRecord record;
    record.file = std::move(file);
    record.statements = statements;
    record.missed = missed;
    record.percent = coverage_percent(statements, missed);
    return record;
}

CoverageSummary summary_of(std::vector<CoverageRecord> records) {
    CoverageSummary summary;
    summary.records = std::move(records);
    summary.overall.file = "TOTAL";
    for (const auto& record : summary.records) {
        summary.overall.statements += record.statements;
        summary.overall.missed += record.missed;
    }
    summary.overall.percent =
        coverage_percent(summary.overall.statements, summary.overall.missed);
    return summary;
}

TimingLog full_timing() {
    TimingLog timing;
    for (Stage stage : kAllStages) timing.record(stage, 5);
    timing.total_ms = 50;
    return timing;
}

GraphRendering dot_marker(const std::string& dot_text) {
    GraphRendering rendering;
    rendering.dot_text = dot_text;
    rendering.empty_graph = dot_text.empty();
    return rendering;
}

TestReport compose_sample(const fs::path& dir) {
    std::vector<TestRationale> rationales = {
        {"book.py", "getTitle", {"Tests retrieving the book title after object creation."}, {}},
        {"book.py", "rent", {"Tests renting an available movie to an existing member."},
         {"Tests renting a non-existent movie."}},
    };
    std::vector<TestRunOutcome> outcomes = {
        {"test_book::test_title", true, std::nullopt, 12},
        {"test_book::test_rent", false, std::string("AssertionError: expected Rented"), 7},
    };
    auto coverage = summary_of({record_of("book.py", 10, 0), record_of("shop.py", 10, 5)});
    return compose_report("run-0001", rationales, outcomes, coverage,
                          dot_marker("digraph calls {\n  a;\n}\n"), full_timing(), dir);
}

} // namespace

TEST_CASE("report renders the five sections in the fixed order") {
    testing::TempDir tmp;
    auto report = compose_sample(tmp.path());
    auto bytes = util::read_file(report.output_path);
    REQUIRE(bytes.has_value());
    std::string text = testing::pdf_text_blob(*bytes);

    std::size_t previous = 0;
    for (auto section : kReportSections) {
        auto position = text.find(section);
        REQUIRE_MESSAGE(position != std::string::npos, std::string(section));
        CHECK(position > previous);
        previous = position;
    }
}

TEST_CASE("report shows failure detail and the Not applicable edge case") {
    testing::TempDir tmp;
    auto report = compose_sample(tmp.path());
    auto bytes = util::read_file(report.output_path);
    std::string text = testing::pdf_text_blob(*bytes);

    CHECK(text.find("AssertionError: expected Rented") != std::string::npos);
    CHECK(text.find("Edge cases: Not applicable") != std::string::npos);
    CHECK(text.find("Tests renting a non-existent movie.") != std::string::npos);
    CHECK(text.find("Failed") != std::string::npos);
    CHECK(text.find("Passed") != std::string::npos);

    // result rows are highlighted with the green/red fill constants
    CHECK(bytes->find("0.78 0.91 0.79 rg") != std::string::npos);
    CHECK(bytes->find("1 0.8 0.82 rg") != std::string::npos);
}

TEST_CASE("coverage table sums into the TOTAL row") {
    testing::TempDir tmp;
    auto report = compose_sample(tmp.path());
    auto bytes = util::read_file(report.output_path);
    std::string text = testing::pdf_text_blob(*bytes);

    // {10/0, 10/5} -> TOTAL statements 20, missed 5, percent 75.00
    auto total_pos = text.find("TOTAL");
    REQUIRE(total_pos != std::string::npos);
    CHECK(text.find("75.00", total_pos) != std::string::npos);
    CHECK(text.find("20", total_pos) != std::string::npos);
}

TEST_CASE("every outcome appears exactly once in the results section") {
    testing::TempDir tmp;
    auto report = compose_sample(tmp.path());
    auto bytes = util::read_file(report.output_path);
    std::string text = testing::pdf_text_blob(*bytes);
    for (const char* id : {"test_book::test_title", "test_book::test_rent"}) {
        auto first = text.find(id);
        REQUIRE(first != std::string::npos);
        CHECK(text.find(id, first + 1) == std::string::npos);
    }
    CHECK(report.passed + report.failed == 2);
}

TEST_CASE("composing identical inputs yields identical extracted text") {
    testing::TempDir tmp;
    auto first = compose_sample(tmp / "a");
    auto second = compose_sample(tmp / "b");
    auto text_a = testing::pdf_text_blob(*util::read_file(first.output_path));
    auto text_b = testing::pdf_text_blob(*util::read_file(second.output_path));
    CHECK(text_a == text_b);
}

TEST_CASE("manifest carries the exact summary numbers") {
    testing::TempDir tmp;
    std::vector<TestRunOutcome> outcomes;
    for (int i = 0; i < 4; ++i)
        outcomes.push_back({"t::case" + std::to_string(i), true, std::nullopt, 1});
    auto coverage = summary_of({record_of("calc.py", 300, 4), record_of("util.py", 200, 3)});
    REQUIRE(coverage.overall.percent == doctest::Approx(98.60).epsilon(1e-12));

    auto report = compose_report("run-98", {}, outcomes, coverage, dot_marker("digraph g {\n}\n"),
                                 full_timing(), tmp.path());
    auto manifest = report_manifest(report);
    CHECK(manifest.status == "success");
    CHECK(manifest.passed == 4);
    CHECK(manifest.failed == 0);
    REQUIRE(manifest.coverage_overall.has_value());
    CHECK(*manifest.coverage_overall == doctest::Approx(98.60).epsilon(1e-12));

    write_manifest(manifest, tmp.path());
    auto raw = util::read_file(tmp / "manifest.json");
    REQUIRE(raw.has_value());
    auto reread = RunManifest::from_json(nlohmann::json::parse(*raw));
    CHECK(reread.run_id == manifest.run_id);
    CHECK(reread.status == manifest.status);
    CHECK(reread.passed == manifest.passed);
    CHECK(reread.failed == manifest.failed);
    CHECK(*reread.coverage_overall == doctest::Approx(*manifest.coverage_overall));
    CHECK(reread.timing.total_ms == manifest.timing.total_ms);
}

TEST_CASE("empty call graphs are reported as such") {
    testing::TempDir tmp;
    auto report = compose_report("run-empty", {}, {}, summary_of({}), dot_marker(""),
                                 full_timing(), tmp.path());
    auto text = testing::pdf_text_blob(*util::read_file(report.output_path));
    CHECK(text.find("No call relations detected.") != std::string::npos);
}

TEST_CASE("pdf_escape protects string delimiters") {
    CHECK(report::pdf_escape("a(b)c\\d") == "a\\(b\\)c\\\\d");
    CHECK(report::pdf_escape("caf\xc3\xa9") == "caf??");  // non-ascii replaced
}

TEST_CASE("parse_png accepts 8-bit rgb and rejects exotic variants") {
    // hand-built 1x1 RGB png: stored-deflate zlib stream, zeroed CRCs
    auto u32 = [](std::uint32_t v) {
        std::string out(4, '\0');
        out[0] = static_cast<char>(v >> 24);
        out[1] = static_cast<char>(v >> 16);
        out[2] = static_cast<char>(v >> 8);
        out[3] = static_cast<char>(v);
        return out;
    };
    auto chunk = [&u32](const std::string& type, const std::string& data) {
        return u32(static_cast<std::uint32_t>(data.size())) + type + data +
               std::string(4, '\0');
    };
    std::string ihdr = u32(1) + u32(1) + std::string("\x08\x02\x00\x00\x00", 5);
    // zlib: header 0x78 0x01, one stored block: filter byte + RGB pixel
    std::string raw("\x00\xff\x00\x00", 4);
    std::string zlib = std::string("\x78\x01\x01\x04\x00\xfb\xff", 7) + raw +
                       std::string("\x01\x30\x01\xfd", 4);  // adler placeholder
    std::string png = std::string("\x89PNG\r\n\x1a\n", 8) + chunk("IHDR", ihdr) +
                      chunk("IDAT", zlib) + chunk("IEND", "");

    auto parsed = report::parse_png(png);
    REQUIRE(parsed.has_value());
    CHECK(parsed->width == 1);
    CHECK(parsed->height == 1);
    CHECK(parsed->channels == 3);
    CHECK(parsed->idat == zlib);

    // palette color type is rejected
    std::string pal_ihdr = u32(1) + u32(1) + std::string("\x08\x03\x00\x00\x00", 5);
    std::string palette_png = std::string("\x89PNG\r\n\x1a\n", 8) + chunk("IHDR", pal_ihdr) +
                              chunk("IDAT", zlib) + chunk("IEND", "");
    CHECK_FALSE(report::parse_png(palette_png).has_value());
    CHECK_FALSE(report::parse_png("not a png at all").has_value());
}

TEST_CASE("a rendered image lands in the pdf as an xobject") {
    testing::TempDir tmp;
    // reuse the synthetic png from above via a file
    auto u32 = [](std::uint32_t v) {
        std::string out(4, '\0');
        out[0] = static_cast<char>(v >> 24);
        out[1] = static_cast<char>(v >> 16);
        out[2] = static_cast<char>(v >> 8);
        out[3] = static_cast<char>(v);
        return out;
    };
    auto chunk = [&u32](const std::string& type, const std::string& data) {
        return u32(static_cast<std::uint32_t>(data.size())) + type + data +
               std::string(4, '\0');
    };
    std::string ihdr = u32(1) + u32(1) + std::string("\x08\x02\x00\x00\x00", 5);
    std::string raw("\x00\xff\x00\x00", 4);
    std::string zlib = std::string("\x78\x01\x01\x04\x00\xfb\xff", 7) + raw +
                       std::string("\x01\x30\x01\xfd", 4);
    std::string png = std::string("\x89PNG\r\n\x1a\n", 8) + chunk("IHDR", ihdr) +
                      chunk("IDAT", zlib) + chunk("IEND", "");
    util::write_file(tmp / "callgraph.png", png);

    GraphRendering rendering;
    rendering.image_path = tmp / "callgraph.png";
    rendering.dot_text = "digraph g {\n  a;\n}\n";
    auto report = compose_report("run-img", {}, {}, summary_of({record_of("a.py", 1, 0)}),
                                 rendering, full_timing(), tmp.path());
    auto bytes = util::read_file(report.output_path);
    REQUIRE(bytes.has_value());
    CHECK(bytes->find("/Subtype /Image") != std::string::npos);
    CHECK(bytes->find("/DeviceRGB") != std::string::npos);
}
