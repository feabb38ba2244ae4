#pragma once

#include <array>
#include <cstdint>
#include <string_view>

#include <nlohmann/json.hpp>

namespace testforge {

/// The seven timed pipeline stages, in execution order.
enum class Stage {
    entity_retrieval,
    folder_location,
    test_generation,
    dot_graph,
    write_tests,
    test_execution,
    pdf_report,
};

inline constexpr std::array<Stage, 7> kAllStages = {
    Stage::entity_retrieval, Stage::folder_location, Stage::test_generation,
    Stage::dot_graph,        Stage::write_tests,     Stage::test_execution,
    Stage::pdf_report,
};

std::string_view to_string(Stage stage);

/// Wall-clock stage durations for one run. All seven slots always exist; a
/// slot is `recorded` once its stage ran (a failed run keeps the partial
/// log). total_ms covers the whole run and is never less than the sum of the
/// recorded stages; the difference is orchestration overhead.
struct TimingLog {
    struct Entry {
        std::int64_t ms = 0;
        bool recorded = false;
    };

    std::array<Entry, 7> stages{};
    std::int64_t total_ms = 0;

    Entry& at(Stage stage) { return stages[static_cast<std::size_t>(stage)]; }
    const Entry& at(Stage stage) const { return stages[static_cast<std::size_t>(stage)]; }

    void record(Stage stage, std::int64_t ms) {
        at(stage).ms = ms;
        at(stage).recorded = true;
    }

    std::int64_t recorded_sum() const {
        std::int64_t sum = 0;
        for (const auto& entry : stages)
            if (entry.recorded) sum += entry.ms;
        return sum;
    }

    bool all_recorded() const {
        for (const auto& entry : stages)
            if (!entry.recorded) return false;
        return true;
    }

    nlohmann::json to_json() const;
    static TimingLog from_json(const nlohmann::json& value);
};

} // namespace testforge
