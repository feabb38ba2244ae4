#include "testforge/pipeline/timing.hpp"

namespace testforge {

std::string_view to_string(Stage stage) {
    switch (stage) {
        case Stage::entity_retrieval: return "entity_retrieval";
        case Stage::folder_location: return "folder_location";
        case Stage::test_generation: return "test_generation";
        case Stage::dot_graph: return "dot_graph";
        case Stage::write_tests: return "write_tests";
        case Stage::test_execution: return "test_execution";
        case Stage::pdf_report: return "pdf_report";
    }
    return "unknown";
}

nlohmann::json TimingLog::to_json() const {
    nlohmann::json stages_json = nlohmann::json::object();
    for (Stage stage : kAllStages) {
        const Entry& entry = at(stage);
        if (entry.recorded) stages_json[std::string(to_string(stage))] = entry.ms;
    }
    return {{"stages", stages_json}, {"total_ms", total_ms}};
}

TimingLog TimingLog::from_json(const nlohmann::json& value) {
    TimingLog log;
    log.total_ms = value.value("total_ms", std::int64_t{0});
    if (value.contains("stages")) {
        for (Stage stage : kAllStages) {
            std::string key(to_string(stage));
            if (value["stages"].contains(key))
                log.record(stage, value["stages"][key].get<std::int64_t>());
        }
    }
    return log;
}

} // namespace testforge
