#pragma once

#include <chrono>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "testforge/entity_extractor.hpp"
#include "testforge/pipeline/timing.hpp"
#include "testforge/report_composer.hpp"
#include "testforge/runner_adapters.hpp"
#include "testforge/service/config.hpp"

namespace testforge {

/// Run failure taxonomy. ambiguous prompts and compilation errors mirror the
/// observed failure causes; the rest cover the artifact's own plumbing.
enum class FailureCategory {
    ambiguous_prompt,
    project_not_found,
    generation_parse_failure,
    compilation_error,
    execution_environment,
    provider_error,
    report_error,
};

std::string_view to_string(FailureCategory category);
std::optional<FailureCategory> parse_failure_category(std::string_view text);

/// Total mapping from (stage, error kind) to a failure category; unexpected
/// combinations land in execution_environment with the message preserved.
FailureCategory classify_failure(Stage stage, ErrorKind kind);

/// One pipeline execution, success or not. A record is produced for every
/// invocation; success requires every stage to have completed and a report
/// to exist.
struct RunRecord {
    std::string run_id;
    std::string timestamp;  // ISO-8601 UTC
    std::string prompt;
    std::optional<ExtractedEntities> entities;
    std::string project;  // located project directory name ("" until located)
    std::optional<std::size_t> loc;  // sum of source line counts
    bool success = false;
    std::optional<FailureCategory> failure_category;
    std::optional<std::string> failure_kind;  // ErrorKind name, for debugging
    std::optional<std::string> failure_detail;
    TimingLog timing;
    std::optional<double> coverage_overall;
    int passed = 0;
    int failed = 0;
    std::optional<std::string> report_path;

    nlohmann::json to_json() const;
    static RunRecord from_json(const nlohmann::json& value);
};

/// Appends to / reads the JSONL run log (one record per line).
void append_run_record(const std::filesystem::path& log_path, const RunRecord& record);
std::vector<RunRecord> read_run_log(const std::filesystem::path& log_path);

/// Exclusive advisory lock on a project root, shared across threads and
/// processes (flock on `<root>/.testforge.lock`). Throws lock_timeout when
/// the lock cannot be taken within the bound.
class ProjectLock {
public:
    ProjectLock(const std::filesystem::path& project_root, double timeout_s);
    ~ProjectLock();

    ProjectLock(const ProjectLock&) = delete;
    ProjectLock& operator=(const ProjectLock&) = delete;

private:
    int fd_ = -1;
};

/// Observer hook for stage boundaries (tests assert strict ordering).
using StageObserver = std::function<void(Stage, std::chrono::steady_clock::time_point,
                                         std::chrono::steady_clock::time_point)>;

/// Runs the whole workflow: extract entities, locate the project and collect
/// sources, generate tests, build the call graph, write the test files,
/// execute them, compose the report. Every stage is timed; the first failing
/// stage aborts the rest and the failure is materialized in the RunRecord;
/// run() never throws.
class PipelineRunner {
public:
    PipelineRunner(ServiceConfig config,
                   std::shared_ptr<llm::LlmGateway> gateway,
                   AdapterRegistry adapters);

    RunRecord run(const std::string& prompt);

    void set_stage_observer(StageObserver observer) { observer_ = std::move(observer); }

    const ServiceConfig& config() const { return config_; }

private:
    ServiceConfig config_;
    std::shared_ptr<llm::LlmGateway> gateway_;
    AdapterRegistry adapters_;
    StageObserver observer_;
};

/// Gateway + adapter registry straight from configuration.
std::shared_ptr<llm::LlmGateway> make_gateway(const ServiceConfig& config);
AdapterRegistry make_adapter_registry(const ServiceConfig& config);
PipelineRunner make_runner(const ServiceConfig& config);

/// Sortable, collision-resistant run id: UTC timestamp plus random suffix.
std::string new_run_id();

} // namespace testforge
