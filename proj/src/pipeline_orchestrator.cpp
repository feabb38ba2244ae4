#include "testforge/pipeline_orchestrator.hpp"

#include <atomic>
#include <chrono>
#include <mutex>
#include <random>
#include <thread>
#include <tuple>

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include "testforge/llm/transports.hpp"
#include "testforge/util/files.hpp"
#include "testforge/util/strings.hpp"

namespace testforge {

using Clock = std::chrono::steady_clock;

std::string_view to_string(FailureCategory category) {
    switch (category) {
        case FailureCategory::ambiguous_prompt: return "ambiguous_prompt";
        case FailureCategory::project_not_found: return "project_not_found";
        case FailureCategory::generation_parse_failure: return "generation_parse_failure";
        case FailureCategory::compilation_error: return "compilation_error";
        case FailureCategory::execution_environment: return "execution_environment";
        case FailureCategory::provider_error: return "provider_error";
        case FailureCategory::report_error: return "report_error";
    }
    return "execution_environment";
}

std::optional<FailureCategory> parse_failure_category(std::string_view text) {
    static constexpr std::array<FailureCategory, 7> kAll = {
        FailureCategory::ambiguous_prompt,     FailureCategory::project_not_found,
        FailureCategory::generation_parse_failure, FailureCategory::compilation_error,
        FailureCategory::execution_environment, FailureCategory::provider_error,
        FailureCategory::report_error,
    };
    for (FailureCategory category : kAll)
        if (to_string(category) == text) return category;
    return std::nullopt;
}

FailureCategory classify_failure(Stage stage, ErrorKind kind) {
    // Provider trouble is provider trouble no matter where it surfaces.
    if (kind == ErrorKind::provider_error || kind == ErrorKind::fixture_miss)
        return FailureCategory::provider_error;

    switch (stage) {
        case Stage::entity_retrieval:
            if (kind == ErrorKind::ambiguous_prompt || kind == ErrorKind::invalid_entity)
                return FailureCategory::ambiguous_prompt;
            break;
        case Stage::folder_location:
            if (kind == ErrorKind::project_not_found || kind == ErrorKind::ambiguous_project ||
                kind == ErrorKind::subfolder_not_found || kind == ErrorKind::no_sources_found)
                return FailureCategory::project_not_found;
            break;
        case Stage::test_generation:
            if (kind == ErrorKind::generation_parse_failure || kind == ErrorKind::prompt_too_large)
                return FailureCategory::generation_parse_failure;
            break;
        case Stage::dot_graph:
            break;  // callgraph generation never fails the run
        case Stage::write_tests:
            break;  // write_failure maps to execution_environment below
        case Stage::test_execution:
            if (kind == ErrorKind::compilation_error) return FailureCategory::compilation_error;
            break;
        case Stage::pdf_report:
            if (kind == ErrorKind::report_error) return FailureCategory::report_error;
            break;
    }
    return FailureCategory::execution_environment;
}

nlohmann::json RunRecord::to_json() const {
    nlohmann::json out = {
        {"run_id", run_id},
        {"timestamp", timestamp},
        {"prompt", prompt},
        {"status", success ? "success" : "failed"},
        {"timing", timing.to_json()},
        {"passed", passed},
        {"failed", failed},
    };
    if (entities) {
        out["entities"] = {
            {"project", entities->project_name},
            {"language", std::string(to_string(entities->target_language))},
        };
        if (entities->subfolder) out["entities"]["folder"] = *entities->subfolder;
    }
    if (!project.empty()) out["project"] = project;
    if (loc) out["loc"] = *loc;
    if (failure_category) out["failure_category"] = std::string(to_string(*failure_category));
    if (failure_kind) out["failure_kind"] = *failure_kind;
    if (failure_detail) out["failure_detail"] = *failure_detail;
    if (coverage_overall) out["coverage_overall"] = *coverage_overall;
    if (report_path) out["report_path"] = *report_path;
    return out;
}

RunRecord RunRecord::from_json(const nlohmann::json& value) {
    RunRecord record;
    record.run_id = value.at("run_id").get<std::string>();
    record.timestamp = value.value("timestamp", "");
    record.prompt = value.value("prompt", "");
    record.success = value.value("status", "") == "success";
    record.passed = value.value("passed", 0);
    record.failed = value.value("failed", 0);
    if (value.contains("entities")) {
        ExtractedEntities entities;
        entities.project_name = value["entities"].value("project", "");
        if (auto lang = parse_language(value["entities"].value("language", "")))
            entities.target_language = *lang;
        if (value["entities"].contains("folder"))
            entities.subfolder = value["entities"]["folder"].get<std::string>();
        record.entities = entities;
    }
    record.project = value.value("project", "");
    if (value.contains("loc")) record.loc = value["loc"].get<std::size_t>();
    if (value.contains("failure_category"))
        record.failure_category =
            parse_failure_category(value["failure_category"].get<std::string>());
    if (value.contains("failure_kind"))
        record.failure_kind = value["failure_kind"].get<std::string>();
    if (value.contains("failure_detail"))
        record.failure_detail = value["failure_detail"].get<std::string>();
    if (value.contains("timing")) record.timing = TimingLog::from_json(value["timing"]);
    if (value.contains("coverage_overall"))
        record.coverage_overall = value["coverage_overall"].get<double>();
    if (value.contains("report_path"))
        record.report_path = value["report_path"].get<std::string>();
    return record;
}

namespace {
std::mutex g_run_log_mutex;
} // namespace

void append_run_record(const std::filesystem::path& log_path, const RunRecord& record) {
    std::lock_guard<std::mutex> guard(g_run_log_mutex);
    util::append_line(log_path, record.to_json().dump());
}

std::vector<RunRecord> read_run_log(const std::filesystem::path& log_path) {
    std::vector<RunRecord> records;
    auto content = util::read_file(log_path);
    if (!content) return records;
    for (const auto& line : util::split_lines(*content)) {
        if (util::trim(line).empty()) continue;
        nlohmann::json parsed = nlohmann::json::parse(line, nullptr, false);
        if (parsed.is_discarded()) continue;  // tolerate a torn tail line
        records.push_back(RunRecord::from_json(parsed));
    }
    return records;
}

ProjectLock::ProjectLock(const std::filesystem::path& project_root, double timeout_s) {
    std::filesystem::path canonical = std::filesystem::weakly_canonical(project_root);
    std::filesystem::path lock_path = canonical / ".testforge.lock";
    fd_ = ::open(lock_path.c_str(), O_CREAT | O_RDWR | O_CLOEXEC, 0644);
    if (fd_ < 0)
        fail(ErrorKind::execution_environment,
             "cannot open project lock file " + lock_path.string());
    auto deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                       std::chrono::duration<double>(timeout_s));
    while (::flock(fd_, LOCK_EX | LOCK_NB) != 0) {
        if (Clock::now() >= deadline) {
            ::close(fd_);
            fd_ = -1;
            fail(ErrorKind::lock_timeout,
                 "project lock timeout after " + std::to_string(timeout_s) + "s on " +
                     canonical.string());
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(20));
    }
}

ProjectLock::~ProjectLock() {
    if (fd_ >= 0) {
        ::flock(fd_, LOCK_UN);
        ::close(fd_);
    }
}

std::string new_run_id() {
    auto now = std::chrono::system_clock::now();
    std::time_t seconds = std::chrono::system_clock::to_time_t(now);
    std::tm utc{};
    gmtime_r(&seconds, &utc);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y%m%dT%H%M%S", &utc);

    // process-wide sequence guarantees in-process uniqueness; the random
    // tail guards against cross-process clashes
    static std::atomic<std::uint64_t> sequence{0};
    static thread_local std::mt19937_64 rng(
        std::random_device{}() ^
        static_cast<std::uint64_t>(
            std::chrono::steady_clock::now().time_since_epoch().count()));
    static constexpr char kAlphabet[] = "0123456789abcdef";
    std::uint64_t seq = sequence.fetch_add(1) & 0xFFFFFF;
    std::string middle(6, '0');
    for (int i = 5; i >= 0; --i) {
        middle[static_cast<std::size_t>(i)] = kAlphabet[seq & 0xF];
        seq >>= 4;
    }
    std::string suffix(6, '0');
    for (char& c : suffix) c = kAlphabet[rng() % 16];
    return std::string(stamp) + "-" + middle + "-" + suffix;
}

namespace {

std::string iso_timestamp() {
    auto now = std::chrono::system_clock::now();
    std::time_t seconds = std::chrono::system_clock::to_time_t(now);
    std::tm utc{};
    gmtime_r(&seconds, &utc);
    char stamp[40];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &utc);
    return stamp;
}

std::int64_t ms_between(Clock::time_point begin, Clock::time_point end) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(end - begin).count();
}

} // namespace

PipelineRunner::PipelineRunner(ServiceConfig config,
                               std::shared_ptr<llm::LlmGateway> gateway,
                               AdapterRegistry adapters)
    : config_(std::move(config)), gateway_(std::move(gateway)), adapters_(std::move(adapters)) {}

RunRecord PipelineRunner::run(const std::string& prompt) {
    RunRecord record;
    record.run_id = new_run_id();
    record.timestamp = iso_timestamp();
    record.prompt = prompt;

    std::filesystem::path run_dir = config_.output_dir / record.run_id;
    auto run_begin = Clock::now();

    Stage current_stage = Stage::entity_retrieval;
    // a failing stage still gets its duration recorded before the error
    // propagates; later stages stay unrecorded
    auto timed = [this, &record, &current_stage](Stage stage, auto&& body) {
        current_stage = stage;
        auto begin = Clock::now();
        auto finish = [&] {
            auto end = Clock::now();
            record.timing.record(stage, ms_between(begin, end));
            if (observer_) observer_(stage, begin, end);
        };
        try {
            if constexpr (std::is_void_v<decltype(body())>) {
                body();
                finish();
            } else {
                auto value = body();
                finish();
                return value;
            }
        } catch (...) {
            finish();
            throw;
        }
    };

    try {
        record.entities = timed(Stage::entity_retrieval, [&] {
            return extract_entities(prompt, *gateway_);
        });

        ProjectContext context = timed(Stage::folder_location, [&] {
            return collect_sources(locate_project(*record.entities, config_.workspace_roots));
        });
        record.project = context.root_path.filename().string();
        std::size_t loc = 0;
        for (const auto& source : context.sources) loc += source.line_count;
        record.loc = loc;

        GeneratedTestSuite suite = timed(Stage::test_generation, [&] {
            return generate_tests(context.sources, context.target_language, *gateway_,
                                  config_.prompt_size_budget_bytes);
        });

        CallGraph graph = timed(Stage::dot_graph, [&] {
            return generate_callgraph(context.sources, context.target_language, *gateway_);
        });

        std::vector<TestRunOutcome> outcomes;
        CoverageSummary coverage;
        {
            // the lock covers every mutation of the project directory:
            // writing the test files and running them
            ProjectLock lock(context.root_path, config_.lock_timeout_s);

            std::vector<std::filesystem::path> written = timed(Stage::write_tests, [&] {
                return write_test_files(suite, context);
            });

            auto adapter = adapters_.for_language(context.target_language);
            std::tie(outcomes, coverage) = timed(Stage::test_execution, [&] {
                auto [run_outcomes, artifacts] = execute_tests(
                    context, written, *adapter, run_dir / "artifacts",
                    config_.runner_timeout_s);
                CoverageSummary cov = parse_coverage(artifacts.coverage_path,
                                                     context.target_language);
                return std::make_pair(std::move(run_outcomes), std::move(cov));
            });
        }

        TestReport report = timed(Stage::pdf_report, [&] {
            auto stage_begin = Clock::now();
            GraphRendering rendering = render_graph(graph, run_dir);
            // the report can only show its own stage as measured so far; the
            // manifest and run log carry the final numbers
            TimingLog snapshot = record.timing;
            snapshot.record(Stage::pdf_report, ms_between(stage_begin, Clock::now()));
            snapshot.total_ms = ms_between(run_begin, Clock::now());
            return compose_report(record.run_id, suite.rationales, outcomes, coverage,
                                  rendering, snapshot, run_dir);
        });

        record.success = true;
        record.passed = report.passed;
        record.failed = report.failed;
        record.coverage_overall = coverage.overall.percent;
        record.report_path = report.output_path.string();
    } catch (const PipelineError& err) {
        record.success = false;
        record.failure_category = classify_failure(current_stage, err.kind());
        record.failure_kind = std::string(to_string(err.kind()));
        record.failure_detail = err.what();
    } catch (const std::exception& err) {
        record.success = false;
        record.failure_category = FailureCategory::execution_environment;
        record.failure_kind = std::string(to_string(ErrorKind::internal_error));
        record.failure_detail = err.what();
    }

    record.timing.total_ms = ms_between(run_begin, Clock::now());

    // manifest for every run; report timing, counts and coverage when present
    RunManifest manifest;
    manifest.run_id = record.run_id;
    manifest.status = record.success ? "success" : "failed";
    if (record.failure_category)
        manifest.failure_category = std::string(to_string(*record.failure_category));
    manifest.failure_detail = record.failure_detail;
    manifest.coverage_overall = record.coverage_overall;
    manifest.passed = record.passed;
    manifest.failed = record.failed;
    manifest.report_path = record.report_path;
    manifest.timing = record.timing;
    try {
        write_manifest(manifest, run_dir);
    } catch (const std::exception&) {
        // the run record still captures everything the manifest would
    }
    try {
        append_run_record(config_.run_log_path(), record);
    } catch (const std::exception&) {
        // an unwritable run log must not turn a finished run into a crash
    }
    return record;
}

std::shared_ptr<llm::LlmGateway> make_gateway(const ServiceConfig& config) {
    llm::GatewayOptions options;
    options.provider = config.provider;
    options.model = config.model;
    options.mode = config.gateway_mode;
    options.fixture_path = config.fixture_path;
    options.credential_env_var = config.credential_env_var;
    options.request_timeout_s = config.llm_timeout_s;
    auto transport = llm::make_transport(config.provider, config.credential_env_var);
    return std::make_shared<llm::LlmGateway>(options, std::move(transport));
}

AdapterRegistry make_adapter_registry(const ServiceConfig& config) {
    AdapterRegistry registry;
    if (config.runner == RunnerKind::stub) {
        registry.register_adapter(
            std::make_shared<StubRunnerAdapter>(Language::python, *config.stub_artifact_root));
        registry.register_adapter(
            std::make_shared<StubRunnerAdapter>(Language::java, *config.stub_artifact_root));
    } else {
        registry.register_adapter(std::make_shared<PytestAdapter>());
        registry.register_adapter(std::make_shared<MavenAdapter>());
    }
    return registry;
}

PipelineRunner make_runner(const ServiceConfig& config) {
    return PipelineRunner(config, make_gateway(config), make_adapter_registry(config));
}

} // namespace testforge
