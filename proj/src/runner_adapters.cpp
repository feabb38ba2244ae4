#include "testforge/runner_adapters.hpp"

#include <chrono>
#include <thread>

#include "testforge/errors.hpp"
#include "testforge/util/files.hpp"
#include "testforge/util/strings.hpp"
#include "testforge/util/subprocess.hpp"

namespace testforge {

namespace fs = std::filesystem;

RunnerArtifacts StubRunnerAdapter::run(const ProjectContext& context,
                                       const std::vector<fs::path>& /*test_paths*/,
                                       const fs::path& artifact_dir,
                                       double /*timeout_s*/) {
    fs::path canned = artifact_root_ / context.root_path.filename();
    std::error_code ec;
    if (!fs::is_directory(canned, ec))
        fail(ErrorKind::execution_environment,
             "no canned runner artifacts under " + canned.string());

    if (auto message = util::read_file(canned / "compile_error.txt"))
        fail(ErrorKind::compilation_error, util::trim(*message));

    if (auto delay_text = util::read_file(canned / "delay_ms.txt")) {
        try {
            int delay_ms = std::stoi(util::trim(*delay_text));
            std::this_thread::sleep_for(std::chrono::milliseconds(delay_ms));
        } catch (...) {
            // unreadable delay file: ignore
        }
    }

    fs::create_directories(artifact_dir, ec);
    RunnerArtifacts artifacts;
    fs::path results = canned / "results.xml";
    if (!fs::exists(results, ec))
        fail(ErrorKind::execution_environment,
             "canned artifacts lack results.xml in " + canned.string());
    artifacts.results_path = artifact_dir / "results.xml";
    fs::copy_file(results, artifacts.results_path, fs::copy_options::overwrite_existing, ec);
    if (ec)
        fail(ErrorKind::execution_environment, "cannot stage results artifact: " + ec.message());

    for (const char* name : {"coverage.json", "coverage.xml"}) {
        fs::path coverage = canned / name;
        if (fs::exists(coverage, ec)) {
            artifacts.coverage_path = artifact_dir / name;
            fs::copy_file(coverage, artifacts.coverage_path,
                          fs::copy_options::overwrite_existing, ec);
            break;
        }
    }
    if (artifacts.coverage_path.empty())
        fail(ErrorKind::execution_environment,
             "canned artifacts lack a coverage file in " + canned.string());
    artifacts.runner_log = "stub adapter: staged artifacts from " + canned.string();
    return artifacts;
}

std::pair<std::vector<std::string>, std::vector<std::string>>
PytestAdapter::build_commands(const ProjectContext& context,
                              const std::vector<fs::path>& test_paths,
                              const fs::path& artifact_dir) const {
    std::vector<std::string> run_cmd = {
        python_, "-m", "coverage", "run", "-m", "pytest", "-q",
        "--junitxml=" + (artifact_dir / "results.xml").string()};
    for (const auto& test : test_paths)
        run_cmd.push_back(test.lexically_relative(context.target_dir).string());

    std::vector<std::string> json_cmd = {
        python_, "-m", "coverage", "json", "-o", (artifact_dir / "coverage.json").string()};
    return {run_cmd, json_cmd};
}

RunnerArtifacts PytestAdapter::run(const ProjectContext& context,
                                   const std::vector<fs::path>& test_paths,
                                   const fs::path& artifact_dir,
                                   double timeout_s) {
    if (!util::find_executable(python_))
        fail(ErrorKind::execution_environment, "runner not found on PATH: " + python_);

    std::error_code ec;
    fs::create_directories(artifact_dir, ec);
    auto [run_cmd, json_cmd] = build_commands(context, test_paths, artifact_dir);

    auto run = util::run_process(run_cmd, context.target_dir, timeout_s);
    if (run.timed_out)
        fail(ErrorKind::execution_environment,
             "pytest timed out after " + std::to_string(timeout_s) + "s");
    // pytest exit 2 with a collection error usually means the generated
    // tests do not even import; surface that as a compilation-class failure.
    if (run.exit_code == 2 && run.stdout_text.find("SyntaxError") != std::string::npos)
        fail(ErrorKind::compilation_error,
             "generated tests failed to import:\n" + run.stdout_text);
    if (run.exit_code == 127)
        fail(ErrorKind::execution_environment, "pytest could not be executed");

    auto json_report = util::run_process(json_cmd, context.target_dir, timeout_s);
    if (json_report.exit_code != 0)
        fail(ErrorKind::execution_environment,
             "coverage json report failed:\n" + json_report.stderr_text);

    RunnerArtifacts artifacts;
    artifacts.results_path = artifact_dir / "results.xml";
    artifacts.coverage_path = artifact_dir / "coverage.json";
    artifacts.exit_code = run.exit_code;
    artifacts.runner_log = run.stdout_text + run.stderr_text;
    if (!fs::exists(artifacts.results_path, ec))
        fail(ErrorKind::execution_environment,
             "pytest produced no results.xml:\n" + artifacts.runner_log);
    return artifacts;
}

std::vector<std::string> MavenAdapter::build_command(const ProjectContext& context) const {
    return {"mvn", "-q", "-f", (context.root_path / "pom.xml").string(),
            "test", "jacoco:report"};
}

RunnerArtifacts MavenAdapter::run(const ProjectContext& context,
                                  const std::vector<fs::path>& /*test_paths*/,
                                  const fs::path& artifact_dir,
                                  double timeout_s) {
    if (!util::find_executable("mvn"))
        fail(ErrorKind::execution_environment, "runner not found on PATH: mvn");

    std::error_code ec;
    fs::create_directories(artifact_dir, ec);
    auto result = util::run_process(build_command(context), context.root_path, timeout_s);
    if (result.timed_out)
        fail(ErrorKind::execution_environment,
             "maven timed out after " + std::to_string(timeout_s) + "s");
    if (result.stdout_text.find("COMPILATION ERROR") != std::string::npos)
        fail(ErrorKind::compilation_error,
             "generated tests failed to compile:\n" + result.stdout_text);
    if (result.exit_code == 127)
        fail(ErrorKind::execution_environment, "maven could not be executed");

    RunnerArtifacts artifacts;
    artifacts.results_path = context.root_path / "target" / "surefire-reports";
    artifacts.coverage_path = context.root_path / "target" / "site" / "jacoco" / "jacoco.xml";
    artifacts.exit_code = result.exit_code;
    artifacts.runner_log = result.stdout_text + result.stderr_text;
    if (!fs::exists(artifacts.results_path, ec))
        fail(ErrorKind::execution_environment,
             "maven produced no surefire reports:\n" + artifacts.runner_log);
    return artifacts;
}

void AdapterRegistry::register_adapter(std::shared_ptr<RunnerAdapter> adapter) {
    adapters_[adapter->language()] = std::move(adapter);
}

std::shared_ptr<RunnerAdapter> AdapterRegistry::for_language(Language lang) const {
    auto it = adapters_.find(lang);
    if (it == adapters_.end())
        fail(ErrorKind::execution_environment,
             "no runner adapter registered for " + std::string(to_string(lang)));
    return it->second;
}

} // namespace testforge
