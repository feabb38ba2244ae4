#pragma once

#include <map>
#include <memory>

#include "testforge/test_runner.hpp"

namespace testforge {

/// Hermetic adapter: copies canned artifacts from
/// `<artifact_root>/<project dir name>/` instead of invoking a runner.
/// A `compile_error.txt` in that directory simulates a compilation failure
/// (its content becomes the message) and a `delay_ms.txt` makes the adapter
/// sleep, which the concurrency tests use to create measurable overlap.
class StubRunnerAdapter : public RunnerAdapter {
public:
    StubRunnerAdapter(Language language, std::filesystem::path artifact_root)
        : language_(language), artifact_root_(std::move(artifact_root)) {}

    std::string name() const override { return "stub"; }
    Language language() const override { return language_; }
    RunnerArtifacts run(const ProjectContext& context,
                        const std::vector<std::filesystem::path>& test_paths,
                        const std::filesystem::path& artifact_dir,
                        double timeout_s) override;

private:
    Language language_;
    std::filesystem::path artifact_root_;
};

/// Python runner: pytest with a JUnit XML report plus coverage.py's JSON
/// report. Requires python3 with pytest and coverage installed.
class PytestAdapter : public RunnerAdapter {
public:
    explicit PytestAdapter(std::string python = "python3") : python_(std::move(python)) {}

    std::string name() const override { return "pytest"; }
    Language language() const override { return Language::python; }
    RunnerArtifacts run(const ProjectContext& context,
                        const std::vector<std::filesystem::path>& test_paths,
                        const std::filesystem::path& artifact_dir,
                        double timeout_s) override;

    /// Command lines, exposed for tests: (coverage run, coverage json).
    std::pair<std::vector<std::string>, std::vector<std::string>>
    build_commands(const ProjectContext& context,
                   const std::vector<std::filesystem::path>& test_paths,
                   const std::filesystem::path& artifact_dir) const;

private:
    std::string python_;
};

/// Java runner: a Maven `test` invocation with Surefire reports and the
/// JaCoCo XML report. Requires mvn and a project pom with JaCoCo wired in.
class MavenAdapter : public RunnerAdapter {
public:
    std::string name() const override { return "maven"; }
    Language language() const override { return Language::java; }
    RunnerArtifacts run(const ProjectContext& context,
                        const std::vector<std::filesystem::path>& test_paths,
                        const std::filesystem::path& artifact_dir,
                        double timeout_s) override;

    std::vector<std::string> build_command(const ProjectContext& context) const;
};

/// Language -> adapter. The orchestrator looks adapters up by the located
/// project's language.
class AdapterRegistry {
public:
    void register_adapter(std::shared_ptr<RunnerAdapter> adapter);
    std::shared_ptr<RunnerAdapter> for_language(Language lang) const;

private:
    std::map<Language, std::shared_ptr<RunnerAdapter>> adapters_;
};

} // namespace testforge
