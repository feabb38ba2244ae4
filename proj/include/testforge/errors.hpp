#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace testforge {

/// Every failure the pipeline can surface. The orchestrator maps
/// (stage, kind) pairs onto the run failure categories; everything here is
/// thrown as a PipelineError so stages stay exception-boundary compatible.
enum class ErrorKind {
    ambiguous_prompt,
    invalid_entity,
    project_not_found,
    ambiguous_project,
    subfolder_not_found,
    no_sources_found,
    provider_error,
    fixture_miss,
    prompt_too_large,
    generation_parse_failure,
    write_failure,
    dot_parse_error,
    compilation_error,
    execution_environment,
    result_parse_error,
    coverage_parse_error,
    report_error,
    lock_timeout,
    config_error,
    internal_error,
};

std::string_view to_string(ErrorKind kind);

class PipelineError : public std::runtime_error {
public:
    PipelineError(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
    throw PipelineError(kind, message);
}

} // namespace testforge
