#include "testforge/errors.hpp"

namespace testforge {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::ambiguous_prompt: return "ambiguous_prompt";
        case ErrorKind::invalid_entity: return "invalid_entity";
        case ErrorKind::project_not_found: return "project_not_found";
        case ErrorKind::ambiguous_project: return "ambiguous_project";
        case ErrorKind::subfolder_not_found: return "subfolder_not_found";
        case ErrorKind::no_sources_found: return "no_sources_found";
        case ErrorKind::provider_error: return "provider_error";
        case ErrorKind::fixture_miss: return "fixture_miss";
        case ErrorKind::prompt_too_large: return "prompt_too_large";
        case ErrorKind::generation_parse_failure: return "generation_parse_failure";
        case ErrorKind::write_failure: return "write_failure";
        case ErrorKind::dot_parse_error: return "dot_parse_error";
        case ErrorKind::compilation_error: return "compilation_error";
        case ErrorKind::execution_environment: return "execution_environment";
        case ErrorKind::result_parse_error: return "result_parse_error";
        case ErrorKind::coverage_parse_error: return "coverage_parse_error";
        case ErrorKind::report_error: return "report_error";
        case ErrorKind::lock_timeout: return "lock_timeout";
        case ErrorKind::config_error: return "config_error";
        case ErrorKind::internal_error: return "internal_error";
    }
    return "internal_error";
}

} // namespace testforge
