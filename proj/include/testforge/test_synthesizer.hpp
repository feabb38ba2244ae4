#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "testforge/llm/gateway.hpp"
#include "testforge/workspace_locator.hpp"

namespace testforge {

struct TestRationale {
    std::string source_file;    // relative path of the file under test
    std::string function_name;
    std::vector<std::string> basic_cases;  // non-empty
    std::vector<std::string> edge_cases;   // empty renders as "Not applicable"

    bool operator==(const TestRationale&) const = default;
};

struct GeneratedTestFile {
    std::filesystem::path relative_path;
    std::string content;  // normalized to end with a newline

    bool operator==(const GeneratedTestFile&) const = default;
};

struct GeneratedTestSuite {
    std::vector<GeneratedTestFile> test_files;  // non-empty on success
    std::vector<TestRationale> rationales;

    bool operator==(const GeneratedTestSuite&) const = default;
};

/// Deterministic generation prompt: each source embedded under a
/// `FILE: <path>` header inside a fenced block, in sorted path order, plus
/// the response-contract instructions. Throws prompt_too_large when the
/// combined source content exceeds `budget_bytes`.
std::string build_generation_prompt(const std::vector<SourceFile>& sources,
                                    Language target_language,
                                    std::size_t budget_bytes);

/// Extracts every `FILE:`-labelled fenced block as a test file and the
/// RATIONALE section into records. Surrounding prose is tolerated. File
/// basenames are normalized to the language's test naming convention.
/// Throws generation_parse_failure when no test file is recoverable.
GeneratedTestSuite parse_generation_response(const std::string& response,
                                             Language target_language);

/// Inverse of parse_generation_response for well-formed suites; this is the
/// documented response layout the LLM is asked for, and what the stub
/// provider emits.
std::string render_generation_response(const GeneratedTestSuite& suite, Language target_language);

/// Writes the suite into the project (paths resolved against
/// context.target_dir; traversal outside it is rejected). Existing files are
/// overwritten: regeneration replaces, never appends. Returns absolute paths.
std::vector<std::filesystem::path> write_test_files(const GeneratedTestSuite& suite,
                                                    const ProjectContext& context);

/// build_generation_prompt -> gateway -> parse_generation_response.
GeneratedTestSuite generate_tests(const std::vector<SourceFile>& sources,
                                  Language target_language,
                                  llm::LlmGateway& gateway,
                                  std::size_t budget_bytes);

} // namespace testforge
