#pragma once

#include <map>
#include <optional>
#include <string>

#include "testforge/language.hpp"
#include "testforge/llm/gateway.hpp"

namespace testforge {

/// Project slots recovered from a free-form testing command.
struct ExtractedEntities {
    std::string project_name;              // non-empty, no path separators
    std::optional<std::string> subfolder;  // single path segment when present
    Language target_language = Language::python;

    bool operator==(const ExtractedEntities&) const = default;
};

/// Enforces the ExtractedEntities invariants on a raw key/value answer
/// (keys: "project", "folder", "language"; folder may be absent or "none").
/// Throws ambiguous_prompt for missing required slots and invalid_entity for
/// path separators or unsupported languages.
ExtractedEntities validate_entities(const std::map<std::string, std::string>& raw);

/// Deterministic keyword grammar, the hermetic floor under the LLM path:
/// language from a whole-word "python"/"java" mention, the project name from
/// the token after (or before) "project", the subfolder from the token after
/// (or before) "folder". Pure function of the prompt.
ExtractedEntities parse_prompt_fallback(const std::string& prompt);

/// LLM-first extraction with the grammar as fallback: asks the gateway for a
/// three-line key/value answer, validates it, and on provider trouble or an
/// unusable answer falls back to parse_prompt_fallback. Throws
/// ambiguous_prompt when neither path can fill the required slots.
ExtractedEntities extract_entities(const std::string& prompt, llm::LlmGateway& gateway);

/// Renders the versioned extraction prompt for a user command.
std::string build_entity_prompt(const std::string& command);

/// Parses the three-line "project:/folder:/language:" answer into the raw
/// map consumed by validate_entities. Lines that match no key are ignored.
std::map<std::string, std::string> parse_entity_answer(const std::string& answer);

} // namespace testforge
