#include "testforge/entity_extractor.hpp"

#include <array>
#include <vector>

#include "testforge/prompt_assets.hpp"
#include "testforge/util/strings.hpp"

namespace testforge {

namespace {

bool has_path_separator(std::string_view text) {
    return text.find('/') != std::string_view::npos ||
           text.find('\\') != std::string_view::npos;
}

// Words that can never be a project or folder name in the grammar.
bool is_stopword(const std::string& lowered) {
    static const std::array<std::string_view, 34> kStopwords = {
        "a",      "an",     "and",   "based",    "create", "folder", "for",
        "from",   "generate", "in",  "is",       "java",   "make",   "my",
        "named",  "of",     "on",    "or",       "please", "project", "python",
        "some",   "specifically", "test", "tests", "that", "the",    "this",
        "to",     "under",  "unit",  "using",    "with",   "written",
    };
    for (auto word : kStopwords)
        if (lowered == word) return true;
    return false;
}

bool is_name_candidate(const std::string& token) {
    if (token.empty()) return false;
    if (has_path_separator(token)) return false;
    return !is_stopword(util::to_lower(token));
}

// Token after the keyword if it names something, otherwise the token before.
std::optional<std::string> slot_around_keyword(const std::vector<std::string>& tokens,
                                               std::string_view keyword) {
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (!util::iequals(tokens[i], keyword)) continue;
        if (i + 1 < tokens.size() && is_name_candidate(tokens[i + 1]))
            return tokens[i + 1];
        if (i > 0 && is_name_candidate(tokens[i - 1]))
            return tokens[i - 1];
    }
    return std::nullopt;
}

} // namespace

ExtractedEntities validate_entities(const std::map<std::string, std::string>& raw) {
    auto get = [&raw](const char* key) -> std::string {
        auto it = raw.find(key);
        return it == raw.end() ? std::string() : util::trim(it->second);
    };

    std::string project = get("project");
    if (project.empty() || util::iequals(project, "unknown") || util::iequals(project, "none"))
        fail(ErrorKind::ambiguous_prompt, "no project name could be determined");
    if (has_path_separator(project))
        fail(ErrorKind::invalid_entity, "project name contains a path separator: " + project);

    std::string language_text = get("language");
    if (language_text.empty() || util::iequals(language_text, "unknown"))
        fail(ErrorKind::ambiguous_prompt, "no target language could be determined");
    auto language = parse_language(language_text);
    if (!language)
        fail(ErrorKind::invalid_entity, "unsupported language: " + language_text);

    ExtractedEntities entities;
    entities.project_name = project;
    entities.target_language = *language;

    std::string folder = get("folder");
    if (!folder.empty() && !util::iequals(folder, "none")) {
        if (has_path_separator(folder))
            fail(ErrorKind::invalid_entity, "subfolder is not a single path segment: " + folder);
        entities.subfolder = folder;
    }
    return entities;
}

ExtractedEntities parse_prompt_fallback(const std::string& prompt) {
    std::string trimmed = util::trim(prompt);
    if (trimmed.empty())
        fail(ErrorKind::ambiguous_prompt, "prompt is empty");

    bool python = util::contains_word_icase(trimmed, "python");
    bool java = util::contains_word_icase(trimmed, "java");
    if (python && java)
        fail(ErrorKind::ambiguous_prompt, "prompt names both Python and Java");

    std::vector<std::string> tokens;
    for (const auto& raw : util::split(trimmed, " \t\n\r")) {
        std::string cleaned = util::strip_punct(raw);
        if (!cleaned.empty()) tokens.push_back(cleaned);
    }

    std::map<std::string, std::string> raw;
    if (python) raw["language"] = "Python";
    if (java) raw["language"] = "Java";
    if (auto project = slot_around_keyword(tokens, "project")) raw["project"] = *project;
    if (auto folder = slot_around_keyword(tokens, "folder")) raw["folder"] = *folder;

    if (!raw.count("project"))
        fail(ErrorKind::ambiguous_prompt, "prompt does not name a project");
    return validate_entities(raw);
}

std::string build_entity_prompt(const std::string& command) {
    return util::replace_all(assets::extract_entities_template(), "{{command}}", command);
}

std::map<std::string, std::string> parse_entity_answer(const std::string& answer) {
    std::map<std::string, std::string> raw;
    for (const auto& line : util::split_lines(answer)) {
        std::string stripped = util::trim(line);
        for (const char* key : {"project", "folder", "language"}) {
            std::string prefix = std::string(key) + ":";
            if (util::starts_with_icase(stripped, prefix)) {
                raw[key] = util::trim(stripped.substr(prefix.size()));
                break;
            }
        }
    }
    return raw;
}

ExtractedEntities extract_entities(const std::string& prompt, llm::LlmGateway& gateway) {
    std::string trimmed = util::trim(prompt);
    if (trimmed.empty())
        fail(ErrorKind::ambiguous_prompt, "prompt is empty");

    // LLM first; any provider trouble or unusable answer falls through to the
    // deterministic grammar.
    try {
        auto exchange = gateway.complete(gateway.make_request(build_entity_prompt(trimmed)));
        return validate_entities(parse_entity_answer(exchange.response_text));
    } catch (const PipelineError&) {
        return parse_prompt_fallback(trimmed);
    }
}

} // namespace testforge
