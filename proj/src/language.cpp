#include "testforge/language.hpp"

#include "testforge/util/strings.hpp"

namespace testforge {

std::string_view to_string(Language lang) {
    return lang == Language::python ? "Python" : "Java";
}

std::optional<Language> parse_language(std::string_view text) {
    if (util::iequals(text, "python")) return Language::python;
    if (util::iequals(text, "java")) return Language::java;
    return std::nullopt;
}

std::string_view source_extension(Language lang) {
    return lang == Language::python ? ".py" : ".java";
}

bool is_test_basename(Language lang, std::string_view stem) {
    if (lang == Language::python) {
        if (stem.size() >= 5 && stem.substr(0, 5) == "test_") return true;
        if (stem.size() >= 5 && stem.substr(stem.size() - 5) == "_test") return true;
        return false;
    }
    if (stem.size() >= 4 && stem.substr(stem.size() - 4) == "Test") return true;
    if (stem.size() >= 5 && stem.substr(stem.size() - 5) == "Tests") return true;
    return false;
}

} // namespace testforge
