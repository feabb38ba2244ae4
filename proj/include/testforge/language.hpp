#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace testforge {

/// Language of the system under test, not of this tool.
enum class Language { python, java };

std::string_view to_string(Language lang);

/// Case-insensitive parse of "python" / "java". Anything else is nullopt.
std::optional<Language> parse_language(std::string_view text);

/// Source file extension including the dot (".py" / ".java").
std::string_view source_extension(Language lang);

/// True when the basename marks an existing test file for the language
/// (Python: "test_*" or "*_test"; Java: "*Test" or "*Tests").
bool is_test_basename(Language lang, std::string_view stem);

} // namespace testforge
