#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace testforge::util {

std::string trim(std::string_view text);
std::string to_lower(std::string_view text);

bool starts_with_icase(std::string_view text, std::string_view prefix);
bool iequals(std::string_view a, std::string_view b);

/// Splits on any of the given separator characters, dropping empty pieces.
std::vector<std::string> split(std::string_view text, std::string_view separators);

/// Splits into lines on '\n', treating "\r\n" as one break. The final line is
/// included even without a trailing newline.
std::vector<std::string> split_lines(std::string_view text);

/// Whole-word, case-insensitive search: a match may not touch [A-Za-z0-9_]
/// on either side ("java" does not match inside "javascript").
bool contains_word_icase(std::string_view haystack, std::string_view word);

/// Replaces every occurrence of `key` in `text`.
std::string replace_all(std::string text, std::string_view key, std::string_view value);

/// Strips leading and trailing punctuation (.,;:!?"'()[]{}<>) from a token.
std::string strip_punct(std::string_view token);

/// Number of newline-delimited lines; a trailing fragment without '\n'
/// counts as a line. Empty content has zero lines.
std::size_t count_lines(std::string_view content);

} // namespace testforge::util
