#include "testforge/util/strings.hpp"

#include <algorithm>
#include <cctype>

namespace testforge::util {

namespace {
bool is_space(unsigned char c) { return std::isspace(c) != 0; }
bool is_word_char(unsigned char c) { return std::isalnum(c) != 0 || c == '_'; }
char lower(unsigned char c) { return static_cast<char>(std::tolower(c)); }
} // namespace

std::string trim(std::string_view text) {
    std::size_t begin = 0;
    std::size_t end = text.size();
    while (begin < end && is_space(static_cast<unsigned char>(text[begin]))) ++begin;
    while (end > begin && is_space(static_cast<unsigned char>(text[end - 1]))) --end;
    return std::string(text.substr(begin, end - begin));
}

std::string to_lower(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return lower(c); });
    return out;
}

bool starts_with_icase(std::string_view text, std::string_view prefix) {
    if (text.size() < prefix.size()) return false;
    return iequals(text.substr(0, prefix.size()), prefix);
}

bool iequals(std::string_view a, std::string_view b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (lower(static_cast<unsigned char>(a[i])) != lower(static_cast<unsigned char>(b[i])))
            return false;
    }
    return true;
}

std::vector<std::string> split(std::string_view text, std::string_view separators) {
    std::vector<std::string> out;
    std::string current;
    for (char c : text) {
        if (separators.find(c) != std::string_view::npos) {
            if (!current.empty()) out.push_back(std::move(current));
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    if (!current.empty()) out.push_back(std::move(current));
    return out;
}

std::vector<std::string> split_lines(std::string_view text) {
    std::vector<std::string> lines;
    std::string current;
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (c == '\r') {
            if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
            lines.push_back(std::move(current));
            current.clear();
        } else if (c == '\n') {
            lines.push_back(std::move(current));
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    if (!current.empty()) lines.push_back(std::move(current));
    return lines;
}

bool contains_word_icase(std::string_view haystack, std::string_view word) {
    if (word.empty() || haystack.size() < word.size()) return false;
    for (std::size_t i = 0; i + word.size() <= haystack.size(); ++i) {
        if (!iequals(haystack.substr(i, word.size()), word)) continue;
        bool left_ok = i == 0 ||
            !is_word_char(static_cast<unsigned char>(haystack[i - 1]));
        std::size_t after = i + word.size();
        bool right_ok = after == haystack.size() ||
            !is_word_char(static_cast<unsigned char>(haystack[after]));
        if (left_ok && right_ok) return true;
    }
    return false;
}

std::string replace_all(std::string text, std::string_view key, std::string_view value) {
    if (key.empty()) return text;
    std::size_t pos = 0;
    while ((pos = text.find(key, pos)) != std::string::npos) {
        text.replace(pos, key.size(), value);
        pos += value.size();
    }
    return text;
}

std::string strip_punct(std::string_view token) {
    static constexpr std::string_view kPunct = ".,;:!?\"'()[]{}<>";
    std::size_t begin = 0;
    std::size_t end = token.size();
    while (begin < end && kPunct.find(token[begin]) != std::string_view::npos) ++begin;
    while (end > begin && kPunct.find(token[end - 1]) != std::string_view::npos) --end;
    return std::string(token.substr(begin, end - begin));
}

std::size_t count_lines(std::string_view content) {
    if (content.empty()) return 0;
    std::size_t lines = static_cast<std::size_t>(
        std::count(content.begin(), content.end(), '\n'));
    if (content.back() != '\n') ++lines;
    return lines;
}

} // namespace testforge::util
