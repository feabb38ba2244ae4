#pragma once

#include <filesystem>
#include <optional>
#include <string>

namespace testforge::util {

namespace fs = std::filesystem;

/// Whole-file read. nullopt when the file cannot be opened.
std::optional<std::string> read_file(const fs::path& path);

/// Creates parent directories and writes content atomically enough for our
/// purposes (write to temp sibling, rename). Throws std::runtime_error on
/// filesystem failure.
void write_file(const fs::path& path, std::string_view content);

void append_line(const fs::path& path, std::string_view line);

/// True when `candidate`, resolved lexically against `root`, stays inside
/// `root`. Neither path needs to exist.
bool path_within(const fs::path& root, const fs::path& candidate);

/// Searches the PATH environment variable for an executable. Returns the
/// full path or nullopt.
std::optional<fs::path> find_executable(const std::string& name);

} // namespace testforge::util
