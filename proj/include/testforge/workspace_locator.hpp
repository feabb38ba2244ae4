#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "testforge/entity_extractor.hpp"
#include "testforge/language.hpp"

namespace testforge {

namespace fs = std::filesystem;

struct SourceFile {
    fs::path relative_path;   // relative to ProjectContext::target_dir
    std::string content;
    std::size_t line_count = 0;
};

struct ProjectContext {
    fs::path root_path;    // project root under a workspace root
    fs::path target_dir;   // root_path or root_path/subfolder
    Language target_language = Language::python;
    std::vector<SourceFile> sources;
};

/// Finds the named project directly under one of the workspace roots
/// (directory-name match, case-insensitive; exactly one match required) and
/// resolves the optional subfolder beneath it. Does not collect sources.
ProjectContext locate_project(const ExtractedEntities& entities,
                              const std::vector<fs::path>& workspace_roots);

/// Recursively collects the language's source files under target_dir, sorted
/// by relative path. Existing test files, hidden directories, and common
/// build/dependency directories are skipped; undecodable files are skipped
/// rather than failing the scan.
ProjectContext collect_sources(ProjectContext context);

} // namespace testforge
