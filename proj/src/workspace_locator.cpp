#include "testforge/workspace_locator.hpp"

#include <algorithm>
#include <array>

#include "testforge/errors.hpp"
#include "testforge/util/files.hpp"
#include "testforge/util/strings.hpp"

namespace testforge {

namespace {

bool is_skipped_directory(const fs::path& dir) {
    std::string name = dir.filename().string();
    if (!name.empty() && name.front() == '.') return true;  // VCS metadata etc.
    static const std::array<std::string_view, 9> kSkipped = {
        "__pycache__", "node_modules", "venv", "build", "target",
        "dist", "out", "bin", "obj",
    };
    return std::find(kSkipped.begin(), kSkipped.end(), name) != kSkipped.end();
}

std::optional<fs::path> match_child_dir(const fs::path& parent, const std::string& name) {
    std::error_code ec;
    // exact match wins over case-insensitive
    fs::path exact = parent / name;
    if (fs::is_directory(exact, ec)) return exact;
    for (const auto& entry : fs::directory_iterator(parent, ec)) {
        if (!entry.is_directory(ec)) continue;
        if (util::iequals(entry.path().filename().string(), name)) return entry.path();
    }
    return std::nullopt;
}

} // namespace

ProjectContext locate_project(const ExtractedEntities& entities,
                              const std::vector<fs::path>& workspace_roots) {
    if (workspace_roots.empty())
        fail(ErrorKind::config_error, "no workspace roots configured");

    std::vector<fs::path> matches;
    for (const auto& root : workspace_roots) {
        std::error_code ec;
        if (!fs::is_directory(root, ec)) continue;
        for (const auto& entry : fs::directory_iterator(root, ec)) {
            if (!entry.is_directory(ec)) continue;
            if (util::iequals(entry.path().filename().string(), entities.project_name))
                matches.push_back(entry.path());
        }
    }
    std::sort(matches.begin(), matches.end());

    if (matches.empty()) {
        std::string roots;
        for (const auto& root : workspace_roots) {
            if (!roots.empty()) roots += ", ";
            roots += root.string();
        }
        fail(ErrorKind::project_not_found,
             "project '" + entities.project_name + "' not found under: " + roots);
    }
    if (matches.size() > 1) {
        std::string candidates;
        for (const auto& match : matches) {
            if (!candidates.empty()) candidates += ", ";
            candidates += match.string();
        }
        fail(ErrorKind::ambiguous_project,
             "project '" + entities.project_name + "' matches multiple directories: " + candidates);
    }

    ProjectContext context;
    context.root_path = fs::weakly_canonical(matches.front());
    context.target_language = entities.target_language;
    if (entities.subfolder) {
        auto sub = match_child_dir(context.root_path, *entities.subfolder);
        if (!sub)
            fail(ErrorKind::subfolder_not_found,
                 "subfolder '" + *entities.subfolder + "' does not exist under " +
                     context.root_path.string());
        context.target_dir = fs::weakly_canonical(*sub);
    } else {
        context.target_dir = context.root_path;
    }
    return context;
}

ProjectContext collect_sources(ProjectContext context) {
    std::error_code ec;
    if (!fs::is_directory(context.target_dir, ec))
        fail(ErrorKind::project_not_found,
             "target directory vanished: " + context.target_dir.string());

    const std::string extension(source_extension(context.target_language));
    std::vector<SourceFile> sources;

    fs::recursive_directory_iterator it(context.target_dir, ec), end;
    while (it != end) {
        if (it->is_directory(ec)) {
            if (is_skipped_directory(it->path())) it.disable_recursion_pending();
            it.increment(ec);
            continue;
        }
        fs::path path = it->path();
        it.increment(ec);

        if (path.extension() != extension) continue;
        std::string stem = path.stem().string();
        if (is_test_basename(context.target_language, stem)) continue;

        auto content = util::read_file(path);
        if (!content) continue;
        if (content->find('\0') != std::string::npos) continue;  // not text

        SourceFile file;
        file.relative_path = path.lexically_relative(context.target_dir);
        file.line_count = util::count_lines(*content);
        file.content = std::move(*content);
        if (!util::path_within(context.target_dir, path)) continue;
        sources.push_back(std::move(file));
    }

    std::sort(sources.begin(), sources.end(), [](const SourceFile& a, const SourceFile& b) {
        return a.relative_path.generic_string() < b.relative_path.generic_string();
    });

    if (sources.empty())
        fail(ErrorKind::no_sources_found,
             "no " + std::string(to_string(context.target_language)) +
                 " sources under " + context.target_dir.string());

    context.sources = std::move(sources);
    return context;
}

} // namespace testforge
