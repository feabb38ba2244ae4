#include "testforge/util/files.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "testforge/util/strings.hpp"

#include <unistd.h>

namespace testforge::util {

std::optional<std::string> read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) return std::nullopt;
    return buffer.str();
}

void write_file(const fs::path& path, std::string_view content) {
    std::error_code ec;
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path(), ec);
        if (ec) throw std::runtime_error("cannot create directory " +
                                         path.parent_path().string() + ": " + ec.message());
    }
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw std::runtime_error("short write to " + tmp.string());
    }
    fs::rename(tmp, path, ec);
    if (ec) throw std::runtime_error("cannot move " + tmp.string() + " into place: " + ec.message());
}

void append_line(const fs::path& path, std::string_view line) {
    std::error_code ec;
    if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary | std::ios::app);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for append");
    out.write(line.data(), static_cast<std::streamsize>(line.size()));
    out.put('\n');
    if (!out) throw std::runtime_error("short append to " + path.string());
}

bool path_within(const fs::path& root, const fs::path& candidate) {
    fs::path base = root.lexically_normal();
    fs::path target = (candidate.is_absolute() ? candidate : root / candidate).lexically_normal();
    auto base_it = base.begin();
    auto target_it = target.begin();
    for (; base_it != base.end(); ++base_it, ++target_it) {
        if (base_it->empty()) continue;  // trailing slash artifact
        if (target_it == target.end() || *base_it != *target_it) return false;
    }
    for (; target_it != target.end(); ++target_it) {
        if (*target_it == "..") return false;
    }
    return true;
}

std::optional<fs::path> find_executable(const std::string& name) {
    if (name.find('/') != std::string::npos) {
        fs::path direct(name);
        if (fs::exists(direct) && ::access(direct.c_str(), X_OK) == 0) return direct;
        return std::nullopt;
    }
    const char* path_env = std::getenv("PATH");
    if (!path_env) return std::nullopt;
    for (const auto& dir : split(path_env, ":")) {
        fs::path candidate = fs::path(dir) / name;
        std::error_code ec;
        if (fs::exists(candidate, ec) && ::access(candidate.c_str(), X_OK) == 0)
            return candidate;
    }
    return std::nullopt;
}

} // namespace testforge::util
