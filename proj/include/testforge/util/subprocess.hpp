#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace testforge::util {

struct ProcessResult {
    int exit_code = -1;
    bool timed_out = false;
    std::string stdout_text;
    std::string stderr_text;
};

/// Runs argv[0] with the given arguments (no shell), working directory `cwd`,
/// capturing both streams. Kills the process after `timeout_s` seconds and
/// reports timed_out. exit_code is -signal for signal deaths and 127 when the
/// binary cannot be executed.
ProcessResult run_process(const std::vector<std::string>& argv,
                          const std::filesystem::path& cwd,
                          double timeout_s);

} // namespace testforge::util
