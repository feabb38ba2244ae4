#pragma once

namespace testforge::cli {

/// Entry point behind tools/testforge. Subcommands:
///   run "<prompt>"   one pipeline run; prints the manifest JSON
///   serve            start the HTTP service
///   metrics          aggregate the run log (--group-by project|language)
/// Exit codes: 0 success, 1 pipeline failure, 2 usage/config error.
int run_cli(int argc, const char* const* argv);

} // namespace testforge::cli
