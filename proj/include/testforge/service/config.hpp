#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "testforge/llm/gateway.hpp"

namespace testforge {

/// Runner selection: `real` uses the per-language adapters (pytest, maven);
/// `stub` replays canned artifacts for hermetic operation.
enum class RunnerKind { real, stub };

struct ServiceConfig {
    std::vector<std::filesystem::path> workspace_roots;
    std::filesystem::path output_dir = "runs";
    llm::Provider provider = llm::Provider::gemini;
    std::string model = "gemini-1.5-flash";
    std::string credential_env_var = "GEMINI_API_KEY";
    llm::GatewayMode gateway_mode = llm::GatewayMode::live;
    std::optional<std::filesystem::path> fixture_path;
    double llm_timeout_s = 120.0;
    double runner_timeout_s = 300.0;
    std::size_t prompt_size_budget_bytes = 64 * 1024;
    std::string listen_address = "127.0.0.1:8085";
    RunnerKind runner = RunnerKind::real;
    std::optional<std::filesystem::path> stub_artifact_root;
    double lock_timeout_s = 30.0;

    std::filesystem::path run_log_path() const { return output_dir / "runs.jsonl"; }
};

/// Override layers for load_config, later layers win: defaults <- config
/// file <- TESTFORGE_* environment <- CLI flags. Every field is validated
/// against the ServiceConfig invariants; violations throw config_error
/// naming the field.
struct ConfigOverrides {
    std::vector<std::string> workspace_roots;
    std::optional<std::string> output_dir;
    std::optional<std::string> provider;
    std::optional<std::string> model;
    std::optional<std::string> credential_env_var;
    std::optional<std::string> gateway_mode;
    std::optional<std::string> fixture_path;
    std::optional<double> llm_timeout_s;
    std::optional<double> runner_timeout_s;
    std::optional<std::size_t> prompt_size_budget_bytes;
    std::optional<std::string> listen_address;
    std::optional<std::string> runner;
    std::optional<std::string> stub_artifact_root;
    std::optional<double> lock_timeout_s;
};

ServiceConfig load_config(const std::optional<std::filesystem::path>& config_file,
                          const ConfigOverrides& flag_overrides);

/// Environment variable prefix; e.g. TESTFORGE_MODE, TESTFORGE_FIXTURES.
inline constexpr const char* kEnvPrefix = "TESTFORGE_";

} // namespace testforge
