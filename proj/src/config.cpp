#include "testforge/service/config.hpp"

#include <cstdlib>

#include <nlohmann/json.hpp>

#include "testforge/errors.hpp"
#include "testforge/util/files.hpp"
#include "testforge/util/strings.hpp"

namespace testforge {

using nlohmann::json;

namespace {

std::optional<std::string> env_value(const std::string& name) {
    const char* value = std::getenv((std::string(kEnvPrefix) + name).c_str());
    if (!value || !*value) return std::nullopt;
    return std::string(value);
}

void apply_json(ServiceConfig& config, const json& file) {
    if (file.contains("workspace_roots")) {
        config.workspace_roots.clear();
        for (const auto& root : file["workspace_roots"])
            config.workspace_roots.emplace_back(root.get<std::string>());
    }
    if (file.contains("output_dir")) config.output_dir = file["output_dir"].get<std::string>();
    if (file.contains("provider")) {
        auto provider = llm::parse_provider(file["provider"].get<std::string>());
        if (!provider) fail(ErrorKind::config_error, "provider: unknown value");
        config.provider = *provider;
    }
    if (file.contains("model")) config.model = file["model"].get<std::string>();
    if (file.contains("credential_env_var"))
        config.credential_env_var = file["credential_env_var"].get<std::string>();
    if (file.contains("gateway_mode")) {
        auto mode = llm::parse_gateway_mode(file["gateway_mode"].get<std::string>());
        if (!mode) fail(ErrorKind::config_error, "gateway_mode: unknown value");
        config.gateway_mode = *mode;
    }
    if (file.contains("fixture_path"))
        config.fixture_path = std::filesystem::path(file["fixture_path"].get<std::string>());
    if (file.contains("llm_timeout_s")) config.llm_timeout_s = file["llm_timeout_s"].get<double>();
    if (file.contains("runner_timeout_s"))
        config.runner_timeout_s = file["runner_timeout_s"].get<double>();
    if (file.contains("prompt_size_budget_bytes"))
        config.prompt_size_budget_bytes = file["prompt_size_budget_bytes"].get<std::size_t>();
    if (file.contains("listen_address"))
        config.listen_address = file["listen_address"].get<std::string>();
    if (file.contains("runner")) {
        std::string runner = file["runner"].get<std::string>();
        if (util::iequals(runner, "real")) config.runner = RunnerKind::real;
        else if (util::iequals(runner, "stub")) config.runner = RunnerKind::stub;
        else fail(ErrorKind::config_error, "runner: must be 'real' or 'stub'");
    }
    if (file.contains("stub_artifact_root"))
        config.stub_artifact_root =
            std::filesystem::path(file["stub_artifact_root"].get<std::string>());
    if (file.contains("lock_timeout_s"))
        config.lock_timeout_s = file["lock_timeout_s"].get<double>();
}

void apply_environment(ServiceConfig& config) {
    if (auto roots = env_value("WORKSPACE_ROOTS")) {
        config.workspace_roots.clear();
        for (const auto& root : util::split(*roots, ":"))
            config.workspace_roots.emplace_back(root);
    }
    if (auto value = env_value("OUTPUT_DIR")) config.output_dir = *value;
    if (auto value = env_value("PROVIDER")) {
        auto provider = llm::parse_provider(*value);
        if (!provider) fail(ErrorKind::config_error, "TESTFORGE_PROVIDER: unknown value");
        config.provider = *provider;
    }
    if (auto value = env_value("MODEL")) config.model = *value;
    if (auto value = env_value("CREDENTIAL_ENV")) config.credential_env_var = *value;
    if (auto value = env_value("MODE")) {
        auto mode = llm::parse_gateway_mode(*value);
        if (!mode) fail(ErrorKind::config_error, "TESTFORGE_MODE: unknown value");
        config.gateway_mode = *mode;
    }
    if (auto value = env_value("FIXTURES")) config.fixture_path = *value;
    if (auto value = env_value("LLM_TIMEOUT_S")) config.llm_timeout_s = std::stod(*value);
    if (auto value = env_value("RUNNER_TIMEOUT_S")) config.runner_timeout_s = std::stod(*value);
    if (auto value = env_value("PROMPT_BUDGET"))
        config.prompt_size_budget_bytes = std::stoull(*value);
    if (auto value = env_value("LISTEN")) config.listen_address = *value;
    if (auto value = env_value("RUNNER")) {
        if (util::iequals(*value, "real")) config.runner = RunnerKind::real;
        else if (util::iequals(*value, "stub")) config.runner = RunnerKind::stub;
        else fail(ErrorKind::config_error, "TESTFORGE_RUNNER: must be 'real' or 'stub'");
    }
    if (auto value = env_value("STUB_ARTIFACTS")) config.stub_artifact_root = *value;
    if (auto value = env_value("LOCK_TIMEOUT_S")) config.lock_timeout_s = std::stod(*value);
}

void apply_flags(ServiceConfig& config, const ConfigOverrides& flags) {
    if (!flags.workspace_roots.empty()) {
        config.workspace_roots.clear();
        for (const auto& root : flags.workspace_roots)
            config.workspace_roots.emplace_back(root);
    }
    if (flags.output_dir) config.output_dir = *flags.output_dir;
    if (flags.provider) {
        auto provider = llm::parse_provider(*flags.provider);
        if (!provider) fail(ErrorKind::config_error, "--provider: unknown value");
        config.provider = *provider;
    }
    if (flags.model) config.model = *flags.model;
    if (flags.credential_env_var) config.credential_env_var = *flags.credential_env_var;
    if (flags.gateway_mode) {
        auto mode = llm::parse_gateway_mode(*flags.gateway_mode);
        if (!mode) fail(ErrorKind::config_error, "--mode: unknown value");
        config.gateway_mode = *mode;
    }
    if (flags.fixture_path) config.fixture_path = *flags.fixture_path;
    if (flags.llm_timeout_s) config.llm_timeout_s = *flags.llm_timeout_s;
    if (flags.runner_timeout_s) config.runner_timeout_s = *flags.runner_timeout_s;
    if (flags.prompt_size_budget_bytes)
        config.prompt_size_budget_bytes = *flags.prompt_size_budget_bytes;
    if (flags.listen_address) config.listen_address = *flags.listen_address;
    if (flags.runner) {
        if (util::iequals(*flags.runner, "real")) config.runner = RunnerKind::real;
        else if (util::iequals(*flags.runner, "stub")) config.runner = RunnerKind::stub;
        else fail(ErrorKind::config_error, "--runner: must be 'real' or 'stub'");
    }
    if (flags.stub_artifact_root) config.stub_artifact_root = *flags.stub_artifact_root;
    if (flags.lock_timeout_s) config.lock_timeout_s = *flags.lock_timeout_s;
}

void validate(const ServiceConfig& config) {
    if (config.workspace_roots.empty())
        fail(ErrorKind::config_error, "workspace_roots: at least one root is required");
    if (config.gateway_mode != llm::GatewayMode::live && !config.fixture_path)
        fail(ErrorKind::config_error,
             std::string("fixture_path: required in ") +
                 std::string(llm::to_string(config.gateway_mode)) + " mode");
    if (config.llm_timeout_s <= 0)
        fail(ErrorKind::config_error, "llm_timeout_s: must be positive");
    if (config.runner_timeout_s <= 0)
        fail(ErrorKind::config_error, "runner_timeout_s: must be positive");
    if (config.lock_timeout_s <= 0)
        fail(ErrorKind::config_error, "lock_timeout_s: must be positive");
    if (config.prompt_size_budget_bytes == 0)
        fail(ErrorKind::config_error, "prompt_size_budget_bytes: must be positive");
    if (config.runner == RunnerKind::stub && !config.stub_artifact_root)
        fail(ErrorKind::config_error, "stub_artifact_root: required with the stub runner");
    auto colon = config.listen_address.rfind(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == config.listen_address.size())
        fail(ErrorKind::config_error, "listen_address: expected host:port");
    try {
        int port = std::stoi(config.listen_address.substr(colon + 1));
        if (port <= 0 || port > 65535) throw std::out_of_range("port");
    } catch (...) {
        fail(ErrorKind::config_error, "listen_address: invalid port");
    }
}

} // namespace

ServiceConfig load_config(const std::optional<std::filesystem::path>& config_file,
                          const ConfigOverrides& flag_overrides) {
    ServiceConfig config;
    if (config_file) {
        auto content = util::read_file(*config_file);
        if (!content)
            fail(ErrorKind::config_error, "config file not readable: " + config_file->string());
        json parsed = json::parse(*content, nullptr, false);
        if (parsed.is_discarded() || !parsed.is_object())
            fail(ErrorKind::config_error, "config file is not a JSON object: " + config_file->string());
        try {
            apply_json(config, parsed);
        } catch (const json::exception& err) {
            fail(ErrorKind::config_error, std::string("config file: ") + err.what());
        }
    }
    apply_environment(config);
    apply_flags(config, flag_overrides);
    validate(config);
    return config;
}

} // namespace testforge
