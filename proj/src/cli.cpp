#include "testforge/service/cli.hpp"

#include <iostream>

#include <CLI11.hpp>

#include "testforge/metrics.hpp"
#include "testforge/pipeline_orchestrator.hpp"
#include "testforge/service/http_service.hpp"
#include "testforge/util/files.hpp"
#include "testforge/util/strings.hpp"

namespace testforge::cli {

namespace {

struct GlobalFlags {
    std::string config_file;
    ConfigOverrides overrides;
    bool record = false;
    bool replay = false;
};

void add_global_options(CLI::App& app, GlobalFlags& flags) {
    app.add_option("--config", flags.config_file, "JSON config file");
    app.add_option("--workspace-root", flags.overrides.workspace_roots,
                   "workspace root directory (repeatable)");
    app.add_option("--output-dir", flags.overrides.output_dir, "run output directory");
    app.add_option("--provider", flags.overrides.provider, "LLM provider: gemini|chatgpt|stub");
    app.add_option("--model", flags.overrides.model, "model name");
    app.add_option("--credential-env", flags.overrides.credential_env_var,
                   "environment variable holding the provider credential");
    app.add_option("--mode", flags.overrides.gateway_mode, "gateway mode: live|record|replay");
    app.add_flag("--record", flags.record, "shorthand for --mode record");
    app.add_flag("--replay", flags.replay, "shorthand for --mode replay");
    app.add_option("--fixtures", flags.overrides.fixture_path, "LLM fixture file (JSONL)");
    app.add_option("--llm-timeout", flags.overrides.llm_timeout_s, "per-request LLM timeout (s)");
    app.add_option("--runner-timeout", flags.overrides.runner_timeout_s, "test runner timeout (s)");
    app.add_option("--prompt-budget", flags.overrides.prompt_size_budget_bytes,
                   "max bytes of source per generation prompt");
    app.add_option("--listen", flags.overrides.listen_address, "host:port for serve");
    app.add_option("--runner", flags.overrides.runner, "runner adapters: real|stub");
    app.add_option("--stub-artifacts", flags.overrides.stub_artifact_root,
                   "canned artifact root for the stub runner");
    app.add_option("--lock-timeout", flags.overrides.lock_timeout_s, "project lock timeout (s)");
}

ServiceConfig resolve_config(GlobalFlags& flags) {
    if (flags.record && flags.replay)
        fail(ErrorKind::config_error, "--record and --replay are mutually exclusive");
    if (flags.record) flags.overrides.gateway_mode = "record";
    if (flags.replay) flags.overrides.gateway_mode = "replay";
    std::optional<std::filesystem::path> config_file;
    if (!flags.config_file.empty()) config_file = flags.config_file;
    return load_config(config_file, flags.overrides);
}

int command_run(GlobalFlags& flags, const std::string& prompt) {
    ServiceConfig config = resolve_config(flags);
    PipelineRunner runner = make_runner(config);
    RunRecord record = runner.run(prompt);

    auto manifest_path = config.output_dir / record.run_id / "manifest.json";
    if (auto manifest = util::read_file(manifest_path)) std::cout << *manifest;
    else std::cout << record.to_json().dump(2) << "\n";
    return record.success ? 0 : 1;
}

int command_serve(GlobalFlags& flags) {
    ServiceConfig config = resolve_config(flags);
    HttpService service(config);
    std::cout << "listening on " << config.listen_address << "\n";
    if (!service.serve()) {
        std::cerr << "error: cannot bind " << config.listen_address << "\n";
        return 1;
    }
    return 0;
}

int command_metrics(GlobalFlags& flags, const std::string& group_by_name,
                    const std::string& run_log_override) {
    ServiceConfig config = resolve_config(flags);
    GroupBy group_by;
    if (util::iequals(group_by_name, "project")) group_by = GroupBy::project;
    else if (util::iequals(group_by_name, "language")) group_by = GroupBy::language;
    else fail(ErrorKind::config_error, "--group-by: must be 'project' or 'language'");

    std::filesystem::path log_path = run_log_override.empty()
                                         ? config.run_log_path()
                                         : std::filesystem::path(run_log_override);
    auto records = read_run_log(log_path);
    if (records.empty()) {
        std::cout << "run log is empty: " << log_path.string() << "\n";
        return 0;
    }
    std::cout << render_metrics_table(aggregate_metrics(records, group_by));
    return 0;
}

} // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"LLM-driven unit test generation, execution and reporting"};
    app.require_subcommand(1);
    GlobalFlags flags;
    add_global_options(app, flags);

    std::string prompt;
    auto* run_cmd = app.add_subcommand("run", "execute one pipeline run");
    run_cmd->fallthrough();
    run_cmd->add_option("prompt", prompt, "natural-language testing command")->required();

    auto* serve_cmd = app.add_subcommand("serve", "start the HTTP service");
    serve_cmd->fallthrough();

    std::string group_by = "project";
    std::string run_log_override;
    auto* metrics_cmd = app.add_subcommand("metrics", "aggregate recorded runs");
    metrics_cmd->fallthrough();
    metrics_cmd->add_option("--group-by", group_by, "project|language")->required();
    metrics_cmd->add_option("--run-log", run_log_override, "run log path override");

    try {
        app.parse(argc, const_cast<char**>(argv));
    } catch (const CLI::CallForHelp& help) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& err) {
        std::cerr << err.what() << "\n" << app.help();
        return 2;
    }

    try {
        if (run_cmd->parsed()) {
            if (util::trim(prompt).empty()) {
                std::cerr << "error: prompt must be non-empty\n";
                return 2;
            }
            return command_run(flags, prompt);
        }
        if (serve_cmd->parsed()) return command_serve(flags);
        if (metrics_cmd->parsed()) return command_metrics(flags, group_by, run_log_override);
    } catch (const PipelineError& err) {
        if (err.kind() == ErrorKind::config_error) {
            std::cerr << "config error: " << err.what() << "\n";
            return 2;
        }
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
    return 2;
}

} // namespace testforge::cli
