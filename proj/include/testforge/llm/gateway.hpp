#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>

#include "testforge/errors.hpp"

namespace testforge::llm {

enum class Provider { gemini, chatgpt, stub };
enum class GatewayMode { live, record, replay };

std::string_view to_string(Provider provider);
std::optional<Provider> parse_provider(std::string_view text);
std::string_view to_string(GatewayMode mode);
std::optional<GatewayMode> parse_gateway_mode(std::string_view text);

struct LlmRequest {
    Provider provider = Provider::stub;
    std::string model;
    std::string prompt;
    int max_output = 8192;        // provider-defined unit (tokens or characters)
    double temperature = 0.2;     // [0, 2]
};

struct LlmExchange {
    std::string request_key;
    std::string response_text;
    std::int64_t latency_ms = 0;
};

/// Key for the fixture store. Stable, documented algorithm:
///   sha256(provider-name "\n" model "\n" normalized-prompt)
/// where the prompt is normalized by converting CRLF/CR line endings to LF
/// and trimming leading/trailing whitespace. Hex-encoded, 64 chars.
std::string fixture_key(const LlmRequest& request);

/// Prompt normalization used by fixture_key (exposed for tests).
std::string normalize_prompt(std::string_view prompt);

/// Moves text between the gateway and one concrete provider endpoint.
/// Implementations throw PipelineError(provider_error) on transport trouble.
class Transport {
public:
    virtual ~Transport() = default;
    virtual std::string send(const LlmRequest& request, double timeout_s) = 0;
};

/// Append-only store of prompt/response exchanges, one JSON object per line
/// with fields: request_key, provider, model, prompt, response_text,
/// latency_ms. The file format is part of the artifact's public contract.
class FixtureStore {
public:
    FixtureStore() = default;

    static FixtureStore load(const std::filesystem::path& path);

    std::optional<LlmExchange> find(const std::string& key) const;
    void append(const std::filesystem::path& path, const LlmRequest& request,
                const LlmExchange& exchange);
    std::size_t size() const { return exchanges_.size(); }

private:
    std::unordered_map<std::string, LlmExchange> exchanges_;
};

struct RetryPolicy {
    int max_attempts = 3;
    double initial_backoff_s = 0.1;  // doubled after each failed attempt
};

struct GatewayOptions {
    Provider provider = Provider::stub;
    std::string model = "stub-1";
    GatewayMode mode = GatewayMode::replay;
    std::optional<std::filesystem::path> fixture_path;
    std::string credential_env_var;       // name only; value read at call time
    double request_timeout_s = 120.0;
    RetryPolicy retry;
};

/// Provider-agnostic LLM access. In replay mode no transport call is ever
/// made; a missing fixture fails loudly with fixture_miss rather than
/// silently going live.
class LlmGateway {
public:
    LlmGateway(GatewayOptions options, std::shared_ptr<Transport> transport);

    LlmExchange complete(const LlmRequest& request) { return complete(request, options_.mode); }
    LlmExchange complete(const LlmRequest& request, GatewayMode mode);

    /// Builds a request from the gateway's configured provider/model.
    LlmRequest make_request(std::string prompt) const;

    const GatewayOptions& options() const { return options_; }

private:
    LlmExchange call_live(const LlmRequest& request);

    GatewayOptions options_;
    std::shared_ptr<Transport> transport_;
    FixtureStore store_;
    std::mutex append_mutex_;
};

/// Transport for the configured provider: HTTPS for gemini/chatgpt, the
/// deterministic stub for Provider::stub.
std::shared_ptr<Transport> make_transport(Provider provider, const std::string& credential_env_var);

} // namespace testforge::llm
