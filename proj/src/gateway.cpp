#include "testforge/llm/gateway.hpp"

#include <chrono>
#include <thread>

#include <nlohmann/json.hpp>

#include "testforge/util/files.hpp"
#include "testforge/util/sha256.hpp"
#include "testforge/util/strings.hpp"

namespace testforge::llm {

using nlohmann::json;

std::string_view to_string(Provider provider) {
    switch (provider) {
        case Provider::gemini: return "gemini";
        case Provider::chatgpt: return "chatgpt";
        case Provider::stub: return "stub";
    }
    return "stub";
}

std::optional<Provider> parse_provider(std::string_view text) {
    if (util::iequals(text, "gemini")) return Provider::gemini;
    if (util::iequals(text, "chatgpt")) return Provider::chatgpt;
    if (util::iequals(text, "stub")) return Provider::stub;
    return std::nullopt;
}

std::string_view to_string(GatewayMode mode) {
    switch (mode) {
        case GatewayMode::live: return "live";
        case GatewayMode::record: return "record";
        case GatewayMode::replay: return "replay";
    }
    return "replay";
}

std::optional<GatewayMode> parse_gateway_mode(std::string_view text) {
    if (util::iequals(text, "live")) return GatewayMode::live;
    if (util::iequals(text, "record")) return GatewayMode::record;
    if (util::iequals(text, "replay")) return GatewayMode::replay;
    return std::nullopt;
}

std::string normalize_prompt(std::string_view prompt) {
    std::string unified;
    unified.reserve(prompt.size());
    for (std::size_t i = 0; i < prompt.size(); ++i) {
        if (prompt[i] == '\r') {
            if (i + 1 < prompt.size() && prompt[i + 1] == '\n') ++i;
            unified.push_back('\n');
        } else {
            unified.push_back(prompt[i]);
        }
    }
    return util::trim(unified);
}

std::string fixture_key(const LlmRequest& request) {
    std::string material;
    material.append(to_string(request.provider));
    material.push_back('\n');
    material.append(request.model);
    material.push_back('\n');
    material.append(normalize_prompt(request.prompt));
    return util::sha256_hex(material);
}

FixtureStore FixtureStore::load(const std::filesystem::path& path) {
    FixtureStore store;
    auto content = util::read_file(path);
    if (!content) {
        fail(ErrorKind::provider_error,
             "fixture store not readable: " + path.string());
    }
    for (const auto& line : util::split_lines(*content)) {
        if (util::trim(line).empty()) continue;
        json record = json::parse(line, nullptr, false);
        if (record.is_discarded() || !record.contains("request_key"))
            fail(ErrorKind::provider_error,
                 "malformed fixture record in " + path.string());
        LlmExchange exchange;
        exchange.request_key = record.at("request_key").get<std::string>();
        exchange.response_text = record.at("response_text").get<std::string>();
        exchange.latency_ms = record.value("latency_ms", std::int64_t{0});
        store.exchanges_[exchange.request_key] = std::move(exchange);
    }
    return store;
}

std::optional<LlmExchange> FixtureStore::find(const std::string& key) const {
    auto it = exchanges_.find(key);
    if (it == exchanges_.end()) return std::nullopt;
    return it->second;
}

void FixtureStore::append(const std::filesystem::path& path, const LlmRequest& request,
                          const LlmExchange& exchange) {
    json record = {
        {"request_key", exchange.request_key},
        {"provider", std::string(to_string(request.provider))},
        {"model", request.model},
        {"prompt", request.prompt},
        {"response_text", exchange.response_text},
        {"latency_ms", exchange.latency_ms},
    };
    util::append_line(path, record.dump());
    exchanges_[exchange.request_key] = exchange;
}

LlmGateway::LlmGateway(GatewayOptions options, std::shared_ptr<Transport> transport)
    : options_(std::move(options)), transport_(std::move(transport)) {
    if (options_.mode != GatewayMode::live) {
        if (!options_.fixture_path)
            fail(ErrorKind::config_error,
                 std::string(to_string(options_.mode)) + " mode requires a fixture path");
        if (options_.mode == GatewayMode::replay) {
            store_ = FixtureStore::load(*options_.fixture_path);
        } else if (std::filesystem::exists(*options_.fixture_path)) {
            store_ = FixtureStore::load(*options_.fixture_path);
        }
    }
}

LlmRequest LlmGateway::make_request(std::string prompt) const {
    LlmRequest request;
    request.provider = options_.provider;
    request.model = options_.model;
    request.prompt = std::move(prompt);
    return request;
}

LlmExchange LlmGateway::complete(const LlmRequest& request, GatewayMode mode) {
    if (util::trim(request.prompt).empty())
        fail(ErrorKind::internal_error, "LlmRequest.prompt must be non-empty");
    if (request.max_output <= 0)
        fail(ErrorKind::internal_error, "LlmRequest.max_output must be positive");
    if (request.temperature < 0.0 || request.temperature > 2.0)
        fail(ErrorKind::internal_error, "LlmRequest.temperature must be in [0, 2]");

    const std::string key = fixture_key(request);
    switch (mode) {
        case GatewayMode::replay: {
            auto hit = store_.find(key);
            if (!hit)
                fail(ErrorKind::fixture_miss, "no replay fixture for request key " + key);
            return *hit;
        }
        case GatewayMode::live:
            return call_live(request);
        case GatewayMode::record: {
            LlmExchange exchange = call_live(request);
            std::lock_guard<std::mutex> guard(append_mutex_);
            store_.append(*options_.fixture_path, request, exchange);
            return exchange;
        }
    }
    fail(ErrorKind::internal_error, "unreachable gateway mode");
}

LlmExchange LlmGateway::call_live(const LlmRequest& request) {
    using Clock = std::chrono::steady_clock;
    const auto& retry = options_.retry;
    // request_timeout_s bounds the whole request, retries and backoff
    // included, so a call can never hang past the configured timeout
    const auto deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                             std::chrono::duration<double>(
                                                 options_.request_timeout_s));
    double backoff_s = retry.initial_backoff_s;
    std::string last_error;
    int attempts = 0;
    while (attempts < retry.max_attempts) {
        double remaining_s =
            std::chrono::duration<double>(deadline - Clock::now()).count();
        if (remaining_s <= 0) break;
        ++attempts;
        auto begin = Clock::now();
        try {
            std::string text = transport_->send(request, remaining_s);
            auto elapsed =
                std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - begin);
            LlmExchange exchange;
            exchange.request_key = fixture_key(request);
            exchange.response_text = std::move(text);
            exchange.latency_ms = elapsed.count();
            return exchange;
        } catch (const PipelineError& err) {
            if (err.kind() != ErrorKind::provider_error) throw;
            last_error = err.what();
        }
        if (attempts < retry.max_attempts &&
            Clock::now() + std::chrono::duration<double>(backoff_s) < deadline) {
            std::this_thread::sleep_for(std::chrono::duration<double>(backoff_s));
            backoff_s *= 2;
        } else if (attempts < retry.max_attempts) {
            break;  // backoff alone would blow the deadline
        }
    }
    fail(ErrorKind::provider_error,
         "provider call failed after " + std::to_string(attempts) +
             " attempt(s): " + last_error);
}

} // namespace testforge::llm
