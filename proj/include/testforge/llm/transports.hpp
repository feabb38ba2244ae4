#pragma once

#include <atomic>
#include <memory>

#include "testforge/llm/gateway.hpp"

namespace testforge::llm {

/// Deterministic canned-response provider. Recognizes the shipped prompt
/// templates by their "Task:" tag line and answers with plausible,
/// contract-conforming output derived only from the prompt text: entity
/// answers via the fallback grammar, generated tests via the documented
/// FILE/RATIONALE layout, call graphs via the static extractor.
class StubTransport : public Transport {
public:
    std::string send(const LlmRequest& request, double timeout_s) override;
};

/// HTTPS transport for the gemini and chatgpt providers. Credentials are
/// read from the named environment variable at call time and never stored.
class HttpTransport : public Transport {
public:
    HttpTransport(Provider provider, std::string credential_env_var);
    std::string send(const LlmRequest& request, double timeout_s) override;

private:
    Provider provider_;
    std::string credential_env_var_;
};

/// Test double: counts calls and delegates. Lets tests assert that replay
/// mode performs zero transport activity.
class CountingTransport : public Transport {
public:
    explicit CountingTransport(std::shared_ptr<Transport> inner) : inner_(std::move(inner)) {}

    std::string send(const LlmRequest& request, double timeout_s) override {
        ++calls_;
        return inner_->send(request, timeout_s);
    }

    int calls() const { return calls_.load(); }

private:
    std::shared_ptr<Transport> inner_;
    std::atomic<int> calls_{0};
};

} // namespace testforge::llm
