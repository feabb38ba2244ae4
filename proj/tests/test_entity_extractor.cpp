#include <doctest.h>

#include <functional>

#include "testforge/entity_extractor.hpp"
#include "testforge/llm/transports.hpp"

using namespace testforge;

namespace {

const std::string kLibraryPrompt =
    "Please create unit tests for the project Library under the folder management, "
    "written in Java";
const std::string kCinemaPrompt =
    "Write Python-based tests for the cinema project, specifically for the models folder.";

ErrorKind kind_of(const std::function<void()>& body) {
    try {
        body();
    } catch (const PipelineError& err) {
        return err.kind();
    }
    FAIL("expected a PipelineError");
    return ErrorKind::internal_error;
}

/// Gateway over an arbitrary transport, live mode, no retries worth noting.
llm::LlmGateway make_stub_gateway(std::shared_ptr<llm::Transport> transport) {
    llm::GatewayOptions options;
    options.provider = llm::Provider::stub;
    options.model = "stub-1";
    options.mode = llm::GatewayMode::live;
    options.retry.max_attempts = 1;
    return llm::LlmGateway(options, std::move(transport));
}

struct FailingTransport : llm::Transport {
    std::string send(const llm::LlmRequest&, double) override {
        fail(ErrorKind::provider_error, "wire is down");
    }
};

struct ProseTransport : llm::Transport {
    std::string send(const llm::LlmRequest&, double) override {
        return "I am sorry, I cannot help with that.";
    }
};

} // namespace

TEST_CASE("validate_entities normalizes and enforces the invariants") {
    SUBCASE("normalization") {
        auto entities = validate_entities(
            {{"project", "cinema"}, {"folder", "models"}, {"language", "python"}});
        CHECK(entities.project_name == "cinema");
        REQUIRE(entities.subfolder.has_value());
        CHECK(*entities.subfolder == "models");
        CHECK(entities.target_language == Language::python);
    }
    SUBCASE("path separator in project is rejected") {
        CHECK(kind_of([] {
            validate_entities({{"project", "a/b"}, {"language", "Java"}});
        }) == ErrorKind::invalid_entity);
    }
    SUBCASE("missing project is ambiguous") {
        CHECK(kind_of([] {
            validate_entities({{"language", "Java"}});
        }) == ErrorKind::ambiguous_prompt);
    }
    SUBCASE("unsupported language is invalid") {
        CHECK(kind_of([] {
            validate_entities({{"project", "x"}, {"language", "C++"}});
        }) == ErrorKind::invalid_entity);
    }
    SUBCASE("folder 'none' means no subfolder") {
        auto entities = validate_entities(
            {{"project", "x"}, {"folder", "none"}, {"language", "Java"}});
        CHECK_FALSE(entities.subfolder.has_value());
    }
}

TEST_CASE("fallback grammar parses both verbatim prompts") {
    auto library = parse_prompt_fallback(kLibraryPrompt);
    CHECK(library.project_name == "Library");
    REQUIRE(library.subfolder.has_value());
    CHECK(*library.subfolder == "management");
    CHECK(library.target_language == Language::java);

    auto cinema = parse_prompt_fallback(kCinemaPrompt);
    CHECK(cinema.project_name == "cinema");
    REQUIRE(cinema.subfolder.has_value());
    CHECK(*cinema.subfolder == "models");
    CHECK(cinema.target_language == Language::python);
}

TEST_CASE("fallback grammar handles the project-before-keyword form") {
    auto entities = parse_prompt_fallback("test the experiment project in python");
    CHECK(entities.project_name == "experiment");
    CHECK_FALSE(entities.subfolder.has_value());
    CHECK(entities.target_language == Language::python);
}

TEST_CASE("fallback grammar rejects slot-free and empty prompts") {
    CHECK(kind_of([] { parse_prompt_fallback("make tests"); }) == ErrorKind::ambiguous_prompt);
    CHECK(kind_of([] { parse_prompt_fallback("   "); }) == ErrorKind::ambiguous_prompt);
    CHECK(kind_of([] {
        parse_prompt_fallback("test the demo project in python or java");
    }) == ErrorKind::ambiguous_prompt);
}

TEST_CASE("fallback grammar is deterministic") {
    for (const auto& prompt : {kLibraryPrompt, kCinemaPrompt}) {
        auto first = parse_prompt_fallback(prompt);
        auto second = parse_prompt_fallback(prompt);
        CHECK(first == second);
    }
}

TEST_CASE("extract_entities goes through the LLM answer when usable") {
    auto gateway = make_stub_gateway(std::make_shared<llm::StubTransport>());
    auto entities = extract_entities(kLibraryPrompt, gateway);
    CHECK(entities.project_name == "Library");
    CHECK(entities.target_language == Language::java);
}

TEST_CASE("extract_entities falls back when the provider is down") {
    auto gateway = make_stub_gateway(std::make_shared<FailingTransport>());
    auto entities = extract_entities(kCinemaPrompt, gateway);
    CHECK(entities.project_name == "cinema");
    CHECK(entities.target_language == Language::python);
}

TEST_CASE("extract_entities falls back on unparseable LLM output") {
    auto gateway = make_stub_gateway(std::make_shared<ProseTransport>());
    auto entities = extract_entities(kLibraryPrompt, gateway);
    CHECK(entities.project_name == "Library");
}

TEST_CASE("extract_entities rejects a blank prompt without touching the gateway") {
    auto counting = std::make_shared<llm::CountingTransport>(std::make_shared<ProseTransport>());
    auto gateway = make_stub_gateway(counting);
    CHECK(kind_of([&] { extract_entities("   ", gateway); }) == ErrorKind::ambiguous_prompt);
    CHECK(counting->calls() == 0);
}

TEST_CASE("entity answer parser reads the three-line contract") {
    auto raw = parse_entity_answer("Sure!\nproject: Library\nfolder: management\nlanguage: Java\n");
    CHECK(raw.at("project") == "Library");
    CHECK(raw.at("folder") == "management");
    CHECK(raw.at("language") == "Java");
}
