#include "testforge/service/http_service.hpp"

#ifdef TESTFORGE_HAVE_OPENSSL
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>

#include <regex>
#include <thread>

#include "testforge/util/files.hpp"
#include "testforge/util/strings.hpp"

namespace testforge {

using nlohmann::json;

std::string url_decode(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (c == '+') {
            out.push_back(' ');
        } else if (c == '%' && i + 2 < text.size()) {
            auto hex = [](char h) -> int {
                if (h >= '0' && h <= '9') return h - '0';
                if (h >= 'a' && h <= 'f') return h - 'a' + 10;
                if (h >= 'A' && h <= 'F') return h - 'A' + 10;
                return -1;
            };
            int high = hex(text[i + 1]);
            int low = hex(text[i + 2]);
            if (high >= 0 && low >= 0) {
                out.push_back(static_cast<char>(high * 16 + low));
                i += 2;
            } else {
                out.push_back(c);
            }
        } else {
            out.push_back(c);
        }
    }
    return out;
}

struct HttpService::Impl {
    ServiceConfig config;
    PipelineRunner runner;
    httplib::Server server;
    std::thread worker;
    std::string host;
    int port = 0;

    explicit Impl(ServiceConfig cfg)
        : config(cfg), runner(make_runner(cfg)) {
        auto colon = config.listen_address.rfind(':');
        host = config.listen_address.substr(0, colon);
        port = std::stoi(config.listen_address.substr(colon + 1));
        wire_routes();
    }

    void wire_routes() {
        server.Get("/run", [this](const httplib::Request& request, httplib::Response& response) {
            auto it = request.params.find("prompt");
            std::string prompt = it == request.params.end() ? "" : it->second;
            if (util::trim(prompt).empty()) {
                response.status = 400;
                response.set_content(json{{"error", "missing or empty prompt"}}.dump(2),
                                     "application/json");
                return;
            }
            if (prompt.size() > 8 * 1024) {
                response.status = 400;
                response.set_content(json{{"error", "prompt exceeds the 8 KiB limit"}}.dump(2),
                                     "application/json");
                return;
            }
            RunRecord record = runner.run(prompt);
            json manifest = load_manifest(record);
            if (record.success) {
                response.status = 200;
            } else if (record.failure_kind &&
                       *record.failure_kind == to_string(ErrorKind::lock_timeout)) {
                response.status = 503;
            } else {
                response.status = 422;
            }
            response.set_content(manifest.dump(2), "application/json");
        });

        server.Get(R"(/report/([A-Za-z0-9_\-]+))",
                   [this](const httplib::Request& request, httplib::Response& response) {
                       std::string run_id = request.matches[1];
                       std::filesystem::path pdf =
                           config.output_dir / run_id / "report.pdf";
                       auto bytes = util::read_file(pdf);
                       if (!bytes) {
                           response.status = 404;
                           response.set_content(json{{"error", "unknown run_id"}}.dump(2),
                                                "application/json");
                           return;
                       }
                       response.set_content(*bytes, "application/pdf");
                   });

        server.Get("/runs", [this](const httplib::Request&, httplib::Response& response) {
            json list = json::array();
            for (const auto& record : read_run_log(config.run_log_path()))
                list.push_back(record.to_json());
            response.set_content(list.dump(2), "application/json");
        });
    }

    json load_manifest(const RunRecord& record) const {
        auto manifest_file = config.output_dir / record.run_id / "manifest.json";
        if (auto content = util::read_file(manifest_file)) {
            json parsed = json::parse(*content, nullptr, false);
            if (!parsed.is_discarded()) return parsed;
        }
        // fall back to the record itself (manifest write failed)
        return record.to_json();
    }
};

HttpService::HttpService(ServiceConfig config)
    : impl_(std::make_unique<Impl>(std::move(config))) {}

HttpService::~HttpService() { stop(); }

bool HttpService::serve() {
    return impl_->server.listen(impl_->host, impl_->port);
}

int HttpService::start_async() {
    int bound = impl_->port;
    if (bound == 0) {
        bound = impl_->server.bind_to_any_port(impl_->host);
        if (bound < 0) return -1;
        impl_->worker = std::thread([this] { impl_->server.listen_after_bind(); });
    } else {
        if (!impl_->server.bind_to_port(impl_->host, bound)) return -1;
        impl_->worker = std::thread([this] { impl_->server.listen_after_bind(); });
    }
    return bound;
}

bool HttpService::wait_until_ready(double timeout_s) const {
    auto deadline = std::chrono::steady_clock::now() +
                    std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                        std::chrono::duration<double>(timeout_s));
    while (!impl_->server.is_running()) {
        if (std::chrono::steady_clock::now() >= deadline) return false;
        std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
    return true;
}

void HttpService::stop() {
    if (!impl_) return;
    impl_->server.stop();
    if (impl_->worker.joinable()) impl_->worker.join();
}

} // namespace testforge
