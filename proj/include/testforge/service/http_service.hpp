#pragma once

#include <memory>
#include <string>

#include "testforge/pipeline_orchestrator.hpp"

namespace testforge {

/// HTTP front end over the pipeline:
///   GET /run?prompt=...     -> manifest JSON (200 success, 422 run failed,
///                              400 missing prompt, 503 project lock timeout)
///   GET /report/<run_id>    -> the PDF (404 unknown)
///   GET /runs               -> JSON array of run records
/// Failure of a run is data, not a transport error, so monitoring can tell
/// the two apart.
class HttpService {
public:
    explicit HttpService(ServiceConfig config);
    ~HttpService();

    /// Serves until stop() is called. Returns false when binding fails.
    bool serve();
    void stop();

    /// Binds to the configured address with port 0 allowed (tests); returns
    /// the bound port or -1.
    int start_async();
    bool wait_until_ready(double timeout_s) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Percent-decodes a URL query value (+ as space, %XX as byte).
std::string url_decode(const std::string& text);

} // namespace testforge
