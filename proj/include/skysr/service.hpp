#pragma once

#include <chrono>
#include <filesystem>
#include <memory>
#include <optional>
#include <semaphore>
#include <string>
#include <string_view>

#include "json.hpp"
#include "skysr/dataset.hpp"
#include "skysr/engine.hpp"

namespace skysr {

struct HttpResponse {
    int status = 200;
    std::string body;
    std::string content_type = "application/json";
};

struct ServiceOptions {
    std::chrono::milliseconds timeout{30000};
    unsigned max_concurrent = 0;  // 0: hardware threads
    std::optional<std::filesystem::path> static_dir;
};

/// Parsed POST /api/query body.
struct QueryRequest {
    VertexId start = 0;
    bool snapped = false;
    CategorySequence categories;
    QueryFlags flags;
};

/// Handlers behind the HTTP API, callable without a network. Stateless
/// between requests; safe to call from many threads at once.
class QueryService {
public:
    QueryService(Dataset dataset, ServiceOptions options = {});

    HttpResponse health() const;
    HttpResponse categories() const;
    HttpResponse query(std::string_view body);

    /// Throws InvalidArgument with a client-facing message. Categories may be
    /// ids or exact names; start is a vertex id or {"x": .., "y": ..}.
    QueryRequest parse_request(const nlohmann::json& body) const;

    const Dataset& dataset() const noexcept { return dataset_; }
    const ServiceOptions& options() const noexcept { return options_; }

private:
    Dataset dataset_;
    ServiceOptions options_;
    std::vector<std::size_t> inclusive_counts_;
    std::vector<std::size_t> own_counts_;
    std::unique_ptr<std::counting_semaphore<>> slots_;
};

/// JSON body of a successful query, as printed by `skysr query`.
nlohmann::json query_response(const Dataset& d, const QueryRequest& req, const BssrResult& result);

/// HTTP binding. start() returns the bound port (pass 0 for any free port).
class HttpServer {
public:
    explicit HttpServer(QueryService& service);
    ~HttpServer();
    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    int bind(const std::string& host, int port);
    /// Blocks until stop() is called.
    void listen();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace skysr
