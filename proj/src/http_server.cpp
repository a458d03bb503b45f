#include "httplib.h"
#include "skysr/service.hpp"

namespace skysr {

struct HttpServer::Impl {
    explicit Impl(QueryService& s) : service(s) {}
    QueryService& service;
    httplib::Server server;
};

namespace {

void send(httplib::Response& res, const HttpResponse& r) {
    res.status = r.status;
    res.set_content(r.body, r.content_type);
}

}  // namespace

HttpServer::HttpServer(QueryService& service) : impl_(std::make_unique<Impl>(service)) {
    auto& svr = impl_->server;
    QueryService* s = &service;
    svr.Get("/api/health", [s](const httplib::Request&, httplib::Response& res) { send(res, s->health()); });
    svr.Get("/api/categories", [s](const httplib::Request&, httplib::Response& res) { send(res, s->categories()); });
    svr.Post("/api/query", [s](const httplib::Request& req, httplib::Response& res) { send(res, s->query(req.body)); });
    if (const auto& dir = service.options().static_dir) svr.set_mount_point("/", dir->string());
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
    if (port == 0) return impl_->server.bind_to_any_port(host);
    return impl_->server.bind_to_port(host, port) ? port : -1;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
    if (impl_) impl_->server.stop();
}

}  // namespace skysr
