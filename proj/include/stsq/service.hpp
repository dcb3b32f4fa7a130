#pragma once

// HTTP binding of the JSON API.
//
//   GET  /api/transmitters         POST /api/query         POST /api/gaps
//   POST /api/conflicts            POST /api/active-times  POST /api/import (text/csv)
//   GET  /api/export (text/csv)    GET  /api/geocode?address=...
//
// Environment: STSQ_PORT (default 8080), STSQ_DATA (CSV loaded at startup),
// STSQ_CORS_ORIGIN (default "*"), STSQ_GEOCODER_URL (optional geocoder backend).

#include <cstdlib>
#include <memory>
#include <optional>
#include <string>

#include "httplib.h"
#include "stsq/api.hpp"

namespace stsq {

/// Geocoder backed by a remote HTTP service: GET <base>/geocode?address=<text>
/// answering {"lat": .., "lon": ..}; 404 means the address is unknown.
class HttpGeocoder : public Geocoder {
public:
  explicit HttpGeocoder(std::string base_url) {
    auto scheme = base_url.find("://");
    auto path_at = base_url.find('/', scheme == std::string::npos ? 0 : scheme + 3);
    origin_ = base_url.substr(0, path_at);
    if (path_at != std::string::npos)
      prefix_ = base_url.substr(path_at);
    while (!prefix_.empty() && prefix_.back() == '/')
      prefix_.pop_back();
  }

  static std::unique_ptr<HttpGeocoder> from_env() {
    const char* url = std::getenv("STSQ_GEOCODER_URL");
    if (!url || !*url)
      return nullptr;
    return std::make_unique<HttpGeocoder>(url);
  }

  GeoPoint lookup(std::string_view address) const override {
    httplib::Client client(origin_);
    client.set_connection_timeout(5);
    client.set_read_timeout(10);
    const std::string path = prefix_ + "/geocode?address=" + httplib::detail::encode_query_param(std::string(address));
    auto res = client.Get(path);
    if (!res)
      throw ProviderUnavailable("geocoder unreachable: " + httplib::to_string(res.error()));
    if (res->status == 404)
      throw AddressNotFound("address not found: " + std::string(address));
    if (res->status != 200)
      throw ProviderUnavailable("geocoder answered HTTP " + std::to_string(res->status));
    Json doc = Json::parse(res->body, nullptr, false);
    if (doc.is_discarded() || !doc.is_object() || !doc.contains("lat") || !doc.contains("lon") ||
        !doc["lat"].is_number() || !doc["lon"].is_number())
      throw ProviderUnavailable("geocoder returned an unexpected body");
    try {
      return {doc["lat"].get<double>(), doc["lon"].get<double>()};
    } catch (const InvalidValue& e) {
      throw ProviderUnavailable(std::string("geocoder returned an invalid point: ") + e.what());
    }
  }

private:
  std::string origin_;
  std::string prefix_;
};

struct ServiceConfig {
  std::string host = "0.0.0.0";
  int port = 8080;
  std::string cors_origin = "*";
  std::optional<std::string> data_path;

  static ServiceConfig from_env() {
    ServiceConfig cfg;
    if (const char* p = std::getenv("STSQ_PORT"); p && *p)
      cfg.port = std::stoi(p);
    if (const char* d = std::getenv("STSQ_DATA"); d && *d)
      cfg.data_path = d;
    if (const char* o = std::getenv("STSQ_CORS_ORIGIN"); o && *o)
      cfg.cors_origin = o;
    return cfg;
  }
};

class Service {
public:
  Service(Api& api, ServiceConfig config) : api_(api), config_(std::move(config)) { install(); }

  /// Binds the configured port (0 picks a free one). False when the port is taken.
  bool bind() {
    if (config_.port == 0) {
      port_ = server_.bind_to_any_port(config_.host);
      return port_ > 0;
    }
    if (!server_.bind_to_port(config_.host, config_.port))
      return false;
    port_ = config_.port;
    return true;
  }

  /// Serves until stop(); call bind() first.
  bool run() { return server_.listen_after_bind(); }
  void stop() { server_.stop(); }
  void wait_until_ready() const { server_.wait_until_ready(); }
  int port() const noexcept { return port_; }

private:
  static void reply(httplib::Response& res, const ApiResponse& r) {
    res.status = r.status;
    res.set_content(r.body, r.content_type);
  }

  void install() {
    server_.set_payload_max_length(kMaxImportBody);
    // httplib's default adds SO_REUSEPORT, which lets a second server share a
    // busy port. Keep SO_REUSEADDR only so binding a port in use fails.
    server_.set_socket_options([](socket_t sock) {
      int yes = 1;
      ::setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof(yes));
    });

    server_.Get("/api/transmitters",
                [this](const httplib::Request&, httplib::Response& res) { reply(res, api_.get_transmitters()); });
    server_.Post("/api/query", [this](const httplib::Request& req, httplib::Response& res) {
      reply(res, api_.post_query(req.body));
    });
    server_.Post("/api/gaps", [this](const httplib::Request& req, httplib::Response& res) {
      reply(res, api_.post_gaps(req.body));
    });
    server_.Post("/api/conflicts", [this](const httplib::Request& req, httplib::Response& res) {
      reply(res, api_.post_conflicts(req.body));
    });
    server_.Post("/api/active-times", [this](const httplib::Request& req, httplib::Response& res) {
      reply(res, api_.post_active_times(req.body));
    });
    server_.Post("/api/import", [this](const httplib::Request& req, httplib::Response& res) {
      reply(res, api_.post_import(req.body));
    });
    server_.Get("/api/export", [this](const httplib::Request&, httplib::Response& res) { reply(res, api_.get_export()); });
    server_.Get("/api/geocode", [this](const httplib::Request& req, httplib::Response& res) {
      reply(res, api_.get_geocode(req.get_param_value("address")));
    });

    server_.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) {
      res.status = 204;
      res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
      res.set_header("Access-Control-Allow-Headers", "Content-Type");
    });

    // Errors raised inside httplib itself (unknown route, oversized body) get the
    // same envelope as handler errors.
    server_.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
      if (!res.body.empty())
        return httplib::Server::HandlerResponse::Unhandled;
      const std::string message = res.status == 404   ? "no such endpoint: " + req.path
                                  : res.status == 413 ? "request body too large"
                                                      : httplib::status_message(res.status);
      res.set_content(error_json("", message).dump(), "application/json");
      return httplib::Server::HandlerResponse::Handled;
    });

    server_.set_post_routing_handler([this](const httplib::Request&, httplib::Response& res) {
      res.set_header("Access-Control-Allow-Origin", config_.cors_origin);
    });
  }

  Api& api_;
  ServiceConfig config_;
  httplib::Server server_;
  int port_ = 0;
};

} // namespace stsq
