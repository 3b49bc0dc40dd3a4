#include <httplib.h>

#include "ace/gateway/gateway.hpp"

namespace ace::gateway {

using nlohmann::json;

namespace {

void send(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(2), "application/json");
}

template <class F>
httplib::Server::Handler guarded(F f) {
  return [f](const httplib::Request& req, httplib::Response& res) {
    try {
      f(req, res);
    } catch (const HttpError& e) {
      send(res, e.status(), e.body());
    } catch (const json::exception& e) {
      send(res, 400, HttpError(400, "invalid_json", e.what()).body());
    } catch (const std::exception& e) {
      send(res, 500, HttpError(500, "internal", e.what()).body());
    }
  };
}

json body_of(const httplib::Request& req) {
  try {
    return json::parse(req.body);
  } catch (const json::exception& e) {
    throw HttpError(400, "invalid_json", std::string("request body is not JSON: ") + e.what());
  }
}

}  // namespace

struct HttpServer::Impl {
  httplib::Server svr;
};

HttpServer::HttpServer(SessionService& service) : impl_(std::make_unique<Impl>()) {
  auto& svr = impl_->svr;
  auto& s = service;
  svr.Post("/v1/sessions", guarded([&s](const httplib::Request& req, httplib::Response& res) {
             send(res, 201, s.create(body_of(req)));
           }));
  svr.Get(R"(/v1/sessions/([A-Za-z0-9_-]+))", guarded([&s](const httplib::Request& req, httplib::Response& res) {
            send(res, 200, s.get(req.matches[1]));
          }));
  svr.Get(R"(/v1/sessions/([A-Za-z0-9_-]+)/question)",
          guarded([&s](const httplib::Request& req, httplib::Response& res) { send(res, 200, s.question(req.matches[1])); }));
  svr.Post(R"(/v1/sessions/([A-Za-z0-9_-]+)/answer)",
           guarded([&s](const httplib::Request& req, httplib::Response& res) {
             send(res, 200, s.answer(req.matches[1], body_of(req)));
           }));
  svr.Get(R"(/v1/sessions/([A-Za-z0-9_-]+)/report)",
          guarded([&s](const httplib::Request& req, httplib::Response& res) { send(res, 200, s.report(req.matches[1])); }));
  svr.Get(R"(/v1/sessions/([A-Za-z0-9_-]+)/trace)",
          guarded([&s](const httplib::Request& req, httplib::Response& res) { send(res, 200, s.trace(req.matches[1])); }));
  svr.Post("/v1/data/tables", guarded([&s](const httplib::Request& req, httplib::Response& res) {
             json body;
             if (req.get_header_value("Content-Type").rfind("text/csv", 0) == 0)
               body = {{"name", req.get_param_value("name")}, {"csv", req.body}};
             else
               body = body_of(req);
             send(res, 201, s.upload_table(body));
           }));
  svr.Get("/v1/packages", guarded([&s](const httplib::Request&, httplib::Response& res) { send(res, 200, s.packages()); }));
  svr.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.body.empty()) send(res, res.status, HttpError(res.status, "not_found", "no such endpoint").body());
  });
}

HttpServer::~HttpServer() = default;

int HttpServer::bind(const std::string& host, int port) {
  int bound = port == 0 ? impl_->svr.bind_to_any_port(host) : (impl_->svr.bind_to_port(host, port) ? port : -1);
  if (bound < 0) throw Error("cannot listen on " + host + ":" + std::to_string(port));
  return bound;
}

void HttpServer::listen() { impl_->svr.listen_after_bind(); }

void HttpServer::stop() { impl_->svr.stop(); }

void serve(SessionService& service, const std::string& host, int port) {
  HttpServer server(service);
  server.bind(host, port);
  server.listen();
}

}  // namespace ace::gateway
