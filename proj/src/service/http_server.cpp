#include "wisard/service/http_server.hpp"

#include <httplib.h>

namespace wisard::service {

using nlohmann::json;

namespace {

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, const ApiError& e) {
  send_json(res, e.status, {{"code", e.code}, {"message", e.message}});
}

json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  try {
    return json::parse(req.body);
  } catch (const json::parse_error& e) {
    throw ApiError{400, "bad_request", std::string("request body is not valid JSON: ") + e.what()};
  }
}

// Runs a handler and turns every failure into an error body.
template <class F>
httplib::Server::Handler guarded(F f) {
  return [f](const httplib::Request& req, httplib::Response& res) {
    try {
      f(req, res);
    } catch (const ApiError& e) {
      send_error(res, e);
    } catch (const wisard::Error& e) {
      send_error(res, to_api_error(e));
    } catch (const json::exception& e) {
      send_error(res, {400, "bad_request", e.what()});
    } catch (const std::exception& e) {
      send_error(res, {500, "internal_error", e.what()});
    }
  };
}

}  // namespace

HttpServer::HttpServer(ModelRegistry& registry, std::string cors_origin)
    : registry_(registry), cors_origin_(std::move(cors_origin)),
      server_(std::make_unique<httplib::Server>()) {
  // SO_REUSEADDR only: with SO_REUSEPORT a second server could share the port.
  server_->set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const char*>(&yes), sizeof(yes));
  });
  install_routes();
}

HttpServer::~HttpServer() = default;

void HttpServer::install_routes() {
  httplib::Server& s = *server_;
  ModelRegistry& r = registry_;

  s.set_post_routing_handler([origin = cors_origin_](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Origin", origin);
  });
  s.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });

  s.Post("/models/load", guarded([&r](const httplib::Request& req, httplib::Response& res) {
           send_json(res, 201, r.load(parse_body(req)));
         }));
  s.Post("/models", guarded([&r](const httplib::Request& req, httplib::Response& res) {
           send_json(res, 201, r.create(parse_body(req)));
         }));
  s.Get("/models", guarded([&r](const httplib::Request&, httplib::Response& res) {
          send_json(res, 200, r.list());
        }));
  s.Get(R"(/models/([^/]+))", guarded([&r](const httplib::Request& req, httplib::Response& res) {
          send_json(res, 200, r.get(req.matches[1]));
        }));
  s.Delete(R"(/models/([^/]+))", guarded([&r](const httplib::Request& req, httplib::Response& res) {
             r.remove(req.matches[1]);
             res.status = 204;
           }));
  s.Post(R"(/models/([^/]+)/train)",
         guarded([&r](const httplib::Request& req, httplib::Response& res) {
           send_json(res, 200, r.train(req.matches[1], parse_body(req)));
         }));
  s.Post(R"(/models/([^/]+)/classify)",
         guarded([&r](const httplib::Request& req, httplib::Response& res) {
           send_json(res, 200, r.classify(req.matches[1], parse_body(req)));
         }));
  s.Get(R"(/models/([^/]+)/labels)", guarded([&r](const httplib::Request& req, httplib::Response& res) {
          send_json(res, 200, r.labels(req.matches[1]));
        }));
  s.Get(R"(/models/([^/]+)/mental-image/(.+))",
        guarded([&r](const httplib::Request& req, httplib::Response& res) {
          send_json(res, 200, r.mental_image(req.matches[1], req.matches[2]));
        }));
  s.Get(R"(/models/([^/]+)/neurons/(.+))",
        guarded([&r](const httplib::Request& req, httplib::Response& res) {
          send_json(res, 200, r.neurons(req.matches[1], req.matches[2]));
        }));
  s.Post(R"(/models/([^/]+)/save)", guarded([&r](const httplib::Request& req, httplib::Response& res) {
           send_json(res, 200, r.save(req.matches[1]));
         }));
}

bool HttpServer::bind(const std::string& host, int port) { return server_->bind_to_port(host, port); }

int HttpServer::bind_any_port(const std::string& host) { return server_->bind_to_any_port(host); }

bool HttpServer::listen() { return server_->listen_after_bind(); }

void HttpServer::stop() { server_->stop(); }

bool HttpServer::running() const { return server_->is_running(); }

}  // namespace wisard::service
