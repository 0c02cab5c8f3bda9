#pragma once

#include <memory>
#include <string>

#include "wisard/service/registry.hpp"

namespace httplib {
class Server;
}

namespace wisard::service {

/// REST front end over a ModelRegistry.
///
///   POST   /models                       create
///   GET    /models                       list
///   GET    /models/{id}                  get
///   DELETE /models/{id}                  delete
///   POST   /models/{id}/train            {label, image}
///   POST   /models/{id}/classify         {image}
///   GET    /models/{id}/labels
///   GET    /models/{id}/mental-image/{label}
///   GET    /models/{id}/neurons/{label}
///   POST   /models/{id}/save
///   POST   /models/load                  {file, id?}
///
/// Errors are returned as {code, message}.
class HttpServer {
 public:
  HttpServer(ModelRegistry& registry, std::string cors_origin = "*");
  ~HttpServer();

  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  bool bind(const std::string& host, int port);
  /// Binds an ephemeral port and returns it, or -1.
  int bind_any_port(const std::string& host);
  /// Blocks until stop().
  bool listen();
  void stop();
  bool running() const;

 private:
  void install_routes();

  ModelRegistry& registry_;
  std::string cors_origin_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace wisard::service
