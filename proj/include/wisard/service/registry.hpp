#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <vector>

#include <json.hpp>

#include "wisard/error.hpp"
#include "wisard/model.hpp"

namespace wisard::service {

struct ApiError {
  int status;
  std::string code;
  std::string message;
};

/// HTTP status and machine code for an engine error.
ApiError to_api_error(const wisard::Error& error);

struct ServiceConfig {
  std::filesystem::path models_dir = "models";
  std::size_t default_width = 32;
  std::size_t default_height = 32;
  std::size_t default_tuple_size = 16;
  int default_threshold = 128;
};

struct ModelMetadata {
  std::string name;
  std::string created_at;
  int threshold = 128;
};

/// Registered models keyed by id. Every operation takes a JSON request and
/// returns a JSON response or throws ApiError.
///
/// Locking: the id map is guarded by one mutex; each model has its own
/// readers-writer lock. train/delete/load are writers, everything else reads.
class ModelRegistry {
 public:
  /// Rebuilds the registry from `<models_dir>/<id>.json` files.
  explicit ModelRegistry(ServiceConfig config);

  nlohmann::json create(const nlohmann::json& body);
  nlohmann::json list() const;
  nlohmann::json get(const std::string& id) const;
  void remove(const std::string& id);
  nlohmann::json train(const std::string& id, const nlohmann::json& body);
  nlohmann::json classify(const std::string& id, const nlohmann::json& body) const;
  nlohmann::json labels(const std::string& id) const;
  nlohmann::json mental_image(const std::string& id, const std::string& label) const;
  nlohmann::json neurons(const std::string& id, const std::string& label) const;
  nlohmann::json save(const std::string& id) const;
  nlohmann::json load(const nlohmann::json& body);

  /// Persists every registered model; returns the number written.
  std::size_t save_all() const;

  const ServiceConfig& config() const noexcept { return config_; }
  const std::vector<std::string>& startup_diagnostics() const noexcept { return startup_diagnostics_; }

 private:
  struct Entry {
    Entry(WisardModel m, ModelMetadata md) : model(std::move(m)), meta(std::move(md)) {}
    mutable std::shared_mutex mutex;
    WisardModel model;
    ModelMetadata meta;
  };

  std::shared_ptr<Entry> find(const std::string& id) const;
  std::string next_id();
  nlohmann::json summary(const std::string& id, const Entry& entry) const;
  void write_files(const std::string& id, const Entry& entry) const;

  ServiceConfig config_;
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Entry>> models_;
  std::uint64_t id_counter_ = 0;
  std::vector<std::string> startup_diagnostics_;
};

}  // namespace wisard::service
