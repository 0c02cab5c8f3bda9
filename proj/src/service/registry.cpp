#include "wisard/service/registry.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <random>
#include <sstream>

#include "wisard/image.hpp"
#include "wisard/model_io.hpp"
#include "wisard/service/base64.hpp"

namespace wisard::service {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr std::size_t kMaxRetinaSide = 4096;
constexpr std::string_view kMetaSuffix = ".meta.json";

ApiError bad_request(std::string message) { return {400, "bad_request", std::move(message)}; }

ApiError model_not_found(const std::string& id) {
  return {404, "model_not_found", "no model with id \"" + id + "\""};
}

std::string now_iso8601() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::size_t size_field(const json& body, const char* key, std::size_t fallback) {
  auto it = body.find(key);
  if (it == body.end() || it->is_null()) return fallback;
  if (!it->is_number_unsigned()) {
    throw bad_request(std::string("\"") + key + "\" must be a non-negative integer");
  }
  return it->get<std::size_t>();
}

std::string string_field(const json& body, const char* key) {
  auto it = body.find(key);
  if (it == body.end() || !it->is_string()) {
    throw bad_request(std::string("\"") + key + "\" must be a string");
  }
  return it->get<std::string>();
}

bool is_bit(const json& v, std::uint8_t& out) {
  if (v.is_boolean()) {
    out = v.get<bool>() ? 1 : 0;
    return true;
  }
  if (v.is_number_integer() && (v.get<long long>() == 0 || v.get<long long>() == 1)) {
    out = static_cast<std::uint8_t>(v.get<long long>());
    return true;
  }
  return false;
}

ApiError bad_image(std::string message) { return {422, "bad_image", std::move(message)}; }

// Request image: {"pgm": base64} is binarized with the model's settings,
// {"bits": [...]} (flat or rows) must already match the retina.
BinaryPattern parse_image(const json& body, const WisardModel& model, int threshold) {
  auto it = body.find("image");
  if (it == body.end() || !it->is_object()) {
    throw bad_image("request needs an \"image\" object with \"pgm\" or \"bits\"");
  }
  const json& image = *it;
  if (image.contains("pgm")) {
    if (!image["pgm"].is_string()) throw bad_image("\"pgm\" must be a base64 string");
    std::optional<std::string> bytes = base64_decode(image["pgm"].get<std::string>());
    if (!bytes) throw bad_image("\"pgm\" is not valid base64");
    return binarize(load_pgm(*bytes), {threshold, model.width(), model.height()});
  }
  if (image.contains("bits")) {
    const json& bits = image["bits"];
    if (!bits.is_array()) throw bad_image("\"bits\" must be an array");
    std::vector<std::uint8_t> flat;
    const bool rows = !bits.empty() && bits.front().is_array();
    if (rows) {
      if (bits.size() != model.height()) {
        throw Error(ErrorCode::DimensionMismatch,
                    "bit grid has " + std::to_string(bits.size()) + " rows, model retina has " +
                        std::to_string(model.height()));
      }
      for (const json& row : bits) {
        if (!row.is_array() || row.size() != model.width()) {
          throw Error(ErrorCode::DimensionMismatch,
                      "every bit row must have " + std::to_string(model.width()) + " entries");
        }
        for (const json& v : row) {
          std::uint8_t b;
          if (!is_bit(v, b)) throw bad_image("bits must be 0 or 1");
          flat.push_back(b);
        }
      }
    } else {
      for (const json& v : bits) {
        std::uint8_t b;
        if (!is_bit(v, b)) throw bad_image("bits must be 0 or 1");
        flat.push_back(b);
      }
      if (flat.size() != model.width() * model.height()) {
        throw Error(ErrorCode::DimensionMismatch,
                    "bit array has " + std::to_string(flat.size()) + " entries, model retina has " +
                        std::to_string(model.width() * model.height()));
      }
    }
    return BinaryPattern(model.width(), model.height(), std::move(flat));
  }
  throw bad_image("image needs \"pgm\" or \"bits\"");
}

std::string binary_string(Address address, std::size_t width) {
  std::string out(width, '0');
  for (std::size_t i = 0; i < width; ++i) {
    if ((address >> (width - 1 - i)) & 1u) out[i] = '1';
  }
  return out;
}

bool valid_file_name(const std::string& name) {
  return !name.empty() && name.find('/') == std::string::npos &&
         name.find('\\') == std::string::npos && name != "." && name != "..";
}

json read_json_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return json::parse(buf.str());
}

}  // namespace

ApiError to_api_error(const wisard::Error& error) {
  int status = 422;
  switch (error.code()) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::EmptyLabel: status = 400; break;
    case ErrorCode::UnknownLabel: status = 404; break;
    case ErrorCode::Io: status = 500; break;
    case ErrorCode::DimensionMismatch:
    case ErrorCode::IndexOutOfBounds:
    case ErrorCode::VersionMismatch:
    case ErrorCode::MalformedDocument:
    case ErrorCode::InvariantViolation:
    case ErrorCode::MalformedImage:
    case ErrorCode::TruncatedImage:
    case ErrorCode::UnsupportedMaxval: status = 422; break;
  }
  return {status, std::string(to_string(error.code())), error.what()};
}

ModelRegistry::ModelRegistry(ServiceConfig config) : config_(std::move(config)) {
  std::error_code ec;
  fs::create_directories(config_.models_dir, ec);
  if (ec) {
    throw Error(ErrorCode::Io, "cannot create models directory " + config_.models_dir.string());
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(config_.models_dir)) {
    const std::string name = entry.path().filename().string();
    if (entry.is_regular_file() && name.ends_with(".json") && !name.ends_with(kMetaSuffix)) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  for (const fs::path& file : files) {
    try {
      load({{"file", file.filename().string()}});
    } catch (const ApiError& e) {
      startup_diagnostics_.push_back(file.string() + ": " + e.message);
    } catch (const wisard::Error& e) {
      startup_diagnostics_.push_back(file.string() + ": " + e.what());
    }
  }
}

std::shared_ptr<ModelRegistry::Entry> ModelRegistry::find(const std::string& id) const {
  std::lock_guard lock(mutex_);
  auto it = models_.find(id);
  if (it == models_.end()) throw model_not_found(id);
  return it->second;
}

std::string ModelRegistry::next_id() {
  std::string id;
  do {
    id = "m" + std::to_string(++id_counter_);
  } while (models_.contains(id));
  return id;
}

json ModelRegistry::summary(const std::string& id, const Entry& e) const {
  json examples = json::object();
  for (const auto& [label, d] : e.model.discriminators()) examples[label] = d.examples_trained();
  return {
      {"id", id},
      {"name", e.meta.name},
      {"created_at", e.meta.created_at},
      {"width", e.model.width()},
      {"height", e.model.height()},
      {"tuple_size", e.model.mapping().tuple_size()},
      {"seed", e.model.mapping().seed()},
      {"threshold", e.meta.threshold},
      {"labels", e.model.labels()},
      {"examples", std::move(examples)},
  };
}

json ModelRegistry::create(const json& body) {
  if (!body.is_object()) throw bad_request("body must be a JSON object");
  ModelMetadata meta;
  meta.name = body.contains("name") ? string_field(body, "name") : "untitled";
  meta.created_at = now_iso8601();
  const std::size_t width = size_field(body, "width", config_.default_width);
  const std::size_t height = size_field(body, "height", config_.default_height);
  const std::size_t tuple_size = size_field(body, "tuple_size", config_.default_tuple_size);
  const std::size_t threshold =
      size_field(body, "threshold", static_cast<std::size_t>(config_.default_threshold));
  if (threshold > 255) throw ApiError{400, "invalid_argument", "threshold must be within 0..255"};
  if (width > kMaxRetinaSide || height > kMaxRetinaSide) {
    throw ApiError{400, "invalid_argument", "retina side must not exceed 4096"};
  }
  meta.threshold = static_cast<int>(threshold);

  std::uint64_t seed;
  if (body.contains("seed") && !body["seed"].is_null()) {
    if (!body["seed"].is_number_unsigned()) throw bad_request("\"seed\" must be a non-negative integer");
    seed = body["seed"].get<std::uint64_t>();
  } else {
    std::random_device rd;
    seed = (std::uint64_t{rd()} << 32) | rd();
  }

  auto entry = std::make_shared<Entry>(WisardModel(width, height, tuple_size, seed), meta);
  std::lock_guard lock(mutex_);
  const std::string id = next_id();
  models_.emplace(id, entry);
  return summary(id, *entry);
}

json ModelRegistry::list() const {
  std::vector<std::pair<std::string, std::shared_ptr<Entry>>> snapshot;
  {
    std::lock_guard lock(mutex_);
    snapshot.assign(models_.begin(), models_.end());
  }
  json out = json::array();
  for (const auto& [id, entry] : snapshot) {
    std::shared_lock lock(entry->mutex);
    out.push_back(summary(id, *entry));
  }
  return out;
}

json ModelRegistry::get(const std::string& id) const {
  auto entry = find(id);
  std::shared_lock lock(entry->mutex);
  return summary(id, *entry);
}

void ModelRegistry::remove(const std::string& id) {
  std::shared_ptr<Entry> entry;
  {
    std::lock_guard lock(mutex_);
    auto it = models_.find(id);
    if (it == models_.end()) throw model_not_found(id);
    entry = it->second;
    std::unique_lock writer(entry->mutex);
    models_.erase(it);
  }
  std::error_code ec;
  fs::remove(config_.models_dir / (id + ".json"), ec);
  fs::remove(config_.models_dir / (id + std::string(kMetaSuffix)), ec);
}

json ModelRegistry::train(const std::string& id, const json& body) {
  if (!body.is_object()) throw bad_request("body must be a JSON object");
  auto entry = find(id);
  const std::string label = string_field(body, "label");
  std::unique_lock lock(entry->mutex);
  const BinaryPattern pattern = parse_image(body, entry->model, entry->meta.threshold);
  entry->model.train(pattern, label);
  json examples = json::object();
  for (const auto& [l, d] : entry->model.discriminators()) examples[l] = d.examples_trained();
  return {{"label", label}, {"examples_trained", std::move(examples)}};
}

json ModelRegistry::classify(const std::string& id, const json& body) const {
  if (!body.is_object()) throw bad_request("body must be a JSON object");
  auto entry = find(id);
  std::shared_lock lock(entry->mutex);
  const BinaryPattern pattern = parse_image(body, entry->model, entry->meta.threshold);
  ClassifyOptions options;
  options.min_score = size_field(body, "min_score", 0);
  return outcome_to_json(entry->model.classify(pattern, options));
}

json ModelRegistry::labels(const std::string& id) const {
  auto entry = find(id);
  std::shared_lock lock(entry->mutex);
  json out = json::array();
  for (const auto& [label, d] : entry->model.discriminators()) {
    out.push_back({{"label", label}, {"examples_trained", d.examples_trained()}});
  }
  return out;
}

json ModelRegistry::mental_image(const std::string& id, const std::string& label) const {
  auto entry = find(id);
  std::shared_lock lock(entry->mutex);
  const MentalImage mi = entry->model.mental_image(label);
  json out = mental_image_to_json(mi);
  out["label"] = label;
  out["pgm"] = base64_encode(write_pgm(render_mental_image(mi)));
  return out;
}

json ModelRegistry::neurons(const std::string& id, const std::string& label) const {
  auto entry = find(id);
  std::shared_lock lock(entry->mutex);
  const Discriminator& d = entry->model.discriminator(label);
  const TupleMapping& mapping = entry->model.mapping();
  json neurons = json::array();
  for (std::size_t i = 0; i < d.neurons().size(); ++i) {
    std::vector<std::pair<Address, Counter>> cells(d.neurons()[i].begin(), d.neurons()[i].end());
    std::sort(cells.begin(), cells.end());
    json dump = json::array();
    for (const auto& [address, counter] : cells) {
      dump.push_back({{"address", binary_string(address, mapping.tuple(i).size())},
                      {"counter", counter}});
    }
    neurons.push_back(std::move(dump));
  }
  return {{"label", label},
          {"examples_trained", d.examples_trained()},
          {"width", entry->model.width()},
          {"height", entry->model.height()},
          {"tuples", mapping.tuples()},
          {"neurons", std::move(neurons)}};
}

void ModelRegistry::write_files(const std::string& id, const Entry& e) const {
  const json meta = {{"name", e.meta.name},
                     {"created_at", e.meta.created_at},
                     {"threshold", e.meta.threshold}};
  save_model_file(e.model, (config_.models_dir / (id + ".json")).string());
  write_file_atomic((config_.models_dir / (id + std::string(kMetaSuffix))).string(),
                    meta.dump(2) + "\n");
}

json ModelRegistry::save(const std::string& id) const {
  auto entry = find(id);
  std::shared_lock lock(entry->mutex);
  write_files(id, *entry);
  return {{"id", id}, {"file", id + ".json"}};
}

std::size_t ModelRegistry::save_all() const {
  std::vector<std::pair<std::string, std::shared_ptr<Entry>>> snapshot;
  {
    std::lock_guard lock(mutex_);
    snapshot.assign(models_.begin(), models_.end());
  }
  for (const auto& [id, entry] : snapshot) {
    std::shared_lock lock(entry->mutex);
    write_files(id, *entry);
  }
  return snapshot.size();
}

json ModelRegistry::load(const json& body) {
  if (!body.is_object()) throw bad_request("body must be a JSON object");
  const std::string file = string_field(body, "file");
  if (!valid_file_name(file)) throw bad_request("\"file\" must be a file name inside the models directory");
  const fs::path path = config_.models_dir / file;
  std::string id = fs::path(file).stem().string();
  if (body.contains("id")) id = string_field(body, "id");
  if (!valid_file_name(id)) throw bad_request("invalid model id");

  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) {
    throw ApiError{404, "file_not_found", "no model file \"" + file + "\""};
  }
  WisardModel model = load_model_file(path.string());

  ModelMetadata meta{id, now_iso8601(), config_.default_threshold};
  const fs::path meta_path = config_.models_dir / (fs::path(file).stem().string() + std::string(kMetaSuffix));
  if (fs::is_regular_file(meta_path, ec)) {
    try {
      const json m = read_json_file(meta_path);
      meta.name = m.value("name", meta.name);
      meta.created_at = m.value("created_at", meta.created_at);
      meta.threshold = m.value("threshold", meta.threshold);
    } catch (const json::exception&) {
      // Unreadable sidecar: keep defaults.
    }
  }

  auto entry = std::make_shared<Entry>(std::move(model), std::move(meta));
  std::lock_guard lock(mutex_);
  if (models_.contains(id)) {
    throw ApiError{409, "id_conflict", "a model with id \"" + id + "\" is already registered"};
  }
  models_.emplace(id, entry);
  return summary(id, *entry);
}

}  // namespace wisard::service
