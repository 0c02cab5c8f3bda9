#include "wisard/model_io.hpp"

#include <atomic>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "wisard/error.hpp"

namespace wisard {

using nlohmann::json;

std::string serialize_model(const WisardModel& model) {
  json doc;
  doc["format_version"] = WisardModel::kFormatVersion;
  doc["width"] = model.width();
  doc["height"] = model.height();
  doc["tuple_size"] = model.mapping().tuple_size();
  doc["seed"] = model.mapping().seed();
  doc["mapping"] = model.mapping().tuples();

  json discriminators = json::object();
  for (const auto& [label, d] : model.discriminators()) {
    json neurons = json::array();
    for (const Neuron& neuron : d.neurons()) {
      json cells = json::object();
      for (const auto& [address, counter] : neuron) cells[std::to_string(address)] = counter;
      neurons.push_back(std::move(cells));
    }
    discriminators[label] = {{"examples_trained", d.examples_trained()},
                             {"neurons", std::move(neurons)}};
  }
  doc["discriminators"] = std::move(discriminators);
  return doc.dump(1) + "\n";
}

namespace {

[[noreturn]] void malformed(const std::string& what) {
  throw Error(ErrorCode::MalformedDocument, "malformed model document: " + what);
}

const json& field(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) malformed(std::string("missing field \"") + key + "\"");
  return *it;
}

std::uint64_t unsigned_field(const json& obj, const char* key) {
  const json& v = field(obj, key);
  if (!v.is_number_unsigned()) {
    malformed(std::string("field \"") + key + "\" must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

Address parse_address(const std::string& text) {
  Address value = 0;
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc{} || ptr != last || (text.size() > 1 && text[0] == '0')) {
    malformed("address \"" + text + "\" is not a canonical decimal integer");
  }
  return value;
}

}  // namespace

WisardModel deserialize_model(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    malformed(e.what());
  }
  if (!doc.is_object()) malformed("top level must be an object");

  const json& version = field(doc, "format_version");
  if (!version.is_number_integer()) malformed("format_version must be an integer");
  if (version.get<long long>() != WisardModel::kFormatVersion) {
    throw Error(ErrorCode::VersionMismatch,
                "model format version " + version.dump() + " is not supported (expected " +
                    std::to_string(WisardModel::kFormatVersion) + ")");
  }

  const std::uint64_t width = unsigned_field(doc, "width");
  const std::uint64_t height = unsigned_field(doc, "height");
  const std::uint64_t tuple_size = unsigned_field(doc, "tuple_size");
  const std::uint64_t seed = unsigned_field(doc, "seed");

  const json& mapping_doc = field(doc, "mapping");
  if (!mapping_doc.is_array()) malformed("mapping must be an array");
  std::vector<Tuple> tuples;
  for (const json& t : mapping_doc) {
    if (!t.is_array()) malformed("mapping entries must be arrays");
    Tuple tuple;
    for (const json& p : t) {
      if (!p.is_number_unsigned() || p.get<std::uint64_t>() > 0xFFFFFFFFull) {
        malformed("pixel indices must be non-negative integers");
      }
      tuple.push_back(p.get<PixelIndex>());
    }
    tuples.push_back(std::move(tuple));
  }
  if (width == 0 || height == 0) {
    throw Error(ErrorCode::InvariantViolation, "retina dimensions must be positive");
  }
  WisardModel model(width, height,
                    TupleMapping::from_tuples(width * height, tuple_size, std::move(tuples), seed));

  const json& discriminators = field(doc, "discriminators");
  if (!discriminators.is_object()) malformed("discriminators must be an object");
  for (auto it = discriminators.begin(); it != discriminators.end(); ++it) {
    const std::string& label = it.key();
    const json& d = it.value();
    if (!d.is_object()) malformed("discriminator \"" + label + "\" must be an object");
    const std::uint64_t examples = unsigned_field(d, "examples_trained");
    const json& neurons_doc = field(d, "neurons");
    if (!neurons_doc.is_array()) malformed("neurons must be an array");
    std::vector<Neuron> neurons;
    neurons.reserve(neurons_doc.size());
    for (const json& n : neurons_doc) {
      if (!n.is_object()) malformed("each neuron must be an object");
      Neuron neuron;
      for (auto cell = n.begin(); cell != n.end(); ++cell) {
        if (!cell->is_number_unsigned()) malformed("counters must be non-negative integers");
        neuron.emplace(parse_address(cell.key()), cell->get<Counter>());
      }
      neurons.push_back(std::move(neuron));
    }
    model.insert_discriminator(Discriminator(label, std::move(neurons), examples));
  }
  return model;
}

WisardModel load_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open model file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return deserialize_model(buf.str());
}

void write_file_atomic(const std::string& path, std::string_view content) {
  namespace fs = std::filesystem;
  static std::atomic<std::uint64_t> sequence{0};
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp-" + std::to_string(::getpid()) + "-" + std::to_string(sequence++);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      out.close();
      std::error_code ec;
      fs::remove(tmp, ec);
      throw Error(ErrorCode::Io, "write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorCode::Io, "cannot replace " + path);
  }
}

void save_model_file(const WisardModel& model, const std::string& path) {
  write_file_atomic(path, serialize_model(model));
}

json outcome_to_json(const ClassificationOutcome& outcome) {
  json trace = json::array();
  for (const BleachLevel& level : outcome.trace) {
    trace.push_back({{"bleach", level.bleach}, {"scores", level.scores}});
  }
  return {
      {"decision", outcome.decision.value_or("unknown")},
      {"unknown", outcome.unknown()},
      {"final_bleach", outcome.final_bleach},
      {"scores", outcome.scores},
      {"tie_broken", outcome.tie_broken},
      {"trace", std::move(trace)},
  };
}

json mental_image_to_json(const MentalImage& image) {
  return {
      {"width", image.width},
      {"height", image.height},
      {"counts", image.counts},
      {"max_count", image.max_count},
  };
}

}  // namespace wisard
