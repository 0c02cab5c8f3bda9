#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "wisard/model.hpp"

namespace wisard {

/// Canonical JSON document for a model. Keys are sorted and the mapping is
/// stored explicitly, so identical models produce identical bytes.
std::string serialize_model(const WisardModel& model);

/// Throws Error with VersionMismatch, MalformedDocument or InvariantViolation.
WisardModel deserialize_model(std::string_view document);

WisardModel load_model_file(const std::string& path);
/// Writes to a temporary sibling and renames it over `path`.
void save_model_file(const WisardModel& model, const std::string& path);
void write_file_atomic(const std::string& path, std::string_view content);

nlohmann::json outcome_to_json(const ClassificationOutcome& outcome);
nlohmann::json mental_image_to_json(const MentalImage& image);

}  // namespace wisard
