#pragma once

#include <string>
#include <vector>

#include "wisard/image.hpp"
#include "wisard/pattern.hpp"

namespace wisard {

struct LabeledPattern {
  std::string label;
  std::string path;
  BinaryPattern pattern;
};

struct FileDiagnostic {
  std::string path;
  std::string message;
};

struct DatasetLoad {
  std::vector<LabeledPattern> items;
  std::vector<FileDiagnostic> diagnostics;
};

/// Loads `root/<label>/*.pgm`. Labels are visited in lexicographic order,
/// files within a label likewise. Files that fail to load are reported in
/// `diagnostics` and skipped.
DatasetLoad load_labeled_dir(const std::string& root, const BinarizeConfig& config);

/// Loads the `*.pgm` files directly inside `dir` (sorted by name), all under
/// one label.
DatasetLoad load_image_folder(const std::string& dir, const std::string& label,
                              const BinarizeConfig& config);

}  // namespace wisard
