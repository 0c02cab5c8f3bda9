#include "wisard/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>

#include "wisard/error.hpp"

namespace wisard {
namespace fs = std::filesystem;

namespace {

bool is_pgm(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == ".pgm";
}

std::vector<fs::path> sorted_entries(const fs::path& dir, bool want_dirs) {
  std::vector<fs::path> out;
  std::error_code ec;
  for (fs::directory_iterator it(dir, ec), end; !ec && it != end; it.increment(ec)) {
    const fs::path& p = it->path();
    if (p.filename().string().starts_with(".")) continue;
    if (want_dirs ? it->is_directory(ec) : (it->is_regular_file(ec) && is_pgm(p))) {
      out.push_back(p);
    }
  }
  if (ec) throw Error(ErrorCode::Io, "cannot list " + dir.string() + ": " + ec.message());
  std::sort(out.begin(), out.end(), [](const fs::path& a, const fs::path& b) {
    return a.filename().string() < b.filename().string();
  });
  return out;
}

void load_into(DatasetLoad& load, const fs::path& dir, const std::string& label,
               const BinarizeConfig& config) {
  for (const fs::path& file : sorted_entries(dir, false)) {
    try {
      load.items.push_back({label, file.string(), binarize(load_pgm_file(file.string()), config)});
    } catch (const Error& e) {
      load.diagnostics.push_back({file.string(), e.what()});
    }
  }
}

void require_dir(const std::string& path) {
  std::error_code ec;
  if (!fs::is_directory(path, ec)) throw Error(ErrorCode::Io, "not a directory: " + path);
}

}  // namespace

DatasetLoad load_labeled_dir(const std::string& root, const BinarizeConfig& config) {
  require_dir(root);
  DatasetLoad load;
  for (const fs::path& label_dir : sorted_entries(root, true)) {
    load_into(load, label_dir, label_dir.filename().string(), config);
  }
  return load;
}

DatasetLoad load_image_folder(const std::string& dir, const std::string& label,
                              const BinarizeConfig& config) {
  require_dir(dir);
  DatasetLoad load;
  load_into(load, dir, label, config);
  return load;
}

}  // namespace wisard
