#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "wisard/error.hpp"
#include "wisard/image.hpp"

namespace wisard {
namespace {

class HeaderReader {
 public:
  explicit HeaderReader(std::string_view bytes) : bytes_(bytes) {}

  // Next whitespace-delimited token, skipping '#' comments.
  std::string_view token() {
    for (;;) {
      while (pos_ < bytes_.size() && std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
        ++pos_;
      }
      if (pos_ < bytes_.size() && bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
        continue;
      }
      break;
    }
    const std::size_t start = pos_;
    while (pos_ < bytes_.size() && !std::isspace(static_cast<unsigned char>(bytes_[pos_])) &&
           bytes_[pos_] != '#') {
      ++pos_;
    }
    return bytes_.substr(start, pos_ - start);
  }

  std::size_t number(const char* what) {
    std::string_view t = token();
    if (t.empty()) {
      throw Error(ErrorCode::MalformedImage, std::string("PGM header ends before ") + what);
    }
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc{} || ptr != t.data() + t.size()) {
      throw Error(ErrorCode::MalformedImage,
                  std::string("PGM ") + what + " is not a number: " + std::string(t));
    }
    return value;
  }

  std::size_t pos() const noexcept { return pos_; }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

GrayImage load_pgm(std::string_view bytes) {
  HeaderReader header(bytes);
  const std::string_view magic = header.token();
  const bool binary = magic == "P5";
  if (!binary && magic != "P2") {
    throw Error(ErrorCode::MalformedImage, "not a PGM file (expected P2 or P5 magic)");
  }

  GrayImage image;
  image.width = header.number("width");
  image.height = header.number("height");
  const std::size_t maxval = header.number("maxval");
  if (image.width == 0 || image.height == 0) {
    throw Error(ErrorCode::MalformedImage, "PGM dimensions must be positive");
  }
  if (maxval == 0 || maxval > 255) {
    throw Error(ErrorCode::UnsupportedMaxval,
                "PGM maxval " + std::to_string(maxval) + " unsupported (1..255)");
  }
  const std::size_t count = image.width * image.height;
  image.luminance.reserve(count);

  if (binary) {
    // Exactly one whitespace byte separates maxval from the raster.
    const std::size_t start = header.pos() + 1;
    if (start > bytes.size() || bytes.size() - start < count) {
      throw Error(ErrorCode::TruncatedImage,
                  "PGM raster truncated: expected " + std::to_string(count) + " bytes");
    }
    for (std::size_t i = 0; i < count; ++i) {
      const auto v = static_cast<std::uint8_t>(bytes[start + i]);
      if (v > maxval) throw Error(ErrorCode::MalformedImage, "PGM sample exceeds maxval");
      image.luminance.push_back(v);
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      std::string_view t = header.token();
      if (t.empty()) {
        throw Error(ErrorCode::TruncatedImage,
                    "PGM raster truncated: expected " + std::to_string(count) + " samples, got " +
                        std::to_string(i));
      }
      unsigned v = 0;
      auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
      if (ec != std::errc{} || ptr != t.data() + t.size()) {
        throw Error(ErrorCode::MalformedImage, "PGM sample is not a number: " + std::string(t));
      }
      if (v > maxval) throw Error(ErrorCode::MalformedImage, "PGM sample exceeds maxval");
      image.luminance.push_back(static_cast<std::uint8_t>(v));
    }
  }
  return image;
}

GrayImage load_pgm_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open image " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_pgm(buf.str());
}

std::string write_pgm(const GrayImage& image) {
  std::string out = "P5\n" + std::to_string(image.width) + " " + std::to_string(image.height) +
                    "\n255\n";
  out.append(image.luminance.begin(), image.luminance.end());
  return out;
}

void write_pgm_file(const GrayImage& image, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  out << write_pgm(image);
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path);
}

}  // namespace wisard
