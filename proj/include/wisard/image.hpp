#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "wisard/model.hpp"
#include "wisard/pattern.hpp"

namespace wisard {

/// 8-bit luminance raster, row-major. 0 is black, 255 white.
struct GrayImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> luminance;

  friend bool operator==(const GrayImage&, const GrayImage&) = default;
};

struct BinarizeConfig {
  int threshold = 128;
  std::size_t target_width = 32;
  std::size_t target_height = 32;
};

/// Reads a P2 (ASCII) or P5 (binary) graymap with maxval <= 255. Values are
/// returned as stored, without rescaling to 255.
GrayImage load_pgm(std::string_view bytes);
GrayImage load_pgm_file(const std::string& path);

/// Binary P5 with maxval 255.
std::string write_pgm(const GrayImage& image);
void write_pgm_file(const GrayImage& image, const std::string& path);

/// Mean-pools to the target size, then marks a cell black (1) when its mean
/// luminance is strictly below the threshold.
BinaryPattern binarize(const GrayImage& image, const BinarizeConfig& config);

/// Grayscale prototype: the highest count renders black, zero renders white.
GrayImage render_mental_image(const MentalImage& image);

/// Plain 0/255 image of a pattern (1 -> black).
GrayImage pattern_to_image(const BinaryPattern& pattern);

}  // namespace wisard
