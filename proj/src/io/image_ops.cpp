#include <algorithm>

#include "wisard/error.hpp"
#include "wisard/image.hpp"

namespace wisard {

BinaryPattern binarize(const GrayImage& image, const BinarizeConfig& config) {
  if (config.threshold < 0 || config.threshold > 255) {
    throw Error(ErrorCode::InvalidArgument, "threshold must be within 0..255");
  }
  if (config.target_width == 0 || config.target_height == 0) {
    throw Error(ErrorCode::InvalidArgument, "target dimensions must be positive");
  }
  if (image.width == 0 || image.height == 0 ||
      image.luminance.size() != image.width * image.height) {
    throw Error(ErrorCode::MalformedImage, "image raster does not match its dimensions");
  }

  const std::size_t tw = config.target_width;
  const std::size_t th = config.target_height;
  // Source span [lo, hi) of output cell i; at least one pixel when upscaling.
  auto span = [](std::size_t i, std::size_t src, std::size_t dst) {
    std::size_t lo = i * src / dst;
    std::size_t hi = std::max(lo + 1, (i + 1) * src / dst);
    return std::pair{lo, hi};
  };

  std::vector<std::uint8_t> bits(tw * th, 0);
  for (std::size_t oy = 0; oy < th; ++oy) {
    const auto [y0, y1] = span(oy, image.height, th);
    for (std::size_t ox = 0; ox < tw; ++ox) {
      const auto [x0, x1] = span(ox, image.width, tw);
      std::uint64_t sum = 0;
      for (std::size_t y = y0; y < y1; ++y) {
        for (std::size_t x = x0; x < x1; ++x) sum += image.luminance[y * image.width + x];
      }
      const std::uint64_t n = (y1 - y0) * (x1 - x0);
      // mean < threshold, without division.
      bits[oy * tw + ox] = sum < static_cast<std::uint64_t>(config.threshold) * n ? 1 : 0;
    }
  }
  return BinaryPattern(tw, th, std::move(bits));
}

GrayImage render_mental_image(const MentalImage& mi) {
  GrayImage out;
  out.width = mi.width;
  out.height = mi.height;
  out.luminance.reserve(mi.counts.size());
  for (Counter c : mi.counts) {
    if (mi.max_count == 0) {
      out.luminance.push_back(255);
      continue;
    }
    // round(255 * c / max), half away from zero
    const Counter shade = (2 * 255 * c + mi.max_count) / (2 * mi.max_count);
    out.luminance.push_back(static_cast<std::uint8_t>(255 - shade));
  }
  return out;
}

GrayImage pattern_to_image(const BinaryPattern& pattern) {
  GrayImage out;
  out.width = pattern.width();
  out.height = pattern.height();
  out.luminance.reserve(pattern.size());
  for (std::uint8_t b : pattern.bits()) out.luminance.push_back(b ? 0 : 255);
  return out;
}

}  // namespace wisard
