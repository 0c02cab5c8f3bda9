#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wisard {

/// A width x height grid of bits, row-major. 1 = black drawing pixel,
/// 0 = white background.
class BinaryPattern {
 public:
  BinaryPattern(std::size_t width, std::size_t height);
  BinaryPattern(std::size_t width, std::size_t height, std::vector<std::uint8_t> bits);

  /// Builds a pattern from rows of '0'/'1' (or '.'/'#') characters.
  static BinaryPattern from_rows(std::span<const std::string_view> rows);
  static BinaryPattern from_rows(std::initializer_list<std::string_view> rows);

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t size() const noexcept { return bits_.size(); }

  std::uint8_t operator[](std::size_t index) const noexcept { return bits_[index]; }
  std::uint8_t at(std::size_t index) const;
  void set(std::size_t index, bool value);
  void flip(std::size_t index);

  std::span<const std::uint8_t> bits() const noexcept { return bits_; }
  std::size_t count_ones() const noexcept;

  friend bool operator==(const BinaryPattern&, const BinaryPattern&) = default;

 private:
  std::size_t width_;
  std::size_t height_;
  std::vector<std::uint8_t> bits_;
};

}  // namespace wisard
