#include "wisard/pattern.hpp"

#include <algorithm>

#include "wisard/error.hpp"

namespace wisard {

BinaryPattern::BinaryPattern(std::size_t width, std::size_t height)
    : BinaryPattern(width, height, std::vector<std::uint8_t>(width * height, 0)) {}

BinaryPattern::BinaryPattern(std::size_t width, std::size_t height,
                             std::vector<std::uint8_t> bits)
    : width_(width), height_(height), bits_(std::move(bits)) {
  if (width_ == 0 || height_ == 0) {
    throw Error(ErrorCode::InvalidArgument, "pattern dimensions must be positive");
  }
  if (bits_.size() != width_ * height_) {
    throw Error(ErrorCode::DimensionMismatch,
                "pattern has " + std::to_string(bits_.size()) + " bits, expected " +
                    std::to_string(width_ * height_));
  }
  if (std::any_of(bits_.begin(), bits_.end(), [](std::uint8_t b) { return b > 1; })) {
    throw Error(ErrorCode::InvalidArgument, "pattern bits must be 0 or 1");
  }
}

BinaryPattern BinaryPattern::from_rows(std::span<const std::string_view> rows) {
  if (rows.empty()) {
    throw Error(ErrorCode::InvalidArgument, "pattern needs at least one row");
  }
  const std::size_t width = rows.front().size();
  std::vector<std::uint8_t> bits;
  bits.reserve(width * rows.size());
  for (std::string_view row : rows) {
    if (row.size() != width) {
      throw Error(ErrorCode::DimensionMismatch, "ragged pattern rows");
    }
    for (char c : row) {
      switch (c) {
        case '1':
        case '#': bits.push_back(1); break;
        case '0':
        case '.': bits.push_back(0); break;
        default:
          throw Error(ErrorCode::InvalidArgument,
                      std::string("unexpected pattern character '") + c + "'");
      }
    }
  }
  return BinaryPattern(width, rows.size(), std::move(bits));
}

BinaryPattern BinaryPattern::from_rows(std::initializer_list<std::string_view> rows) {
  return from_rows(std::span<const std::string_view>(rows.begin(), rows.size()));
}

std::uint8_t BinaryPattern::at(std::size_t index) const {
  if (index >= bits_.size()) {
    throw Error(ErrorCode::IndexOutOfBounds,
                "pixel index " + std::to_string(index) + " outside retina of " +
                    std::to_string(bits_.size()));
  }
  return bits_[index];
}

void BinaryPattern::set(std::size_t index, bool value) {
  at(index);
  bits_[index] = value ? 1 : 0;
}

void BinaryPattern::flip(std::size_t index) {
  at(index);
  bits_[index] ^= 1;
}

std::size_t BinaryPattern::count_ones() const noexcept {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

}  // namespace wisard
