#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "wisard/pattern.hpp"

namespace wisard {

using PixelIndex = std::uint32_t;
using Address = std::uint32_t;
using Tuple = std::vector<PixelIndex>;

inline constexpr std::size_t kMaxTupleSize = 24;

/// Partition of the retina's pixel indices into ordered tuples. Every pixel
/// appears in exactly one tuple; all tuples have `tuple_size` pixels except
/// possibly the last, which holds the remainder.
class TupleMapping {
 public:
  /// Seeded shuffle of 0..num_pixels-1, chunked into tuples.
  static TupleMapping generate(std::size_t num_pixels, std::size_t tuple_size,
                               std::uint64_t seed);

  /// Wraps an explicit mapping (fixtures, deserialized models). Validates
  /// the partition and remainder-shape invariants.
  static TupleMapping from_tuples(std::size_t num_pixels, std::size_t tuple_size,
                                  std::vector<Tuple> tuples, std::uint64_t seed = 0);

  std::size_t num_pixels() const noexcept { return num_pixels_; }
  std::size_t tuple_size() const noexcept { return tuple_size_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::size_t tuple_count() const noexcept { return tuples_.size(); }
  const std::vector<Tuple>& tuples() const noexcept { return tuples_; }
  const Tuple& tuple(std::size_t i) const { return tuples_.at(i); }

  friend bool operator==(const TupleMapping&, const TupleMapping&) = default;

 private:
  TupleMapping(std::size_t num_pixels, std::size_t tuple_size, std::uint64_t seed,
               std::vector<Tuple> tuples)
      : num_pixels_(num_pixels), tuple_size_(tuple_size), seed_(seed),
        tuples_(std::move(tuples)) {}

  std::size_t num_pixels_;
  std::size_t tuple_size_;
  std::uint64_t seed_;
  std::vector<Tuple> tuples_;
};

/// Neuron address formed by the tuple's pixels; the first pixel is the most
/// significant bit.
Address address_of(const BinaryPattern& pattern, std::span<const PixelIndex> tuple);

}  // namespace wisard
