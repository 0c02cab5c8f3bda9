#include "wisard/mapping.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "wisard/error.hpp"

namespace wisard {
namespace {

void check_shape(std::size_t num_pixels, std::size_t tuple_size) {
  if (num_pixels == 0) {
    throw Error(ErrorCode::InvalidArgument, "retina must have at least one pixel");
  }
  if (tuple_size < 1 || tuple_size > kMaxTupleSize) {
    throw Error(ErrorCode::InvalidArgument,
                "tuple size " + std::to_string(tuple_size) + " outside [1, " +
                    std::to_string(kMaxTupleSize) + "]");
  }
}

// Unbiased draw in [0, bound) by rejection. std::uniform_int_distribution is
// implementation-defined, the raw mt19937_64 stream is not, so mappings stay
// identical across standard libraries.
std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

}  // namespace

TupleMapping TupleMapping::generate(std::size_t num_pixels, std::size_t tuple_size,
                                    std::uint64_t seed) {
  check_shape(num_pixels, tuple_size);

  std::vector<PixelIndex> order(num_pixels);
  std::iota(order.begin(), order.end(), PixelIndex{0});
  std::mt19937_64 rng(seed);
  for (std::size_t i = num_pixels - 1; i > 0; --i) {
    std::swap(order[i], order[draw_below(rng, i + 1)]);
  }

  std::vector<Tuple> tuples;
  tuples.reserve((num_pixels + tuple_size - 1) / tuple_size);
  for (std::size_t start = 0; start < num_pixels; start += tuple_size) {
    const std::size_t end = std::min(start + tuple_size, num_pixels);
    tuples.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(start),
                        order.begin() + static_cast<std::ptrdiff_t>(end));
  }
  return TupleMapping(num_pixels, tuple_size, seed, std::move(tuples));
}

TupleMapping TupleMapping::from_tuples(std::size_t num_pixels, std::size_t tuple_size,
                                       std::vector<Tuple> tuples, std::uint64_t seed) {
  check_shape(num_pixels, tuple_size);

  const std::size_t expected_count = (num_pixels + tuple_size - 1) / tuple_size;
  if (tuples.size() != expected_count) {
    throw Error(ErrorCode::InvariantViolation,
                "mapping has " + std::to_string(tuples.size()) + " tuples, expected " +
                    std::to_string(expected_count));
  }
  std::vector<bool> seen(num_pixels, false);
  for (std::size_t t = 0; t < tuples.size(); ++t) {
    const bool last = t + 1 == tuples.size();
    const std::size_t remainder = num_pixels % tuple_size;
    const std::size_t want = (last && remainder != 0) ? remainder : tuple_size;
    if (tuples[t].size() != want) {
      throw Error(ErrorCode::InvariantViolation,
                  "tuple " + std::to_string(t) + " has " + std::to_string(tuples[t].size()) +
                      " pixels, expected " + std::to_string(want));
    }
    for (PixelIndex p : tuples[t]) {
      if (p >= num_pixels) {
        throw Error(ErrorCode::InvariantViolation,
                    "mapping references pixel " + std::to_string(p) + " outside retina");
      }
      if (seen[p]) {
        throw Error(ErrorCode::InvariantViolation,
                    "pixel " + std::to_string(p) + " appears in more than one tuple");
      }
      seen[p] = true;
    }
  }
  return TupleMapping(num_pixels, tuple_size, seed, std::move(tuples));
}

Address address_of(const BinaryPattern& pattern, std::span<const PixelIndex> tuple) {
  Address address = 0;
  for (PixelIndex p : tuple) {
    address = (address << 1) | pattern.at(p);
  }
  return address;
}

}  // namespace wisard
