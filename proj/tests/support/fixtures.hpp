#pragma once

// Shared fixtures and reference implementations for the test suites. The
// references here never call into the engine's training or scoring code;
// they recompute everything from the raw training history.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "wisard/mapping.hpp"
#include "wisard/model.hpp"
#include "wisard/pattern.hpp"

namespace fixtures {

using wisard::BinaryPattern;
using wisard::Tuple;

// 3x5 letters, rows top to bottom. Pixel (row r, column c) has index
// (r-1)*3 + c with columns A,B,C = 0,1,2.
inline BinaryPattern canonical_e() {
  return BinaryPattern::from_rows({"111", "100", "111", "100", "111"});
}

inline BinaryPattern canonical_t() {
  return BinaryPattern::from_rows({"111", "010", "010", "010", "010"});
}

// (A4,B2,C1), (A1,C4,A5), (C3,A2,B4), (B3,C5,A3), (C2,B1,B5)
inline std::vector<Tuple> letter_tuples() {
  return {{9, 4, 2}, {0, 11, 12}, {8, 3, 10}, {7, 14, 6}, {5, 1, 13}};
}

inline wisard::WisardModel letter_model() {
  return wisard::WisardModel(3, 5, wisard::TupleMapping::from_tuples(15, 3, letter_tuples()));
}

inline BinaryPattern random_pattern(std::mt19937_64& rng, std::size_t w, std::size_t h) {
  std::vector<std::uint8_t> bits(w * h);
  for (auto& b : bits) b = static_cast<std::uint8_t>(rng() & 1u);
  return BinaryPattern(w, h, std::move(bits));
}

inline BinaryPattern flip_distinct(std::mt19937_64& rng, BinaryPattern p, std::size_t k) {
  std::vector<std::size_t> idx(p.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::shuffle(idx.begin(), idx.end(), rng);
  for (std::size_t i = 0; i < k; ++i) p.flip(idx[i]);
  return p;
}

inline std::size_t uniform(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

// Address recomputed bit by bit from the raw pattern.
inline std::uint64_t naive_address(const BinaryPattern& p, const Tuple& tuple) {
  std::uint64_t a = 0;
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    if (p.bits()[tuple[i]]) a += std::uint64_t{1} << (tuple.size() - 1 - i);
  }
  return a;
}

/// Keeps the full training history and answers every query by rescanning it.
class ReferenceWisard {
 public:
  explicit ReferenceWisard(std::vector<Tuple> tuples) : tuples_(std::move(tuples)) {}

  void train(const BinaryPattern& p, const std::string& label) { history_[label].push_back(p); }

  // Counter = number of training examples of `label` that hit the same address.
  std::size_t counter(const std::string& label, std::size_t neuron, std::uint64_t address) const {
    std::size_t c = 0;
    for (const BinaryPattern& ex : history_.at(label)) {
      if (naive_address(ex, tuples_[neuron]) == address) ++c;
    }
    return c;
  }

  wisard::Scores scores(const BinaryPattern& p, std::size_t bleach) const {
    wisard::Scores out;
    for (const auto& [label, examples] : history_) {
      std::size_t s = 0;
      for (std::size_t n = 0; n < tuples_.size(); ++n) {
        if (counter(label, n, naive_address(p, tuples_[n])) >= bleach) ++s;
      }
      out[label] = s;
    }
    return out;
  }

  struct Answer {
    std::optional<std::string> decision;
    std::size_t bleach = 1;
    bool tie_broken = false;
    wisard::Scores scores;
  };

  // Escalate b while the best score is shared; if everything bleaches to
  // zero, take the smallest tied label at the last informative level.
  Answer classify(const BinaryPattern& p) const {
    Answer a;
    a.scores = scores(p, 1);
    auto best = [](const wisard::Scores& s) {
      std::size_t m = 0;
      for (const auto& kv : s) m = std::max(m, kv.second);
      return m;
    };
    if (best(a.scores) == 0) return a;
    for (std::size_t b = 1;; ++b) {
      const std::size_t top = best(a.scores);
      std::vector<std::string> tied;
      for (const auto& [l, s] : a.scores) {
        if (s == top) tied.push_back(l);
      }
      std::sort(tied.begin(), tied.end());
      if (tied.size() == 1) {
        a.decision = tied[0];
        a.bleach = b;
        return a;
      }
      wisard::Scores next = scores(p, b + 1);
      if (best(next) == 0) {
        a.decision = tied[0];
        a.bleach = b;
        a.tie_broken = true;
        return a;
      }
      a.scores = std::move(next);
    }
  }

  const std::vector<BinaryPattern>& examples(const std::string& label) const {
    return history_.at(label);
  }

 private:
  std::vector<Tuple> tuples_;
  std::map<std::string, std::vector<BinaryPattern>> history_;
};

/// Original WiSARD: dense 0/1 RAMs, written once, never counted.
class BinaryRamWisard {
 public:
  explicit BinaryRamWisard(std::vector<Tuple> tuples) : tuples_(std::move(tuples)) {}

  void train(const BinaryPattern& p, const std::string& label) {
    auto& rams = rams_[label];
    if (rams.empty()) {
      for (const Tuple& t : tuples_) rams.emplace_back(std::size_t{1} << t.size(), false);
    }
    for (std::size_t n = 0; n < tuples_.size(); ++n) rams[n][naive_address(p, tuples_[n])] = true;
  }

  wisard::Scores adders(const BinaryPattern& p) const {
    wisard::Scores out;
    for (const auto& [label, rams] : rams_) {
      std::size_t s = 0;
      for (std::size_t n = 0; n < tuples_.size(); ++n) s += rams[n][naive_address(p, tuples_[n])];
      out[label] = s;
    }
    return out;
  }

 private:
  std::vector<Tuple> tuples_;
  std::map<std::string, std::vector<std::vector<bool>>> rams_;
};

/// Mental image oracle under a partition mapping: per-pixel count of
/// training examples with that pixel set.
inline std::vector<std::uint64_t> pixel_sum(const std::vector<BinaryPattern>& examples,
                                            std::size_t num_pixels) {
  std::vector<std::uint64_t> sum(num_pixels, 0);
  for (const BinaryPattern& p : examples) {
    for (std::size_t i = 0; i < num_pixels; ++i) sum[i] += p.bits()[i];
  }
  return sum;
}

}  // namespace fixtures
