#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "wisard/mapping.hpp"
#include "wisard/pattern.hpp"

namespace wisard {

using Counter = std::uint64_t;

/// A RAM neuron with bleaching counters. Only addresses written at least once
/// are stored.
using Neuron = std::unordered_map<Address, Counter>;

/// Label -> adder value.
using Scores = std::map<std::string, std::size_t>;

class Discriminator {
 public:
  Discriminator(std::string label, std::size_t neuron_count)
      : label_(std::move(label)), neurons_(neuron_count) {}
  Discriminator(std::string label, std::vector<Neuron> neurons, std::uint64_t examples_trained)
      : label_(std::move(label)), neurons_(std::move(neurons)),
        examples_trained_(examples_trained) {}

  const std::string& label() const noexcept { return label_; }
  const std::vector<Neuron>& neurons() const noexcept { return neurons_; }
  std::uint64_t examples_trained() const noexcept { return examples_trained_; }

  /// Sum of every counter in every neuron.
  Counter counter_mass() const noexcept;

 private:
  friend class WisardModel;

  std::string label_;
  std::vector<Neuron> neurons_;
  std::uint64_t examples_trained_ = 0;
};

struct BleachLevel {
  std::size_t bleach;
  Scores scores;

  friend bool operator==(const BleachLevel&, const BleachLevel&) = default;
};

struct ClassificationOutcome {
  /// Chosen label; empty means Unknown.
  std::optional<std::string> decision;
  std::size_t final_bleach = 1;
  Scores scores;
  bool tie_broken = false;
  /// Every bleach level visited, in order.
  std::vector<BleachLevel> trace;

  bool unknown() const noexcept { return !decision.has_value(); }

  friend bool operator==(const ClassificationOutcome&, const ClassificationOutcome&) = default;
};

struct ClassifyOptions {
  /// Unknown is returned when the best score at b=1 is zero or below this.
  std::size_t min_score = 0;
};

struct MentalImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<Counter> counts;
  Counter max_count = 0;
};

/// WiSARD classifier with bleaching. All discriminators share one mapping.
///
/// Not internally synchronized: concurrent const access is safe, train and
/// remove_label need exclusive access.
class WisardModel {
 public:
  static constexpr int kFormatVersion = 1;

  WisardModel(std::size_t width, std::size_t height, std::size_t tuple_size,
              std::uint64_t seed);
  /// Model with an explicit (injected) mapping.
  WisardModel(std::size_t width, std::size_t height, TupleMapping mapping);

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  const TupleMapping& mapping() const noexcept { return mapping_; }
  std::size_t tuple_count() const noexcept { return mapping_.tuple_count(); }

  const std::map<std::string, Discriminator>& discriminators() const noexcept {
    return discriminators_;
  }
  std::vector<std::string> labels() const;
  bool has_label(const std::string& label) const { return discriminators_.contains(label); }
  const Discriminator& discriminator(const std::string& label) const;

  /// Creates the label's discriminator on first use, then increments one
  /// counter per neuron.
  void train(const BinaryPattern& pattern, const std::string& label);

  /// Number of neurons per discriminator whose addressed counter is >= bleach.
  Scores responses(const BinaryPattern& pattern, std::size_t bleach = 1) const;

  ClassificationOutcome classify(const BinaryPattern& pattern,
                                 const ClassifyOptions& options = {}) const;

  MentalImage mental_image(const std::string& label) const;

  void remove_label(const std::string& label);

  /// Adds a fully built discriminator; used by deserialization.
  void insert_discriminator(Discriminator discriminator);

 private:
  void check_dims(const BinaryPattern& pattern) const;
  std::vector<Address> addresses(const BinaryPattern& pattern) const;
  Scores score_addresses(const std::vector<Address>& addresses, std::size_t bleach) const;

  std::size_t width_;
  std::size_t height_;
  TupleMapping mapping_;
  std::map<std::string, Discriminator> discriminators_;
};

}  // namespace wisard
