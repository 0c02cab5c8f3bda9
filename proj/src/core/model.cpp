#include "wisard/model.hpp"

#include <algorithm>

#include "wisard/error.hpp"

namespace wisard {

Counter Discriminator::counter_mass() const noexcept {
  Counter mass = 0;
  for (const Neuron& neuron : neurons_) {
    for (const auto& [address, counter] : neuron) mass += counter;
  }
  return mass;
}

WisardModel::WisardModel(std::size_t width, std::size_t height, std::size_t tuple_size,
                         std::uint64_t seed)
    : width_(width), height_(height),
      mapping_(TupleMapping::generate(width * height, tuple_size, seed)) {}

WisardModel::WisardModel(std::size_t width, std::size_t height, TupleMapping mapping)
    : width_(width), height_(height), mapping_(std::move(mapping)) {
  if (mapping_.num_pixels() != width_ * height_) {
    throw Error(ErrorCode::InvariantViolation,
                "mapping covers " + std::to_string(mapping_.num_pixels()) +
                    " pixels but retina has " + std::to_string(width_ * height_));
  }
}

std::vector<std::string> WisardModel::labels() const {
  std::vector<std::string> out;
  out.reserve(discriminators_.size());
  for (const auto& [label, d] : discriminators_) out.push_back(label);
  return out;
}

const Discriminator& WisardModel::discriminator(const std::string& label) const {
  auto it = discriminators_.find(label);
  if (it == discriminators_.end()) {
    throw Error(ErrorCode::UnknownLabel, "unknown label \"" + label + "\"");
  }
  return it->second;
}

void WisardModel::check_dims(const BinaryPattern& pattern) const {
  if (pattern.width() != width_ || pattern.height() != height_) {
    throw Error(ErrorCode::DimensionMismatch,
                "pattern is " + std::to_string(pattern.width()) + "x" +
                    std::to_string(pattern.height()) + ", model retina is " +
                    std::to_string(width_) + "x" + std::to_string(height_));
  }
}

std::vector<Address> WisardModel::addresses(const BinaryPattern& pattern) const {
  check_dims(pattern);
  std::vector<Address> out;
  out.reserve(mapping_.tuple_count());
  for (const Tuple& tuple : mapping_.tuples()) out.push_back(address_of(pattern, tuple));
  return out;
}

void WisardModel::train(const BinaryPattern& pattern, const std::string& label) {
  if (label.empty()) throw Error(ErrorCode::EmptyLabel, "label must not be empty");
  const std::vector<Address> addr = addresses(pattern);

  auto it = discriminators_.find(label);
  if (it == discriminators_.end()) {
    it = discriminators_.emplace(label, Discriminator(label, mapping_.tuple_count())).first;
  }
  Discriminator& d = it->second;
  for (std::size_t i = 0; i < addr.size(); ++i) ++d.neurons_[i][addr[i]];
  ++d.examples_trained_;
}

Scores WisardModel::score_addresses(const std::vector<Address>& addr,
                                    std::size_t bleach) const {
  Scores scores;
  for (const auto& [label, d] : discriminators_) {
    std::size_t score = 0;
    for (std::size_t i = 0; i < addr.size(); ++i) {
      const Neuron& neuron = d.neurons_[i];
      auto hit = neuron.find(addr[i]);
      if (hit != neuron.end() && hit->second >= bleach) ++score;
    }
    scores.emplace(label, score);
  }
  return scores;
}

Scores WisardModel::responses(const BinaryPattern& pattern, std::size_t bleach) const {
  if (bleach < 1) throw Error(ErrorCode::InvalidArgument, "bleach level must be >= 1");
  return score_addresses(addresses(pattern), bleach);
}

namespace {

std::size_t top_score(const Scores& scores) {
  std::size_t top = 0;
  for (const auto& [label, s] : scores) top = std::max(top, s);
  return top;
}

}  // namespace

ClassificationOutcome WisardModel::classify(const BinaryPattern& pattern,
                                            const ClassifyOptions& options) const {
  const std::vector<Address> addr = addresses(pattern);

  ClassificationOutcome out;
  std::size_t bleach = 1;
  Scores scores = score_addresses(addr, bleach);
  out.trace.push_back({bleach, scores});

  std::size_t top = top_score(scores);
  if (top == 0 || top < options.min_score) {
    out.final_bleach = bleach;
    out.scores = std::move(scores);
    return out;
  }

  for (;;) {
    std::vector<std::string> tied;
    for (const auto& [label, s] : scores) {
      if (s == top) tied.push_back(label);
    }
    if (tied.size() == 1) {
      out.decision = tied.front();
      break;
    }

    Scores next = score_addresses(addr, bleach + 1);
    out.trace.push_back({bleach + 1, next});
    const std::size_t next_top = top_score(next);
    if (next_top == 0) {
      // Bleaching exhausted the tie; fall back to the last informative level.
      out.decision = tied.front();
      out.tie_broken = true;
      break;
    }
    ++bleach;
    scores = std::move(next);
    top = next_top;
  }
  out.final_bleach = bleach;
  out.scores = std::move(scores);
  return out;
}

MentalImage WisardModel::mental_image(const std::string& label) const {
  const Discriminator& d = discriminator(label);
  MentalImage image;
  image.width = width_;
  image.height = height_;
  image.counts.assign(width_ * height_, 0);

  for (std::size_t i = 0; i < d.neurons_.size(); ++i) {
    const Tuple& tuple = mapping_.tuple(i);
    const std::size_t n = tuple.size();
    for (const auto& [address, counter] : d.neurons_[i]) {
      for (std::size_t bit = 0; bit < n; ++bit) {
        if ((address >> (n - 1 - bit)) & 1u) image.counts[tuple[bit]] += counter;
      }
    }
  }
  for (Counter c : image.counts) image.max_count = std::max(image.max_count, c);
  return image;
}

void WisardModel::remove_label(const std::string& label) {
  if (discriminators_.erase(label) == 0) {
    throw Error(ErrorCode::UnknownLabel, "unknown label \"" + label + "\"");
  }
}

void WisardModel::insert_discriminator(Discriminator discriminator) {
  const std::string& label = discriminator.label();
  if (label.empty()) throw Error(ErrorCode::EmptyLabel, "label must not be empty");
  if (discriminator.neurons_.size() != mapping_.tuple_count()) {
    throw Error(ErrorCode::InvariantViolation,
                "discriminator \"" + label + "\" has " +
                    std::to_string(discriminator.neurons_.size()) + " neurons, expected " +
                    std::to_string(mapping_.tuple_count()));
  }
  for (std::size_t i = 0; i < discriminator.neurons_.size(); ++i) {
    const std::size_t n = mapping_.tuple(i).size();
    for (const auto& [address, counter] : discriminator.neurons_[i]) {
      if (static_cast<std::uint64_t>(address) >= (std::uint64_t{1} << n)) {
        throw Error(ErrorCode::InvariantViolation,
                    "address " + std::to_string(address) + " does not fit a " +
                        std::to_string(n) + "-pixel tuple");
      }
      if (counter == 0) {
        throw Error(ErrorCode::InvariantViolation, "stored counters must be positive");
      }
    }
  }
  // Each example bumps exactly one counter per neuron.
  for (const Neuron& neuron : discriminator.neurons_) {
    Counter mass = 0;
    for (const auto& [address, counter] : neuron) mass += counter;
    if (mass != discriminator.examples_trained_) {
      throw Error(ErrorCode::InvariantViolation,
                  "counter mass of \"" + label + "\" disagrees with examples_trained");
    }
  }
  const std::string key = label;
  discriminators_.insert_or_assign(key, std::move(discriminator));
}

}  // namespace wisard
