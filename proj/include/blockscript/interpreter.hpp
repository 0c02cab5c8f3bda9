#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "blockscript/ast.hpp"
#include "wisard/image.hpp"
#include "wisard/model.hpp"

namespace blockscript {

/// Settings "create wisard" instantiates the model with.
struct ModelConfig {
  std::size_t width = 32;
  std::size_t height = 32;
  std::size_t tuple_size = 16;
  std::uint64_t seed = 0;
  int threshold = 128;
  std::size_t min_score = 0;

  wisard::BinarizeConfig binarize_config() const { return {threshold, width, height}; }
};

struct RunLimits {
  std::size_t max_steps = 1'000'000;
  /// Iterations per "repeat forever" execution; 0 means unbounded.
  std::size_t max_loop_iterations = 0;
};

struct RunOptions {
  ModelConfig model;
  RunLimits limits;
  /// Relative paths in the program resolve against this directory.
  std::filesystem::path base_dir;
};

struct Event {
  enum class Kind { ModelCreated, Trained, Recognized, MentalImageShown, RuntimeError, LoopLimit };
  Kind kind;
  SourceLocation location;
  std::string label;
  std::string message;
  std::optional<wisard::BinaryPattern> pattern;
  std::optional<wisard::ClassificationOutcome> outcome;
  std::optional<wisard::MentalImage> mental_image;
};

/// Host services the interpreter runs against (console, scripted session,
/// tests).
class IoPort {
 public:
  virtual ~IoPort() = default;

  virtual void write_line(std::string_view text) = 0;
  /// Blocks until a line is available; nullopt at end of input.
  virtual std::optional<std::string> read_line() = 0;
  /// nullopt when the source has no more frames (end of input). Throws
  /// wisard::Error when an image cannot be loaded.
  virtual std::optional<wisard::BinaryPattern> acquire_image(
      const ImageSource& source, const wisard::BinarizeConfig& config) = 0;
  virtual void emit_event(const Event&) {}
};

enum class StopReason { Completed, EndOfInput, StepLimit };

std::string_view to_string(StopReason reason) noexcept;

struct RuntimeDiagnostic {
  SourceLocation location;
  std::string message;
};

struct ExecutionSummary {
  std::size_t statements_executed = 0;
  std::size_t examples_trained = 0;
  std::map<std::string, std::size_t> trained_per_label;
  std::size_t classifications = 0;
  StopReason stop = StopReason::Completed;
  bool loop_limit_reached = false;
  std::vector<RuntimeDiagnostic> runtime_errors;
};

class Interpreter {
 public:
  Interpreter(RunOptions options, IoPort& io) : options_(std::move(options)), io_(io) {}

  /// Executes in source order. The caller is expected to have validated the
  /// program; runtime checks still guard against a missing model or image.
  ExecutionSummary run(const Program& program);

  const std::optional<wisard::WisardModel>& model() const noexcept { return model_; }
  /// Outcome of the last "recognize"; its decision is the result register.
  const std::optional<wisard::ClassificationOutcome>& result() const noexcept { return result_; }

 private:
  struct Stop {
    StopReason reason;
  };

  void exec_block(const Block& block);
  void exec(const Statement& s);
  bool eval(const Condition& c) const;
  std::string eval(const TextExpr& e) const;
  void runtime_error(const Statement& s, std::string message);
  void train_one(const Statement& s, const wisard::BinaryPattern& p, const std::string& label);
  std::filesystem::path resolve(const std::string& path) const;

  RunOptions options_;
  IoPort& io_;
  ExecutionSummary summary_;
  std::optional<wisard::WisardModel> model_;
  std::optional<wisard::BinaryPattern> image_;
  std::optional<wisard::ClassificationOutcome> result_;
  std::map<std::string, std::string> vars_;
};

inline ExecutionSummary run(const Program& program, const RunOptions& options, IoPort& io) {
  return Interpreter(options, io).run(program);
}

/// Text shading of a mental image, one string per row, darkest = '@'.
std::vector<std::string> ascii_render(const wisard::MentalImage& image);

}  // namespace blockscript
