#include "blockscript/interpreter.hpp"

#include "wisard/dataset.hpp"
#include "wisard/error.hpp"

namespace blockscript {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

}  // namespace

std::string_view to_string(StopReason reason) noexcept {
  switch (reason) {
    case StopReason::Completed: return "completed";
    case StopReason::EndOfInput: return "end of input";
    case StopReason::StepLimit: return "step limit reached";
  }
  return "?";
}

ExecutionSummary Interpreter::run(const Program& program) {
  summary_ = {};
  try {
    exec_block(program.statements);
  } catch (const Stop& stop) {
    summary_.stop = stop.reason;
  }
  return summary_;
}

void Interpreter::exec_block(const Block& block) {
  for (const Statement& s : block) exec(s);
}

std::filesystem::path Interpreter::resolve(const std::string& path) const {
  std::filesystem::path p(path);
  if (p.is_relative() && !options_.base_dir.empty()) return options_.base_dir / p;
  return p;
}

void Interpreter::runtime_error(const Statement& s, std::string message) {
  summary_.runtime_errors.push_back({s.location, message});
  Event e{Event::Kind::RuntimeError, s.location, {}, std::move(message), {}, {}, {}};
  io_.emit_event(e);
}

void Interpreter::train_one(const Statement& s, const wisard::BinaryPattern& p,
                            const std::string& label) {
  model_->train(p, label);
  ++summary_.examples_trained;
  ++summary_.trained_per_label[label];
  io_.emit_event({Event::Kind::Trained, s.location, label, {}, p, {}, {}});
}

void Interpreter::exec(const Statement& s) {
  if (summary_.statements_executed >= options_.limits.max_steps) throw Stop{StopReason::StepLimit};
  ++summary_.statements_executed;

  std::visit(
      overloaded{
          [&](const CreateWisard&) {
            const ModelConfig& cfg = options_.model;
            model_.emplace(cfg.width, cfg.height, cfg.tuple_size, cfg.seed);
            result_.reset();
            io_.emit_event({Event::Kind::ModelCreated, s.location, {}, {}, {}, {}, {}});
          },
          [&](const Say& say) { io_.write_line(eval(say.text)); },
          [&](const Ask& ask) {
            std::optional<std::string> line = io_.read_line();
            if (!line) throw Stop{StopReason::EndOfInput};
            vars_[ask.var] = trim(std::move(*line));
          },
          [&](const AcquireImage& acquire) {
            ImageSource source = acquire.source;
            if (auto* file = std::get_if<FileSource>(&source)) file->path = resolve(file->path).string();
            try {
              std::optional<wisard::BinaryPattern> p =
                  io_.acquire_image(source, options_.model.binarize_config());
              if (!p) throw Stop{StopReason::EndOfInput};
              image_ = std::move(*p);
            } catch (const wisard::Error& e) {
              runtime_error(s, std::string("cannot take picture: ") + e.what());
            }
          },
          [&](const Learn& learn) {
            if (!model_) return runtime_error(s, "no model: \"create wisard\" has not run");
            std::visit(
                overloaded{
                    [&](const FromPicture&) {
                      if (!image_) return runtime_error(s, "no picture has been taken");
                      train_one(s, *image_, learn.label);
                    },
                    [&](const FromFolder& folder) {
                      const std::string dir = resolve(folder.path).string();
                      const wisard::BinarizeConfig cfg = options_.model.binarize_config();
                      try {
                        wisard::DatasetLoad flat = wisard::load_image_folder(dir, learn.label, cfg);
                        wisard::DatasetLoad nested = wisard::load_labeled_dir(dir, cfg);
                        for (auto* load : {&flat, &nested}) {
                          for (const wisard::LabeledPattern& item : load->items) {
                            train_one(s, item.pattern, learn.label);
                          }
                          for (const wisard::FileDiagnostic& d : load->diagnostics) {
                            runtime_error(s, d.path + ": " + d.message);
                          }
                        }
                      } catch (const wisard::Error& e) {
                        runtime_error(s, e.what());
                      }
                    },
                },
                learn.from);
          },
          [&](const Recognize&) {
            if (!model_) return runtime_error(s, "no model: \"create wisard\" has not run");
            if (!image_) return runtime_error(s, "no picture has been taken");
            wisard::ClassifyOptions opts;
            opts.min_score = options_.model.min_score;
            result_ = model_->classify(*image_, opts);
            ++summary_.classifications;
            io_.emit_event({Event::Kind::Recognized, s.location, result_->decision.value_or(""), {},
                            image_, result_, {}});
          },
          [&](const ShowMentalImage& show) {
            if (!model_) return runtime_error(s, "no model: \"create wisard\" has not run");
            if (!model_->has_label(show.label)) {
              return runtime_error(s, "nothing learned yet for \"" + show.label + "\"");
            }
            wisard::MentalImage mi = model_->mental_image(show.label);
            io_.write_line("Mental image of \"" + show.label + "\":");
            for (const std::string& row : ascii_render(mi)) io_.write_line(row);
            io_.emit_event(
                {Event::Kind::MentalImageShown, s.location, show.label, {}, {}, {}, std::move(mi)});
          },
          [&](const RepeatForever& loop) {
            const std::size_t cap = options_.limits.max_loop_iterations;
            for (std::size_t i = 0; cap == 0 || i < cap; ++i) exec_block(loop.body);
            summary_.loop_limit_reached = true;
            io_.emit_event({Event::Kind::LoopLimit, s.location, {}, {}, {}, {}, {}});
          },
          [&](const If& branch) {
            exec_block(eval(branch.condition) ? branch.then_branch : branch.else_branch);
          },
      },
      s.node);
}

bool Interpreter::eval(const Condition& c) const {
  return std::visit(overloaded{
                        [&](const VarEquals& v) {
                          auto it = vars_.find(v.var);
                          return it != vars_.end() && it->second == v.literal;
                        },
                        [&](const ResultEquals& r) {
                          return result_ && result_->decision && *result_->decision == r.label;
                        },
                        [&](const ResultUnknown&) { return !result_ || result_->unknown(); },
                    },
                    c);
}

std::string Interpreter::eval(const TextExpr& e) const {
  return std::visit(overloaded{
                        [](const TextLiteral& t) { return t.text; },
                        [&](const VarRef& v) {
                          auto it = vars_.find(v.name);
                          return it == vars_.end() ? std::string() : it->second;
                        },
                        [&](const ResultRef&) {
                          return result_ && result_->decision ? *result_->decision
                                                              : std::string("unknown");
                        },
                    },
                    e);
}

std::vector<std::string> ascii_render(const wisard::MentalImage& image) {
  static constexpr std::string_view kRamp = " .:-=+*#%@";
  std::vector<std::string> rows;
  rows.reserve(image.height);
  for (std::size_t y = 0; y < image.height; ++y) {
    std::string row;
    row.reserve(image.width);
    for (std::size_t x = 0; x < image.width; ++x) {
      const wisard::Counter c = image.counts[y * image.width + x];
      std::size_t level = 0;
      if (image.max_count > 0) {
        level = static_cast<std::size_t>((c * (kRamp.size() - 1) + image.max_count / 2) /
                                         image.max_count);
      }
      row += kRamp[level];
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace blockscript
