#include "blockscript/validator.hpp"

#include <algorithm>
#include <set>

namespace blockscript {

std::string format(const ValidationDiagnostic& d) {
  return std::to_string(d.location.line) + ":" + std::to_string(d.location.column) + ": " +
         (d.severity == Severity::Error ? "error" : "warning") + " [" + d.code + "]: " + d.message;
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void collect_ask_vars(const Block& block, std::set<std::string>& vars) {
  for (const Statement& s : block) {
    if (const auto* ask = std::get_if<Ask>(&s.node)) vars.insert(ask->var);
    if (const auto* loop = std::get_if<RepeatForever>(&s.node)) collect_ask_vars(loop->body, vars);
    if (const auto* branch = std::get_if<If>(&s.node)) {
      collect_ask_vars(branch->then_branch, vars);
      collect_ask_vars(branch->else_branch, vars);
    }
  }
}

class Validator {
 public:
  explicit Validator(std::set<std::string> ask_vars) : ask_vars_(std::move(ask_vars)) {}

  void walk(const Block& block) {
    for (const Statement& s : block) visit(s);
  }

  std::vector<ValidationDiagnostic> take() { return std::move(out_); }

 private:
  void error(const Statement& s, std::string code, std::string message) {
    out_.push_back({Severity::Error, s.location, std::move(code), std::move(message)});
  }

  void need_create(const Statement& s, const char* code) {
    if (!seen_create_) {
      error(s, code, "To use this block you must FIRST use \"create wisard\"");
    }
  }

  void need_picture(const Statement& s, const char* code) {
    if (!seen_picture_) {
      error(s, code, "To use this block you must FIRST use \"take picture\"");
    }
  }

  void visit(const Statement& s) {
    std::visit(
        overloaded{
            [&](const CreateWisard&) {
              if (seen_create_) {
                error(s, "DUPLICATE_CREATE",
                      "only one \"create wisard\" block is allowed per program");
              }
              seen_create_ = true;
            },
            [&](const Say& say) {
              if (const auto* v = std::get_if<VarRef>(&say.text)) check_var(s, v->name);
            },
            [&](const Ask&) {},
            [&](const AcquireImage&) { seen_picture_ = true; },
            [&](const Learn& learn) {
              need_create(s, "LEARN_BEFORE_CREATE");
              if (std::holds_alternative<FromPicture>(learn.from)) {
                need_picture(s, "LEARN_BEFORE_PICTURE");
              }
            },
            [&](const Recognize&) {
              need_create(s, "RECOGNIZE_BEFORE_CREATE");
              need_picture(s, "RECOGNIZE_BEFORE_PICTURE");
            },
            [&](const ShowMentalImage&) { need_create(s, "MENTAL_IMAGE_BEFORE_CREATE"); },
            [&](const RepeatForever& loop) { walk(loop.body); },
            [&](const If& branch) {
              if (const auto* v = std::get_if<VarEquals>(&branch.condition)) check_var(s, v->var);
              walk(branch.then_branch);
              walk(branch.else_branch);
            },
        },
        s.node);
  }

  void check_var(const Statement& s, const std::string& name) {
    if (!ask_vars_.contains(name)) {
      out_.push_back({Severity::Warning, s.location, "UNBOUND_VARIABLE",
                      "variable '" + name + "' is never set by an \"ask\" block"});
    }
  }

  std::set<std::string> ask_vars_;
  bool seen_create_ = false;
  bool seen_picture_ = false;
  std::vector<ValidationDiagnostic> out_;
};

bool block_uses_camera(const Block& block) {
  return std::any_of(block.begin(), block.end(), [](const Statement& s) {
    if (const auto* a = std::get_if<AcquireImage>(&s.node)) {
      return std::holds_alternative<CameraSource>(a->source);
    }
    if (const auto* loop = std::get_if<RepeatForever>(&s.node)) return block_uses_camera(loop->body);
    if (const auto* branch = std::get_if<If>(&s.node)) {
      return block_uses_camera(branch->then_branch) || block_uses_camera(branch->else_branch);
    }
    return false;
  });
}

}  // namespace

std::vector<ValidationDiagnostic> validate(const Program& program) {
  std::set<std::string> vars;
  collect_ask_vars(program.statements, vars);
  Validator v(std::move(vars));
  v.walk(program.statements);
  return v.take();
}

bool has_errors(const std::vector<ValidationDiagnostic>& diagnostics) {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [](const ValidationDiagnostic& d) { return d.severity == Severity::Error; });
}

bool uses_camera(const Program& program) { return block_uses_camera(program.statements); }

}  // namespace blockscript
