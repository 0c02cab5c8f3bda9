#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "blockscript/ast.hpp"

namespace blockscript {

struct SyntaxDiagnostic {
  SourceLocation location;
  std::string message;
  std::vector<std::string> expected;
};

std::string format(const SyntaxDiagnostic& d);

struct ParseResult {
  std::optional<Program> program;
  std::vector<SyntaxDiagnostic> diagnostics;

  bool ok() const noexcept { return program.has_value(); }
};

/// Grammar:
///   program := stmt*
///   stmt    := "create wisard" | "say" (STRING | IDENT | "result")
///            | "ask" "->" IDENT
///            | "take picture" ("from" "camera" | "from file" STRING)
///            | "learn" STRING ("from picture" | "from folder" STRING)
///            | "recognize" | "show mental image of" STRING
///            | "repeat forever" block | "if" cond block ("else" block)?
///   cond    := IDENT "==" STRING | "result" "==" STRING | "result" "is" "unknown"
///   block   := "{" stmt* "}"
/// Comments run from '#' to end of line.
ParseResult parse(std::string_view source);

}  // namespace blockscript
