#pragma once

#include <string>
#include <vector>

#include "blockscript/ast.hpp"

namespace blockscript {

enum class Severity { Error, Warning };

struct ValidationDiagnostic {
  Severity severity;
  SourceLocation location;
  std::string code;
  std::string message;
};

std::string format(const ValidationDiagnostic& d);

/// Positional checks in lexical (source) order, mirroring disabled-block
/// warnings of a block editor:
///   LEARN_BEFORE_CREATE, RECOGNIZE_BEFORE_CREATE, MENTAL_IMAGE_BEFORE_CREATE,
///   LEARN_BEFORE_PICTURE, RECOGNIZE_BEFORE_PICTURE, DUPLICATE_CREATE (errors);
///   UNBOUND_VARIABLE (warning).
/// Dead branches are checked too, so this is stricter than a flow analysis.
std::vector<ValidationDiagnostic> validate(const Program& program);

bool has_errors(const std::vector<ValidationDiagnostic>& diagnostics);

/// True when any statement acquires from the camera.
bool uses_camera(const Program& program);

}  // namespace blockscript
