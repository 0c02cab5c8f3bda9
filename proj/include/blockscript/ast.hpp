#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

namespace blockscript {

struct SourceLocation {
  std::size_t line = 1;
  std::size_t column = 1;

  friend bool operator==(const SourceLocation&, const SourceLocation&) = default;
};

struct Statement;
using Block = std::vector<Statement>;

struct CameraSource {};
struct FileSource {
  std::string path;
};
using ImageSource = std::variant<CameraSource, FileSource>;

struct FromPicture {};
struct FromFolder {
  std::string path;
};

struct VarEquals {
  std::string var;
  std::string literal;
};
struct ResultEquals {
  std::string label;
};
struct ResultUnknown {};
using Condition = std::variant<VarEquals, ResultEquals, ResultUnknown>;

// say accepts a literal, an ask-bound variable, or the result register.
struct TextLiteral {
  std::string text;
};
struct VarRef {
  std::string name;
};
struct ResultRef {};
using TextExpr = std::variant<TextLiteral, VarRef, ResultRef>;

struct CreateWisard {};
struct Say {
  TextExpr text;
};
struct Ask {
  std::string var;
};
struct AcquireImage {
  ImageSource source;
};
struct Learn {
  std::string label;
  std::variant<FromPicture, FromFolder> from;
};
struct Recognize {};
struct ShowMentalImage {
  std::string label;
};
struct RepeatForever {
  Block body;
};
struct If {
  Condition condition;
  Block then_branch;
  Block else_branch;
  bool has_else = false;
};

struct Statement {
  std::variant<CreateWisard, Say, Ask, AcquireImage, Learn, Recognize, ShowMentalImage,
               RepeatForever, If>
      node;
  SourceLocation location;
};

struct Program {
  Block statements;
};

}  // namespace blockscript
