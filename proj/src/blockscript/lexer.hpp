#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "blockscript/ast.hpp"

namespace blockscript::detail {

enum class TokenKind { Word, String, LBrace, RBrace, EqualEqual, Arrow, End, Invalid };

struct Token {
  TokenKind kind;
  std::string text;
  SourceLocation location;
};

/// Invalid tokens carry the error message in `text`; lexing stops there.
std::vector<Token> tokenize(std::string_view source);

std::string describe(const Token& token);

}  // namespace blockscript::detail
