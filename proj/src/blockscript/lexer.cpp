#include "lexer.hpp"

#include <cctype>

namespace blockscript::detail {
namespace {

bool word_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space_and_comments();
      const SourceLocation here = loc_;
      if (pos_ >= src_.size()) {
        out.push_back({TokenKind::End, "", here});
        return out;
      }
      const char c = src_[pos_];
      if (word_start(c)) {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && word_char(src_[pos_])) advance();
        out.push_back({TokenKind::Word, std::string(src_.substr(start, pos_ - start)), here});
      } else if (c == '"') {
        Token t = string_literal();
        const bool bad = t.kind == TokenKind::Invalid;
        out.push_back(std::move(t));
        if (bad) return out;
      } else if (c == '{' || c == '}') {
        advance();
        out.push_back({c == '{' ? TokenKind::LBrace : TokenKind::RBrace, std::string(1, c), here});
      } else if (c == '=' && peek(1) == '=') {
        advance();
        advance();
        out.push_back({TokenKind::EqualEqual, "==", here});
      } else if (c == '-' && peek(1) == '>') {
        advance();
        advance();
        out.push_back({TokenKind::Arrow, "->", here});
      } else {
        out.push_back({TokenKind::Invalid, "unexpected character '" + std::string(1, c) + "'",
                       here});
        return out;
      }
    }
  }

 private:
  char peek(std::size_t ahead) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }

  void advance() {
    const char c = src_[pos_++];
    if (c == '\n') {
      ++loc_.line;
      loc_.column = 1;
    } else if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) {
      // Columns count code points, not UTF-8 continuation bytes.
      ++loc_.column;
    }
  }

  void skip_space_and_comments() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  Token string_literal() {
    const SourceLocation open = loc_;
    advance();
    std::string text;
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '"') {
        advance();
        return {TokenKind::String, std::move(text), open};
      }
      if (c == '\n') break;
      if (c == '\\') {
        const SourceLocation esc = loc_;
        advance();
        if (pos_ >= src_.size()) break;
        const char e = src_[pos_];
        switch (e) {
          case '"': text += '"'; break;
          case '\\': text += '\\'; break;
          case 'n': text += '\n'; break;
          case 't': text += '\t'; break;
          default:
            return {TokenKind::Invalid, "unknown escape sequence '\\" + std::string(1, e) + "'",
                    esc};
        }
        advance();
        continue;
      }
      text += c;
      advance();
    }
    return {TokenKind::Invalid, "unterminated string literal", open};
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  SourceLocation loc_;
};

}  // namespace

std::vector<Token> tokenize(std::string_view source) { return Lexer(source).run(); }

std::string describe(const Token& token) {
  switch (token.kind) {
    case TokenKind::Word: return "'" + token.text + "'";
    case TokenKind::String: return "string \"" + token.text + "\"";
    case TokenKind::LBrace: return "'{'";
    case TokenKind::RBrace: return "'}'";
    case TokenKind::EqualEqual: return "'=='";
    case TokenKind::Arrow: return "'->'";
    case TokenKind::End: return "end of input";
    case TokenKind::Invalid: return token.text;
  }
  return "?";
}

}  // namespace blockscript::detail
