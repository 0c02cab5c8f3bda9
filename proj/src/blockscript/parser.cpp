#include "blockscript/parser.hpp"

#include "lexer.hpp"

namespace blockscript {

using detail::Token;
using detail::TokenKind;

std::string format(const SyntaxDiagnostic& d) {
  std::string out = std::to_string(d.location.line) + ":" + std::to_string(d.location.column) +
                    ": error: " + d.message;
  if (!d.expected.empty()) {
    out += " (expected ";
    for (std::size_t i = 0; i < d.expected.size(); ++i) {
      if (i > 0) out += i + 1 == d.expected.size() ? " or " : ", ";
      out += d.expected[i];
    }
    out += ")";
  }
  return out;
}

namespace {

struct ParseFailure {
  SyntaxDiagnostic diagnostic;
};

const std::vector<std::string> kStatementStarts = {
    "'create'", "'say'",  "'ask'",    "'take'", "'learn'",
    "'recognize'", "'show'", "'repeat'", "'if'"};

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  Program program() {
    Program p;
    while (peek().kind != TokenKind::End) {
      if (peek().kind == TokenKind::RBrace) {
        fail(peek(), "unexpected '}' outside any block", {});
      }
      p.statements.push_back(statement());
    }
    return p;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }

  const Token& next() {
    const Token& t = tokens_[pos_];
    if (t.kind != TokenKind::End && t.kind != TokenKind::Invalid) ++pos_;
    return t;
  }

  [[noreturn]] void fail(const Token& at, std::string message, std::vector<std::string> expected) {
    if (at.kind == TokenKind::Invalid) {
      throw ParseFailure{{at.location, at.text, {}}};
    }
    throw ParseFailure{{at.location, std::move(message), std::move(expected)}};
  }

  bool at_word(std::string_view w) const {
    return peek().kind == TokenKind::Word && peek().text == w;
  }

  void expect_word(std::string_view w) {
    if (!at_word(w)) {
      fail(peek(), "unexpected " + detail::describe(peek()), {"'" + std::string(w) + "'"});
    }
    next();
  }

  void expect(TokenKind kind, const char* spelled) {
    if (peek().kind != kind) {
      fail(peek(), "unexpected " + detail::describe(peek()), {spelled});
    }
    next();
  }

  std::string string_literal(const char* what, bool non_empty) {
    const Token& t = peek();
    if (t.kind != TokenKind::String) {
      fail(t, "unexpected " + detail::describe(t), {std::string(what)});
    }
    if (non_empty && t.text.empty()) fail(t, "label must not be empty", {});
    next();
    return t.text;
  }

  std::string identifier() {
    const Token& t = peek();
    if (t.kind != TokenKind::Word || t.text == "result") {
      fail(t, "unexpected " + detail::describe(t), {"variable name"});
    }
    next();
    return t.text;
  }

  Block block() {
    const Token& open = peek();
    expect(TokenKind::LBrace, "'{'");
    Block body;
    for (;;) {
      if (peek().kind == TokenKind::RBrace) {
        next();
        return body;
      }
      if (peek().kind == TokenKind::End) {
        fail(peek(),
             "unterminated block opened at " + std::to_string(open.location.line) + ":" +
                 std::to_string(open.location.column),
             {"'}'"});
      }
      body.push_back(statement());
    }
  }

  Condition condition() {
    if (at_word("result")) {
      next();
      if (peek().kind == TokenKind::EqualEqual) {
        next();
        return ResultEquals{string_literal("label string", true)};
      }
      if (at_word("is")) {
        next();
        expect_word("unknown");
        return ResultUnknown{};
      }
      fail(peek(), "unexpected " + detail::describe(peek()), {"'=='", "'is'"});
    }
    std::string var = identifier();
    expect(TokenKind::EqualEqual, "'=='");
    return VarEquals{std::move(var), string_literal("string", false)};
  }

  Statement statement() {
    const Token& head = peek();
    Statement s;
    s.location = head.location;
    if (head.kind != TokenKind::Word) {
      fail(head, "unexpected " + detail::describe(head), kStatementStarts);
    }
    const std::string word = head.text;
    next();

    if (word == "create") {
      expect_word("wisard");
      s.node = CreateWisard{};
    } else if (word == "say") {
      const Token& t = peek();
      if (t.kind == TokenKind::String) {
        next();
        s.node = Say{TextLiteral{t.text}};
      } else if (at_word("result")) {
        next();
        s.node = Say{ResultRef{}};
      } else if (t.kind == TokenKind::Word) {
        next();
        s.node = Say{VarRef{t.text}};
      } else {
        fail(t, "unexpected " + detail::describe(t), {"string", "variable name", "'result'"});
      }
    } else if (word == "ask") {
      expect(TokenKind::Arrow, "'->'");
      s.node = Ask{identifier()};
    } else if (word == "take") {
      expect_word("picture");
      expect_word("from");
      if (at_word("camera")) {
        next();
        s.node = AcquireImage{CameraSource{}};
      } else if (at_word("file")) {
        next();
        s.node = AcquireImage{FileSource{string_literal("file path string", true)}};
      } else {
        fail(peek(), "unexpected " + detail::describe(peek()), {"'camera'", "'file'"});
      }
    } else if (word == "learn") {
      std::string label = string_literal("label string", true);
      expect_word("from");
      if (at_word("picture")) {
        next();
        s.node = Learn{std::move(label), FromPicture{}};
      } else if (at_word("folder")) {
        next();
        s.node = Learn{std::move(label), FromFolder{string_literal("folder path string", true)}};
      } else {
        fail(peek(), "unexpected " + detail::describe(peek()), {"'picture'", "'folder'"});
      }
    } else if (word == "recognize") {
      s.node = Recognize{};
    } else if (word == "show") {
      expect_word("mental");
      expect_word("image");
      expect_word("of");
      s.node = ShowMentalImage{string_literal("label string", true)};
    } else if (word == "repeat") {
      expect_word("forever");
      s.node = RepeatForever{block()};
    } else if (word == "if") {
      If stmt;
      stmt.condition = condition();
      stmt.then_branch = block();
      if (at_word("else")) {
        next();
        stmt.else_branch = block();
        stmt.has_else = true;
      }
      s.node = std::move(stmt);
    } else {
      fail(head, "unknown keyword '" + word + "'", kStatementStarts);
    }
    return s;
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

ParseResult parse(std::string_view source) {
  ParseResult result;
  try {
    result.program = Parser(detail::tokenize(source)).program();
  } catch (const ParseFailure& f) {
    result.diagnostics.push_back(f.diagnostic);
  }
  return result;
}

}  // namespace blockscript
