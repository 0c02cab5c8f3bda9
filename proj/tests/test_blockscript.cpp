#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "blockscript/interpreter.hpp"
#include "blockscript/parser.hpp"
#include "blockscript/scripted_io.hpp"
#include "blockscript/validator.hpp"
#include "support/fig40.hpp"
#include "support/fixtures.hpp"
#include "wisard/image.hpp"

using namespace blockscript;
namespace fs = std::filesystem;

namespace {

Program must_parse(std::string_view src) {
  ParseResult r = parse(src);
  if (!r.ok()) {
    for (const auto& d : r.diagnostics) MESSAGE(format(d));
  }
  REQUIRE(r.ok());
  return *r.program;
}

SyntaxDiagnostic must_fail(std::string_view src) {
  ParseResult r = parse(src);
  REQUIRE_FALSE(r.ok());
  REQUIRE_FALSE(r.diagnostics.empty());
  return r.diagnostics.front();
}

std::vector<std::string> codes(const std::vector<ValidationDiagnostic>& ds) {
  std::vector<std::string> out;
  for (const auto& d : ds) out.push_back(d.code);
  return out;
}

template <class T>
const T& as(const Statement& s) {
  REQUIRE(std::holds_alternative<T>(s.node));
  return std::get<T>(s.node);
}

class TempDir {
 public:
  explicit TempDir(const std::string& name) : path_(fs::temp_directory_path() / name) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }
  void put(const std::string& rel, const wisard::BinaryPattern& p) const {
    fs::create_directories((path_ / rel).parent_path());
    wisard::write_pgm_file(wisard::pattern_to_image(p), (path_ / rel).string());
  }

 private:
  fs::path path_;
};

RunOptions small(std::size_t w, std::size_t h, std::size_t k, const fs::path& base = {}) {
  RunOptions o;
  o.model.width = w;
  o.model.height = h;
  o.model.tuple_size = k;
  o.model.seed = 5;
  o.base_dir = base;
  return o;
}

// Replays every Trained event into its own model and checks each Recognized
// event against that model's classify.
class ShadowIo : public StreamIo {
 public:
  ShadowIo(std::istream& in, std::ostream& out, std::vector<std::string> frames, const ModelConfig& cfg)
      : StreamIo(in, out, std::move(frames)), shadow_(cfg.width, cfg.height, cfg.tuple_size, cfg.seed) {}

  void emit_event(const Event& e) override {
    StreamIo::emit_event(e);
    if (e.kind == Event::Kind::ModelCreated) shadow_ = wisard::WisardModel(shadow_.width(), shadow_.height(),
                                                                          shadow_.mapping());
    if (e.kind == Event::Kind::Trained) shadow_.train(*e.pattern, e.label);
    if (e.kind == Event::Kind::Recognized) {
      ++checked;
      if (shadow_.classify(*e.pattern) != *e.outcome) ++mismatches;
    }
  }

  int checked = 0;
  int mismatches = 0;

 private:
  wisard::WisardModel shadow_;
};

}  // namespace

TEST_SUITE("parse") {
  TEST_CASE("create wisard") {
    Program p = must_parse("create wisard");
    REQUIRE(p.statements.size() == 1);
    as<CreateWisard>(p.statements[0]);
    CHECK(p.statements[0].location == SourceLocation{1, 1});
  }

  TEST_CASE("every statement form") {
    Program p = must_parse(R"(# header
create wisard
say "hi"   # trailing
say key
say result
ask -> key
take picture from camera
take picture from file "a.pgm"
learn "A" from picture
learn "B" from folder "dir"
recognize
show mental image of "A"
if result is unknown { say "?" }
if result == "A" { } else { say "no" }
repeat forever { recognize }
)");
    REQUIRE(p.statements.size() == 14);
    CHECK(std::get<TextLiteral>(as<Say>(p.statements[1]).text).text == "hi");
    CHECK(std::get<VarRef>(as<Say>(p.statements[2]).text).name == "key");
    CHECK(std::holds_alternative<ResultRef>(as<Say>(p.statements[3]).text));
    CHECK(as<Ask>(p.statements[4]).var == "key");
    CHECK(std::holds_alternative<CameraSource>(as<AcquireImage>(p.statements[5]).source));
    CHECK(std::get<FileSource>(as<AcquireImage>(p.statements[6]).source).path == "a.pgm");
    CHECK(std::holds_alternative<FromPicture>(as<Learn>(p.statements[7]).from));
    CHECK(std::get<FromFolder>(as<Learn>(p.statements[8]).from).path == "dir");
    as<Recognize>(p.statements[9]);
    CHECK(as<ShowMentalImage>(p.statements[10]).label == "A");
    CHECK(std::holds_alternative<ResultUnknown>(as<If>(p.statements[11]).condition));
    const If& second = as<If>(p.statements[12]);
    CHECK(std::get<ResultEquals>(second.condition).label == "A");
    CHECK(second.has_else);
    CHECK(second.then_branch.empty());
    CHECK(as<RepeatForever>(p.statements[13]).body.size() == 1);
    CHECK(p.statements[13].location == SourceLocation{15, 1});
  }

  TEST_CASE("teaching program shape") {
    const Program p = fixtures::fig40_program();
    REQUIRE(p.statements.size() == 2);
    as<CreateWisard>(p.statements[0]);
    const Block& body = as<RepeatForever>(p.statements[1]).body;
    REQUIRE(body.size() == 4);
    const If& top = as<If>(body[3]);
    CHECK(std::get<VarEquals>(top.condition).var == "key");
    CHECK(std::get<VarEquals>(top.condition).literal == "T");

    const If& kind = as<If>(top.then_branch.back());
    CHECK(as<Learn>(kind.then_branch.back()).label == "Flower");
    CHECK(as<Learn>(kind.else_branch.back()).label == "Star");

    int recognizes = 0;
    for (const Statement& s : top.else_branch) recognizes += std::holds_alternative<Recognize>(s.node);
    CHECK(recognizes == 1);
    const If& flower = as<If>(top.else_branch.back());
    CHECK(std::get<ResultEquals>(flower.condition).label == "Flower");
    const If& star = as<If>(flower.else_branch.front());
    CHECK(std::get<ResultEquals>(star.condition).label == "Star");
    CHECK(std::get<TextLiteral>(as<Say>(star.else_branch.front()).text).text ==
          "I don't know what this image is");
  }

  TEST_CASE("unclosed quote points at the literal") {
    const SyntaxDiagnostic d = must_fail("create wisard\nlearn \"X from picture\n");
    CHECK(d.location == SourceLocation{2, 7});
    CHECK(format(d).find("2:7") != std::string::npos);
  }

  TEST_CASE("unknown keyword") {
    const SyntaxDiagnostic d = must_fail("create wisard\n  fly away\n");
    CHECK(d.location == SourceLocation{2, 3});
  }

  TEST_CASE("unterminated block") {
    const SyntaxDiagnostic d = must_fail("repeat forever {\n  recognize\n");
    CHECK(d.location.line >= 2);
    CHECK(std::find(d.expected.begin(), d.expected.end(), "'}'") != d.expected.end());
  }

  TEST_CASE("other malformed statements") {
    must_fail("learn \"\" from picture");
    must_fail("learn \"A\" from");
    must_fail("take picture");
    must_fail("ask key");
    must_fail("if key { }");
    must_fail("if result is known { }");
    must_fail("create");
    must_fail("}");
  }
}

TEST_SUITE("validate") {
  TEST_CASE("learn before create") {
    const auto ds = validate(must_parse("learn \"E\" from folder \"e\"\ncreate wisard\n"));
    REQUIRE(ds.size() == 1);
    CHECK(ds[0].severity == Severity::Error);
    CHECK(ds[0].code == "LEARN_BEFORE_CREATE");
    CHECK(ds[0].message.find("must FIRST use") != std::string::npos);
    CHECK(ds[0].location == SourceLocation{1, 1});
  }

  TEST_CASE("duplicate create") {
    const auto ds = validate(must_parse("create wisard\ncreate wisard\n"));
    CHECK(codes(ds) == std::vector<std::string>{"DUPLICATE_CREATE"});
    CHECK(ds[0].location.line == 2);
  }

  TEST_CASE("teaching program is valid") {
    const auto ds = validate(fixtures::fig40_program());
    CHECK_FALSE(has_errors(ds));
    CHECK(ds.empty());
    CHECK(uses_camera(fixtures::fig40_program()));
  }

  TEST_CASE("picture ordering") {
    CHECK(codes(validate(must_parse("create wisard\nrecognize\ntake picture from camera\n"))) ==
          std::vector<std::string>{"RECOGNIZE_BEFORE_PICTURE"});
    CHECK(codes(validate(must_parse("create wisard\nlearn \"A\" from picture\n"))) ==
          std::vector<std::string>{"LEARN_BEFORE_PICTURE"});
    CHECK(validate(must_parse("create wisard\nlearn \"A\" from folder \"x\"\n")).empty());
  }

  TEST_CASE("create ordering per statement kind") {
    CHECK(codes(validate(must_parse("take picture from camera\nrecognize\ncreate wisard\n"))) ==
          std::vector<std::string>{"RECOGNIZE_BEFORE_CREATE"});
    CHECK(codes(validate(must_parse("show mental image of \"A\"\ncreate wisard\n"))) ==
          std::vector<std::string>{"MENTAL_IMAGE_BEFORE_CREATE"});
  }

  TEST_CASE("lexical order applies inside dead branches") {
    const auto ds = validate(must_parse("if result is unknown { learn \"A\" from folder \"x\" }\ncreate wisard\n"));
    CHECK(codes(ds) == std::vector<std::string>{"LEARN_BEFORE_CREATE"});
  }

  TEST_CASE("unbound variable is a warning") {
    const auto ds = validate(must_parse("create wisard\nif answer == \"y\" { say answer }\n"));
    REQUIRE_FALSE(ds.empty());
    CHECK_FALSE(has_errors(ds));
    for (const auto& d : ds) {
      CHECK(d.code == "UNBOUND_VARIABLE");
      CHECK(d.severity == Severity::Warning);
    }
    CHECK(validate(must_parse("ask -> answer\nif answer == \"y\" { }\n")).empty());
  }
}

TEST_SUITE("run") {
  TEST_CASE("perturbed star is recognized after one example") {
    TempDir dir("bs_star");
    std::mt19937_64 rng(40);
    const wisard::BinaryPattern star1 = fixtures::random_pattern(rng, 8, 8);
    dir.put("star1.pgm", star1);
    dir.put("star2.pgm", fixtures::flip_distinct(rng, star1, 1));
    const Program p = must_parse(R"(create wisard
take picture from file "star1.pgm"
learn "Star" from picture
take picture from file "star2.pgm"
recognize
say result
)");
    CHECK(transcript(p, {}, small(8, 8, 4, dir.path())) == "Star\n");
  }

  TEST_CASE("recognize before training takes the unknown branch") {
    TempDir dir("bs_unknown");
    dir.put("x.pgm", fixtures::canonical_e());
    const Program p = must_parse(R"(create wisard
take picture from file "x.pgm"
recognize
if result is unknown { say "I don't know what this image is" } else { say "known" }
if result == "E" { say "E" }
)");
    CHECK(transcript(p, {}, small(3, 5, 3, dir.path())) == "I don't know what this image is\n");
  }

  TEST_CASE("loop cap") {
    const Program p = must_parse("repeat forever {\n  ask -> x\n  say x\n}\nsay \"after\"\n");
    RunOptions o;
    o.limits.max_loop_iterations = 3;
    std::istringstream in("a\nb\nc\nd\ne\n");
    std::ostringstream out;
    StreamIo io(in, out);
    const ExecutionSummary s = run(p, o, io);
    CHECK(out.str() == "a\nb\nc\nafter\n");
    CHECK(s.stop == StopReason::Completed);
    CHECK(s.loop_limit_reached);
  }

  TEST_CASE("end of input inside ask") {
    const Program p = must_parse("repeat forever {\n  ask -> x\n  say x\n}\n");
    CHECK(transcript(p, {{"a", "b"}, {}}, {}) == "a\nb\n" + stop_marker(StopReason::EndOfInput) + "\n");
  }

  TEST_CASE("step limit") {
    const Program p = must_parse("repeat forever { say \"x\" }\n");
    RunOptions o;
    o.limits.max_steps = 4;
    std::istringstream in;
    std::ostringstream out;
    StreamIo io(in, out);
    const ExecutionSummary s = run(p, o, io);
    CHECK(s.stop == StopReason::StepLimit);
    CHECK(s.statements_executed == 4);
    CHECK(out.str() == "x\nx\nx\n");
  }

  TEST_CASE("empty program and say-only programs") {
    CHECK(transcript(must_parse(""), {}, {}) == "");
    CHECK(transcript(must_parse("# nothing\n"), {}, {}) == "");
    CHECK(transcript(must_parse("say \"one\"\nsay \"two words\"\n"), {}, {}) == "one\ntwo words\n");
  }

  TEST_CASE("missing image is reported and the statement skipped") {
    const Program p = must_parse("create wisard\ntake picture from file \"nope.pgm\"\nsay \"still here\"\n");
    std::istringstream in;
    std::ostringstream out;
    StreamIo io(in, out);
    const ExecutionSummary s = run(p, small(4, 4, 2, fs::temp_directory_path()), io);
    CHECK(out.str() == "still here\n");
    REQUIRE(s.runtime_errors.size() == 1);
    CHECK(s.runtime_errors[0].location.line == 2);
  }

  TEST_CASE("learn from folder") {
    TempDir dir("bs_folder");
    dir.put("e/1.pgm", fixtures::canonical_e());
    dir.put("e/2.pgm", fixtures::canonical_e());
    dir.put("t/1.pgm", fixtures::canonical_t());
    const Program p = must_parse(R"(create wisard
learn "E" from folder "e"
learn "T" from folder "t"
take picture from file "e/1.pgm"
recognize
say result
show mental image of "T"
)");
    std::istringstream in;
    std::ostringstream out;
    StreamIo io(in, out);
    Interpreter interp(small(3, 5, 3, dir.path()), io);
    const ExecutionSummary s = interp.run(p);
    CHECK(s.examples_trained == 3);
    CHECK(s.trained_per_label == std::map<std::string, std::size_t>{{"E", 2}, {"T", 1}});
    CHECK(s.classifications == 1);
    CHECK(interp.model()->discriminator("E").examples_trained() == 2);
    CHECK(out.str() == "E\nMental image of \"T\":\n@@@\n @ \n @ \n @ \n @ \n");
  }

  TEST_CASE("interpreter result agrees with the engine") {
    TempDir dir("bs_agree");
    std::mt19937_64 rng(3);
    std::vector<std::string> frames;
    for (int i = 0; i < 30; ++i) {
      const std::string name = "f" + std::to_string(i) + ".pgm";
      dir.put(name, fixtures::random_pattern(rng, 6, 6));
      frames.push_back((dir.path() / name).string());
    }
    std::string input;
    for (int i = 0; i < 30; ++i) input += (rng() % 3 == 0 ? "R\n" : (rng() % 2 ? "A\n" : "B\n"));
    const Program p = must_parse(R"(create wisard
repeat forever {
  ask -> k
  take picture from camera
  if k == "R" { recognize say result }
  if k == "A" { learn "A" from picture }
  if k == "B" { learn "B" from picture }
}
)");
    std::istringstream in(input);
    std::ostringstream out;
    const RunOptions o = small(6, 6, 3);
    ShadowIo io(in, out, frames, o.model);
    run(p, o, io);
    CHECK(io.checked > 3);
    CHECK(io.mismatches == 0);
  }

  TEST_CASE("a corrected image is recognized on the next attempt") {
    std::mt19937_64 rng(90);
    for (int trial = 0; trial < 25; ++trial) {
      TempDir dir("bs_online");
      std::vector<std::string> frames;
      for (int i = 0; i < 4; ++i) {
        const std::string name = std::to_string(i) + ".pgm";
        dir.put(name, fixtures::random_pattern(rng, 5, 5));
        frames.push_back((dir.path() / name).string());
      }
      // teach A, B, B with frames 0..2, then probe frame 3 with target A.
      const Program p = must_parse(R"(create wisard
take picture from camera
learn "A" from picture
take picture from camera
learn "B" from picture
take picture from camera
learn "B" from picture
take picture from camera
recognize
if result == "A" { say "right" } else {
  say "wrong"
  learn "A" from picture
  recognize
  say result
}
)");
      const std::string t = transcript(p, {{}, frames}, small(5, 5, 3));
      CHECK((t == "right\n" || t == "wrong\nA\n"));
    }
  }

  TEST_CASE("same inputs, same transcript") {
    const Program p = fixtures::fig40_program();
    const auto script = fixtures::fig40_session();
    const std::string a = transcript(p, script, fixtures::fig40_options());
    CHECK(a == transcript(p, script, fixtures::fig40_options()));
  }

  TEST_CASE("teaching session golden transcript") {
    CHECK(transcript(fixtures::fig40_program(), fixtures::fig40_session(), fixtures::fig40_options()) ==
          fixtures::fig40_golden());
  }
}
