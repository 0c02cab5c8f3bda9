// wisard: command-line front end for the WiSARD lab.
//
// Exit codes: 0 success (an "unknown" answer is a success), 1 runtime or I/O
// failure, 2 usage error, 3 program validation failure.

#include <atomic>
#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include <pthread.h>

#include <CLI11.hpp>

#include "blockscript/interpreter.hpp"
#include "blockscript/parser.hpp"
#include "blockscript/scripted_io.hpp"
#include "blockscript/validator.hpp"
#include "wisard/dataset.hpp"
#include "wisard/error.hpp"
#include "wisard/image.hpp"
#include "wisard/model_io.hpp"
#include "wisard/service/http_server.hpp"
#include "wisard/service/registry.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInvalidProgram = 3;

struct NewArgs {
  std::size_t width = 32;
  std::size_t height = 32;
  std::size_t tuple_size = 16;
  std::uint64_t seed = 0;
  std::string out;
};

struct TrainArgs {
  std::string model;
  std::string dir;
  std::string image;
  std::string label;
  int threshold = 128;
};

struct ClassifyArgs {
  std::string model;
  std::string image;
  int threshold = 128;
  std::size_t min_score = 0;
  bool json = false;
};

struct MentalImageArgs {
  std::string model;
  std::string label;
  std::string out;
};

struct RunArgs {
  std::string program;
  std::vector<std::string> camera_map;
  std::string stdin_script;
  std::size_t max_iterations = 0;
  std::size_t max_steps = 1'000'000;
  blockscript::ModelConfig model;
};

struct ServeArgs {
  int port = 8080;
  std::string host = "127.0.0.1";
  std::string models_dir = "models";
  std::string cors_origin = "*";
  wisard::service::ServiceConfig defaults;
};

std::string mapping_summary(const wisard::TupleMapping& m) {
  std::map<std::size_t, std::size_t> by_size;
  for (const wisard::Tuple& t : m.tuples()) ++by_size[t.size()];
  std::string out = std::to_string(m.tuple_count()) + " tuples (";
  bool first = true;
  for (auto it = by_size.rbegin(); it != by_size.rend(); ++it) {
    if (!first) out += ", ";
    out += std::to_string(it->second) + " x " + std::to_string(it->first) + " pixels";
    first = false;
  }
  return out + ")";
}

void print_counts(const wisard::WisardModel& model) {
  for (const auto& [label, d] : model.discriminators()) {
    std::cout << label << ": " << d.examples_trained() << "\n";
  }
}

int cmd_new(const NewArgs& a) {
  wisard::WisardModel model(a.width, a.height, a.tuple_size, a.seed);
  wisard::save_model_file(model, a.out);
  std::cout << "created " << a.out << ": " << a.width << "x" << a.height << " retina, "
            << mapping_summary(model.mapping()) << ", seed " << a.seed << "\n";
  return kExitOk;
}

int cmd_train(const TrainArgs& a) {
  wisard::WisardModel model = wisard::load_model_file(a.model);
  const wisard::BinarizeConfig cfg{a.threshold, model.width(), model.height()};

  wisard::DatasetLoad load;
  if (!a.dir.empty()) {
    load = wisard::load_labeled_dir(a.dir, cfg);
  } else {
    try {
      load.items.push_back({a.label, a.image, wisard::binarize(wisard::load_pgm_file(a.image), cfg)});
    } catch (const wisard::Error& e) {
      load.diagnostics.push_back({a.image, e.what()});
    }
  }
  for (const wisard::FileDiagnostic& d : load.diagnostics) {
    std::cerr << "skipped " << d.path << ": " << d.message << "\n";
  }
  if (load.items.empty()) {
    std::cerr << "error: no images trained\n";
    return kExitRuntime;
  }
  for (const wisard::LabeledPattern& item : load.items) model.train(item.pattern, item.label);
  wisard::save_model_file(model, a.model);

  std::cout << "trained " << load.items.size() << " image(s)\n";
  print_counts(model);
  return kExitOk;
}

int cmd_classify(const ClassifyArgs& a) {
  const wisard::WisardModel model = wisard::load_model_file(a.model);
  const wisard::BinaryPattern pattern = wisard::binarize(
      wisard::load_pgm_file(a.image), {a.threshold, model.width(), model.height()});
  wisard::ClassifyOptions options;
  options.min_score = a.min_score;
  const wisard::ClassificationOutcome outcome = model.classify(pattern, options);
  if (a.json) {
    std::cout << wisard::outcome_to_json(outcome).dump(2) << "\n";
  } else {
    std::cout << outcome.decision.value_or("unknown") << "\n";
  }
  return kExitOk;
}

int cmd_mental_image(const MentalImageArgs& a) {
  const wisard::WisardModel model = wisard::load_model_file(a.model);
  const wisard::MentalImage mi = model.mental_image(a.label);
  wisard::write_pgm_file(wisard::render_mental_image(mi), a.out);
  std::cout << "wrote " << a.out << " (max count " << mi.max_count << ")\n";
  return kExitOk;
}

// Console host: say lines go to stdout as they happen, problems to stderr.
class ConsoleIo : public blockscript::StreamIo {
 public:
  using StreamIo::StreamIo;

  void emit_event(const blockscript::Event& e) override {
    if (e.kind == blockscript::Event::Kind::RuntimeError) {
      std::cerr << e.location.line << ":" << e.location.column << ": runtime error: " << e.message
                << "\n";
    }
  }
};

int cmd_run(const RunArgs& a) {
  std::ifstream src(a.program, std::ios::binary);
  if (!src) {
    std::cerr << "error: cannot open " << a.program << "\n";
    return kExitRuntime;
  }
  std::ostringstream text;
  text << src.rdbuf();

  const blockscript::ParseResult parsed = blockscript::parse(text.str());
  if (!parsed.ok()) {
    for (const auto& d : parsed.diagnostics) std::cerr << a.program << ":" << format(d) << "\n";
    return kExitInvalidProgram;
  }
  const auto diagnostics = blockscript::validate(*parsed.program);
  for (const auto& d : diagnostics) std::cerr << a.program << ":" << format(d) << "\n";
  if (blockscript::has_errors(diagnostics)) return kExitInvalidProgram;

  std::vector<std::string> frames;
  for (const std::string& entry : a.camera_map) {
    const auto eq = entry.find('=');
    if (eq == std::string::npos || entry.substr(0, eq) != "camera" || eq + 1 == entry.size()) {
      std::cerr << "error: --camera-map expects camera=PATH, got \"" << entry << "\"\n";
      return kExitUsage;
    }
    frames.push_back(entry.substr(eq + 1));
  }
  if (blockscript::uses_camera(*parsed.program) && frames.empty()) {
    std::cerr << a.program << ": error: program takes pictures from the camera; supply frames "
              << "with --camera-map camera=PATH\n";
    return kExitInvalidProgram;
  }

  std::ifstream script;
  std::istream* in = &std::cin;
  if (!a.stdin_script.empty()) {
    script.open(a.stdin_script);
    if (!script) {
      std::cerr << "error: cannot open " << a.stdin_script << "\n";
      return kExitRuntime;
    }
    in = &script;
  }

  blockscript::RunOptions options;
  options.model = a.model;
  options.limits.max_loop_iterations = a.max_iterations;
  options.limits.max_steps = a.max_steps;
  options.base_dir = fs::path(a.program).parent_path();

  ConsoleIo io(*in, std::cout, frames);
  const blockscript::ExecutionSummary summary = blockscript::run(*parsed.program, options, io);
  if (summary.stop != blockscript::StopReason::Completed) {
    std::cout << blockscript::stop_marker(summary.stop) << "\n";
  }
  return kExitOk;
}

std::atomic<bool> g_serving{false};

int cmd_serve(const ServeArgs& a) {
  wisard::service::ServiceConfig config = a.defaults;
  config.models_dir = a.models_dir;
  wisard::service::ModelRegistry registry(config);
  for (const std::string& d : registry.startup_diagnostics()) std::cerr << "skipped " << d << "\n";

  wisard::service::HttpServer server(registry, a.cors_origin);
  int port = a.port;
  if (port == 0) {
    port = server.bind_any_port(a.host);
    if (port < 0) {
      std::cerr << "error: cannot bind " << a.host << "\n";
      return kExitRuntime;
    }
  } else if (!server.bind(a.host, port)) {
    std::cerr << "error: cannot bind " << a.host << ":" << port << "\n";
    return kExitRuntime;
  }

  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  g_serving = true;
  std::thread waiter([&] {
    const timespec tick{0, 100'000'000};
    while (g_serving) {
      if (sigtimedwait(&signals, nullptr, &tick) > 0) {
        server.stop();
        return;
      }
    }
  });

  std::cout << "listening on http://" << a.host << ":" << port << std::endl;
  server.listen();
  g_serving = false;
  waiter.join();

  const std::size_t saved = registry.save_all();
  std::cout << "saved " << saved << " model(s) to " << a.models_dir << std::endl;
  return kExitOk;
}

template <class T>
void env_default(T& target, const char* name) {
  if (const char* v = std::getenv(name)) {
    std::istringstream in(v);
    T parsed;
    if (in >> parsed) target = parsed;
  }
}

void add_model_shape(CLI::App* cmd, std::size_t& width, std::size_t& height,
                     std::size_t& tuple_size) {
  cmd->add_option("--width", width, "Retina width")->check(CLI::Range(1, 4096))->capture_default_str();
  cmd->add_option("--height", height, "Retina height")->check(CLI::Range(1, 4096))->capture_default_str();
  cmd->add_option("--tuple-size", tuple_size, "Pixels per tuple (1..24)")
      ->check(CLI::Range(1, 24))
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"WiSARD weightless neural network lab"};
  app.require_subcommand(1);

  NewArgs new_args;
  auto* new_cmd = app.add_subcommand("new", "Create an empty model file");
  add_model_shape(new_cmd, new_args.width, new_args.height, new_args.tuple_size);
  new_cmd->add_option("--seed", new_args.seed, "Mapping seed")->capture_default_str();
  new_cmd->add_option("--out", new_args.out, "Model file to write")->required();

  TrainArgs train_args;
  auto* train_cmd = app.add_subcommand("train", "Train a model from images");
  train_cmd->add_option("--model", train_args.model, "Model file (rewritten in place)")->required();
  auto* dir_opt = train_cmd->add_option("--dir", train_args.dir, "Dataset: one subdirectory of PGMs per label");
  auto* image_opt = train_cmd->add_option("--image", train_args.image, "Single PGM image");
  auto* label_opt = train_cmd->add_option("--label", train_args.label, "Label for --image");
  train_cmd->add_option("--threshold", train_args.threshold, "Binarization threshold")
      ->check(CLI::Range(0, 255))
      ->capture_default_str();
  dir_opt->excludes(image_opt)->excludes(label_opt);
  image_opt->needs(label_opt);
  label_opt->needs(image_opt);

  ClassifyArgs classify_args;
  auto* classify_cmd = app.add_subcommand("classify", "Classify one image");
  classify_cmd->add_option("--model", classify_args.model, "Model file")->required();
  classify_cmd->add_option("--image", classify_args.image, "PGM image")->required();
  classify_cmd->add_option("--threshold", classify_args.threshold, "Binarization threshold")
      ->check(CLI::Range(0, 255))
      ->capture_default_str();
  classify_cmd->add_option("--min-score", classify_args.min_score,
                           "Answer unknown when the best score is below this");
  classify_cmd->add_flag("--json", classify_args.json, "Print the full outcome with bleach trace");

  MentalImageArgs mi_args;
  auto* mi_cmd = app.add_subcommand("mental-image", "Export a label's mental image as PGM");
  mi_cmd->add_option("--model", mi_args.model, "Model file")->required();
  mi_cmd->add_option("--label", mi_args.label, "Label")->required();
  mi_cmd->add_option("--out", mi_args.out, "PGM file to write")->required();

  RunArgs run_args;
  auto* run_cmd = app.add_subcommand("run", "Run a BlockScript program");
  run_cmd->add_option("program", run_args.program, "Program file (.bs)")->required();
  run_cmd->add_option("--camera-map", run_args.camera_map,
                      "camera=PATH; repeat to queue frames served to 'take picture from camera'");
  run_cmd->add_option("--stdin-script", run_args.stdin_script, "Read 'ask' answers from this file");
  run_cmd->add_option("--max-iterations", run_args.max_iterations,
                      "Stop each 'repeat forever' after N iterations (0 = unbounded)");
  run_cmd->add_option("--max-steps", run_args.max_steps, "Statement budget")->capture_default_str();
  add_model_shape(run_cmd, run_args.model.width, run_args.model.height, run_args.model.tuple_size);
  run_cmd->add_option("--seed", run_args.model.seed, "Mapping seed")->capture_default_str();
  run_cmd->add_option("--threshold", run_args.model.threshold, "Binarization threshold")
      ->check(CLI::Range(0, 255))
      ->capture_default_str();

  ServeArgs serve_args;
  env_default(serve_args.port, "WISARD_PORT");
  env_default(serve_args.models_dir, "WISARD_MODELS_DIR");
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP model service");
  serve_cmd->add_option("--port", serve_args.port, "TCP port (0 = any free port)")
      ->check(CLI::Range(0, 65535))
      ->capture_default_str();
  serve_cmd->add_option("--host", serve_args.host, "Bind address")->capture_default_str();
  serve_cmd->add_option("--models-dir", serve_args.models_dir, "Model storage directory")
      ->capture_default_str();
  serve_cmd->add_option("--cors-origin", serve_args.cors_origin, "Allowed studio origin")
      ->capture_default_str();
  add_model_shape(serve_cmd, serve_args.defaults.default_width, serve_args.defaults.default_height,
                  serve_args.defaults.default_tuple_size);
  serve_cmd->add_option("--threshold", serve_args.defaults.default_threshold,
                        "Default binarization threshold")
      ->check(CLI::Range(0, 255))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }
  if (train_cmd->parsed() && train_args.dir.empty() && train_args.image.empty()) {
    std::cerr << "train: one of --dir or --image is required\n" << train_cmd->help();
    return kExitUsage;
  }

  try {
    if (new_cmd->parsed()) return cmd_new(new_args);
    if (train_cmd->parsed()) return cmd_train(train_args);
    if (classify_cmd->parsed()) return cmd_classify(classify_args);
    if (mi_cmd->parsed()) return cmd_mental_image(mi_args);
    if (run_cmd->parsed()) return cmd_run(run_args);
    if (serve_cmd->parsed()) return cmd_serve(serve_args);
  } catch (const wisard::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
