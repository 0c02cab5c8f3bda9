#include "blockscript/scripted_io.hpp"

#include <sstream>

#include "wisard/error.hpp"

namespace blockscript {

StreamIo::StreamIo(std::istream& in, std::ostream& out, std::vector<std::string> camera_frames)
    : in_(in), out_(out), frames_(camera_frames.begin(), camera_frames.end()) {}

void StreamIo::write_line(std::string_view text) {
  out_ << text << '\n';
  out_.flush();
}

std::optional<std::string> StreamIo::read_line() {
  std::string line;
  if (!std::getline(in_, line)) return std::nullopt;
  return line;
}

std::optional<wisard::BinaryPattern> StreamIo::acquire_image(const ImageSource& source,
                                                             const wisard::BinarizeConfig& config) {
  std::string path;
  if (const auto* file = std::get_if<FileSource>(&source)) {
    path = file->path;
  } else {
    if (frames_.empty()) return std::nullopt;
    path = frames_.front();
    frames_.pop_front();
  }
  return wisard::binarize(wisard::load_pgm_file(path), config);
}

void StreamIo::emit_event(const Event& event) { events_.push_back(event); }

std::string stop_marker(StopReason reason) {
  return "[stopped: " + std::string(to_string(reason)) + "]";
}

std::string transcript(const Program& program, const IoScript& script, const RunOptions& options) {
  std::string input;
  for (const std::string& line : script.input_lines) input += line + "\n";
  std::istringstream in(input);
  std::ostringstream out;
  StreamIo io(in, out, script.camera_frames);
  const ExecutionSummary summary = run(program, options, io);
  if (summary.stop != StopReason::Completed) out << stop_marker(summary.stop) << '\n';
  return out.str();
}

}  // namespace blockscript
