#pragma once

#include <deque>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "blockscript/interpreter.hpp"

namespace blockscript {

/// IoPort over streams. Camera frames are served from a queue of image
/// files; an exhausted queue counts as end of input.
class StreamIo : public IoPort {
 public:
  StreamIo(std::istream& in, std::ostream& out, std::vector<std::string> camera_frames = {});

  void write_line(std::string_view text) override;
  std::optional<std::string> read_line() override;
  std::optional<wisard::BinaryPattern> acquire_image(const ImageSource& source,
                                                     const wisard::BinarizeConfig& config) override;
  void emit_event(const Event& event) override;

  const std::vector<Event>& events() const noexcept { return events_; }

 private:
  std::istream& in_;
  std::ostream& out_;
  std::deque<std::string> frames_;
  std::vector<Event> events_;
};

struct IoScript {
  std::vector<std::string> input_lines;
  std::vector<std::string> camera_frames;
};

/// Line appended to a transcript when the run stopped early.
std::string stop_marker(StopReason reason);

/// Runs the program against a fixed script and returns everything it wrote,
/// one line per write, followed by a stop marker if the run ended early.
std::string transcript(const Program& program, const IoScript& script, const RunOptions& options);

}  // namespace blockscript
