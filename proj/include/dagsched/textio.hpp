#pragma once

#include <stdexcept>
#include <string>

namespace dagsched {

struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, int line)
      : std::runtime_error(msg + " (line " + std::to_string(line) + ")"), line(line) {}
  int line;
};

// Shortest round-trip decimal form of a double (std::to_chars), so emitted
// files are byte-stable and reload bit-exactly.
std::string fmt_double(double v);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace dagsched
