#pragma once

#include <stdexcept>
#include <string>

namespace awd {

struct SourceLoc {
  int line = 0;
  int column = 0;
};

// Syntax or validation failure with the position it was detected at.
class ParseError : public std::runtime_error {
 public:
  ParseError(SourceLoc loc, const std::string& message)
      : std::runtime_error("line " + std::to_string(loc.line) + ", column " +
                           std::to_string(loc.column) + ": " + message),
        loc_(loc) {}

  SourceLoc loc() const { return loc_; }

 private:
  SourceLoc loc_;
};

}  // namespace awd
