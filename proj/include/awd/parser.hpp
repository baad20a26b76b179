#pragma once

#include <string>

#include "awd/ast.hpp"

namespace awd {

// Parses, lowers, and validates a program.  Helper functions are inlined at
// their call sites, compound conditionals are split into nested branches, and
// for-loops are rewritten as while-loops, so the result contains only the
// core statement forms.  Throws ParseError on any syntax or validation
// failure.
SourceProgram parse_program(const std::string& text);

}  // namespace awd
