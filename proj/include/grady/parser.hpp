#pragma once

#include <stdexcept>
#include <string>

#include "grady/ast.hpp"

namespace grady {

struct ParseError : std::runtime_error {
  int line, col;
  ParseError(const std::string& msg, int line_, int col_)
      : std::runtime_error(msg + " at " + std::to_string(line_) + ":" + std::to_string(col_)),
        line(line_),
        col(col_) {}
};

// Parses a full program; binders are alpha-normalized (unique names).
Program parse_program(const std::string& source, const std::string& source_name = "<input>");

// Entry points used by tests and by the CLI --env parser.
VPtr parse_value_term(const std::string& source, Instance inst);
FPtr parse_formula(const std::string& source, Instance inst);
EPtr parse_effect(const std::string& source, Instance inst);
RPtr parse_reftype(const std::string& source, Instance inst);

}  // namespace grady
