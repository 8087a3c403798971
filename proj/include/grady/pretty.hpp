#pragma once

#include <string>

#include "grady/ast.hpp"

namespace grady {

// Surface-syntax printers; parse(pretty(x)) is alpha-equal to x.
std::string pretty(const VPtr& v);
std::string pretty(const CPtr& c);
std::string pretty(const FPtr& f, Instance inst);
std::string pretty(const EPtr& e, Instance inst);
std::string pretty(const RPtr& t, Instance inst);
std::string pretty(const CTyPtr& t, Instance inst);
std::string pretty(const Program& p);

// Strips the uniqueness suffix from a normalized binder name.
std::string display_name(const std::string& n);

}  // namespace grady
