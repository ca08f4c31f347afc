#pragma once

#include <stdexcept>
#include <string>

#include "lightmod/type_graph.hpp"

namespace lightmod {

struct type_syntax_error : std::runtime_error {
  int column;
  type_syntax_error(const std::string& msg, int col)
      : std::runtime_error("column " + std::to_string(col) + ": " + msg), column(col) {}
};

// Goal type rejected by the checks of parse_type.
struct ill_formed_type : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Goal types: guarded, literal non-negative exponents.
TypeGraph parse_type(const std::string& text);
// Meta-types: symbolic exponents allowed, no guardedness check.
TypeGraph parse_meta_type(const std::string& text);

std::string print_type(const TypeGraph& g);

}  // namespace lightmod
