#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lightmod/expr.hpp"

namespace lightmod {

struct CorpusTerm {
  std::string name;
  ExprPtr term;  // closed
  std::string source;  // as written, with helper names
  bool typable;
  // goal for check_type, in the type syntax; empty when none is stated
  std::string type;
};

// Stream functions written with fix, arithmetic and conditionals written with
// natrec (0 is true), plus the small terms used by the tests.
const std::vector<CorpusTerm>& corpus();
const CorpusTerm* find_corpus_term(const std::string& name);

// Helper definitions (plus, times, monus, if, ...) by name.
ExprPtr corpus_helper(const std::string& name);

}  // namespace lightmod
