#pragma once

#include <map>
#include <set>

#include "lightmod/expr.hpp"
#include "lightmod/metatype.hpp"

namespace lightmod {

struct ConstraintSet {
  std::set<Equation> eqc;
  std::set<IntConstraint> intc;

  // sum over equations of the size of the left-hand side
  std::size_t size() const;
};

std::string str(const ConstraintSet& c);

struct Generated {
  MetaPtr type;
  ConstraintSet constraints;
  std::set<std::string> type_vars;  // issued, in order of creation
  std::set<std::string> int_vars;
};

class FreshSupply {
public:
  std::string type_var() { return "X" + std::to_string(++types_); }
  std::string int_var() { return "N" + std::to_string(++ints_); }

private:
  int types_ = 0, ints_ = 0;
};

// Constraint typing, one rule per syntax node. `ctx` types the free variables
// of e (empty for closed terms); throws unbound_variable otherwise.
Generated generate(const ExprPtr& e, const std::map<std::string, std::string>& ctx = {});

}  // namespace lightmod
