#pragma once

#include "lightmod/unify.hpp"

namespace lightmod {

struct ClassUnifyResult {
  std::vector<Solution> solutions;
  // type of each requested meta-type under each solution, same order
  std::vector<std::vector<TypeGraph>> images;
};

// Non-branching unifier. Every type variable X is read as @^LX applied to
// the delay-free head shared by its class; constructor occurrences are
// class members too (level 0). Equations become level equalities plus class
// merges. A class without constructors whose level equations close a cycle
// may alternatively be the infinite delay, which drops those equations; every
// such choice yields one candidate solution, kept when its integer
// constraints are feasible.
ClassUnifyResult class_unify(const ConstraintSet& c, const std::vector<MetaPtr>& wanted = {});

}  // namespace lightmod
