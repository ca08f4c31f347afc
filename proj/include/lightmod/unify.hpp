#pragma once

#include <functional>
#include <vector>

#include "lightmod/constraint_gen.hpp"
#include "lightmod/type_graph.hpp"

namespace lightmod {

struct Solution {
  TypeSubstitution tau;
  ConstraintList E;  // sorted, duplicate free
  bool operator==(const Solution&) const = default;
};

struct branch_cap_exceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct measure_violation : std::logic_error {
  using std::logic_error::logic_error;
};

struct UnifyOptions {
  std::size_t max_branches = 4096;  // leaves of the search tree
  std::size_t max_depth = 256;  // nested steps; exceeding it also throws branch_cap_exceeded
  bool check_measure = false;
  // drop a branch as soon as its integer constraints are infeasible
  bool prune = true;
};

struct UnifyStats {
  std::size_t calls = 0;
  std::size_t leaves = 0;
  std::size_t measure_checks = 0;
};

// Default cap, overridden by the MODAL_MAX_BRANCHES environment variable.
std::size_t default_max_branches();

std::vector<Solution> unify(const ConstraintSet& c, const std::set<Equation>& visited = {},
                            const UnifyOptions& opt = {}, UnifyStats* stats = nullptr);

bool is_substitutional(const ConstraintSet& c);
bool is_simple(const ConstraintSet& c);

// Least solution of a substitutional system; variables that are not on a
// left-hand side stay free. Pure variable cycles collapse onto their
// smallest member.
TypeSubstitution solve_recursive_system(const std::set<Equation>& eqc);

// tau together with theta satisfies every equation of c (instantiated types
// compared by type_equal) and theta satisfies intc.
bool satisfies(const TypeSubstitution& tau, const Assignment& theta, const ConstraintSet& c);

std::string str(const Solution& s);

}  // namespace lightmod
