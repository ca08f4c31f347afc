#pragma once

#include <optional>

#include "lightmod/linexpr.hpp"

namespace lightmod {

struct ilp_limit_exceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IlpOptions {
  std::size_t node_limit = 200000;
};

// All problems are over the non-negative integers: every variable that occurs
// in the system is implicitly constrained to be >= 0.

bool feasible(const ConstraintList& sys, const IlpOptions& opt = {});

// A witness with minimal sum of all variables, ties broken by the
// lexicographically smallest assignment in variable-name order. Variables in
// `extra` are included in the assignment even if no constraint mentions them.
std::optional<Assignment> solve(const ConstraintList& sys,
                                const std::set<std::string>& extra = {},
                                const IlpOptions& opt = {});

// Minimises obj over the feasible set; nullopt when infeasible.
std::optional<Assignment> minimize(const ConstraintList& sys, const LinExpr& obj,
                                   const IlpOptions& opt = {});

// Throws unassigned_variable if theta misses a variable of sys.
bool check(const Assignment& theta, const ConstraintList& sys);

// Every non-negative integer solution of sys satisfies c.
bool entails(const ConstraintList& sys, const IntConstraint& c, const IlpOptions& opt = {});

// Eliminates variables outside `keep` where this is exact over the naturals:
// unit-coefficient equalities, one-signed variables and Fourier-Motzkin steps
// on variables whose coefficients are all +-1. Other variables are left in.
// An infeasible result is returned as the single constraint -1 >= 0.
ConstraintList project(const ConstraintList& sys, const std::set<std::string>& keep);

// Drops constraints implied by the remaining ones (non-negativity included),
// sorted and duplicate free.
ConstraintList simplify(const ConstraintList& sys, const IlpOptions& opt = {});

}  // namespace lightmod
