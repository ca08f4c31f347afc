#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lightmod/class_unify.hpp"
#include "lightmod/expr.hpp"
#include "lightmod/ilp.hpp"
#include "lightmod/type_graph.hpp"
#include "lightmod/unify.hpp"

namespace lightmod {

enum class Predicate { True, DiffInfty, InftyFree, TailFinite };

bool holds(Predicate p, const TypeGraph& t);
const char* predicate_name(Predicate p);

enum class EngineKind { Ladder, Classes, Auto };

struct InferOptions {
  EngineKind engine = EngineKind::Auto;
  std::size_t max_branches = default_max_branches();
  // merge entries whose instance sets have an exact common description
  bool coalesce = true;
};

struct Entry {
  TypeGraph type;
  ConstraintList E;
  Assignment witness;  // minimal-sum solution of E, every variable of type included
  TypeGraph instance;  // type under witness
};

struct InferResult {
  std::vector<Entry> entries;
  EngineKind engine_used = EngineKind::Ladder;
  std::size_t raw_solutions = 0;
};

// Throws unbound_variable for open terms and branch_cap_exceeded when the
// ladder engine was forced and hit the cap.
InferResult infer(const ExprPtr& e, Predicate p = Predicate::True, const InferOptions& opt = {});

bool typable(const ExprPtr& e, const InferOptions& opt = {});

struct ill_formed_goal : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct CheckResult {
  bool ok = false;
  std::size_t entry = 0;  // matching entry when ok
  Assignment witness;     // integer variables of that entry
};

// goal must be positive, guarded and free of integer variables; its type
// variables are rigid.
CheckResult check_type(const ExprPtr& e, const TypeGraph& goal, const InferOptions& opt = {});
CheckResult check_type(const InferResult& r, const TypeGraph& goal);

// Structural matching of patterns against goals. Pattern type variables are
// flexible, goal type variables rigid; a pattern variable under delay k
// facing a goal under delay m is bound to the goal head with offset m - k.
// Returns the integer constraints (exponent equations, offsets >= 0) that
// make every pattern equal to its goal, or nullopt on a constructor clash.
// Integer variables of patterns and goals must be disjoint.
std::optional<ConstraintList> match_constraints(
    const std::vector<std::pair<TypeGraph, TypeGraph>>& pairs);

// Bisimulation up to a bijective renaming of type variables; the result
// lists the exponent equations under which both graphs coincide.
std::optional<ConstraintList> align(const TypeGraph& a, const TypeGraph& b);

// Renames type variables to X1, X2, ... and integer variables to N1, N2, ...
// in order of first occurrence; variables only in E come last.
std::pair<TypeGraph, ConstraintList> normalize_names(const TypeGraph& t, const ConstraintList& E);

}  // namespace lightmod
