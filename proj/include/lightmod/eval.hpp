#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lightmod/expr.hpp"

namespace lightmod {

// One weak head step: the leftmost redex under the contexts
// [] | E e | fst E | snd E | succ E | natrec f1 f2 E. nullopt on a weak head
// normal form (stuck terms included).
std::optional<ExprPtr> step(const ExprPtr& e);

struct ReductionOutcome {
  bool normal;  // false: fuel ran out first
  ExprPtr term;
  std::size_t steps;
};

ReductionOutcome whnf(const ExprPtr& e, std::size_t fuel);

// Head normal form, reducing under binders; the budget is shared by all
// stages. nullopt when it runs out.
std::optional<ExprPtr> hnf(const ExprPtr& e, std::size_t fuel);

enum class TreeKind { Var, Const, Numeral, Lambda, Bot, Cut };

struct TreeApprox {
  TreeKind kind = TreeKind::Cut;
  std::string name;  // variable, binder or constant name
  unsigned value = 0;  // Numeral
  std::vector<TreeApprox> children;

  bool has_bot() const;
  bool operator==(const TreeApprox&) const = default;
};

// Depth counts nodes from the root. A node at depth 0 is shown only when it
// is a leaf; otherwise it is cut. fuel is the budget of each node.
TreeApprox levy_longo(const ExprPtr& e, unsigned depth, std::size_t fuel);
TreeApprox bohm(const ExprPtr& e, unsigned depth, std::size_t fuel);

// One line: \x. <0, <1, ...>>, with _|_ for bottom and ... for cuts.
std::string render_text(const TreeApprox& t);
// One node per line, children indented by two spaces.
std::string render_indented(const TreeApprox& t);
// {"kind": ..., "name": ..., "value": ..., "children": [...]}
std::string render_json(const TreeApprox& t);

}  // namespace lightmod
