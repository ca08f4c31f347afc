#pragma once

#include <map>
#include <string>
#include <vector>

#include "lightmod/linexpr.hpp"
#include "lightmod/metatype.hpp"

namespace lightmod {

enum class NodeKind { Var, Nat, Prod, Arrow, Delay };

struct TypeNode {
  NodeKind kind;
  std::string name;  // Var
  LinExpr exp;       // Delay
  int a = -1;        // first child, Delay body
  int b = -1;        // second child
  bool operator==(const TypeNode&) const = default;
};

// Rational tree. A delay whose body is itself is the infinite delay.
struct TypeGraph {
  std::vector<TypeNode> nodes;
  int root = 0;

  int add(TypeNode n) {
    nodes.push_back(std::move(n));
    return static_cast<int>(nodes.size()) - 1;
  }
  const TypeNode& at(int i) const { return nodes[i]; }
  const TypeNode& top() const { return nodes[root]; }

  bool operator==(const TypeGraph&) const = default;

  std::set<std::string> type_vars() const;
  std::set<std::string> int_vars() const;
  std::size_t size() const { return nodes.size(); }
};

using TypeSubstitution = std::map<std::string, TypeGraph>;

struct negative_exponent : std::runtime_error {
  using std::runtime_error::runtime_error;
};

TypeGraph g_nat();
TypeGraph g_var(const std::string& name);
TypeGraph g_infty();
TypeGraph from_meta(const MetaPtr& t);

// Elides zero delays, merges delay chains, collapses pure delay cycles into
// a single self-loop, removes unreachable nodes, minimises by partition
// refinement and renumbers in depth-first order from the root.
TypeGraph canonicalize(const TypeGraph& g);
bool is_canonical(const TypeGraph& g);
bool type_equal(const TypeGraph& a, const TypeGraph& b);

// Subgraph rooted at node i, canonicalised.
TypeGraph subgraph(const TypeGraph& g, int i);
// Replaces variables by their images; the result is canonical.
TypeGraph apply(const TypeSubstitution& tau, const TypeGraph& g);
TypeGraph rename(const TypeGraph& g, const std::map<std::string, std::string>& types,
                 const std::map<std::string, std::string>& ints);
TypeGraph delay(const LinExpr& e, const TypeGraph& g);
TypeGraph arrow(const TypeGraph& l, const TypeGraph& r);
TypeGraph prod(const TypeGraph& l, const TypeGraph& r);

// Nodes lying on some cycle.
std::vector<bool> cyclic_nodes(const TypeGraph& g);

int rank(const TypeGraph& t);
bool is_guarded(const TypeGraph& t);
bool diff_infty(const TypeGraph& t);
bool is_infty_free(const TypeGraph& t);
bool is_tail_finite(const TypeGraph& t);
bool is_concrete(const TypeGraph& t);

// countb sums for every cyclic subtree, as constraints sum >= 1.
ConstraintList guard_constraints(const TypeGraph& t);
// Same on g as given (no canonicalisation, every node considered); delay
// chains must already be merged.
ConstraintList cycle_constraints(const TypeGraph& g);
ConstraintList guard_constraints(const TypeSubstitution& tau);

TypeGraph instantiate(const TypeGraph& t, const Assignment& theta);

}  // namespace lightmod
