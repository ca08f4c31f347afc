#pragma once

#include <memory>
#include <set>
#include <string>

#include "lightmod/linexpr.hpp"

namespace lightmod {

enum class MKind { Var, Nat, Prod, Arrow, Delay };

struct Meta;
using MetaPtr = std::shared_ptr<const Meta>;

// Finite meta-type. Built only through the m_* functions, which keep delays
// merged and drop literal-zero delays.
struct Meta {
  MKind kind;
  std::string name;  // Var
  LinExpr exp;       // Delay
  MetaPtr l, r;      // Prod/Arrow children, Delay body in l
  std::size_t hash = 0;
  int size = 1;  // variables + constructors, delays included
};

MetaPtr m_var(const std::string& name);
MetaPtr m_nat();
MetaPtr m_prod(MetaPtr l, MetaPtr r);
MetaPtr m_arrow(MetaPtr l, MetaPtr r);
MetaPtr m_delay(const LinExpr& e, MetaPtr body);

// Total structural order; 0 iff structurally equal.
int compare(const MetaPtr& a, const MetaPtr& b);
inline bool equal(const MetaPtr& a, const MetaPtr& b) { return a == b || compare(a, b) == 0; }

bool is_op(const MetaPtr& t);  // Prod or Arrow
// Nat, Prod or Arrow: the heads that may sit under a delay
bool is_nat_op(const MetaPtr& t);
// Same outermost constructor among Nat/Prod/Arrow.
bool equalcons(const MetaPtr& a, const MetaPtr& b);

std::set<std::string> type_vars(const MetaPtr& t);
void int_vars(const MetaPtr& t, std::set<std::string>& out);
MetaPtr rename(const MetaPtr& t, const std::map<std::string, std::string>& types,
               const std::map<std::string, std::string>& ints);

// Printed in the mu-type grammar.
std::string str(const MetaPtr& t);

struct Equation {
  MetaPtr lhs, rhs;
  bool operator<(const Equation& o) const {
    int c = compare(lhs, o.lhs);
    return c != 0 ? c < 0 : compare(rhs, o.rhs) < 0;
  }
  bool operator==(const Equation& o) const { return equal(lhs, o.lhs) && equal(rhs, o.rhs); }
};

std::string str(const Equation& e);

}  // namespace lightmod
