#pragma once

// Random generators and brute-force oracles shared by the property tests and
// the acceptance driver.

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "lightmod/infer.hpp"
#include "lightmod/type_syntax.hpp"
#include "lightmod/unify.hpp"
#include "support.hpp"

namespace oracles {

using namespace lightmod;
using testing_support::for_each_assignment;

using Rng = std::mt19937_64;

inline std::int64_t pick(Rng& g, std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(g);
}

// ---- guardedness ----

// Concrete graphs only: after deleting the outgoing edge of every delay with a
// positive exponent the graph must be acyclic.
inline bool guarded_oracle(const TypeGraph& g) {
  const int n = static_cast<int>(g.nodes.size());
  std::vector<int> color(n, 0);
  std::function<bool(int)> dfs = [&](int v) {
    color[v] = 1;
    auto& nd = g.nodes[v];
    std::vector<int> next;
    if (nd.kind == NodeKind::Delay) {
      if (nd.exp.constant() <= 0) next.push_back(nd.a);
    } else {
      if (nd.a >= 0) next.push_back(nd.a);
      if (nd.b >= 0) next.push_back(nd.b);
    }
    for (int w : next) {
      if (color[w] == 1) return false;
      if (color[w] == 0 && !dfs(w)) return false;
    }
    color[v] = 2;
    return true;
  };
  for (int v = 0; v < n; ++v)
    if (color[v] == 0 && !dfs(v)) return false;
  return true;
}

// ---- integer systems ----

struct IlpCase {
  std::vector<std::string> vars;
  ConstraintList sys;
};

// <= 4 variables, coefficients in [-3, 3], constants in [-5, 5]
inline IlpCase random_system(Rng& g) {
  static const char* names[] = {"A", "B", "C", "D"};
  IlpCase c;
  int nv = static_cast<int>(pick(g, 1, 4));
  for (int i = 0; i < nv; ++i) c.vars.push_back(names[i]);
  int nc = static_cast<int>(pick(g, 1, 4));
  for (int k = 0; k < nc; ++k) {
    LinExpr e(pick(g, -5, 5));
    for (auto& v : c.vars) e += LinExpr::var(v, pick(g, -3, 3));
    c.sys.push_back(IntConstraint(e, pick(g, 0, 4) == 0 ? Rel::Eq : Rel::Geq));
  }
  return c;
}

struct BruteIlp {
  bool feasible = false;
  std::int64_t min_sum = 0;
};

inline BruteIlp brute_ilp(const IlpCase& c, std::int64_t bound) {
  BruteIlp r;
  for_each_assignment(c.vars, bound, [&](const Assignment& a) {
    if (!check(a, c.sys)) return;
    std::int64_t s = 0;
    for (auto& [_, x] : a) s += x;
    if (!r.feasible || s < r.min_sum) r.min_sum = s;
    r.feasible = true;
  });
  return r;
}

struct IlpVerdict {
  bool ok = true;
  std::string why;
};

// Bounded copies must agree exactly; unbounded ones must agree whenever the
// exhaustive search finds a solution; witnesses always check.
inline IlpVerdict ilp_agrees(const IlpCase& c) {
  constexpr std::int64_t bound = 12;
  IlpCase b = c;
  for (auto& v : c.vars) b.sys.push_back(IntConstraint::leq(LinExpr::var(v), bound));
  BruteIlp want = brute_ilp(b, bound);
  auto w = solve(b.sys);
  if (want.feasible != w.has_value()) return {false, "bounded feasibility differs: " + str(b.sys)};
  if (w) {
    if (!check(*w, b.sys)) return {false, "witness fails: " + str(b.sys)};
    std::int64_t s = 0;
    for (auto& [_, x] : *w) s += x;
    if (s != want.min_sum) return {false, "witness sum not minimal: " + str(b.sys)};
  }
  auto u = solve(c.sys);
  if (want.feasible && !u) return {false, "unbounded system reported infeasible: " + str(c.sys)};
  if (u && !check(*u, c.sys)) return {false, "witness fails: " + str(c.sys)};
  return {};
}

// ---- meta-type constraint sets ----

struct UnifyCase {
  std::vector<std::string> tvars, ivars;
  ConstraintSet c;
};

inline MetaPtr random_meta(Rng& g, const UnifyCase& u, int depth) {
  int k = static_cast<int>(pick(g, 0, depth == 0 ? 1 : 4));
  switch (k) {
    case 0: return m_var(u.tvars[pick(g, 0, static_cast<int>(u.tvars.size()) - 1)]);
    case 1: return pick(g, 0, 2) == 0 ? m_nat() : m_var(u.tvars[pick(g, 0, static_cast<int>(u.tvars.size()) - 1)]);
    case 2: return m_arrow(random_meta(g, u, depth - 1), random_meta(g, u, depth - 1));
    case 3: return m_prod(random_meta(g, u, depth - 1), random_meta(g, u, depth - 1));
    default: {
      LinExpr e = u.ivars.empty() || pick(g, 0, 3) == 0
                      ? LinExpr(1)
                      : LinExpr::var(u.ivars[pick(g, 0, static_cast<int>(u.ivars.size()) - 1)]);
      return m_delay(e, random_meta(g, u, depth - 1));
    }
  }
}

// <= 3 type variables, <= 2 integer variables, depth <= 3
inline UnifyCase random_unify_case(Rng& g) {
  static const char* tv[] = {"X", "Y", "Z"};
  static const char* iv[] = {"A", "B"};
  UnifyCase u;
  for (int i = 0, n = static_cast<int>(pick(g, 1, 3)); i < n; ++i) u.tvars.push_back(tv[i]);
  for (int i = 0, n = static_cast<int>(pick(g, 0, 2)); i < n; ++i) u.ivars.push_back(iv[i]);
  for (int k = 0, n = static_cast<int>(pick(g, 1, 3)); k < n; ++k) {
    // a variable on the left half of the time keeps many cases solvable
    MetaPtr l = pick(g, 0, 1) ? m_var(u.tvars[pick(g, 0, static_cast<int>(u.tvars.size()) - 1)])
                              : random_meta(g, u, static_cast<int>(pick(g, 1, 3)));
    MetaPtr r = random_meta(g, u, static_cast<int>(pick(g, 0, 3)));
    u.c.eqc.insert({l, r});
  }
  std::set<std::string> used;
  for (auto& e : u.c.eqc) {
    int_vars(e.lhs, used);
    int_vars(e.rhs, used);
  }
  // variables that do not occur are dropped so that sampling stays small
  std::erase_if(u.ivars, [&](const std::string& v) { return !used.count(v); });
  for (auto& v : u.ivars) u.c.intc.insert(IntConstraint::geq(LinExpr::var(v), 0));
  std::set<std::string> tused;
  for (auto& e : u.c.eqc) {
    tused.merge(type_vars(e.lhs));
    tused.merge(type_vars(e.rhs));
  }
  std::erase_if(u.tvars, [&](const std::string& v) { return !tused.count(v); });
  return u;
}

// bounded universe of concrete types
inline const std::vector<TypeGraph>& type_universe() {
  static const std::vector<TypeGraph> u = [] {
    std::vector<TypeGraph> out;
    for (const char* s : {"Nat", "@ Nat", "@ @ Nat", "Nat -> Nat", "Nat * Nat", "@ Nat -> Nat", "mu X. @ X"})
      out.push_back(parse_type(s));
    return out;
  }();
  return u;
}

inline std::set<std::string> int_vars_of(const ConstraintSet& c, const Solution& s) {
  std::set<std::string> out;
  for (auto& eq : c.eqc) {
    int_vars(eq.lhs, out);
    int_vars(eq.rhs, out);
  }
  for (auto& [_, t] : s.tau) out.merge(t.int_vars());
  out.merge(variables_of(s.E));
  return out;
}

inline TypeGraph image(const TypeSubstitution& tau, const std::string& x) {
  auto it = tau.find(x);
  return it == tau.end() ? g_var(x) : it->second;
}

struct UnifyVerdict {
  bool ok = true;
  bool capped = false;
  std::size_t brute_solutions = 0;
  std::size_t sampled = 0;
  std::string why;
};

// Soundness on sampled theta <= 4 and completeness against every concrete
// solution over the bounded universe with exponent values <= 3.
inline UnifyVerdict unify_agrees(const UnifyCase& u, Rng& g) {
  UnifyVerdict r;
  std::vector<Solution> sols;
  try {
    sols = unify(u.c);
  } catch (const branch_cap_exceeded&) {
    r.capped = true;
    return r;
  }
  for (auto& s : sols) {
    auto vs = int_vars_of(u.c, s);
    std::vector<std::string> vars(vs.begin(), vs.end());
    auto test = [&](const Assignment& th) {
      if (!check(th, s.E)) return;
      ++r.sampled;
      if (!satisfies(s.tau, th, u.c)) {
        r.ok = false;
        r.why = "unsound: " + str(s);
      }
      for (auto& [x, t] : s.tau) {
        try {
          TypeGraph inst = instantiate(t, th);
          if (!is_guarded(inst)) {
            r.ok = false;
            r.why = "unguarded image of " + x + ": " + str(s);
          }
        } catch (const negative_exponent&) {
          r.ok = false;
          r.why = "negative exponent in image of " + x + ": " + str(s);
        }
      }
    };
    if (vars.size() <= 4) {
      for_each_assignment(vars, 4, test);
    } else {
      for (int k = 0; k < 300; ++k) {
        Assignment th;
        for (auto& v : vars) th[v] = pick(g, 0, 4);
        test(th);
      }
    }
    if (auto w = solve(s.E, vs)) test(*w);
    if (!r.ok) return r;
  }
  // completeness
  const auto& U = type_universe();
  std::vector<std::size_t> idx(u.tvars.size(), 0);
  std::function<void(std::size_t)> choose = [&](std::size_t i) {
    if (!r.ok) return;
    if (i < u.tvars.size()) {
      for (idx[i] = 0; idx[i] < U.size(); ++idx[i]) choose(i + 1);
      return;
    }
    TypeSubstitution sigma;
    for (std::size_t k = 0; k < u.tvars.size(); ++k) sigma[u.tvars[k]] = U[idx[k]];
    for_each_assignment(u.ivars, 3, [&](const Assignment& th) {
      if (!r.ok) return;
      for (auto& eq : u.c.eqc) {
        TypeGraph l = instantiate(lightmod::apply(sigma, from_meta(eq.lhs)), th);
        TypeGraph rr = instantiate(lightmod::apply(sigma, from_meta(eq.rhs)), th);
        if (!type_equal(l, rr)) return;
      }
      ++r.brute_solutions;
      for (auto& s : sols) {
        std::vector<std::pair<TypeGraph, TypeGraph>> pairs;
        for (auto& x : u.tvars) pairs.push_back({image(s.tau, x), sigma.at(x)});
        auto m = match_constraints(pairs);
        if (!m) continue;
        ConstraintList q = s.E;
        q.insert(q.end(), m->begin(), m->end());
        for (auto& [v, x] : th) q.push_back(IntConstraint::eq(LinExpr::var(v), x));
        if (feasible(q)) return;
      }
      r.ok = false;
      std::string d;
      for (auto& [x, t] : sigma) d += x + " := " + print_type(t) + "; ";
      for (auto& [v, x] : th) d += v + " = " + std::to_string(x) + "; ";
      r.why = "solution not covered: " + d + "for " + str(u.c);
    });
  };
  choose(0);
  return r;
}

// ---- expressions ----

inline ExprPtr random_expr(Rng& g, int depth, std::vector<std::string>& scope, bool closed) {
  static const char* binders[] = {"x", "y", "z", "f"};
  int k = static_cast<int>(pick(g, 0, depth <= 0 ? 1 : 5));
  switch (k) {
    case 0:
      if (!scope.empty() && pick(g, 0, 3) != 0) return mk_var(scope[pick(g, 0, static_cast<int>(scope.size()) - 1)]);
      if (!closed && pick(g, 0, 2) == 0) return mk_var(pick(g, 0, 1) ? "u" : "v");
      [[fallthrough]];
    case 1: {
      static const Const cs[] = {Const::Zero, Const::Succ, Const::Fst, Const::Snd, Const::Pair, Const::Natrec};
      if (pick(g, 0, 3) == 0) return mk_numeral(static_cast<unsigned>(pick(g, 0, 3)));
      return mk_const(cs[pick(g, 0, 5)]);
    }
    case 2:
    case 3: {
      std::string b = binders[pick(g, 0, 3)];
      scope.push_back(b);
      ExprPtr body = random_expr(g, depth - 1, scope, closed);
      scope.pop_back();
      return mk_lam(b, body);
    }
    case 4: return mk_pair(random_expr(g, depth - 1, scope, closed), random_expr(g, depth - 1, scope, closed));
    default: return mk_app(random_expr(g, depth - 1, scope, closed), random_expr(g, depth - 1, scope, closed));
  }
}

inline ExprPtr random_expr(Rng& g, int depth, bool closed = false) {
  std::vector<std::string> scope;
  return random_expr(g, depth, scope, closed);
}

// ---- type graphs ----

// Random concrete graph with n nodes; children point anywhere, so cycles and
// shared subtrees are common. Not necessarily guarded.
inline TypeGraph random_graph(Rng& g, int n) {
  TypeGraph t;
  for (int i = 0; i < n; ++i) {
    TypeNode nd;
    int k = static_cast<int>(pick(g, 0, 5));
    int a = static_cast<int>(pick(g, 0, n - 1)), b = static_cast<int>(pick(g, 0, n - 1));
    switch (k) {
      case 0: nd.kind = NodeKind::Nat; break;
      case 1: nd.kind = NodeKind::Var; nd.name = pick(g, 0, 1) ? "A" : "B"; break;
      case 2: nd.kind = NodeKind::Arrow; nd.a = a; nd.b = b; break;
      case 3: nd.kind = NodeKind::Prod; nd.a = a; nd.b = b; break;
      default: nd.kind = NodeKind::Delay; nd.exp = LinExpr(pick(g, 0, 2)); nd.a = a; break;
    }
    t.add(nd);
  }
  t.root = 0;
  return t;
}

}  // namespace oracles
