#include "lightmod/infer.hpp"

#include <functional>
#include <map>

#include "lightmod/constraint_gen.hpp"
#include "lightmod/type_syntax.hpp"

namespace lightmod {

bool holds(Predicate p, const TypeGraph& t) {
  switch (p) {
    case Predicate::True: return true;
    case Predicate::DiffInfty: return diff_infty(t);
    case Predicate::InftyFree: return is_infty_free(t);
    case Predicate::TailFinite: return is_tail_finite(t);
  }
  return false;
}

const char* predicate_name(Predicate p) {
  switch (p) {
    case Predicate::True: return "true";
    case Predicate::DiffInfty: return "nonbot";
    case Predicate::InftyFree: return "llt";
    case Predicate::TailFinite: return "bt";
  }
  return "?";
}

namespace {

struct Stripped {
  LinExpr sum;
  int head;
  bool inf;
};

Stripped strip(const TypeGraph& g, int i) {
  Stripped s{LinExpr(0), i, false};
  std::set<int> seen;
  while (g.nodes[s.head].kind == NodeKind::Delay) {
    if (!seen.insert(s.head).second) {
      s.inf = true;
      return s;
    }
    s.sum += g.nodes[s.head].exp;
    s.head = g.nodes[s.head].a;
  }
  return s;
}

// Copies h into g, returning the position of h's root.
int append(TypeGraph& g, const TypeGraph& h) {
  const int base = static_cast<int>(g.nodes.size());
  for (auto nd : h.nodes) {
    if (nd.a >= 0) nd.a += base;
    if (nd.b >= 0) nd.b += base;
    g.nodes.push_back(std::move(nd));
  }
  return base + h.root;
}

bool has_children(NodeKind k) { return k == NodeKind::Prod || k == NodeKind::Arrow; }

// Goal-internal equality of two delay-free positions of g.
bool same_goal(const TypeGraph& g, int x, int y, std::set<IntConstraint>& eqs) {
  std::set<std::pair<int, int>> seen;
  std::vector<std::pair<int, int>> todo{{x, y}};
  while (!todo.empty()) {
    auto [u, v] = todo.back();
    todo.pop_back();
    if (u == v || !seen.insert({u, v}).second) continue;
    auto su = strip(g, u), sv = strip(g, v);
    if (su.inf || sv.inf) {
      if (su.inf != sv.inf) return false;
      continue;
    }
    auto& a = g.nodes[su.head];
    auto& b = g.nodes[sv.head];
    if (a.kind != b.kind) return false;
    if (a.kind == NodeKind::Var && a.name != b.name) return false;
    auto c = IntConstraint::eq(su.sum, sv.sum);
    if (c.trivially_false()) return false;
    if (!c.trivially_true()) eqs.insert(c);
    if (has_children(a.kind)) {
      todo.push_back({a.a, b.a});
      todo.push_back({a.b, b.b});
    }
  }
  return true;
}

}  // namespace

std::optional<ConstraintList> match_constraints(
    const std::vector<std::pair<TypeGraph, TypeGraph>>& pairs) {
  TypeGraph p, g;
  std::vector<std::pair<int, int>> todo;
  for (auto& [pat, goal] : pairs) {
    int u = append(p, canonicalize(pat));
    int v = append(g, canonicalize(goal));
    todo.push_back({u, v});
  }
  struct Binding {
    int head;
    LinExpr offset;
    bool inf;
  };
  std::map<std::string, Binding> bound;
  std::set<IntConstraint> eqs;
  std::set<std::pair<int, int>> seen;
  auto add = [&](const IntConstraint& c) {
    if (c.trivially_false()) return false;
    if (!c.trivially_true()) eqs.insert(c);
    return true;
  };
  while (!todo.empty()) {
    auto [u, v] = todo.back();
    todo.pop_back();
    if (!seen.insert({u, v}).second) continue;
    auto su = strip(p, u), sv = strip(g, v);
    if (su.inf) {
      if (!sv.inf) return std::nullopt;
      continue;
    }
    auto& a = p.nodes[su.head];
    if (a.kind == NodeKind::Var) {
      Binding b{sv.head, sv.sum - su.sum, sv.inf};
      if (!b.inf && !add(IntConstraint::geq(b.offset, 0))) return std::nullopt;
      auto it = bound.find(a.name);
      if (it == bound.end()) {
        bound.emplace(a.name, std::move(b));
        continue;
      }
      auto& old = it->second;
      if (old.inf || b.inf) {
        if (old.inf != b.inf) return std::nullopt;
        continue;
      }
      if (!same_goal(g, old.head, b.head, eqs)) return std::nullopt;
      if (!add(IntConstraint::eq(old.offset, b.offset))) return std::nullopt;
      continue;
    }
    if (sv.inf) return std::nullopt;
    auto& b = g.nodes[sv.head];
    if (a.kind != b.kind) return std::nullopt;
    if (!add(IntConstraint::eq(su.sum, sv.sum))) return std::nullopt;
    if (has_children(a.kind)) {
      todo.push_back({a.a, b.a});
      todo.push_back({a.b, b.b});
    }
  }
  return ConstraintList(eqs.begin(), eqs.end());
}

std::optional<ConstraintList> align(const TypeGraph& x, const TypeGraph& y) {
  TypeGraph a = canonicalize(x), b = canonicalize(y);
  std::map<std::string, std::string> fwd, bwd;
  std::set<IntConstraint> eqs;
  std::set<std::pair<int, int>> seen;
  std::vector<std::pair<int, int>> todo{{a.root, b.root}};
  while (!todo.empty()) {
    auto [u, v] = todo.back();
    todo.pop_back();
    if (!seen.insert({u, v}).second) continue;
    auto su = strip(a, u), sv = strip(b, v);
    if (su.inf || sv.inf) {
      if (su.inf != sv.inf) return std::nullopt;
      continue;
    }
    auto c = IntConstraint::eq(su.sum, sv.sum);
    if (c.trivially_false()) return std::nullopt;
    if (!c.trivially_true()) eqs.insert(c);
    auto& p = a.nodes[su.head];
    auto& q = b.nodes[sv.head];
    if (p.kind != q.kind) return std::nullopt;
    if (p.kind == NodeKind::Var) {
      auto f = fwd.emplace(p.name, q.name).first;
      auto r = bwd.emplace(q.name, p.name).first;
      if (f->second != q.name || r->second != p.name) return std::nullopt;
    }
    if (has_children(p.kind)) {
      todo.push_back({p.a, q.a});
      todo.push_back({p.b, q.b});
    }
  }
  return ConstraintList(eqs.begin(), eqs.end());
}

std::pair<TypeGraph, ConstraintList> normalize_names(const TypeGraph& t0, const ConstraintList& E) {
  TypeGraph t = canonicalize(t0);
  std::map<std::string, std::string> types, ints;
  // two passes so that fresh names never collide with old ones
  std::map<std::string, std::string> tmp_t, tmp_i;
  int nt = 0, ni = 0;
  for (auto& nd : t.nodes) {
    if (nd.kind == NodeKind::Var && !tmp_t.count(nd.name)) tmp_t[nd.name] = "#X" + std::to_string(++nt);
    if (nd.kind == NodeKind::Delay)
      for (auto& [v, _] : nd.exp.terms())
        if (!tmp_i.count(v)) tmp_i[v] = "#N" + std::to_string(++ni);
  }
  for (auto& v : variables_of(E))
    if (!tmp_i.count(v)) tmp_i[v] = "#N" + std::to_string(++ni);
  for (auto& [k, v] : tmp_t) types[v] = v.substr(1);
  for (auto& [k, v] : tmp_i) ints[v] = v.substr(1);
  TypeGraph r = rename(rename(t, tmp_t, tmp_i), types, ints);
  std::set<IntConstraint> e;
  for (auto& c : E) e.insert(c.rename(tmp_i).rename(ints));
  return {r, ConstraintList(e.begin(), e.end())};
}

namespace {

struct Candidate {
  TypeGraph type;
  ConstraintList E;
};

// false when the solver gives up
bool surely_entails(const ConstraintList& sys, const IntConstraint& c) {
  try {
    return entails(sys, c);
  } catch (const ilp_limit_exceeded&) {
    return false;
  }
}

bool entails_all(const ConstraintList& sys, const ConstraintList& cs) {
  for (auto& c : cs)
    if (!surely_entails(sys, c)) return false;
  return true;
}

// the two >= halves of a constraint's negation
std::vector<IntConstraint> negations(const IntConstraint& c) {
  if (!c.is_eq()) return {c.negated()};
  return {IntConstraint(c.expr() - 1, Rel::Geq), IntConstraint(-c.expr() - 1, Rel::Geq)};
}

// E describes exactly the union of the given regions: E together with the
// negation of every region is infeasible.
// Gives up (answers false) after kUnionBudget feasibility checks.
constexpr std::size_t kUnionBudget = 500;

bool exact_union(const ConstraintList& E, const std::vector<const ConstraintList*>& regions) {
  std::size_t budget = kUnionBudget;
  bool gave_up = false;
  std::function<bool(std::size_t, ConstraintList&)> outside = [&](std::size_t i, ConstraintList& sys) {
    if (budget == 0) {
      gave_up = true;
      return true;
    }
    --budget;
    try {
      if (!feasible(sys)) return false;
    } catch (const ilp_limit_exceeded&) {
      gave_up = true;
      return true;
    }
    if (i == regions.size()) return true;
    for (auto& c : *regions[i])
      for (auto& nc : negations(c)) {
        sys.push_back(nc);
        bool r = outside(i + 1, sys);
        sys.pop_back();
        if (r) return true;
      }
    return false;
  };
  ConstraintList sys = E;
  bool out = outside(0, sys);
  return !out && !gave_up;
}

// b's instances are instances of a's type read under b's constraints
bool represents(const Candidate& a, const Candidate& b) {
  auto eqs = align(a.type, b.type);
  return eqs && entails_all(b.E, *eqs);
}

// Constraints of a group entailed by every member, if they describe the
// union exactly.
std::optional<ConstraintList> hull(const std::vector<const Candidate*>& group) {
  std::set<IntConstraint> h;
  for (auto* g : group)
    for (auto& c : g->E) {
      bool all = true;
      for (auto* o : group)
        if (o != g && !surely_entails(o->E, c)) {
          all = false;
          break;
        }
      if (all) h.insert(c);
    }
  ConstraintList E(h.begin(), h.end());
  std::vector<const ConstraintList*> regions;
  for (auto* g : group) regions.push_back(&g->E);
  if (!exact_union(E, regions)) return std::nullopt;
  return E;
}

constexpr std::size_t kMaxGroup = 8;

std::string key(const Candidate& c) { return print_type(c.type) + " | " + str(c.E); }

void coalesce(std::vector<Candidate>& cs) {
  // groups already found not to merge, and represents() answers
  std::set<std::vector<std::string>> failed;
  std::map<std::pair<std::string, std::string>, bool> rep;
  for (bool changed = true; changed;) {
    changed = false;
    std::vector<std::string> keys;
    for (auto& c : cs) keys.push_back(key(c));
    for (std::size_t i = 0; i < cs.size() && !changed; ++i) {
      std::vector<std::size_t> members;
      for (std::size_t j = 0; j < cs.size(); ++j) {
        if (j == i) continue;
        auto [it, fresh] = rep.try_emplace({keys[i], keys[j]}, false);
        if (fresh) it->second = represents(cs[i], cs[j]);
        if (it->second) members.push_back(j);
      }
      if (members.empty()) continue;
      // the whole group first, then single partners
      std::vector<std::vector<std::size_t>> tries;
      if (members.size() <= kMaxGroup) tries.push_back(members);
      if (members.size() > 1)
        for (auto j : members) tries.push_back({j});
      for (auto& t : tries) {
        std::vector<std::string> gk{keys[i]};
        for (auto j : t) gk.push_back(keys[j]);
        if (failed.count(gk)) continue;
        std::vector<const Candidate*> group{&cs[i]};
        for (auto j : t) group.push_back(&cs[j]);
        auto E = hull(group);
        if (!E) {
          failed.insert(gk);
          continue;
        }
        cs[i].E = simplify(*E);
        for (auto it = t.rbegin(); it != t.rend(); ++it) cs.erase(cs.begin() + static_cast<std::ptrdiff_t>(*it));
        changed = true;
        break;
      }
    }
  }
}

ConstraintList reduce(const TypeGraph& t, const ConstraintList& E) {
  ConstraintList cur = simplify(project(E, t.int_vars()));
  for (;;) {
    ConstraintList next = simplify(project(cur, t.int_vars()));
    if (next == cur) return cur;
    cur = std::move(next);
  }
}

// Uses equalities with a unit coefficient to remove a variable from the type;
// the right-hand side inherits the variable's non-negativity.
void substitute_equalities(Candidate& c) {
  for (bool changed = true; changed;) {
    changed = false;
    for (auto& k : c.E) {
      if (!k.is_eq()) continue;
      auto tv = c.type.int_vars();
      std::string v;
      std::int64_t a = 0;
      for (auto& [n, x] : k.expr().terms())
        if ((x == 1 || x == -1) && tv.count(n)) {
          v = n;
          a = x;
        }
      if (v.empty()) continue;
      // a*v + rest = 0
      LinExpr rhs = (k.expr() - LinExpr::var(v, a)) * (-a);
      std::map<std::string, LinExpr> sub{{v, rhs}};
      for (auto& nd : c.type.nodes)
        if (nd.kind == NodeKind::Delay) nd.exp = nd.exp.substitute(sub);
      c.type = canonicalize(c.type);
      std::set<IntConstraint> next;
      for (auto& o : c.E)
        if (!(o == k)) next.insert(IntConstraint(o.expr().substitute(sub), o.rel()));
      next.insert(IntConstraint(rhs, Rel::Geq));
      ConstraintList E;
      for (auto& o : next)
        if (!o.trivially_true()) E.push_back(o);
      c.E = simplify(E);
      changed = true;
      break;
    }
  }
}

}  // namespace

constexpr std::size_t kAutoLadderBranches = 256;

InferResult infer(const ExprPtr& e, Predicate p, const InferOptions& opt) {
  Generated gen = generate(e);
  InferResult out;
  std::vector<Candidate> raw;
  std::size_t uo_cap = opt.max_branches;
  auto run_ladder = [&] {
    UnifyOptions uo;
    uo.max_branches = uo_cap;
    for (auto& s : unify(gen.constraints, {}, uo))
      raw.push_back({lightmod::apply(s.tau, from_meta(gen.type)), s.E});
    out.engine_used = EngineKind::Ladder;
  };
  auto run_classes = [&] {
    auto r = class_unify(gen.constraints, {gen.type});
    for (std::size_t i = 0; i < r.solutions.size(); ++i) {
      // level variables not in the image are local to one solution
      std::set<std::string> keep = r.images[i][0].int_vars();
      for (auto& v : variables_of(r.solutions[i].E))
        if (!v.starts_with('L')) keep.insert(v);
      raw.push_back({r.images[i][0], project(r.solutions[i].E, keep)});
    }
    out.engine_used = EngineKind::Classes;
  };
  switch (opt.engine) {
    case EngineKind::Ladder: run_ladder(); break;
    case EngineKind::Classes: run_classes(); break;
    case EngineKind::Auto:
      try {
        // a small tree first; larger searches go to the class engine
        uo_cap = std::min<std::size_t>(opt.max_branches, kAutoLadderBranches);
        run_ladder();
      } catch (const branch_cap_exceeded&) {
        raw.clear();
        run_classes();
      }
  }
  out.raw_solutions = raw.size();
  // variables outside every type carry no shared meaning
  std::set<std::string> typed;
  for (auto& c : raw)
    if (holds(p, c.type)) typed.merge(c.type.int_vars());
  std::vector<Candidate> cs;
  for (auto& c : raw) {
    if (!holds(p, c.type)) continue;
    ConstraintList E = simplify(project(c.E, typed));
    if (!feasible(E)) continue;
    Candidate cand{canonicalize(c.type), std::move(E)};
    bool dup = false;
    for (auto& d : cs)
      if (d.type == cand.type && d.E == cand.E) dup = true;
    if (!dup) cs.push_back(std::move(cand));
  }
  if (opt.coalesce) coalesce(cs);
  for (auto& c : cs) {
    c.E = reduce(c.type, c.E);
    substitute_equalities(c);
    auto [t, E] = normalize_names(c.type, reduce(c.type, c.E));
    std::set<IntConstraint> shown(E.begin(), E.end());
    for (auto& v : t.int_vars()) {
      auto nonneg = IntConstraint::geq(LinExpr::var(v), 0);
      if (!surely_entails(E, nonneg)) shown.insert(nonneg);
    }
    Entry en;
    en.type = t;
    en.E.assign(shown.begin(), shown.end());
    auto w = solve(en.E, t.int_vars());
    if (!w) continue;
    en.witness = *w;
    en.instance = instantiate(t, en.witness);
    out.entries.push_back(std::move(en));
  }
  return out;
}

bool typable(const ExprPtr& e, const InferOptions& opt) { return !infer(e, Predicate::True, opt).entries.empty(); }

CheckResult check_type(const InferResult& r, const TypeGraph& goal) {
  if (!goal.int_vars().empty()) throw ill_formed_goal("goal type has integer variables");
  if (!is_guarded(goal)) throw ill_formed_goal("goal type is not guarded");
  for (std::size_t i = 0; i < r.entries.size(); ++i) {
    auto& en = r.entries[i];
    auto eqs = match_constraints({{en.type, goal}});
    if (!eqs) continue;
    ConstraintList sys = en.E;
    sys.insert(sys.end(), eqs->begin(), eqs->end());
    if (auto w = solve(sys, en.type.int_vars())) return {true, i, *w};
  }
  return {};
}

CheckResult check_type(const ExprPtr& e, const TypeGraph& goal, const InferOptions& opt) {
  if (!goal.int_vars().empty()) throw ill_formed_goal("goal type has integer variables");
  if (!is_guarded(goal)) throw ill_formed_goal("goal type is not guarded");
  return check_type(infer(e, Predicate::True, opt), goal);
}

}  // namespace lightmod
