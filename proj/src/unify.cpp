#include "lightmod/unify.hpp"

#include <cstdlib>
#include <unordered_map>

#include "lightmod/ilp.hpp"
#include "lightmod/type_syntax.hpp"

namespace lightmod {

std::size_t default_max_branches() {
  if (const char* v = std::getenv("MODAL_MAX_BRANCHES")) {
    char* end = nullptr;
    unsigned long long k = std::strtoull(v, &end, 10);
    if (end != v && *end == '\0' && k > 0) return static_cast<std::size_t>(k);
  }
  return 4096;
}

namespace {

bool delay_over_var(const MetaPtr& t) { return t->kind == MKind::Delay && t->l->kind == MKind::Var; }

bool simple_eq(const Equation& eq, const std::set<IntConstraint>& intc) {
  if (eq.lhs->kind != MKind::Var || !delay_over_var(eq.rhs)) return true;
  return intc.count(IntConstraint::lt(0, eq.rhs->exp)) > 0;
}

// heads of both sides are constructors of different kinds
bool clash(const MetaPtr& t, const MetaPtr& s) {
  const MetaPtr& a = t->kind == MKind::Delay ? t->l : t;
  const MetaPtr& b = s->kind == MKind::Delay ? s->l : s;
  return is_nat_op(a) && is_nat_op(b) && a->kind != b->kind;
}

enum class Case { B, CPush, CDrop, D, E, F, G, H, I, J, K, Final };

struct Measure {
  long long first;
  std::size_t second;
  bool operator<(const Measure& o) const {
    return first != o.first ? first < o.first : second < o.second;
  }
};

class Ladder {
public:
  Ladder(const ConstraintSet& c0, const std::set<Equation>& v0, const UnifyOptions& opt, UnifyStats& st)
      : opt_(opt), st_(st) {
    std::set<MetaPtr, bool (*)(const MetaPtr&, const MetaPtr&)> subterms(
        [](const MetaPtr& a, const MetaPtr& b) { return compare(a, b) < 0; });
    std::function<void(const MetaPtr&)> collect = [&](const MetaPtr& t) {
      if (!subterms.insert(t).second) return;
      if (t->l) collect(t->l);
      if (t->r) collect(t->r);
    };
    for (auto& e : c0.eqc) {
      collect(e.lhs);
      collect(e.rhs);
    }
    subc_ = static_cast<long long>(subterms.size()) * static_cast<long long>(subterms.size());
    v0_ = static_cast<long long>(v0.size());
  }

  void run(ConstraintSet c, std::set<Equation> v) {
    Measure top{subc_ + v0_ - static_cast<long long>(v.size()) + 1, 0};
    go(std::move(c), std::move(v), top);
  }

  std::vector<Solution> results() {
    std::vector<Solution> out(found_.begin(), found_.end());
    return out;
  }

private:
  struct SolLess {
    bool operator()(const Solution& a, const Solution& b) const {
      if (a.E != b.E) return a.E < b.E;
      auto ia = a.tau.begin();
      auto ib = b.tau.begin();
      if (a.tau.size() != b.tau.size()) return a.tau.size() < b.tau.size();
      for (; ia != a.tau.end(); ++ia, ++ib) {
        if (ia->first != ib->first) return ia->first < ib->first;
        const auto& ga = ia->second;
        const auto& gb = ib->second;
        if (ga.nodes.size() != gb.nodes.size()) return ga.nodes.size() < gb.nodes.size();
        for (std::size_t k = 0; k < ga.nodes.size(); ++k) {
          auto& x = ga.nodes[k];
          auto& y = gb.nodes[k];
          if (x == y) continue;
          if (x.kind != y.kind) return x.kind < y.kind;
          if (x.name != y.name) return x.name < y.name;
          if (x.exp != y.exp) return x.exp < y.exp;
          if (x.a != y.a) return x.a < y.a;
          return x.b < y.b;
        }
      }
      return false;
    }
  };

  const UnifyOptions& opt_;
  UnifyStats& st_;
  std::size_t depth_ = 0;
  long long subc_ = 0, v0_ = 0;
  std::set<Solution, SolLess> found_;
  std::unordered_map<std::string, bool> feas_;

  bool int_feasible(const std::set<IntConstraint>& intc) {
    std::string key;
    for (auto& c : intc) key += c.str() + ";";
    auto it = feas_.find(key);
    if (it != feas_.end()) return it->second;
    bool r = feasible(ConstraintList(intc.begin(), intc.end()));
    feas_[key] = r;
    return r;
  }

  void leaf() {
    if (++st_.leaves > opt_.max_branches)
      throw branch_cap_exceeded("unification branch cap of " + std::to_string(opt_.max_branches) + " reached");
  }

  Case classify(const Equation& eq, const ConstraintSet& c, const std::set<Equation>& v, int& prio) const {
    const MetaPtr& t = eq.lhs;
    const MetaPtr& s = eq.rhs;
    bool visited = v.count(eq) > 0;
    if (equal(t, s)) return prio = 0, Case::B;
    if (t->kind == MKind::Var) {
      // another equation with this left-hand side
      auto lo = c.eqc.lower_bound(Equation{t, nullptr_meta()});
      for (auto it = lo; it != c.eqc.end() && equal(it->lhs, t); ++it)
        if (!(*it == eq)) return visited ? (prio = 2, Case::CDrop) : (prio = 1, Case::CPush);
    }
    if (is_op(t) && is_op(s) && t->kind == s->kind) return prio = 0, Case::D;
    if (t->kind == MKind::Var && delay_over_var(s) && !visited) {
      if (simple_eq(eq, c.intc)) return prio = 100, Case::Final;
      return prio = 5, Case::E;
    }
    if (t->kind == MKind::Var && !delay_over_var(s)) return prio = 100, Case::Final;
    if (delay_over_var(t) && delay_over_var(s)) return prio = 5, Case::F;
    if (delay_over_var(t) && (is_nat_op(s) || (s->kind == MKind::Delay && is_nat_op(s->l))))
      return prio = 2, Case::G;
    if (t->kind == MKind::Delay && s->kind == MKind::Delay && equalcons(t->l, s->l)) return prio = 2, Case::H;
    if (t->kind == MKind::Delay && equalcons(t->l, s)) return prio = 2, Case::I;
    if (!visited) {
      prio = clash(t, s) ? 0 : 3;
      return Case::J;
    }
    if (t->kind == MKind::Var && delay_over_var(s) && simple_eq(eq, c.intc)) return prio = 100, Case::Final;
    prio = t->kind == MKind::Var ? 9 : 0;
    return Case::K;
  }

  // compare() orders a null rhs first, so this finds all equations on t
  static MetaPtr nullptr_meta() { return nullptr; }

  void base(const ConstraintSet& c) {
    TypeSubstitution tau = solve_recursive_system(c.eqc);
    std::set<IntConstraint> e = c.intc;
    for (auto& g : guard_constraints(tau)) e.insert(g);
    ConstraintList el(e.begin(), e.end());
    leaf();
    if (feasible(el)) found_.insert(Solution{std::move(tau), std::move(el)});
  }

  void recurse(ConstraintSet c, std::set<Equation> v, const Measure& parent, bool new_ints) {
    if (new_ints && opt_.prune && !int_feasible(c.intc)) {
      leaf();
      return;
    }
    if (++depth_ > opt_.max_depth) throw branch_cap_exceeded("search depth above " + std::to_string(opt_.max_depth));
    go(std::move(c), std::move(v), parent);
    --depth_;
  }

  void go(ConstraintSet c, std::set<Equation> v, const Measure& parent) {
    ++st_.calls;
    Measure m{subc_ + v0_ - static_cast<long long>(v.size()), c.size()};
    if (opt_.check_measure) {
      ++st_.measure_checks;
      if (!(m < parent))
        throw measure_violation("termination measure did not decrease: (" + std::to_string(m.first) + "," +
                                std::to_string(m.second) + ") vs (" + std::to_string(parent.first) + "," +
                                std::to_string(parent.second) + ")");
    }
    if (is_substitutional(c) && is_simple(c)) {
      base(c);
      return;
    }
    const Equation* pick = nullptr;
    Case pcase = Case::Final;
    int best = 1000;
    for (auto& eq : c.eqc) {
      int prio = 0;
      Case k = classify(eq, c, v, prio);
      if (k == Case::Final) continue;
      if (prio < best) {
        best = prio;
        pick = &eq;
        pcase = k;
        if (prio == 0) break;
      }
    }
    if (!pick) {
      // only final-form equations left but the base case failed
      leaf();
      return;
    }
    Equation eq = *pick;
    const MetaPtr& t = eq.lhs;
    const MetaPtr& s = eq.rhs;
    ConstraintSet rest = c;
    rest.eqc.erase(eq);
    std::set<Equation> v2 = v;
    v2.insert(eq);

    switch (pcase) {
      case Case::B:
        recurse(std::move(rest), std::move(v2), m, false);
        return;
      case Case::CPush:
      case Case::CDrop: {
        if (pcase == Case::CPush) {
          auto lo = c.eqc.lower_bound(Equation{t, nullptr_meta()});
          MetaPtr other;
          for (auto it = lo; it != c.eqc.end() && equal(it->lhs, t); ++it)
            if (!(*it == eq)) {
              other = it->rhs;
              break;
            }
          rest.eqc.insert({s, other});
        }
        recurse(std::move(rest), std::move(v2), m, false);
        return;
      }
      case Case::D:
        rest.eqc.insert({t->l, s->l});
        rest.eqc.insert({t->r, s->r});
        recurse(std::move(rest), std::move(v2), m, false);
        return;
      case Case::E: {
        const LinExpr& e = s->exp;
        ConstraintSet c1 = rest;
        c1.eqc.insert({t, s->l});
        c1.intc.insert(IntConstraint::eq(e, 0));
        recurse(std::move(c1), v2, m, true);
        ConstraintSet c2 = rest;
        c2.eqc.insert(eq);
        c2.intc.insert(IntConstraint::lt(0, e));
        recurse(std::move(c2), std::move(v2), m, true);
        return;
      }
      case Case::F: {
        const LinExpr& e = t->exp;
        const LinExpr& e2 = s->exp;
        ConstraintSet c1 = rest;
        c1.eqc.insert({t->l, m_delay(e2 - e, s->l)});
        c1.intc.insert(IntConstraint::geq(e2, e));
        c1.intc.insert(IntConstraint::geq(e, 0));
        recurse(std::move(c1), v2, m, true);
        ConstraintSet c2 = rest;
        c2.eqc.insert({s->l, m_delay(e - e2, t->l)});
        c2.intc.insert(IntConstraint::lt(e2, e));
        c2.intc.insert(IntConstraint::geq(e2, 0));
        recurse(std::move(c2), std::move(v2), m, true);
        return;
      }
      case Case::G: {
        const LinExpr& e = t->exp;
        LinExpr e2 = s->kind == MKind::Delay ? s->exp : LinExpr(0);
        MetaPtr body = s->kind == MKind::Delay ? s->l : s;
        rest.eqc.insert({t->l, m_delay(e2 - e, body)});
        rest.intc.insert(IntConstraint::geq(e2, e));
        rest.intc.insert(IntConstraint::geq(e, 0));
        recurse(std::move(rest), std::move(v2), m, true);
        return;
      }
      case Case::H:
        rest.eqc.insert({t->l, s->l});
        rest.intc.insert(IntConstraint::eq(t->exp, s->exp));
        recurse(std::move(rest), std::move(v2), m, true);
        return;
      case Case::I:
        rest.eqc.insert({t->l, s});
        rest.intc.insert(IntConstraint::eq(t->exp, 0));
        recurse(std::move(rest), std::move(v2), m, true);
        return;
      case Case::J:
        rest.eqc.insert({s, t});
        recurse(std::move(rest), std::move(v2), m, false);
        return;
      case Case::K:
      case Case::Final:
        leaf();
        return;
    }
  }
};

}  // namespace

bool is_substitutional(const ConstraintSet& c) {
  const MetaPtr* prev = nullptr;
  for (auto& e : c.eqc) {
    if (e.lhs->kind != MKind::Var) return false;
    if (prev && equal(*prev, e.lhs)) return false;
    prev = &e.lhs;
  }
  return true;
}

bool is_simple(const ConstraintSet& c) {
  for (auto& e : c.eqc)
    if (!simple_eq(e, c.intc)) return false;
  return true;
}

std::vector<Solution> unify(const ConstraintSet& c, const std::set<Equation>& visited, const UnifyOptions& opt,
                            UnifyStats* stats) {
  UnifyStats local;
  UnifyStats& st = stats ? *stats : local;
  Ladder l(c, visited, opt, st);
  l.run(c, visited);
  return l.results();
}

TypeSubstitution solve_recursive_system(const std::set<Equation>& eqc) {
  std::map<std::string, MetaPtr> rhs;
  for (auto& e : eqc) {
    if (e.lhs->kind != MKind::Var) throw std::invalid_argument("system is not substitutional");
    if (!rhs.emplace(e.lhs->name, e.rhs).second) throw std::invalid_argument("system is not substitutional");
  }
  // resolve pure variable aliases first
  std::map<std::string, std::string> alias_root;
  for (auto& [x, _] : rhs) {
    std::vector<std::string> path{x};
    std::set<std::string> seen{x};
    std::string cur = x;
    bool cycle = false;
    for (;;) {
      auto it = rhs.find(cur);
      if (it == rhs.end() || it->second->kind != MKind::Var) break;
      cur = it->second->name;
      if (!seen.insert(cur).second) {
        cycle = true;
        break;
      }
      path.push_back(cur);
    }
    if (cycle) {
      // smallest name on the cycle becomes a free variable
      std::string mn = cur;
      std::string w = cur;
      do {
        w = rhs.at(w)->name;
        mn = std::min(mn, w);
      } while (w != cur);
      alias_root[x] = mn;
    }
  }
  TypeGraph g;
  std::map<std::string, int> hole, leaf;
  for (auto& [x, _] : rhs) hole[x] = g.add({NodeKind::Delay, "", LinExpr(0), -1});
  auto var_node = [&](const std::string& y) {
    auto it = leaf.find(y);
    if (it != leaf.end()) return it->second;
    return leaf[y] = g.add({NodeKind::Var, y});
  };
  std::function<int(const MetaPtr&)> embed = [&](const MetaPtr& t) -> int {
    switch (t->kind) {
      case MKind::Var: {
        auto h = hole.find(t->name);
        return h != hole.end() ? h->second : var_node(t->name);
      }
      case MKind::Nat: return g.add({NodeKind::Nat});
      case MKind::Delay: {
        int c = embed(t->l);
        return g.add({NodeKind::Delay, "", t->exp, c});
      }
      default: {
        int l = embed(t->l);
        int r = embed(t->r);
        return g.add({t->kind == MKind::Prod ? NodeKind::Prod : NodeKind::Arrow, "", {}, l, r});
      }
    }
  };
  for (auto& [x, t] : rhs) {
    if (alias_root.count(x)) continue;
    g.nodes[hole[x]].a = embed(t);
  }
  // alias-cycle representatives are free
  for (auto& [x, r] : alias_root)
    if (r == x) g.nodes[hole[x]] = {NodeKind::Var, x};
  for (auto& [x, r] : alias_root)
    if (r != x) g.nodes[hole[x]].a = hole[r];
  TypeSubstitution tau;
  for (auto& [x, _] : rhs) tau[x] = subgraph(g, hole[x]);
  return tau;
}

bool satisfies(const TypeSubstitution& tau, const Assignment& theta, const ConstraintSet& c) {
  for (auto& i : c.intc)
    if (!i.holds(theta)) return false;
  for (auto& e : c.eqc) {
    auto l = instantiate(lightmod::apply(tau, from_meta(e.lhs)), theta);
    auto r = instantiate(lightmod::apply(tau, from_meta(e.rhs)), theta);
    if (!type_equal(l, r)) return false;
  }
  return true;
}

std::string str(const Solution& s) {
  std::string out = "tau = {";
  bool first = true;
  for (auto& [x, g] : s.tau) {
    if (!first) out += ", ";
    out += x + " := " + print_type(g);
    first = false;
  }
  return out + "}, E = " + str(s.E);
}

}  // namespace lightmod
