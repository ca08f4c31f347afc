#include "lightmod/ilp.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <numeric>

namespace lightmod {
namespace {

using Vec = std::vector<std::int64_t>;

// a.x + c = 0 or a.x + c >= 0 over dense variable indices
struct Row {
  Vec a;
  std::int64_t c = 0;
  bool eq = false;
  bool operator<(const Row& o) const {
    if (eq != o.eq) return eq < o.eq;
    if (c != o.c) return c < o.c;
    return a < o.a;
  }
  bool operator==(const Row& o) const { return eq == o.eq && c == o.c && a == o.a; }
};

// x_var = a.x + c, recorded during presolve for back substitution
struct Elim {
  int var;
  Vec a;
  std::int64_t c;
};

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

struct Problem {
  std::vector<std::string> names;
  std::vector<Row> rows;
  Vec obj;
  std::int64_t obj_c = 0;
  std::vector<Elim> elims;
  std::vector<bool> zeroed;  // fixed to 0 by presolve

  int n() const { return static_cast<int>(names.size()); }
};

Problem build(const ConstraintList& sys, const std::set<std::string>& extra, const LinExpr* obj) {
  Problem p;
  std::set<std::string> vs = variables_of(sys);
  vs.insert(extra.begin(), extra.end());
  if (obj)
    for (auto& v : obj->variables()) vs.insert(v);
  p.names.assign(vs.begin(), vs.end());
  std::map<std::string, int> idx;
  for (int i = 0; i < p.n(); ++i) idx[p.names[i]] = i;
  for (auto& c : sys) {
    Row r;
    r.a.assign(p.n(), 0);
    for (auto& [v, a] : c.expr().terms()) r.a[idx[v]] = a;
    r.c = c.expr().constant();
    r.eq = c.is_eq();
    p.rows.push_back(std::move(r));
  }
  p.obj.assign(p.n(), 0);
  if (obj) {
    for (auto& [v, a] : obj->terms()) p.obj[idx[v]] = a;
    p.obj_c = obj->constant();
  }
  p.zeroed.assign(p.n(), false);
  return p;
}

// Returns false when the system is proven infeasible.
bool normalize(Row& r) {
  std::int64_t g = 0;
  for (auto a : r.a) g = std::gcd(g, a < 0 ? -a : a);
  if (g == 0) return r.eq ? r.c == 0 : r.c >= 0;
  if (g > 1) {
    if (r.eq) {
      if (r.c % g != 0) return false;
      r.c /= g;
    } else {
      r.c = floor_div(r.c, g);
    }
    for (auto& a : r.a) a /= g;
  }
  return true;
}

void substitute(Vec& a, std::int64_t& c, const Elim& e) {
  std::int64_t k = a[e.var];
  if (k == 0) return;
  a[e.var] = 0;
  for (std::size_t j = 0; j < a.size(); ++j) a[j] += k * e.a[j];
  c += k * e.c;
}

// feas_only enables reductions that keep feasibility but lose the optimum.
bool presolve(Problem& p, bool feas_only) {
  for (bool changed = true; changed;) {
    changed = false;
    std::vector<Row> kept;
    for (auto& r : p.rows) {
      if (!normalize(r)) return false;
      bool zero = std::all_of(r.a.begin(), r.a.end(), [](auto a) { return a == 0; });
      if (zero) continue;
      if (!r.eq && r.c >= 0 && std::all_of(r.a.begin(), r.a.end(), [](auto a) { return a >= 0; }))
        continue;
      kept.push_back(std::move(r));
    }
    std::sort(kept.begin(), kept.end());
    kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
    p.rows = std::move(kept);

    // unit-coefficient equality: eliminate
    for (std::size_t i = 0; i < p.rows.size();) {
      auto& r = p.rows[i];
      bool elim = false;
      for (int k = 0; r.eq && k < p.n(); ++k) {
        if (r.a[k] != 1 && r.a[k] != -1) continue;
        Elim e{k, Vec(p.n(), 0), 0};
        std::int64_t s = -r.a[k];
        for (int j = 0; j < p.n(); ++j)
          if (j != k) e.a[j] = s * r.a[j];
        e.c = s * r.c;
        p.rows.erase(p.rows.begin() + i);
        for (auto& o : p.rows) substitute(o.a, o.c, e);
        substitute(p.obj, p.obj_c, e);
        Row nonneg{e.a, e.c, false};
        p.rows.push_back(nonneg);
        p.elims.push_back(std::move(e));
        changed = elim = true;
        break;
      }
      if (!elim) ++i;
    }
    if (changed) continue;

    // columns with one-signed coefficients
    for (int j = 0; j < p.n(); ++j) {
      bool any = false, pos = false, neg = false, in_eq = false;
      for (auto& r : p.rows) {
        if (r.a[j] == 0) continue;
        any = true;
        if (r.eq) in_eq = true;
        (r.a[j] > 0 ? pos : neg) = true;
      }
      if (!any || in_eq) continue;
      if (!pos && (feas_only || p.obj[j] >= 0)) {
        // decreasing x_j only helps; pin it to zero
        for (auto& r : p.rows) r.a[j] = 0;
        p.zeroed[j] = true;
        changed = true;
      } else if (!neg && feas_only) {
        // x_j can be made large enough to satisfy every row it occurs in
        std::erase_if(p.rows, [j](const Row& r) { return r.a[j] != 0; });
        changed = true;
      }
    }
  }
  return true;
}

struct Lp {
  bool feasible = false;
  std::vector<mpq_class> x;
  mpq_class obj;
};

// Dense two-phase simplex with Bland's rule over exact rationals.
// Minimises obj.x subject to the rows and lb <= x <= ub.
Lp simplex(const std::vector<Row>& rows, int n, const Vec& lb,
           const std::vector<std::optional<std::int64_t>>& ub, const Vec& obj) {
  struct R {
    std::vector<std::int64_t> a;
    mpq_class b;
    bool eq;
  };
  std::vector<R> rs;
  for (auto& r : rows) {
    mpz_class shift = r.c;
    for (int j = 0; j < n; ++j) shift += mpz_class(r.a[j]) * lb[j];
    rs.push_back({r.a, mpq_class(-shift), r.eq});
  }
  for (int j = 0; j < n; ++j)
    if (ub[j]) {
      Vec a(n, 0);
      a[j] = -1;
      rs.push_back({a, mpq_class(-(*ub[j] - lb[j])), false});
    }
  const int m = static_cast<int>(rs.size());
  int nslack = 0;
  for (auto& r : rs) nslack += r.eq ? 0 : 1;
  const int art0 = n + nslack;
  const int ncols = art0 + m;
  std::vector<std::vector<mpq_class>> T(m, std::vector<mpq_class>(ncols + 1));
  std::vector<int> basis(m, -1);
  std::vector<bool> is_art(ncols, false);
  int s = n;
  for (int i = 0; i < m; ++i) {
    auto& r = rs[i];
    bool flip = r.b < 0;
    for (int j = 0; j < n; ++j) T[i][j] = flip ? -r.a[j] : r.a[j];
    T[i][ncols] = flip ? mpq_class(-r.b) : r.b;
    if (!r.eq) {
      T[i][s] = flip ? 1 : -1;
      if (flip) basis[i] = s;
      ++s;
    }
    if (basis[i] < 0) {
      T[i][art0 + i] = 1;
      basis[i] = art0 + i;
    }
  }
  for (int i = 0; i < m; ++i) is_art[art0 + i] = true;

  std::vector<mpq_class> z(ncols + 1);
  auto pivot = [&](int r, int c) {
    mpq_class inv = 1 / T[r][c];
    for (auto& v : T[r])
      if (sgn(v) != 0) v *= inv;
    for (int i = 0; i < m; ++i) {
      if (i == r || sgn(T[i][c]) == 0) continue;
      mpq_class f = T[i][c];
      for (int j = 0; j <= ncols; ++j)
        if (sgn(T[r][j]) != 0) T[i][j] -= f * T[r][j];
    }
    if (sgn(z[c]) != 0) {
      mpq_class f = z[c];
      for (int j = 0; j <= ncols; ++j)
        if (sgn(T[r][j]) != 0) z[j] -= f * T[r][j];
    }
    basis[r] = c;
  };
  // z_j = c_j - c_B B^-1 A_j for cost vector cost
  auto price = [&](const std::vector<mpq_class>& cost) {
    for (int j = 0; j <= ncols; ++j) z[j] = j < ncols ? cost[j] : mpq_class(0);
    for (int i = 0; i < m; ++i) {
      const mpq_class& cb = cost[basis[i]];
      if (sgn(cb) == 0) continue;
      for (int j = 0; j <= ncols; ++j)
        if (sgn(T[i][j]) != 0) z[j] -= cb * T[i][j];
    }
  };
  auto run = [&](const std::vector<bool>& allowed) -> bool {
    for (;;) {
      int e = -1;
      for (int j = 0; j < ncols; ++j)
        if (allowed[j] && sgn(z[j]) < 0) {
          e = j;
          break;
        }
      if (e < 0) return true;
      int r = -1;
      mpq_class best;
      for (int i = 0; i < m; ++i) {
        if (sgn(T[i][e]) <= 0) continue;
        mpq_class ratio = T[i][ncols] / T[i][e];
        if (r < 0 || ratio < best || (ratio == best && basis[i] < basis[r])) {
          r = i;
          best = ratio;
        }
      }
      if (r < 0) return false;  // unbounded
      pivot(r, e);
    }
  };

  std::vector<mpq_class> cost1(ncols, 0);
  for (int j = art0; j < ncols; ++j) cost1[j] = 1;
  std::vector<bool> all(ncols, true);
  price(cost1);
  run(all);
  Lp out;
  if (sgn(z[ncols]) != 0) return out;  // -z is the phase one optimum
  // drive remaining artificials out of the basis
  for (int i = 0; i < m; ++i) {
    if (!is_art[basis[i]]) continue;
    for (int j = 0; j < art0; ++j)
      if (sgn(T[i][j]) != 0) {
        pivot(i, j);
        break;
      }
  }
  std::vector<mpq_class> cost2(ncols, 0);
  for (int j = 0; j < n; ++j) cost2[j] = obj[j];
  std::vector<bool> allowed(ncols, true);
  for (int j = art0; j < ncols; ++j) allowed[j] = false;
  price(cost2);
  if (!run(allowed)) throw std::runtime_error("ilp: objective unbounded below");
  out.feasible = true;
  out.x.assign(n, 0);
  for (int i = 0; i < m; ++i)
    if (basis[i] < n) out.x[basis[i]] = T[i][ncols];
  out.obj = 0;
  for (int j = 0; j < n; ++j) {
    out.x[j] += lb[j];
    out.obj += out.x[j] * obj[j];
  }
  return out;
}

mpz_class ceil_q(const mpq_class& q) {
  mpz_class r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}
mpz_class floor_q(const mpq_class& q) {
  mpz_class r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

// Branch and bound over the reduced problem. Columns that no row mentions
// are pinned at zero. With stop_first the first integral point is returned.
std::optional<Vec> branch_and_bound(const Problem& p, bool stop_first, const IlpOptions& opt) {
  const int n = p.n();
  std::vector<bool> used(n, false);
  for (auto& r : p.rows)
    for (int j = 0; j < n; ++j)
      if (r.a[j] != 0) used[j] = true;
  std::vector<int> cols;
  for (int j = 0; j < n; ++j)
    if (used[j]) cols.push_back(j);
  for (int j = 0; j < n; ++j)
    if (!used[j] && p.obj[j] < 0) throw std::runtime_error("ilp: objective unbounded below");
  const int k = static_cast<int>(cols.size());
  if (k == 0) {
    for (auto& r : p.rows)
      if (r.eq ? r.c != 0 : r.c < 0) return std::nullopt;
    return Vec(n, 0);
  }
  std::vector<Row> rows;
  for (auto& r : p.rows) {
    Row q;
    q.eq = r.eq;
    q.c = r.c;
    for (int j : cols) q.a.push_back(r.a[j]);
    rows.push_back(std::move(q));
  }
  Vec obj;
  for (int j : cols) obj.push_back(p.obj[j]);

  struct Node {
    Vec lb;
    std::vector<std::optional<std::int64_t>> ub;
  };
  std::vector<Node> stack{{Vec(k, 0), std::vector<std::optional<std::int64_t>>(k)}};
  std::optional<Vec> best;
  mpz_class best_val;
  std::size_t nodes = 0;
  while (!stack.empty()) {
    Node nd = std::move(stack.back());
    stack.pop_back();
    if (++nodes > opt.node_limit) throw ilp_limit_exceeded("ilp: branch-and-bound node limit reached");
    Lp lp = simplex(rows, k, nd.lb, nd.ub, obj);
    if (!lp.feasible) continue;
    if (best && ceil_q(lp.obj) >= best_val) continue;
    int frac = -1;
    for (int j = 0; j < k; ++j)
      if (lp.x[j].get_den() != 1) {
        frac = j;
        break;
      }
    if (frac < 0) {
      Vec x(n, 0);
      for (int j = 0; j < k; ++j) x[cols[j]] = lp.x[j].get_num().get_si();
      best = x;
      best_val = lp.obj.get_num();
      if (stop_first) return best;
      continue;
    }
    Node up = nd, down = nd;
    up.lb[frac] = ceil_q(lp.x[frac]).get_si();
    down.ub[frac] = floor_q(lp.x[frac]).get_si();
    stack.push_back(std::move(up));
    stack.push_back(std::move(down));
  }
  return best;
}

Assignment back_substitute(const Problem& p, Vec x) {
  for (auto it = p.elims.rbegin(); it != p.elims.rend(); ++it) {
    std::int64_t v = it->c;
    for (int j = 0; j < p.n(); ++j) v += it->a[j] * x[j];
    x[it->var] = v;
  }
  Assignment out;
  for (int j = 0; j < p.n(); ++j) out[p.names[j]] = x[j];
  return out;
}

std::optional<Assignment> optimize(const ConstraintList& sys, const std::set<std::string>& extra,
                                   const LinExpr& objective, const IlpOptions& opt) {
  Problem p = build(sys, extra, &objective);
  if (!presolve(p, false)) return std::nullopt;
  auto x = branch_and_bound(p, false, opt);
  if (!x) return std::nullopt;
  return back_substitute(p, *x);
}

}  // namespace

bool feasible(const ConstraintList& sys, const IlpOptions& opt) {
  for (auto& c : sys)
    if (c.trivially_false()) return false;
  Problem p = build(sys, {}, nullptr);
  if (!presolve(p, true)) return false;
  for (int j = 0; j < p.n(); ++j) p.obj[j] = 1;
  return branch_and_bound(p, true, opt).has_value();
}

std::optional<Assignment> minimize(const ConstraintList& sys, const LinExpr& obj,
                                   const IlpOptions& opt) {
  return optimize(sys, {}, obj, opt);
}

std::optional<Assignment> solve(const ConstraintList& sys, const std::set<std::string>& extra,
                                const IlpOptions& opt) {
  std::set<std::string> vars = variables_of(sys);
  LinExpr total;
  for (auto& v : vars) total += LinExpr::var(v);
  auto best = optimize(sys, {}, total, opt);
  if (!best) return std::nullopt;
  ConstraintList fixed = sys;
  fixed.push_back(IntConstraint::eq(total, total.evaluate(*best)));
  for (auto& v : vars) {
    std::int64_t cur = best->at(v);
    if (cur != 0) {
      auto better = optimize(fixed, {}, LinExpr::var(v), opt);
      if (!better) throw std::logic_error("ilp: lost feasibility during tie breaking");
      *best = *better;
      cur = best->at(v);
    }
    fixed.push_back(IntConstraint::eq(LinExpr::var(v), cur));
  }
  for (auto& v : extra) best->emplace(v, 0);
  return best;
}

bool check(const Assignment& theta, const ConstraintList& sys) {
  bool ok = true;
  for (auto& c : sys) {
    for (auto& [v, _] : c.expr().terms()) {
      auto it = theta.find(v);
      if (it == theta.end()) throw unassigned_variable("unassigned integer variable " + v);
      if (it->second < 0) ok = false;
    }
    if (!c.holds(theta)) ok = false;
  }
  return ok;
}

bool entails(const ConstraintList& sys, const IntConstraint& c, const IlpOptions& opt) {
  if (c.is_eq()) {
    return entails(sys, IntConstraint(c.expr(), Rel::Geq), opt) &&
           entails(sys, IntConstraint(-c.expr(), Rel::Geq), opt);
  }
  ConstraintList s = sys;
  s.push_back(c.negated());
  return !feasible(s, opt);
}

}  // namespace lightmod

namespace lightmod {

namespace {

// Drops rows that hold for all naturals and rows implied by one other row with
// the same linear part.
void tidy(std::set<IntConstraint>& sys) {
  std::map<LinExpr, std::int64_t> tightest;
  for (auto& c : sys) {
    if (c.is_eq()) continue;
    LinExpr lin = c.expr() - LinExpr(c.expr().constant());
    auto [it, fresh] = tightest.try_emplace(lin, c.expr().constant());
    if (!fresh) it->second = std::min(it->second, c.expr().constant());
  }
  std::erase_if(sys, [&](const IntConstraint& c) {
    if (c.is_eq()) return false;
    auto& t = c.expr().terms();
    if (c.expr().constant() >= 0 && std::all_of(t.begin(), t.end(), [](auto& p) { return p.second > 0; }))
      return true;
    LinExpr lin = c.expr() - LinExpr(c.expr().constant());
    return tightest.at(lin) < c.expr().constant();
  });
  // e >= 0 and -e >= 0 make e = 0
  std::vector<IntConstraint> pairs;
  for (auto& c : sys) {
    if (c.is_eq()) continue;
    LinExpr lin = c.expr() - LinExpr(c.expr().constant());
    auto it = tightest.find(-lin);
    if (it != tightest.end() && it->second == -c.expr().constant()) pairs.push_back(c);
  }
  for (auto& c : pairs) {
    sys.erase(c);
    sys.insert(IntConstraint(c.expr(), Rel::Eq));
  }
}

}  // namespace

ConstraintList project(const ConstraintList& sys0, const std::set<std::string>& keep) {
  std::set<IntConstraint> sys;
  const IntConstraint bottom(LinExpr(-1), Rel::Geq);
  auto insert = [&](const IntConstraint& c) {
    if (c.trivially_true()) return true;
    if (c.trivially_false()) return false;
    sys.insert(c);
    return true;
  };
  for (auto& c : sys0)
    if (!insert(c)) return {bottom};
  const std::size_t fm_limit = 64, zero_limit = 64;
  for (bool changed = true; changed;) {
    changed = false;
    tidy(sys);
    std::set<std::string> vars;
    for (auto& c : sys)
      for (auto& [v, _] : c.expr().terms())
        if (!keep.count(v)) vars.insert(v);
    // cheapest variable first: substitutions, one-signed columns, then the
    // smallest FM product; forced zeros only when nothing else applies
    enum Kind { Subst, Drop, Zero, Fm, Forced };
    struct Pick {
      std::string v;
      Kind kind;
      std::size_t cost;
    };
    std::optional<Pick> best;
    std::vector<std::string> stuck;
    for (auto& v : vars) {
      bool has_eq = false, unit_eq = false, pos = false, neg = false, unit_lo = true, unit_up = true;
      std::size_t lo = 0, up = 0;
      for (auto& c : sys) {
        std::int64_t a = c.expr().coeff(v);
        if (a == 0) continue;
        if (c.is_eq()) {
          has_eq = true;
          if (a == 1 || a == -1) unit_eq = true;
          continue;
        }
        if (a > 0) ++lo, pos = true;
        if (a < 0) ++up, neg = true;
        if (a > 1) unit_lo = false;
        if (a < -1) unit_up = false;
      }
      std::optional<Pick> here;
      if (unit_eq) here = Pick{v, Subst, 0};
      else if (has_eq) continue;
      else if (!neg) here = Pick{v, Drop, 0};
      else if (!pos) here = Pick{v, Zero, 0};
      else if ((unit_lo || unit_up) && (lo + 1) * up <= fm_limit) here = Pick{v, Fm, (lo + 1) * up};
      else stuck.push_back(v);
      if (here && (!best || here->cost < best->cost)) best = here;
      if (best && best->cost == 0) break;
    }
    if (!best && sys.size() <= zero_limit) {
      ConstraintList all(sys.begin(), sys.end());
      for (auto& v : stuck)
        if (entails(all, IntConstraint(-LinExpr::var(v), Rel::Geq))) {
          best = Pick{v, Forced, 0};
          break;
        }
    }
    if (!best) break;
    const std::string& v = best->v;
    std::set<IntConstraint> next;
    bool ok = true;
    auto put = [&](const IntConstraint& c) {
      if (c.trivially_false()) ok = false;
      if (!c.trivially_true()) next.insert(c);
    };
    switch (best->kind) {
      case Subst: {
        const IntConstraint* eq = nullptr;
        for (auto& c : sys) {
          std::int64_t a = c.expr().coeff(v);
          if (c.is_eq() && (a == 1 || a == -1)) {
            eq = &c;
            break;
          }
        }
        // v = -(e - a v) / a
        std::int64_t a = eq->expr().coeff(v);
        LinExpr val = (eq->expr() - LinExpr::var(v, a)) * (-a);
        std::map<std::string, LinExpr> sub{{v, val}};
        for (auto& c : sys)
          if (&c != eq) put(c.substitute(sub));
        put(IntConstraint(val, Rel::Geq));
        break;
      }
      case Drop:
        for (auto& c : sys)
          if (c.expr().coeff(v) == 0) put(c);
        break;
      case Zero:
      case Forced: {
        std::map<std::string, LinExpr> sub{{v, LinExpr(0)}};
        for (auto& c : sys) put(c.substitute(sub));
        break;
      }
      case Fm: {
        // the real shadow is exact when one side has unit coefficients
        std::vector<IntConstraint> lower{IntConstraint(LinExpr::var(v), Rel::Geq)}, upper;
        for (auto& c : sys) {
          std::int64_t a = c.expr().coeff(v);
          if (a == 0) put(c);
          else (a > 0 ? lower : upper).push_back(c);
        }
        for (auto& l : lower)
          for (auto& u : upper) {
            std::int64_t a = l.expr().coeff(v), b = -u.expr().coeff(v);
            put(IntConstraint(l.expr() * b + u.expr() * a, Rel::Geq));
          }
        break;
      }
    }
    if (!ok) return {bottom};
    sys = std::move(next);
    changed = true;
  }
  return {sys.begin(), sys.end()};
}

ConstraintList simplify(const ConstraintList& sys0, const IlpOptions& opt) {
  std::set<IntConstraint> uniq;
  for (auto& c : sys0)
    if (!c.trivially_true()) uniq.insert(c);
  tidy(uniq);
  ConstraintList sys(uniq.begin(), uniq.end());
  for (std::size_t i = 0; i < sys.size();) {
    ConstraintList others;
    for (std::size_t j = 0; j < sys.size(); ++j)
      if (j != i) others.push_back(sys[j]);
    bool implied = false;
    try {
      implied = entails(others, sys[i], opt);
    } catch (const ilp_limit_exceeded&) {
      // undecided: keeping the constraint is always safe
    }
    if (implied)
      sys = std::move(others);
    else
      ++i;
  }
  return sys;
}

}  // namespace lightmod
