#include "lightmod/type_graph.hpp"

#include <algorithm>
#include <functional>

namespace lightmod {

std::set<std::string> TypeGraph::type_vars() const {
  std::set<std::string> out;
  for (auto& n : nodes)
    if (n.kind == NodeKind::Var) out.insert(n.name);
  return out;
}

std::set<std::string> TypeGraph::int_vars() const {
  std::set<std::string> out;
  for (auto& n : nodes)
    if (n.kind == NodeKind::Delay)
      for (auto& [v, _] : n.exp.terms()) out.insert(v);
  return out;
}

TypeGraph g_nat() {
  TypeGraph g;
  g.add({NodeKind::Nat});
  return g;
}

TypeGraph g_var(const std::string& name) {
  TypeGraph g;
  g.add({NodeKind::Var, name});
  return g;
}

TypeGraph g_infty() {
  TypeGraph g;
  g.add({NodeKind::Delay, "", LinExpr(1), 0});
  return g;
}

namespace {

int embed(TypeGraph& g, const MetaPtr& t) {
  switch (t->kind) {
    case MKind::Var: return g.add({NodeKind::Var, t->name});
    case MKind::Nat: return g.add({NodeKind::Nat});
    case MKind::Delay: {
      int c = embed(g, t->l);
      return g.add({NodeKind::Delay, "", t->exp, c});
    }
    default: {
      int l = embed(g, t->l);
      int r = embed(g, t->r);
      return g.add({t->kind == MKind::Prod ? NodeKind::Prod : NodeKind::Arrow, "", {}, l, r});
    }
  }
}

bool has_children(const TypeNode& n) { return n.kind == NodeKind::Prod || n.kind == NodeKind::Arrow; }

// Appends h's nodes to g, returns the new index of h's root.
int append(TypeGraph& g, const TypeGraph& h) {
  int off = static_cast<int>(g.nodes.size());
  for (auto n : h.nodes) {
    if (n.a >= 0) n.a += off;
    if (n.b >= 0) n.b += off;
    g.nodes.push_back(std::move(n));
  }
  return h.root + off;
}

TypeGraph minimize(const TypeGraph& g) {
  const int n = static_cast<int>(g.nodes.size());
  std::vector<int> cls(n);
  {
    std::map<std::string, int> ids;
    for (int i = 0; i < n; ++i) {
      auto& nd = g.nodes[i];
      std::string key = std::to_string(static_cast<int>(nd.kind)) + "|" + nd.name + "|" +
                        (nd.kind == NodeKind::Delay ? nd.exp.str() : "");
      cls[i] = ids.emplace(key, static_cast<int>(ids.size())).first->second;
    }
  }
  std::size_t count = 0;
  for (;;) {
    std::map<std::tuple<int, int, int>, int> ids;
    std::vector<int> next(n);
    for (int i = 0; i < n; ++i) {
      auto& nd = g.nodes[i];
      auto key = std::make_tuple(cls[i], nd.a >= 0 ? cls[nd.a] : -1, nd.b >= 0 ? cls[nd.b] : -1);
      next[i] = ids.emplace(key, static_cast<int>(ids.size())).first->second;
    }
    cls = std::move(next);
    if (ids.size() == count) break;
    count = ids.size();
  }
  // depth-first renumbering of the quotient
  std::vector<int> rep(count, -1);
  for (int i = 0; i < n; ++i)
    if (rep[cls[i]] < 0) rep[cls[i]] = i;
  std::vector<int> order(count, -1);
  TypeGraph out;
  std::vector<int> stack{cls[g.root]};
  std::vector<int> seq;
  while (!stack.empty()) {
    int c = stack.back();
    stack.pop_back();
    if (order[c] >= 0) continue;
    order[c] = static_cast<int>(seq.size());
    seq.push_back(c);
    auto& nd = g.nodes[rep[c]];
    if (nd.b >= 0) stack.push_back(cls[nd.b]);
    if (nd.a >= 0) stack.push_back(cls[nd.a]);
  }
  for (int c : seq) {
    TypeNode nd = g.nodes[rep[c]];
    if (nd.a >= 0) nd.a = order[cls[nd.a]];
    if (nd.b >= 0) nd.b = order[cls[nd.b]];
    out.nodes.push_back(std::move(nd));
  }
  out.root = 0;
  return out;
}

}  // namespace

TypeGraph from_meta(const MetaPtr& t) {
  TypeGraph g;
  g.root = embed(g, t);
  return canonicalize(g);
}

TypeGraph canonicalize(const TypeGraph& g) {
  const int n = static_cast<int>(g.nodes.size());
  if (n == 0) throw std::invalid_argument("empty type graph");
  auto is_zero_delay = [&](int i) { return g.nodes[i].kind == NodeKind::Delay && g.nodes[i].exp.is_zero(); };
  constexpr int DEG = -1;
  // follow literal-zero delays; DEG when they loop
  std::vector<int> zr(n, -2);
  for (int i = 0; i < n; ++i) {
    std::vector<int> path;
    int cur = i;
    std::set<int> seen;
    while (zr[cur] == -2 && is_zero_delay(cur)) {
      if (!seen.insert(cur).second) {
        cur = DEG;
        break;
      }
      path.push_back(cur);
      cur = g.nodes[cur].a;
    }
    int res = cur == DEG ? DEG : (zr[cur] != -2 ? zr[cur] : cur);
    for (int p : path) zr[p] = res;
    if (cur >= 0 && zr[cur] == -2) zr[cur] = cur;
  }

  TypeGraph out;
  std::vector<int> newid(n, -1);
  int deg_node = -1;
  auto get_deg = [&] {
    if (deg_node < 0) deg_node = out.add({NodeKind::Delay, "", LinExpr(0), -1});
    out.nodes[deg_node].a = deg_node;
    return deg_node;
  };
  for (int i = 0; i < n; ++i)
    if (zr[i] == i && g.nodes[i].kind != NodeKind::Delay) newid[i] = out.add(g.nodes[i]);

  std::vector<int> delay_target(n, -2);
  std::map<std::string, int> infs;
  std::function<int(int)> target = [&](int i) -> int {
    int z = zr[i];
    if (z == DEG) return get_deg();
    if (g.nodes[z].kind != NodeKind::Delay) return newid[z];
    if (delay_target[z] != -2) return delay_target[z];
    LinExpr sum;
    std::map<int, LinExpr> seen;
    int cur = z;
    int result;
    for (;;) {
      if (cur == DEG) {
        int d = get_deg();
        result = sum.is_zero() ? d : out.add({NodeKind::Delay, "", sum, d});
        break;
      }
      if (g.nodes[cur].kind != NodeKind::Delay) {
        result = sum.is_zero() ? newid[cur] : out.add({NodeKind::Delay, "", sum, newid[cur]});
        break;
      }
      if (auto it = seen.find(cur); it != seen.end()) {
        LinExpr cyc = sum - it->second;
        if (cyc.is_constant() && cyc.constant() > 0) cyc = LinExpr(1);
        std::string key = cyc.str();
        auto jt = infs.find(key);
        if (jt != infs.end()) {
          result = jt->second;
        } else if (cyc.is_zero()) {
          result = get_deg();
        } else {
          result = out.add({NodeKind::Delay, "", cyc, -1});
          out.nodes[result].a = result;
          infs[key] = result;
        }
        break;
      }
      seen[cur] = sum;
      sum += g.nodes[cur].exp;
      cur = zr[g.nodes[cur].a];
    }
    delay_target[z] = result;
    return result;
  };
  for (int i = 0; i < n; ++i) {
    if (newid[i] < 0) continue;
    auto& nd = g.nodes[i];
    if (has_children(nd)) {
      int a = target(nd.a);
      int b = target(nd.b);
      out.nodes[newid[i]].a = a;
      out.nodes[newid[i]].b = b;
    }
  }
  out.root = target(g.root);
  return minimize(out);
}

bool is_canonical(const TypeGraph& g) { return canonicalize(g) == g; }

bool type_equal(const TypeGraph& a, const TypeGraph& b) { return canonicalize(a) == canonicalize(b); }

TypeGraph subgraph(const TypeGraph& g, int i) {
  TypeGraph h = g;
  h.root = i;
  return canonicalize(h);
}

TypeGraph apply(const TypeSubstitution& tau, const TypeGraph& g) {
  TypeGraph h = g;
  std::map<std::string, int> roots;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    auto& nd = g.nodes[i];
    if (nd.kind != NodeKind::Var) continue;
    auto it = tau.find(nd.name);
    if (it == tau.end()) continue;
    auto r = roots.find(nd.name);
    int root = r != roots.end() ? r->second : (roots[nd.name] = append(h, it->second));
    h.nodes[i] = {NodeKind::Delay, "", LinExpr(0), root};
  }
  return canonicalize(h);
}

TypeGraph rename(const TypeGraph& g, const std::map<std::string, std::string>& types,
                 const std::map<std::string, std::string>& ints) {
  TypeGraph h = g;
  for (auto& nd : h.nodes) {
    if (nd.kind == NodeKind::Var) {
      auto it = types.find(nd.name);
      if (it != types.end()) nd.name = it->second;
    } else if (nd.kind == NodeKind::Delay) {
      nd.exp = nd.exp.rename(ints);
    }
  }
  return canonicalize(h);
}

TypeGraph delay(const LinExpr& e, const TypeGraph& g) {
  TypeGraph h = g;
  h.root = h.add({NodeKind::Delay, "", e, g.root});
  return canonicalize(h);
}

static TypeGraph binary(NodeKind k, const TypeGraph& l, const TypeGraph& r) {
  TypeGraph h = l;
  int rr = append(h, r);
  h.root = h.add({k, "", {}, l.root, rr});
  return canonicalize(h);
}

TypeGraph arrow(const TypeGraph& l, const TypeGraph& r) { return binary(NodeKind::Arrow, l, r); }
TypeGraph prod(const TypeGraph& l, const TypeGraph& r) { return binary(NodeKind::Prod, l, r); }

namespace {

std::vector<int> scc_ids(const TypeGraph& g) {
  const int n = static_cast<int>(g.nodes.size());
  std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
  std::vector<bool> on(n, false);
  std::vector<int> st;
  int counter = 0, ncomp = 0;
  std::function<void(int)> dfs = [&](int v) {
    index[v] = low[v] = counter++;
    st.push_back(v);
    on[v] = true;
    for (int w : {g.nodes[v].a, g.nodes[v].b}) {
      if (w < 0) continue;
      if (index[w] < 0) {
        dfs(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      for (;;) {
        int w = st.back();
        st.pop_back();
        on[w] = false;
        comp[w] = ncomp;
        if (w == v) break;
      }
      ++ncomp;
    }
  };
  for (int i = 0; i < n; ++i)
    if (index[i] < 0) dfs(i);
  return comp;
}

bool counts_as_guard(const TypeNode& n) {
  return n.kind == NodeKind::Delay && (!n.exp.is_constant() || n.exp.constant() > 0);
}

}  // namespace

std::vector<bool> cyclic_nodes(const TypeGraph& g) {
  auto comp = scc_ids(g);
  const int n = static_cast<int>(g.nodes.size());
  std::vector<int> sz(n, 0);
  for (int c : comp) ++sz[c];
  std::vector<bool> out(n, false);
  for (int i = 0; i < n; ++i) {
    auto& nd = g.nodes[i];
    out[i] = sz[comp[i]] > 1 || nd.a == i || nd.b == i;
  }
  return out;
}

int rank(const TypeGraph& t0) {
  TypeGraph t = canonicalize(t0);
  const int n = static_cast<int>(t.nodes.size());
  std::vector<int> memo(n, -1);
  std::vector<bool> active(n, false);
  std::function<int(int)> go = [&](int i) -> int {
    if (memo[i] >= 0) return memo[i];
    auto& nd = t.nodes[i];
    if (!has_children(nd)) return memo[i] = 0;
    if (active[i]) throw std::invalid_argument("rank: unguarded type");
    active[i] = true;
    int r = std::max(go(nd.a), go(nd.b)) + 1;
    active[i] = false;
    return memo[i] = r;
  };
  return go(t.root);
}

bool is_guarded(const TypeGraph& t0) {
  TypeGraph t = canonicalize(t0);
  const int n = static_cast<int>(t.nodes.size());
  std::vector<int> color(n, 0);
  std::function<bool(int)> acyclic = [&](int v) -> bool {
    color[v] = 1;
    auto& nd = t.nodes[v];
    if (!counts_as_guard(nd)) {
      for (int w : {nd.a, nd.b}) {
        if (w < 0) continue;
        if (color[w] == 1) return false;
        if (color[w] == 0 && !acyclic(w)) return false;
      }
    }
    color[v] = 2;
    return true;
  };
  for (int i = 0; i < n; ++i)
    if (color[i] == 0 && !acyclic(i)) return false;
  return true;
}

static bool diff_infty_at(const TypeGraph& t, int i) {
  std::set<int> seen;
  while (t.nodes[i].kind == NodeKind::Delay) {
    if (!seen.insert(i).second) return false;
    i = t.nodes[i].a;
  }
  return true;
}

bool diff_infty(const TypeGraph& t0) {
  TypeGraph t = canonicalize(t0);
  return diff_infty_at(t, t.root);
}

bool is_infty_free(const TypeGraph& t0) {
  TypeGraph t = canonicalize(t0);
  for (int i = 0; i < static_cast<int>(t.nodes.size()); ++i)
    if (!diff_infty_at(t, i)) return false;
  return true;
}

bool is_tail_finite(const TypeGraph& t0) {
  TypeGraph t = canonicalize(t0);
  if (!is_infty_free(t)) return false;
  auto cyc = cyclic_nodes(t);
  for (int s = 0; s < static_cast<int>(t.nodes.size()); ++s) {
    if (!cyc[s]) continue;
    // walk the arrow-right spine through delays looking for s again
    std::set<int> seen;
    int cur = s;
    for (;;) {
      auto& nd = t.nodes[cur];
      if (nd.kind == NodeKind::Delay)
        cur = nd.a;
      else if (nd.kind == NodeKind::Arrow)
        cur = nd.b;
      else
        break;
      if (cur == s) return false;
      if (!seen.insert(cur).second) break;
    }
  }
  return true;
}

bool is_concrete(const TypeGraph& t) {
  for (auto& nd : t.nodes)
    if (nd.kind == NodeKind::Delay && !nd.exp.is_constant()) return false;
  return true;
}

ConstraintList cycle_constraints(const TypeGraph& t) {
  const int n = static_cast<int>(t.nodes.size());
  auto comp = scc_ids(t);
  auto cyc = cyclic_nodes(t);
  std::set<IntConstraint> out;
  std::vector<std::set<std::string>> supports;
  auto nonneg = [](const LinExpr& e) {
    for (auto& [v, a] : e.terms())
      if (a < 0) return false;
    return true;
  };
  // a recorded sum over a subset of the variables implies the current one
  auto implied = [&](const LinExpr& sum) {
    if (!nonneg(sum)) return false;
    if (sum.constant() >= 1) return true;
    for (auto& sup : supports) {
      bool sub = true;
      for (auto& v : sup)
        if (!sum.terms().count(v)) {
          sub = false;
          break;
        }
      if (sub) return true;
    }
    return false;
  };
  std::vector<bool> on(n, false);
  auto weight = [&](int i) { return t.nodes[i].kind == NodeKind::Delay ? t.nodes[i].exp : LinExpr(0); };
  // each simple cycle is enumerated once, from its smallest node
  for (int s = 0; s < n; ++s) {
    if (!cyc[s]) continue;
    std::function<void(int, const LinExpr&)> walk = [&](int cur, const LinExpr& sum) {
      for (int w : {t.nodes[cur].a, t.nodes[cur].b}) {
        if (w < s || comp[w] != comp[s]) continue;
        if (w == s) {
          IntConstraint c = IntConstraint::geq(sum, 1);
          if (c.trivially_true() || implied(sum)) continue;
          out.insert(c);
          if (nonneg(sum) && sum.constant() == 0) supports.push_back(sum.variables());
          continue;
        }
        if (on[w]) continue;
        LinExpr next = sum + weight(w);
        if (implied(next)) continue;
        on[w] = true;
        walk(w, next);
        on[w] = false;
      }
    };
    on[s] = true;
    if (!implied(weight(s))) walk(s, weight(s));
    on[s] = false;
  }
  return {out.begin(), out.end()};
}

ConstraintList guard_constraints(const TypeGraph& t0) { return cycle_constraints(canonicalize(t0)); }

ConstraintList guard_constraints(const TypeSubstitution& tau) {
  std::set<IntConstraint> out;
  for (auto& [_, g] : tau)
    for (auto& c : guard_constraints(g)) out.insert(c);
  return {out.begin(), out.end()};
}

TypeGraph instantiate(const TypeGraph& t, const Assignment& theta) {
  TypeGraph h = t;
  for (auto& nd : h.nodes) {
    if (nd.kind != NodeKind::Delay) continue;
    std::int64_t v = nd.exp.evaluate(theta);
    if (v < 0)
      throw negative_exponent("not positive under theta: delay @^(" + nd.exp.str() + ") evaluates to " +
                              std::to_string(v));
    nd.exp = LinExpr(v);
  }
  return canonicalize(h);
}

}  // namespace lightmod
