#include "lightmod/class_unify.hpp"

#include <unordered_map>

#include "lightmod/ilp.hpp"

namespace lightmod {
namespace {

struct Head {
  LinExpr exp;
  MetaPtr head;
};

Head strip(const MetaPtr& t) {
  if (t->kind == MKind::Delay) return {t->exp, t->l};
  return {LinExpr(0), t};
}

struct LevelEq {
  IntConstraint c;
  bool permanent;  // not owned by a free class
};

class Engine {
public:
  explicit Engine(const ConstraintSet& c) : c_(c) {}

  bool run() {
    for (auto& e : c_.eqc) pending_.push_back({e.lhs, e.rhs});
    while (!pending_.empty()) {
      auto [a, b] = pending_.back();
      pending_.pop_back();
      if (!unify(a, b)) return false;
    }
    return true;
  }

  ClassUnifyResult solutions(const std::vector<MetaPtr>& wanted) {
    ClassUnifyResult out;
    // classes that may be the infinite delay
    std::vector<int> candidates;
    for (int i = 0; i < static_cast<int>(parent_.size()); ++i)
      if (find(i) == i && cons_[i] < 0 && cyclic_[i]) candidates.push_back(i);
    const std::size_t limit = 10;
    if (candidates.size() > limit) candidates.resize(limit);
    const std::size_t combos = std::size_t{1} << candidates.size();
    for (std::size_t mask = 0; mask < combos; ++mask) {
      std::set<int> inf;
      for (std::size_t k = 0; k < candidates.size(); ++k)
        if (mask >> k & 1) inf.insert(candidates[k]);
      auto sol = build(inf, wanted);
      if (!sol) continue;
      out.solutions.push_back(std::move(sol->first));
      out.images.push_back(std::move(sol->second));
    }
    return out;
  }

private:
  const ConstraintSet& c_;
  std::vector<std::pair<MetaPtr, MetaPtr>> pending_;
  std::vector<int> parent_;
  std::vector<LinExpr> level_;
  std::vector<int> cons_;               // constructor member at a root, -1 if none
  std::vector<MetaPtr> node_;           // constructor head or variable
  std::vector<std::vector<int>> tags_;  // level equations owned by a free root
  std::vector<bool> cyclic_;            // a free root with a level cycle
  std::vector<LevelEq> eqs_;
  std::map<std::string, int> var_id_;
  std::unordered_map<const Meta*, int> cons_id_;

  int fresh(const MetaPtr& m, LinExpr level, bool is_cons) {
    int id = static_cast<int>(parent_.size());
    parent_.push_back(id);
    level_.push_back(std::move(level));
    cons_.push_back(is_cons ? id : -1);
    node_.push_back(m);
    tags_.emplace_back();
    cyclic_.push_back(false);
    return id;
  }

  int element(const MetaPtr& h) {
    if (h->kind == MKind::Var) {
      auto it = var_id_.find(h->name);
      if (it != var_id_.end()) return it->second;
      int id = fresh(h, LinExpr::var("L" + h->name), false);
      var_id_[h->name] = id;
      return id;
    }
    auto it = cons_id_.find(h.get());
    if (it != cons_id_.end()) return it->second;
    int id = fresh(h, LinExpr(0), true);
    cons_id_[h.get()] = id;
    return id;
  }

  int find(int i) {
    while (parent_[i] != i) i = parent_[i] = parent_[parent_[i]];
    return i;
  }

  void make_permanent(int root) {
    for (int k : tags_[root]) eqs_[k].permanent = true;
    tags_[root].clear();
  }

  bool unify(const MetaPtr& t, const MetaPtr& s) {
    auto [e1, h1] = strip(t);
    auto [e2, h2] = strip(s);
    int x = element(h1), y = element(h2);
    int cx = find(x), cy = find(y);
    IntConstraint eq = IntConstraint::eq(e1 + level_[x], e2 + level_[y]);
    if (cx == cy) {
      if (eq.trivially_true()) return true;
      eqs_.push_back({eq, cons_[cx] >= 0});
      if (cons_[cx] < 0) {
        tags_[cx].push_back(static_cast<int>(eqs_.size()) - 1);
        cyclic_[cx] = true;
      }
      return true;
    }
    int kx = cons_[cx], ky = cons_[cy];
    parent_[cy] = cx;
    for (int k : tags_[cy]) tags_[cx].push_back(k);
    tags_[cy].clear();
    cyclic_[cx] = cyclic_[cx] || cyclic_[cy];
    if (!eq.trivially_true()) {
      eqs_.push_back({eq, false});
      tags_[cx].push_back(static_cast<int>(eqs_.size()) - 1);
    }
    if (kx < 0 && ky < 0) return true;
    cons_[cx] = kx >= 0 ? kx : ky;
    make_permanent(cx);
    if (kx >= 0 && ky >= 0) {
      auto& a = node_[kx];
      auto& b = node_[ky];
      if (a->kind != b->kind) return false;
      if (is_op(a)) {
        pending_.push_back({a->l, b->l});
        pending_.push_back({a->r, b->r});
      }
    }
    return true;
  }

  struct Builder {
    Engine& en;
    const std::set<int>& inf;
    TypeGraph g;
    std::map<int, int> class_node;
    std::map<std::pair<int, LinExpr>, int> delayed;

    int cls(int root) {
      if (auto it = class_node.find(root); it != class_node.end()) return it->second;
      int id = g.add({NodeKind::Var});
      class_node[root] = id;
      if (inf.count(root)) {
        g.nodes[id] = {NodeKind::Delay, "", LinExpr(1), id, -1};
      } else if (en.cons_[root] < 0) {
        g.nodes[id] = {NodeKind::Var, base_name(root)};
      } else {
        const MetaPtr h = en.node_[en.cons_[root]];
        if (h->kind == MKind::Nat) {
          g.nodes[id] = {NodeKind::Nat};
        } else {
          int a = term(h->l), b = term(h->r);
          g.nodes[id] = {h->kind == MKind::Prod ? NodeKind::Prod : NodeKind::Arrow, "", {}, a, b};
        }
      }
      return id;
    }

    std::string base_name(int root) {
      // the smallest variable of the class, primed
      std::string best;
      for (auto& [name, id] : en.var_id_)
        if (en.find(id) == root) {
          best = name;
          break;
        }
      return best + "'";
    }

    int at(const LinExpr& e, int root) {
      int body = cls(root);
      if (e.is_zero() || inf.count(root)) return body;
      auto key = std::make_pair(root, e);
      if (auto it = delayed.find(key); it != delayed.end()) return it->second;
      int id = g.add({NodeKind::Delay, "", e, body, -1});
      delayed[key] = id;
      return id;
    }

    int term(const MetaPtr& t) {
      auto [e, h] = strip(t);
      int x = en.element(h);
      return at(e + en.level_[x], en.find(x));
    }
  };

  std::optional<std::pair<Solution, std::vector<TypeGraph>>> build(const std::set<int>& inf,
                                                                   const std::vector<MetaPtr>& wanted) {
    std::set<IntConstraint> sys(c_.intc.begin(), c_.intc.end());
    for (auto& [name, id] : var_id_) sys.insert(IntConstraint::geq(level_[id], 0));
    std::set<int> dropped;
    for (int r : inf) dropped.insert(tags_[r].begin(), tags_[r].end());
    for (int k = 0; k < static_cast<int>(eqs_.size()); ++k)
      if (!dropped.count(k) && !eqs_[k].c.trivially_true()) sys.insert(eqs_[k].c);
    Builder b{*this, inf, {}, {}, {}};
    std::map<std::string, int> roots;
    for (auto& [name, id] : var_id_) roots[name] = b.at(level_[id], find(id));
    std::vector<int> wanted_roots;
    for (auto& w : wanted) wanted_roots.push_back(b.term(w));
    for (auto& c : cycle_constraints(b.g)) sys.insert(c);
    ConstraintList list(sys.begin(), sys.end());
    for (auto& c : list)
      if (c.trivially_false()) return std::nullopt;
    if (!feasible(list)) return std::nullopt;
    Solution sol;
    for (auto& [name, r] : roots) sol.tau[name] = subgraph(b.g, r);
    sol.E = std::move(list);
    std::vector<TypeGraph> images;
    for (int r : wanted_roots) images.push_back(subgraph(b.g, r));
    return std::make_pair(std::move(sol), std::move(images));
  }
};

}  // namespace

ClassUnifyResult class_unify(const ConstraintSet& c, const std::vector<MetaPtr>& wanted) {
  Engine en(c);
  if (!en.run()) return {};
  return en.solutions(wanted);
}

}  // namespace lightmod
