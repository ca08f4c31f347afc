#include "lightmod/eval.hpp"

#include <algorithm>
#include <functional>

#include <json.hpp>

namespace lightmod {
namespace {

struct Spine {
  ExprPtr head;
  std::vector<ExprPtr> args;
};

Spine spine(const ExprPtr& e) {
  Spine s;
  ExprPtr cur = e;
  while (cur->is_app()) {
    s.args.push_back(cur->app().arg);
    cur = cur->app().fun;
  }
  std::reverse(s.args.begin(), s.args.end());
  s.head = cur;
  return s;
}

ExprPtr rebuild(ExprPtr head, const std::vector<ExprPtr>& args, std::size_t from) {
  for (std::size_t i = from; i < args.size(); ++i) head = mk_app(head, args[i]);
  return head;
}

// replaces argument i by r
ExprPtr with_arg(const Spine& s, std::size_t i, ExprPtr r) {
  auto args = s.args;
  args[i] = std::move(r);
  return rebuild(s.head, args, 0);
}

bool is_const(const ExprPtr& e, Const k) { return e->is_const() && e->constant().k == k; }

}  // namespace

std::optional<ExprPtr> step(const ExprPtr& e) {
  Spine s = spine(e);
  if (s.args.empty()) return std::nullopt;
  const ExprPtr& h = s.head;
  if (h->is_lam()) return rebuild(substitute(h->lam().body, h->lam().binder, s.args[0]), s.args, 1);
  if (!h->is_const()) return std::nullopt;
  switch (h->constant().k) {
    case Const::Fst:
    case Const::Snd: {
      Spine p = spine(s.args[0]);
      if (is_const(p.head, Const::Pair) && p.args.size() == 2) {
        ExprPtr pick = h->constant().k == Const::Fst ? p.args[0] : p.args[1];
        return rebuild(pick, s.args, 1);
      }
      if (auto r = step(s.args[0])) return with_arg(s, 0, *r);
      return std::nullopt;
    }
    case Const::Succ:
      if (auto r = step(s.args[0])) return with_arg(s, 0, *r);
      return std::nullopt;
    case Const::Natrec: {
      if (s.args.size() < 3) return std::nullopt;
      const ExprPtr& n = s.args[2];
      if (is_const(n, Const::Zero)) return rebuild(s.args[0], s.args, 3);
      Spine m = spine(n);
      if (is_const(m.head, Const::Succ) && m.args.size() == 1) {
        ExprPtr rec = mk_app(mk_app(mk_app(mk_const(Const::Natrec), s.args[0]), s.args[1]), m.args[0]);
        return rebuild(mk_app(mk_app(s.args[1], m.args[0]), rec), s.args, 3);
      }
      if (auto r = step(n)) return with_arg(s, 2, *r);
      return std::nullopt;
    }
    default: return std::nullopt;
  }
}

ReductionOutcome whnf(const ExprPtr& e, std::size_t fuel) {
  ExprPtr cur = e;
  for (std::size_t k = 0;; ++k) {
    auto next = step(cur);
    if (!next) return {true, cur, k};
    if (k == fuel) return {false, cur, k};
    cur = *next;
  }
}

namespace {

std::optional<ExprPtr> hnf_budget(const ExprPtr& e, std::size_t& fuel) {
  auto r = whnf(e, fuel);
  fuel -= r.steps;
  if (!r.normal) return std::nullopt;
  if (!r.term->is_lam()) return r.term;
  auto& l = r.term->lam();
  auto body = hnf_budget(l.body, fuel);
  if (!body) return std::nullopt;
  return mk_lam(l.binder, *body);
}

TreeApprox leaf_or_cut(const ExprPtr& e) {
  TreeApprox t;
  if (auto n = as_numeral(e)) {
    t.kind = TreeKind::Numeral;
    t.value = *n;
  } else if (e->is_var()) {
    t.kind = TreeKind::Var;
    t.name = e->var().name;
  } else if (e->is_const()) {
    t.kind = TreeKind::Const;
    t.name = const_name(e->constant().k);
  }
  return t;
}

// node for a term in (weak) head normal form with its arguments still to expand
template <class Child>
TreeApprox head_node(const ExprPtr& e, unsigned depth, Child child) {
  if (auto n = as_numeral(e)) return leaf_or_cut(e);
  if (depth == 0) {
    Spine s = spine(e);
    if (s.args.empty() && !e->is_lam()) return leaf_or_cut(e);
    return {};
  }
  TreeApprox t;
  if (e->is_lam()) {
    t.kind = TreeKind::Lambda;
    t.name = e->lam().binder;
    t.children.push_back(child(e->lam().body, depth - 1));
    return t;
  }
  Spine s = spine(e);
  if (s.head->is_var()) {
    t.kind = TreeKind::Var;
    t.name = s.head->var().name;
  } else if (s.head->is_const()) {
    t.kind = TreeKind::Const;
    t.name = const_name(s.head->constant().k);
  } else {
    // a lambda head only occurs when fuel ran out mid-term
    return {TreeKind::Bot};
  }
  for (auto& a : s.args) t.children.push_back(child(a, depth - 1));
  return t;
}

}  // namespace

std::optional<ExprPtr> hnf(const ExprPtr& e, std::size_t fuel) { return hnf_budget(e, fuel); }

bool TreeApprox::has_bot() const {
  if (kind == TreeKind::Bot) return true;
  for (auto& c : children)
    if (c.has_bot()) return true;
  return false;
}

TreeApprox levy_longo(const ExprPtr& e, unsigned depth, std::size_t fuel) {
  auto r = whnf(e, fuel);
  if (!r.normal) return {TreeKind::Bot};
  return head_node(r.term, depth, [&](const ExprPtr& c, unsigned d) { return levy_longo(c, d, fuel); });
}

TreeApprox bohm(const ExprPtr& e, unsigned depth, std::size_t fuel) {
  // lambdas of an hnf are produced by the same stage, children continue the tree
  std::size_t budget = fuel;
  auto h = hnf_budget(e, budget);
  if (!h) return {TreeKind::Bot};
  std::function<TreeApprox(const ExprPtr&, unsigned)> expand = [&](const ExprPtr& t, unsigned d) -> TreeApprox {
    if (t->is_lam()) return head_node(t, d, expand);
    return head_node(t, d, [&](const ExprPtr& c, unsigned dd) { return bohm(c, dd, fuel); });
  };
  return expand(*h, depth);
}

namespace {

void text(const TreeApprox& t, std::string& out, bool atom) {
  switch (t.kind) {
    case TreeKind::Bot: out += "_|_"; return;
    case TreeKind::Cut: out += "..."; return;
    case TreeKind::Numeral: out += std::to_string(t.value); return;
    case TreeKind::Lambda:
      if (atom) out += "(";
      out += "\\" + t.name + ". ";
      text(t.children[0], out, false);
      if (atom) out += ")";
      return;
    default: break;
  }
  if (t.kind == TreeKind::Const && t.name == std::string("pair") && t.children.size() == 2) {
    out += "<";
    text(t.children[0], out, false);
    out += ", ";
    text(t.children[1], out, false);
    out += ">";
    return;
  }
  bool paren = atom && !t.children.empty();
  if (paren) out += "(";
  out += t.name;
  for (auto& c : t.children) {
    out += " ";
    text(c, out, true);
  }
  if (paren) out += ")";
}

const char* kind_name(TreeKind k) {
  switch (k) {
    case TreeKind::Var: return "var";
    case TreeKind::Const: return "const";
    case TreeKind::Numeral: return "numeral";
    case TreeKind::Lambda: return "lambda";
    case TreeKind::Bot: return "bot";
    case TreeKind::Cut: return "cut";
  }
  return "?";
}

void indented(const TreeApprox& t, int level, std::string& out) {
  out += std::string(2 * level, ' ');
  switch (t.kind) {
    case TreeKind::Bot: out += "_|_"; break;
    case TreeKind::Cut: out += "..."; break;
    case TreeKind::Numeral: out += std::to_string(t.value); break;
    case TreeKind::Lambda: out += "\\" + t.name + "."; break;
    default: out += t.name;
  }
  out += "\n";
  for (auto& c : t.children) indented(c, level + 1, out);
}

nlohmann::ordered_json to_json(const TreeApprox& t) {
  nlohmann::ordered_json j;
  j["kind"] = kind_name(t.kind);
  if (t.kind == TreeKind::Var || t.kind == TreeKind::Const) j["name"] = t.name;
  if (t.kind == TreeKind::Lambda) j["binder"] = t.name;
  if (t.kind == TreeKind::Numeral) j["value"] = t.value;
  auto arr = nlohmann::ordered_json::array();
  for (auto& c : t.children) arr.push_back(to_json(c));
  j["children"] = arr;
  return j;
}

}  // namespace

std::string render_text(const TreeApprox& t) {
  std::string out;
  text(t, out, false);
  return out;
}

std::string render_indented(const TreeApprox& t) {
  std::string out;
  indented(t, 0, out);
  return out;
}

std::string render_json(const TreeApprox& t) { return to_json(t).dump(); }

}  // namespace lightmod
