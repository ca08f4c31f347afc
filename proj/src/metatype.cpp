#include "lightmod/metatype.hpp"

#include <functional>

namespace lightmod {
namespace {

std::size_t mix(std::size_t h, std::size_t v) { return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)); }

std::size_t hash_lin(const LinExpr& e) {
  std::size_t h = std::hash<std::int64_t>()(e.constant());
  for (auto& [v, a] : e.terms()) h = mix(mix(h, std::hash<std::string>()(v)), std::hash<std::int64_t>()(a));
  return h;
}

MetaPtr make(Meta m) {
  std::size_t h = static_cast<std::size_t>(m.kind) * 1315423911u;
  m.size = 1;
  switch (m.kind) {
    case MKind::Var: h = mix(h, std::hash<std::string>()(m.name)); break;
    case MKind::Nat: break;
    case MKind::Delay:
      h = mix(mix(h, hash_lin(m.exp)), m.l->hash);
      m.size += m.l->size;
      break;
    default:
      h = mix(mix(h, m.l->hash), m.r->hash);
      m.size += m.l->size + m.r->size;
  }
  m.hash = h;
  return std::make_shared<const Meta>(std::move(m));
}

int cmp_lin(const LinExpr& a, const LinExpr& b) {
  auto c = a <=> b;
  return c < 0 ? -1 : c > 0 ? 1 : 0;
}

std::string exp_str(const LinExpr& e) {
  if (e.is_constant() && e.constant() == 1) return "@";
  if (e.is_constant() && e.constant() > 0) return "@^" + std::to_string(e.constant());
  if (e.terms().size() == 1 && e.constant() == 0 && e.terms().begin()->second == 1)
    return "@^" + e.terms().begin()->first;
  return "@^(" + e.str() + ")";
}

// prec: 0 arrow level, 1 product operand, 2 delay operand
std::string pr(const MetaPtr& t, int prec) {
  switch (t->kind) {
    case MKind::Var: return t->name;
    case MKind::Nat: return "Nat";
    case MKind::Delay: return exp_str(t->exp) + " " + pr(t->l, 2);
    case MKind::Prod: {
      std::string s = pr(t->l, 2) + " * " + pr(t->r, 1);
      return prec > 1 ? "(" + s + ")" : s;
    }
    case MKind::Arrow: {
      std::string s = pr(t->l, 1) + " -> " + pr(t->r, 0);
      return prec > 0 ? "(" + s + ")" : s;
    }
  }
  return "?";
}

}  // namespace

MetaPtr m_var(const std::string& name) { return make(Meta{MKind::Var, name, {}, nullptr, nullptr}); }
MetaPtr m_nat() {
  static const MetaPtr n = make(Meta{MKind::Nat, "", {}, nullptr, nullptr});
  return n;
}
MetaPtr m_prod(MetaPtr l, MetaPtr r) { return make(Meta{MKind::Prod, "", {}, std::move(l), std::move(r)}); }
MetaPtr m_arrow(MetaPtr l, MetaPtr r) { return make(Meta{MKind::Arrow, "", {}, std::move(l), std::move(r)}); }

MetaPtr m_delay(const LinExpr& e, MetaPtr body) {
  if (body->kind == MKind::Delay) return m_delay(e + body->exp, body->l);
  if (e.is_zero()) return body;
  return make(Meta{MKind::Delay, "", e, std::move(body), nullptr});
}

int compare(const MetaPtr& a, const MetaPtr& b) {
  if (a == b) return 0;
  if (!a || !b) return !a ? -1 : 1;
  if (a->hash != b->hash) return a->hash < b->hash ? -1 : 1;
  if (a->kind != b->kind) return a->kind < b->kind ? -1 : 1;
  switch (a->kind) {
    case MKind::Var: return a->name.compare(b->name) < 0 ? -1 : a->name == b->name ? 0 : 1;
    case MKind::Nat: return 0;
    case MKind::Delay:
      if (int c = cmp_lin(a->exp, b->exp)) return c;
      return compare(a->l, b->l);
    default:
      if (int c = compare(a->l, b->l)) return c;
      return compare(a->r, b->r);
  }
}

bool is_op(const MetaPtr& t) { return t->kind == MKind::Prod || t->kind == MKind::Arrow; }
bool is_nat_op(const MetaPtr& t) { return t->kind == MKind::Nat || is_op(t); }
bool equalcons(const MetaPtr& a, const MetaPtr& b) { return is_nat_op(a) && a->kind == b->kind; }

std::set<std::string> type_vars(const MetaPtr& t) {
  std::set<std::string> out;
  std::function<void(const MetaPtr&)> go = [&](const MetaPtr& m) {
    if (m->kind == MKind::Var) out.insert(m->name);
    if (m->l) go(m->l);
    if (m->r) go(m->r);
  };
  go(t);
  return out;
}

void int_vars(const MetaPtr& t, std::set<std::string>& out) {
  if (t->kind == MKind::Delay)
    for (auto& [v, _] : t->exp.terms()) out.insert(v);
  if (t->l) int_vars(t->l, out);
  if (t->r) int_vars(t->r, out);
}

MetaPtr rename(const MetaPtr& t, const std::map<std::string, std::string>& types,
               const std::map<std::string, std::string>& ints) {
  switch (t->kind) {
    case MKind::Var: {
      auto it = types.find(t->name);
      return it == types.end() ? t : m_var(it->second);
    }
    case MKind::Nat: return t;
    case MKind::Delay: return m_delay(t->exp.rename(ints), rename(t->l, types, ints));
    case MKind::Prod: return m_prod(rename(t->l, types, ints), rename(t->r, types, ints));
    case MKind::Arrow: return m_arrow(rename(t->l, types, ints), rename(t->r, types, ints));
  }
  return t;
}

std::string str(const MetaPtr& t) { return pr(t, 0); }

std::string str(const Equation& e) { return str(e.lhs) + " =? " + str(e.rhs); }

}  // namespace lightmod
