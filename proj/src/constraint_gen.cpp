#include "lightmod/constraint_gen.hpp"

#include <functional>

namespace lightmod {

std::size_t ConstraintSet::size() const {
  std::size_t s = 0;
  for (auto& e : eqc) s += static_cast<std::size_t>(e.lhs->size);
  return s;
}

std::string str(const ConstraintSet& c) {
  std::string out = "{";
  bool first = true;
  for (auto& e : c.eqc) {
    if (!first) out += ", ";
    out += str(e);
    first = false;
  }
  for (auto& i : c.intc) {
    if (!first) out += ", ";
    out += i.str();
    first = false;
  }
  return out + "}";
}

namespace {

struct Gen {
  FreshSupply fresh;
  Generated out;

  MetaPtr tvar() {
    auto n = fresh.type_var();
    out.type_vars.insert(n);
    return m_var(n);
  }
  LinExpr ivar() {
    auto n = fresh.int_var();
    out.int_vars.insert(n);
    out.constraints.intc.insert(IntConstraint::geq(LinExpr::var(n), 0));
    return LinExpr::var(n);
  }
  void add(MetaPtr a, MetaPtr b) { out.constraints.eqc.insert({std::move(a), std::move(b)}); }

  MetaPtr constant(Const k) {
    switch (k) {
      case Const::Zero: return m_delay(ivar(), m_nat());
      case Const::Succ: return m_delay(ivar(), m_arrow(m_nat(), m_nat()));
      case Const::Pair: {
        auto x1 = tvar(), x2 = tvar();
        return m_delay(ivar(), m_arrow(x1, m_arrow(x2, m_prod(x1, x2))));
      }
      case Const::Fst: {
        auto x1 = tvar(), x2 = tvar();
        return m_delay(ivar(), m_arrow(m_prod(x1, x2), x1));
      }
      case Const::Snd: {
        auto x1 = tvar(), x2 = tvar();
        return m_delay(ivar(), m_arrow(m_prod(x1, x2), x2));
      }
      case Const::Natrec: {
        auto x = tvar();
        auto step = m_arrow(m_nat(), m_arrow(x, x));
        return m_delay(ivar(), m_arrow(x, m_arrow(step, m_arrow(m_nat(), x))));
      }
    }
    throw std::logic_error("unknown constant");
  }

  MetaPtr go(const ExprPtr& e, std::map<std::string, std::string>& ctx) {
    if (e->is_var()) {
      auto it = ctx.find(e->var().name);
      if (it == ctx.end()) throw unbound_variable("free variable " + e->var().name);
      return m_delay(ivar(), m_var(it->second));
    }
    if (e->is_const()) return constant(e->constant().k);
    if (e->is_lam()) {
      auto& l = e->lam();
      auto x = tvar();
      std::optional<std::string> shadowed;
      if (auto it = ctx.find(l.binder); it != ctx.end()) shadowed = it->second;
      ctx[l.binder] = x->name;
      MetaPtr body = go(l.body, ctx);
      if (shadowed)
        ctx[l.binder] = *shadowed;
      else
        ctx.erase(l.binder);
      auto x1 = tvar(), x2 = tvar();
      LinExpr n = ivar();
      add(x, m_delay(n, x1));
      add(body, m_delay(n, x2));
      return m_delay(n, m_arrow(x1, x2));
    }
    auto& a = e->app();
    MetaPtr t1 = go(a.fun, ctx);
    MetaPtr t2 = go(a.arg, ctx);
    auto x1 = tvar(), x2 = tvar();
    LinExpr n = ivar();
    add(m_delay(n, m_arrow(x1, x2)), t1);
    add(m_delay(n, x1), t2);
    return m_delay(n, x2);
  }
};

}  // namespace

Generated generate(const ExprPtr& e, const std::map<std::string, std::string>& ctx) {
  Gen g;
  auto c = ctx;
  g.out.type = g.go(e, c);
  return std::move(g.out);
}

}  // namespace lightmod
