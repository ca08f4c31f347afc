#include "lightmod/linexpr.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace lightmod {

LinExpr LinExpr::var(const std::string& name, std::int64_t coeff) {
  LinExpr e;
  if (coeff != 0) e.terms_[name] = coeff;
  return e;
}

std::int64_t LinExpr::coeff(const std::string& v) const {
  auto it = terms_.find(v);
  return it == terms_.end() ? 0 : it->second;
}

std::set<std::string> LinExpr::variables() const {
  std::set<std::string> out;
  for (auto& [v, _] : terms_) out.insert(v);
  return out;
}

LinExpr& LinExpr::operator+=(const LinExpr& o) {
  constant_ += o.constant_;
  for (auto& [v, a] : o.terms_) {
    auto& slot = terms_[v];
    slot += a;
    if (slot == 0) terms_.erase(v);
  }
  return *this;
}

LinExpr& LinExpr::operator-=(const LinExpr& o) {
  constant_ -= o.constant_;
  for (auto& [v, a] : o.terms_) {
    auto& slot = terms_[v];
    slot -= a;
    if (slot == 0) terms_.erase(v);
  }
  return *this;
}

LinExpr& LinExpr::operator*=(std::int64_t k) {
  if (k == 0) {
    terms_.clear();
    constant_ = 0;
    return *this;
  }
  constant_ *= k;
  for (auto& [_, a] : terms_) a *= k;
  return *this;
}

std::int64_t LinExpr::evaluate(const Assignment& theta) const {
  std::int64_t r = constant_;
  for (auto& [v, a] : terms_) {
    auto it = theta.find(v);
    if (it == theta.end()) throw unassigned_variable("unassigned integer variable " + v);
    r += a * it->second;
  }
  return r;
}

LinExpr LinExpr::substitute(const std::map<std::string, LinExpr>& s) const {
  LinExpr r(constant_);
  for (auto& [v, a] : terms_) {
    auto it = s.find(v);
    if (it == s.end())
      r += LinExpr::var(v, a);
    else
      r += it->second * a;
  }
  return r;
}

LinExpr LinExpr::rename(const std::map<std::string, std::string>& ren) const {
  LinExpr r(constant_);
  for (auto& [v, a] : terms_) {
    auto it = ren.find(v);
    r += LinExpr::var(it == ren.end() ? v : it->second, a);
  }
  return r;
}

namespace {

void append_term(std::ostringstream& os, bool first, std::int64_t a, const std::string& v) {
  if (a < 0)
    os << '-';
  else if (!first)
    os << '+';
  std::int64_t m = a < 0 ? -a : a;
  if (m != 1) os << m << '*';
  os << v;
}

// Prints a sum of non-negative parts; used for both sides of a constraint.
std::string side(const std::vector<std::pair<std::string, std::int64_t>>& ts, std::int64_t c) {
  std::ostringstream os;
  bool first = true;
  for (auto& [v, a] : ts) {
    append_term(os, first, a, v);
    first = false;
  }
  if (c != 0 || first) {
    if (!first) os << '+';
    os << c;
  }
  return os.str();
}

}  // namespace

std::string LinExpr::str() const {
  std::ostringstream os;
  bool first = true;
  for (auto& [v, a] : terms_) {
    append_term(os, first, a, v);
    first = false;
  }
  if (constant_ != 0 || first) {
    if (!first && constant_ > 0) os << '+';
    os << constant_;
  }
  return os.str();
}

std::strong_ordering LinExpr::operator<=>(const LinExpr& o) const {
  if (auto c = terms_.size() <=> o.terms_.size(); c != 0) return c;
  auto it = terms_.begin();
  auto jt = o.terms_.begin();
  for (; it != terms_.end(); ++it, ++jt) {
    if (auto c = it->first <=> jt->first; c != 0) return c;
    if (auto c = it->second <=> jt->second; c != 0) return c;
  }
  return constant_ <=> o.constant_;
}

static std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

IntConstraint::IntConstraint(LinExpr e, Rel r) : expr_(std::move(e)), rel_(r) {
  std::int64_t g = 0;
  for (auto& [_, a] : expr_.terms()) g = std::gcd(g, a < 0 ? -a : a);
  if (g > 1) {
    if (rel_ == Rel::Geq) {
      LinExpr n(floor_div(expr_.constant(), g));
      for (auto& [v, a] : expr_.terms()) n += LinExpr::var(v, a / g);
      expr_ = n;
    } else if (expr_.constant() % g == 0) {
      LinExpr n(expr_.constant() / g);
      for (auto& [v, a] : expr_.terms()) n += LinExpr::var(v, a / g);
      expr_ = n;
    }
  }
  if (rel_ == Rel::Eq) {
    bool negate = expr_.is_constant() ? expr_.constant() < 0 : expr_.terms().begin()->second < 0;
    if (negate) expr_ *= -1;
  }
}

bool IntConstraint::holds(const Assignment& theta) const {
  auto v = expr_.evaluate(theta);
  return rel_ == Rel::Eq ? v == 0 : v >= 0;
}

bool IntConstraint::trivially_true() const {
  if (!expr_.is_constant()) return false;
  return rel_ == Rel::Eq ? expr_.constant() == 0 : expr_.constant() >= 0;
}

bool IntConstraint::trivially_false() const {
  if (!expr_.is_constant()) return false;
  return !trivially_true();
}

IntConstraint IntConstraint::negated() const {
  if (rel_ != Rel::Geq) throw std::logic_error("negating an equality");
  return IntConstraint(-expr_ - 1, Rel::Geq);
}

IntConstraint IntConstraint::rename(const std::map<std::string, std::string>& r) const {
  return IntConstraint(expr_.rename(r), rel_);
}

IntConstraint IntConstraint::substitute(const std::map<std::string, LinExpr>& s) const {
  return IntConstraint(expr_.substitute(s), rel_);
}

std::string IntConstraint::str() const {
  std::vector<std::pair<std::string, std::int64_t>> pos, neg;
  for (auto& [v, a] : expr_.terms()) (a > 0 ? pos : neg).push_back({v, a > 0 ? a : -a});
  std::int64_t c = expr_.constant();
  std::int64_t lc = c > 0 ? c : 0;
  std::int64_t rc = c < 0 ? -c : 0;
  std::string op = rel_ == Rel::Eq ? " = " : " >= ";
  return side(pos, lc) + op + side(neg, rc);
}

std::strong_ordering IntConstraint::operator<=>(const IntConstraint& o) const {
  if (auto c = rel_ <=> o.rel_; c != 0) return c;
  return expr_ <=> o.expr_;
}

std::set<std::string> variables_of(const ConstraintList& cs) {
  std::set<std::string> out;
  for (auto& c : cs)
    for (auto& [v, _] : c.expr().terms()) out.insert(v);
  return out;
}

std::string str(const ConstraintList& cs) {
  std::string out = "{";
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (i) out += ", ";
    out += cs[i].str();
  }
  return out + "}";
}

}  // namespace lightmod
