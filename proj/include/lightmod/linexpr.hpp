#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace lightmod {

using Assignment = std::map<std::string, std::int64_t>;

struct unassigned_variable : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Integer affine expression c + sum a_i * v_i over named integer variables.
// Zero coefficients are never stored.
class LinExpr {
public:
  LinExpr() = default;
  LinExpr(std::int64_t c) : constant_(c) {}  // NOLINT: implicit on purpose

  static LinExpr var(const std::string& name, std::int64_t coeff = 1);

  std::int64_t constant() const { return constant_; }
  const std::map<std::string, std::int64_t>& terms() const { return terms_; }
  std::int64_t coeff(const std::string& v) const;
  bool is_constant() const { return terms_.empty(); }
  bool is_zero() const { return terms_.empty() && constant_ == 0; }
  std::set<std::string> variables() const;

  LinExpr& operator+=(const LinExpr& o);
  LinExpr& operator-=(const LinExpr& o);
  LinExpr& operator*=(std::int64_t k);
  friend LinExpr operator+(LinExpr a, const LinExpr& b) { return a += b; }
  friend LinExpr operator-(LinExpr a, const LinExpr& b) { return a -= b; }
  friend LinExpr operator*(LinExpr a, std::int64_t k) { return a *= k; }
  friend LinExpr operator*(std::int64_t k, LinExpr a) { return a *= k; }
  LinExpr operator-() const { return LinExpr(*this) *= -1; }

  // Throws unassigned_variable if some variable is missing from theta.
  std::int64_t evaluate(const Assignment& theta) const;
  // Replaces the listed variables, leaves the others alone.
  LinExpr substitute(const std::map<std::string, LinExpr>& s) const;
  LinExpr rename(const std::map<std::string, std::string>& r) const;

  // "N1-N2+N4", "2*N-1", "0"
  std::string str() const;

  bool operator==(const LinExpr&) const = default;
  std::strong_ordering operator<=>(const LinExpr& o) const;

private:
  std::int64_t constant_ = 0;
  std::map<std::string, std::int64_t> terms_;
};

enum class Rel { Eq, Geq };

// expr = 0 or expr >= 0. Strict inequalities are stored as expr - 1 >= 0.
// Construction normalises: coefficients are divided by their gcd (floor on
// the constant for >=), equalities get a positive leading coefficient.
class IntConstraint {
public:
  IntConstraint(LinExpr e, Rel r);

  static IntConstraint eq(const LinExpr& l, const LinExpr& r) { return {l - r, Rel::Eq}; }
  static IntConstraint geq(const LinExpr& l, const LinExpr& r) { return {l - r, Rel::Geq}; }
  static IntConstraint leq(const LinExpr& l, const LinExpr& r) { return {r - l, Rel::Geq}; }
  static IntConstraint lt(const LinExpr& l, const LinExpr& r) { return {r - l - 1, Rel::Geq}; }
  static IntConstraint gt(const LinExpr& l, const LinExpr& r) { return {l - r - 1, Rel::Geq}; }

  const LinExpr& expr() const { return expr_; }
  Rel rel() const { return rel_; }
  bool is_eq() const { return rel_ == Rel::Eq; }

  bool holds(const Assignment& theta) const;
  // Constant constraints only: is it trivially true / false.
  bool trivially_true() const;
  bool trivially_false() const;
  // The integer negation, only defined for >= (not(e >= 0) is -e - 1 >= 0).
  IntConstraint negated() const;
  IntConstraint rename(const std::map<std::string, std::string>& r) const;
  IntConstraint substitute(const std::map<std::string, LinExpr>& s) const;

  // "N+M >= 1", "N4 >= N3+1", "N = 0"
  std::string str() const;

  bool operator==(const IntConstraint&) const = default;
  std::strong_ordering operator<=>(const IntConstraint& o) const;

private:
  LinExpr expr_;
  Rel rel_;
};

using ConstraintList = std::vector<IntConstraint>;

std::set<std::string> variables_of(const ConstraintList& cs);
std::string str(const ConstraintList& cs);

}  // namespace lightmod
