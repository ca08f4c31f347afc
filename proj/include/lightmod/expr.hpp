#pragma once

#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>

namespace lightmod {

enum class Const { Pair, Fst, Snd, Zero, Succ, Natrec };

const char* const_name(Const k);

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Var {
  std::string name;
};
struct Constant {
  Const k;
};
struct Lam {
  std::string binder;
  ExprPtr body;
};
struct App {
  ExprPtr fun, arg;
};

struct Expr {
  std::variant<Var, Constant, Lam, App> node;

  bool is_var() const { return std::holds_alternative<Var>(node); }
  bool is_const() const { return std::holds_alternative<Constant>(node); }
  bool is_lam() const { return std::holds_alternative<Lam>(node); }
  bool is_app() const { return std::holds_alternative<App>(node); }
  const Var& var() const { return std::get<Var>(node); }
  const Constant& constant() const { return std::get<Constant>(node); }
  const Lam& lam() const { return std::get<Lam>(node); }
  const App& app() const { return std::get<App>(node); }
};

ExprPtr mk_var(std::string name);
ExprPtr mk_const(Const k);
ExprPtr mk_lam(std::string binder, ExprPtr body);
ExprPtr mk_app(ExprPtr f, ExprPtr a);
ExprPtr mk_app(ExprPtr f, ExprPtr a, ExprPtr b);
ExprPtr mk_pair(ExprPtr a, ExprPtr b);
ExprPtr mk_numeral(unsigned n);
// \y. (\x. y (x x)) (\x. y (x x))
ExprPtr mk_fix();

struct parse_error : std::runtime_error {
  int line, column;
  parse_error(const std::string& msg, int l, int c);
};

struct unbound_variable : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// \x. e | e e | <e, e> | fst snd pair succ natrec fix | decimal numerals.
// `\x y. e` abbreviates `\x. \y. e`; `--` starts a line comment.
ExprPtr parse_expr(const std::string& text);

std::string print_expr(const ExprPtr& e);

std::set<std::string> free_vars(const ExprPtr& e);
bool is_free_in(const std::string& x, const ExprPtr& e);
// e[f/x], renaming binders as y'1, y'2, ... when they would capture.
ExprPtr substitute(const ExprPtr& e, const std::string& x, const ExprPtr& f);
bool alpha_equal(const ExprPtr& a, const ExprPtr& b);
std::size_t size(const ExprPtr& e);

// numeral value when e is succ^n 0
std::optional<unsigned> as_numeral(const ExprPtr& e);

}  // namespace lightmod
