#include "lightmod/type_syntax.hpp"

#include <cctype>
#include <functional>
#include <vector>

namespace lightmod {
namespace {

enum class T { Ident, Number, LParen, RParen, Arrow, Star, At, Caret, Plus, Minus, Dot, End };

struct Tk {
  T kind;
  std::string text;
  int col;
};

std::vector<Tk> lex(const std::string& s) {
  std::vector<Tk> out;
  std::size_t i = 0;
  while (i < s.size()) {
    unsigned char c = s[i];
    int col = static_cast<int>(i) + 1;
    if (std::isspace(c)) {
      ++i;
    } else if (std::isalpha(c)) {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_' || s[j] == '\''))
        ++j;
      out.push_back({T::Ident, s.substr(i, j - i), col});
      i = j;
    } else if (std::isdigit(c)) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      out.push_back({T::Number, s.substr(i, j - i), col});
      i = j;
    } else if (s.compare(i, 2, "->") == 0) {
      out.push_back({T::Arrow, "->", col});
      i += 2;
    } else {
      T k;
      switch (c) {
        case '(': k = T::LParen; break;
        case ')': k = T::RParen; break;
        case '*': k = T::Star; break;
        case '@': k = T::At; break;
        case '^': k = T::Caret; break;
        case '+': k = T::Plus; break;
        case '-': k = T::Minus; break;
        case '.': k = T::Dot; break;
        default: throw type_syntax_error(std::string("unexpected character '") + s[i] + "'", col);
      }
      out.push_back({k, std::string(1, s[i]), col});
      ++i;
    }
  }
  out.push_back({T::End, "", static_cast<int>(s.size()) + 1});
  return out;
}

class Parser {
public:
  explicit Parser(std::vector<Tk> t) : toks_(std::move(t)) {}

  TypeGraph run() {
    int r = type();
    if (peek().kind != T::End) fail("unexpected '" + peek().text + "'");
    g_.root = r;
    return g_;
  }

private:
  std::vector<Tk> toks_;
  std::size_t pos_ = 0;
  TypeGraph g_;
  std::vector<std::pair<std::string, int>> env_;

  const Tk& peek() const { return toks_[pos_]; }
  [[noreturn]] void fail(const std::string& m) const { throw type_syntax_error(m, peek().col); }
  bool accept(T k) {
    if (peek().kind != k) return false;
    ++pos_;
    return true;
  }
  void expect(T k, const char* what) {
    if (!accept(k)) fail(std::string("expected ") + what);
  }
  bool at_mu() const { return peek().kind == T::Ident && peek().text == "mu"; }

  int type() {
    if (at_mu()) return mu();
    int l = prod();
    if (accept(T::Arrow)) {
      int r = type();
      return g_.add({NodeKind::Arrow, "", {}, l, r});
    }
    return l;
  }

  int mu() {
    ++pos_;
    if (peek().kind != T::Ident || peek().text == "mu" || peek().text == "Nat") fail("expected variable after mu");
    std::string x = toks_[pos_++].text;
    expect(T::Dot, "'.'");
    int hole = g_.add({NodeKind::Delay, "", LinExpr(0), -1});
    env_.push_back({x, hole});
    int body = type();
    env_.pop_back();
    g_.nodes[hole].a = body;
    return hole;
  }

  int prod() {
    int l = unary();
    if (accept(T::Star)) {
      int r = at_mu() ? mu() : prod();
      return g_.add({NodeKind::Prod, "", {}, l, r});
    }
    return l;
  }

  int unary() {
    if (accept(T::At)) {
      LinExpr e(1);
      if (accept(T::Caret)) e = exponent();
      int body = at_mu() ? mu() : unary();
      return g_.add({NodeKind::Delay, "", e, body});
    }
    return atom();
  }

  LinExpr exponent() {
    LinExpr e = eterm();
    for (;;) {
      if (accept(T::Plus))
        e += eterm();
      else if (accept(T::Minus))
        e -= eterm();
      else
        return e;
    }
  }

  LinExpr eterm() {
    if (accept(T::Minus)) return -eterm();
    if (peek().kind == T::Number) {
      std::int64_t k = std::stoll(toks_[pos_++].text);
      if (accept(T::Star)) {
        if (peek().kind != T::Ident) fail("expected integer variable");
        return LinExpr::var(toks_[pos_++].text, k);
      }
      return LinExpr(k);
    }
    if (peek().kind == T::Ident) return LinExpr::var(toks_[pos_++].text);
    if (accept(T::LParen)) {
      LinExpr e = exponent();
      expect(T::RParen, "')'");
      return e;
    }
    fail("expected exponent");
  }

  int atom() {
    if (peek().kind == T::Ident) {
      std::string x = toks_[pos_++].text;
      if (x == "mu") fail("unexpected mu");
      if (x == "Nat") return g_.add({NodeKind::Nat});
      for (auto it = env_.rbegin(); it != env_.rend(); ++it)
        if (it->first == x) return it->second;
      return g_.add({NodeKind::Var, x});
    }
    if (accept(T::LParen)) {
      int t = type();
      expect(T::RParen, "')'");
      return t;
    }
    fail(peek().kind == T::End ? "unexpected end of type" : "unexpected '" + peek().text + "'");
  }
};

std::string exp_prefix(const LinExpr& e) {
  if (e.is_constant() && e.constant() == 1) return "@";
  if (e.is_constant() && e.constant() > 1) return "@^" + std::to_string(e.constant());
  if (e.terms().size() == 1 && e.constant() == 0 && e.terms().begin()->second == 1)
    return "@^" + e.terms().begin()->first;
  return "@^(" + e.str() + ")";
}

}  // namespace

TypeGraph parse_meta_type(const std::string& text) { return canonicalize(Parser(lex(text)).run()); }

TypeGraph parse_type(const std::string& text) {
  TypeGraph raw = Parser(lex(text)).run();
  for (auto& nd : raw.nodes) {
    if (nd.kind != NodeKind::Delay) continue;
    if (!nd.exp.is_constant()) throw ill_formed_type("symbolic delay exponent in goal type: " + nd.exp.str());
    if (nd.exp.constant() < 0) throw ill_formed_type("negative delay exponent: " + nd.exp.str());
  }
  TypeGraph g = canonicalize(raw);
  if (!is_guarded(g)) throw ill_formed_type("unguarded recursive type");
  return g;
}

std::string print_type(const TypeGraph& g0) {
  TypeGraph g = canonicalize(g0);
  auto used_names = g.type_vars();
  const int n = static_cast<int>(g.nodes.size());
  std::vector<int> on_stack(n, 0);
  std::vector<std::string> name(n);
  int counter = 0;
  auto fresh = [&] {
    for (;;) {
      std::string c = "R" + std::to_string(++counter);
      if (!used_names.count(c)) return c;
    }
  };
  // prec: 0 arrow level, 1 product right operand, 2 tight; tail: nothing follows
  std::function<std::string(int, int, bool)> go = [&](int i, int prec, bool tail) -> std::string {
    if (on_stack[i]) {
      if (name[i].empty()) name[i] = fresh();
      return name[i];
    }
    auto& nd = g.nodes[i];
    if (nd.kind == NodeKind::Var) return nd.name;
    if (nd.kind == NodeKind::Nat) return "Nat";
    on_stack[i] = 1;
    std::string saved = name[i];
    name[i].clear();
    std::string body;
    int body_prec = 0;
    if (nd.kind == NodeKind::Delay) {
      body = exp_prefix(nd.exp) + " " + go(nd.a, 2, tail);
      body_prec = 2;
    } else if (nd.kind == NodeKind::Prod) {
      body = go(nd.a, 2, false) + " * " + go(nd.b, 1, prec > 1 || tail);
      body_prec = 1;
    } else {
      body = go(nd.a, 1, false) + " -> " + go(nd.b, 0, prec > 0 || tail);
      body_prec = 0;
    }
    on_stack[i] = 0;
    std::string bound = name[i];
    name[i] = saved;
    if (!bound.empty()) {
      std::string s = "mu " + bound + ". " + body;
      return (prec > 0 || !tail) ? "(" + s + ")" : s;
    }
    return prec > body_prec ? "(" + body + ")" : body;
  };
  return go(g.root, 0, true);
}

}  // namespace lightmod
