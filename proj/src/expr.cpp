#include "lightmod/expr.hpp"

#include <cctype>
#include <functional>
#include <sstream>
#include <vector>

namespace lightmod {

const char* const_name(Const k) {
  switch (k) {
    case Const::Pair: return "pair";
    case Const::Fst: return "fst";
    case Const::Snd: return "snd";
    case Const::Zero: return "0";
    case Const::Succ: return "succ";
    case Const::Natrec: return "natrec";
  }
  return "?";
}

ExprPtr mk_var(std::string name) { return std::make_shared<Expr>(Expr{Var{std::move(name)}}); }
ExprPtr mk_const(Const k) { return std::make_shared<Expr>(Expr{Constant{k}}); }
ExprPtr mk_lam(std::string binder, ExprPtr body) {
  return std::make_shared<Expr>(Expr{Lam{std::move(binder), std::move(body)}});
}
ExprPtr mk_app(ExprPtr f, ExprPtr a) {
  return std::make_shared<Expr>(Expr{App{std::move(f), std::move(a)}});
}
ExprPtr mk_app(ExprPtr f, ExprPtr a, ExprPtr b) { return mk_app(mk_app(std::move(f), std::move(a)), std::move(b)); }
ExprPtr mk_pair(ExprPtr a, ExprPtr b) { return mk_app(mk_const(Const::Pair), std::move(a), std::move(b)); }

ExprPtr mk_numeral(unsigned n) {
  ExprPtr e = mk_const(Const::Zero);
  for (unsigned i = 0; i < n; ++i) e = mk_app(mk_const(Const::Succ), e);
  return e;
}

ExprPtr mk_fix() {
  auto half = [] {
    return mk_lam("x", mk_app(mk_var("y"), mk_app(mk_var("x"), mk_var("x"))));
  };
  return mk_lam("y", mk_app(half(), half()));
}

parse_error::parse_error(const std::string& msg, int l, int c)
    : std::runtime_error(std::to_string(l) + ":" + std::to_string(c) + ": " + msg), line(l), column(c) {}

namespace {

enum class Tok { Lambda, Dot, LParen, RParen, LAngle, RAngle, Comma, Ident, Number, End };

struct Token {
  Tok kind;
  std::string text;
  int line, col;
};

std::vector<Token> lex(const std::string& s) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto adv = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (s[i] == '\n') {
        ++line;
        col = 1;
      } else if ((static_cast<unsigned char>(s[i]) & 0xC0) != 0x80) {
        ++col;
      }
      ++i;
    }
  };
  while (i < s.size()) {
    unsigned char c = s[i];
    if (std::isspace(c)) {
      adv(1);
      continue;
    }
    if (c == '-' && i + 1 < s.size() && s[i + 1] == '-') {
      while (i < s.size() && s[i] != '\n') adv(1);
      continue;
    }
    int l = line, k = col;
    auto single = [&](Tok t) {
      out.push_back({t, std::string(1, s[i]), l, k});
      adv(1);
    };
    if (c == '\\') single(Tok::Lambda);
    else if (s.compare(i, 2, "\xCE\xBB") == 0) {  // UTF-8 lambda
      out.push_back({Tok::Lambda, "\\", l, k});
      adv(2);
    } else if (c == '.') single(Tok::Dot);
    else if (c == '(') single(Tok::LParen);
    else if (c == ')') single(Tok::RParen);
    else if (c == '<') single(Tok::LAngle);
    else if (c == '>') single(Tok::RAngle);
    else if (c == ',') single(Tok::Comma);
    else if (std::isalpha(c)) {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_' || s[j] == '\''))
        ++j;
      out.push_back({Tok::Ident, s.substr(i, j - i), l, k});
      adv(j - i);
    } else if (std::isdigit(c)) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      out.push_back({Tok::Number, s.substr(i, j - i), l, k});
      adv(j - i);
    } else {
      throw parse_error(std::string("unexpected character '") + s[i] + "'", l, k);
    }
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

bool is_keyword(const std::string& s) {
  return s == "fix" || s == "fst" || s == "snd" || s == "pair" || s == "succ" || s == "natrec";
}

class Parser {
public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  ExprPtr top() {
    auto e = expr();
    if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'");
    return e;
  }

private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;

  const Token& peek() const { return toks_[pos_]; }
  Token next() { return toks_[pos_++]; }
  [[noreturn]] void fail(const std::string& msg) const {
    throw parse_error(msg, peek().line, peek().col);
  }
  void expect(Tok k, const char* what) {
    if (peek().kind != k) fail(std::string("expected ") + what);
    ++pos_;
  }

  ExprPtr expr() {
    if (peek().kind == Tok::Lambda) return lambda();
    return app();
  }

  ExprPtr lambda() {
    expect(Tok::Lambda, "'\\'");
    std::vector<std::string> binders;
    while (peek().kind == Tok::Ident) {
      if (is_keyword(peek().text)) fail("keyword '" + peek().text + "' used as binder");
      binders.push_back(next().text);
    }
    if (binders.empty()) fail("expected binder");
    expect(Tok::Dot, "'.'");
    ExprPtr body = expr();
    for (auto it = binders.rbegin(); it != binders.rend(); ++it) body = mk_lam(*it, body);
    return body;
  }

  bool starts_atom() const {
    auto k = peek().kind;
    return k == Tok::Ident || k == Tok::Number || k == Tok::LParen || k == Tok::LAngle;
  }

  ExprPtr app() {
    if (!starts_atom()) fail(peek().kind == Tok::End ? "unexpected end of input" : "unexpected '" + peek().text + "'");
    ExprPtr e = atom();
    for (;;) {
      if (starts_atom())
        e = mk_app(e, atom());
      else if (peek().kind == Tok::Lambda)
        return mk_app(e, lambda());
      else
        return e;
    }
  }

  ExprPtr atom() {
    Token t = next();
    switch (t.kind) {
      case Tok::Ident:
        if (t.text == "fix") return mk_fix();
        if (t.text == "fst") return mk_const(Const::Fst);
        if (t.text == "snd") return mk_const(Const::Snd);
        if (t.text == "pair") return mk_const(Const::Pair);
        if (t.text == "succ") return mk_const(Const::Succ);
        if (t.text == "natrec") return mk_const(Const::Natrec);
        return mk_var(t.text);
      case Tok::Number: {
        if (t.text.size() > 6) throw parse_error("numeral too large", t.line, t.col);
        return mk_numeral(static_cast<unsigned>(std::stoul(t.text)));
      }
      case Tok::LParen: {
        auto e = expr();
        expect(Tok::RParen, "')'");
        return e;
      }
      case Tok::LAngle: {
        auto a = expr();
        expect(Tok::Comma, "','");
        auto b = expr();
        expect(Tok::RAngle, "'>'");
        return mk_pair(a, b);
      }
      default:
        --pos_;
        fail("unexpected '" + t.text + "'");
    }
  }
};

const ExprPtr& fix_term() {
  static const ExprPtr f = mk_fix();
  return f;
}

bool is_pair_app(const ExprPtr& e, ExprPtr& a, ExprPtr& b) {
  if (!e->is_app()) return false;
  auto& outer = e->app();
  if (!outer.fun->is_app()) return false;
  auto& inner = outer.fun->app();
  if (!inner.fun->is_const() || inner.fun->constant().k != Const::Pair) return false;
  a = inner.arg;
  b = outer.arg;
  return true;
}

void print(std::ostringstream& os, const ExprPtr& e);

bool atomic(const ExprPtr& e) {
  ExprPtr a, b;
  return e->is_var() || e->is_const() || as_numeral(e) || is_pair_app(e, a, b) || alpha_equal(e, fix_term());
}

void print_atom(std::ostringstream& os, const ExprPtr& e) {
  if (atomic(e)) {
    print(os, e);
  } else {
    os << '(';
    print(os, e);
    os << ')';
  }
}

void print(std::ostringstream& os, const ExprPtr& e) {
  if (auto n = as_numeral(e)) {
    os << *n;
    return;
  }
  if (alpha_equal(e, fix_term())) {
    os << "fix";
    return;
  }
  ExprPtr a, b;
  if (is_pair_app(e, a, b)) {
    os << '<';
    print(os, a);
    os << ", ";
    print(os, b);
    os << '>';
    return;
  }
  std::visit(
      [&](auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Var>) {
          os << n.name;
        } else if constexpr (std::is_same_v<T, Constant>) {
          os << const_name(n.k);
        } else if constexpr (std::is_same_v<T, Lam>) {
          os << '\\' << n.binder << ". ";
          print(os, n.body);
        } else {
          if (n.fun->is_lam())
            print_atom(os, n.fun);
          else
            print(os, n.fun);
          os << ' ';
          print_atom(os, n.arg);
        }
      },
      e->node);
}

void collect_free(const ExprPtr& e, std::vector<std::string>& bound, std::set<std::string>& out) {
  std::visit(
      [&](auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Var>) {
          for (auto& b : bound)
            if (b == n.name) return;
          out.insert(n.name);
        } else if constexpr (std::is_same_v<T, Lam>) {
          bound.push_back(n.binder);
          collect_free(n.body, bound, out);
          bound.pop_back();
        } else if constexpr (std::is_same_v<T, App>) {
          collect_free(n.fun, bound, out);
          collect_free(n.arg, bound, out);
        }
      },
      e->node);
}

std::string base_name(const std::string& n) {
  // strip a trailing 'k suffix produced by an earlier rename
  auto q = n.rfind('\'');
  if (q == std::string::npos || q + 1 == n.size()) return n;
  for (std::size_t i = q + 1; i < n.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(n[i]))) return n;
  return n.substr(0, q);
}

std::string fresh_name(const std::string& y, const std::set<std::string>& avoid) {
  std::string base = base_name(y);
  for (unsigned k = 1;; ++k) {
    std::string c = base + "'" + std::to_string(k);
    if (!avoid.count(c)) return c;
  }
}

ExprPtr subst(const ExprPtr& e, const std::string& x, const ExprPtr& f, const std::set<std::string>& fvf) {
  if (e->is_var()) return e->var().name == x ? f : e;
  if (e->is_const()) return e;
  if (e->is_app()) {
    auto& a = e->app();
    auto nf = subst(a.fun, x, f, fvf);
    auto na = subst(a.arg, x, f, fvf);
    if (nf == a.fun && na == a.arg) return e;
    return mk_app(nf, na);
  }
  auto& l = e->lam();
  if (l.binder == x) return e;
  if (fvf.count(l.binder)) {
    if (!is_free_in(x, l.body)) return e;
    std::set<std::string> avoid = fvf;
    auto fb = free_vars(l.body);
    avoid.insert(fb.begin(), fb.end());
    avoid.insert(x);
    std::string y2 = fresh_name(l.binder, avoid);
    auto renamed = subst(l.body, l.binder, mk_var(y2), {y2});
    return mk_lam(y2, subst(renamed, x, f, fvf));
  }
  auto nb = subst(l.body, x, f, fvf);
  if (nb == l.body) return e;
  return mk_lam(l.binder, nb);
}

bool alpha(const ExprPtr& a, const ExprPtr& b, std::vector<std::string>& ba, std::vector<std::string>& bb) {
  if (a->node.index() != b->node.index()) return false;
  if (a->is_var()) {
    const auto& x = a->var().name;
    const auto& y = b->var().name;
    for (std::size_t i = ba.size(); i-- > 0;) {
      bool ha = ba[i] == x, hb = bb[i] == y;
      if (ha || hb) return ha && hb;
    }
    return x == y;
  }
  if (a->is_const()) return a->constant().k == b->constant().k;
  if (a->is_app())
    return alpha(a->app().fun, b->app().fun, ba, bb) && alpha(a->app().arg, b->app().arg, ba, bb);
  ba.push_back(a->lam().binder);
  bb.push_back(b->lam().binder);
  bool r = alpha(a->lam().body, b->lam().body, ba, bb);
  ba.pop_back();
  bb.pop_back();
  return r;
}

}  // namespace

ExprPtr parse_expr(const std::string& text) { return Parser(lex(text)).top(); }

std::string print_expr(const ExprPtr& e) {
  std::ostringstream os;
  print(os, e);
  return os.str();
}

std::set<std::string> free_vars(const ExprPtr& e) {
  std::set<std::string> out;
  std::vector<std::string> bound;
  collect_free(e, bound, out);
  return out;
}

bool is_free_in(const std::string& x, const ExprPtr& e) {
  if (e->is_var()) return e->var().name == x;
  if (e->is_const()) return false;
  if (e->is_app()) return is_free_in(x, e->app().fun) || is_free_in(x, e->app().arg);
  return e->lam().binder != x && is_free_in(x, e->lam().body);
}

ExprPtr substitute(const ExprPtr& e, const std::string& x, const ExprPtr& f) {
  return subst(e, x, f, free_vars(f));
}

bool alpha_equal(const ExprPtr& a, const ExprPtr& b) {
  std::vector<std::string> ba, bb;
  return alpha(a, b, ba, bb);
}

std::size_t size(const ExprPtr& e) {
  if (e->is_app()) return 1 + size(e->app().fun) + size(e->app().arg);
  if (e->is_lam()) return 1 + size(e->lam().body);
  return 1;
}

std::optional<unsigned> as_numeral(const ExprPtr& e) {
  unsigned n = 0;
  const Expr* p = e.get();
  while (p->is_app()) {
    auto& a = p->app();
    if (!a.fun->is_const() || a.fun->constant().k != Const::Succ) return std::nullopt;
    ++n;
    p = a.arg.get();
  }
  if (p->is_const() && p->constant().k == Const::Zero) return n;
  return std::nullopt;
}

}  // namespace lightmod
