#include <gtest/gtest.h>

#include "lightmod/corpus.hpp"
#include "lightmod/eval.hpp"
#include "oracles.hpp"

using namespace lightmod;
using namespace oracles;

namespace {

// Leftmost-outermost decomposition over the contexts
// [] | E e | fst E | snd E | succ E | natrec f1 f2 E, read off the binary
// application tree directly.
bool is_c(const ExprPtr& e, Const k) { return e->is_const() && e->constant().k == k; }

std::optional<ExprPtr> contract(const ExprPtr& e) {
  if (!e->is_app()) return std::nullopt;
  const ExprPtr& f = e->app().fun;
  const ExprPtr& a = e->app().arg;
  if (f->is_lam()) return substitute(f->lam().body, f->lam().binder, a);
  if (is_c(f, Const::Fst) || is_c(f, Const::Snd)) {
    if (a->is_app() && a->app().fun->is_app() && is_c(a->app().fun->app().fun, Const::Pair))
      return is_c(f, Const::Fst) ? a->app().fun->app().arg : a->app().arg;
  }
  // natrec f1 f2 n
  if (f->is_app() && f->app().fun->is_app() && is_c(f->app().fun->app().fun, Const::Natrec)) {
    ExprPtr f1 = f->app().fun->app().arg, f2 = f->app().arg;
    if (is_c(a, Const::Zero)) return f1;
    if (a->is_app() && is_c(a->app().fun, Const::Succ)) {
      ExprPtr n = a->app().arg;
      return mk_app(mk_app(f2, n), mk_app(mk_app(mk_app(mk_const(Const::Natrec), f1), f2), n));
    }
  }
  return std::nullopt;
}

std::optional<ExprPtr> oracle_step(const ExprPtr& e) {
  if (auto r = contract(e)) return r;
  if (!e->is_app()) return std::nullopt;
  const ExprPtr& f = e->app().fun;
  const ExprPtr& a = e->app().arg;
  if (auto r = oracle_step(f)) return mk_app(*r, a);
  bool strict_arg = is_c(f, Const::Fst) || is_c(f, Const::Snd) || is_c(f, Const::Succ) ||
                    (f->is_app() && f->app().fun->is_app() && is_c(f->app().fun->app().fun, Const::Natrec));
  if (strict_arg)
    if (auto r = oracle_step(a)) return mk_app(f, *r);
  return std::nullopt;
}

// renames every binder to a fresh one ending in "_r"
ExprPtr rename_binders(const ExprPtr& e, std::map<std::string, std::string>& env) {
  if (e->is_var()) {
    auto it = env.find(e->var().name);
    return it == env.end() ? e : mk_var(it->second);
  }
  if (e->is_const()) return e;
  if (e->is_app()) return mk_app(rename_binders(e->app().fun, env), rename_binders(e->app().arg, env));
  const std::string& b = e->lam().binder;
  std::string nb = b + "_r";
  auto saved = env.find(b) == env.end() ? std::optional<std::string>{} : env[b];
  env[b] = nb;
  ExprPtr body = rename_binders(e->lam().body, env);
  if (saved)
    env[b] = *saved;
  else
    env.erase(b);
  return mk_lam(nb, body);
}

ExprPtr rename_binders(const ExprPtr& e) {
  std::map<std::string, std::string> env;
  return rename_binders(e, env);
}

// closed terms with redexes in and out of evaluation contexts
ExprPtr redex_rich(Rng& g, int depth) {
  if (depth <= 0) return random_expr(g, 2, true);
  switch (pick(g, 0, 6)) {
    case 0: return random_expr(g, depth, true);
    case 1: {
      std::vector<std::string> scope{"x"};
      return mk_app(mk_lam("x", random_expr(g, depth - 1, scope, true)), redex_rich(g, depth - 1));
    }
    case 2: return mk_app(mk_const(pick(g, 0, 1) ? Const::Fst : Const::Snd), redex_rich(g, depth - 1));
    case 3: return mk_app(mk_const(Const::Natrec), redex_rich(g, depth - 1), redex_rich(g, depth - 1));
    case 4: return mk_app(redex_rich(g, depth - 1), redex_rich(g, depth - 1));
    case 5: return mk_app(mk_const(Const::Succ), redex_rich(g, depth - 1));
    default: return mk_pair(redex_rich(g, depth - 1), redex_rich(g, depth - 1));
  }
}

const std::vector<TypeGraph>& fuzzed_graphs() {
  static const std::vector<TypeGraph> gs = [] {
    Rng g(7);
    std::vector<TypeGraph> out;
    while (out.size() < 200) out.push_back(random_graph(g, static_cast<int>(pick(g, 1, 6))));
    return out;
  }();
  return gs;
}

}  // namespace

TEST(IlpOracle, RandomSystemsAgreeWithExhaustiveSearch) {
  Rng g(20240601);
  int feasible_count = 0;
  for (int i = 0; i < 500; ++i) {
    IlpCase c = random_system(g);
    auto v = ilp_agrees(c);
    ASSERT_TRUE(v.ok) << v.why;
    feasible_count += feasible(c.sys);
  }
  // both outcomes must be exercised
  EXPECT_GT(feasible_count, 50);
  EXPECT_LT(feasible_count, 450);
}

TEST(IlpOracle, EntailmentAgreesWithExhaustiveSearch) {
  Rng g(99);
  for (int i = 0; i < 200; ++i) {
    IlpCase c = random_system(g);
    for (auto& v : c.vars) c.sys.push_back(IntConstraint::leq(LinExpr::var(v), 6));
    LinExpr e(pick(g, -4, 4));
    for (auto& v : c.vars) e += LinExpr::var(v, pick(g, -2, 2));
    IntConstraint q(e, Rel::Geq);
    bool all = true;
    for_each_assignment(c.vars, 6, [&](const Assignment& a) {
      if (check(a, c.sys) && !check(a, {q})) all = false;
    });
    EXPECT_EQ(entails(c.sys, q), all) << str(c.sys) << " |= " << q.str();
  }
}

TEST(IlpOracle, ProjectionIsExactOnSmallSystems) {
  Rng g(5);
  for (int i = 0; i < 150; ++i) {
    IlpCase c = random_system(g);
    if (c.vars.size() < 2) continue;
    for (auto& v : c.vars) c.sys.push_back(IntConstraint::leq(LinExpr::var(v), 5));
    std::set<std::string> keep(c.vars.begin(), c.vars.end() - 1);
    ConstraintList p = project(c.sys, keep);
    std::vector<std::string> kv(keep.begin(), keep.end());
    for_each_assignment(kv, 5, [&](const Assignment& a) {
      bool shadow = false;
      for (std::int64_t x = 0; x <= 5 && !shadow; ++x) {
        Assignment full = a;
        full[c.vars.back()] = x;
        shadow = check(full, c.sys);
      }
      ConstraintList q = p;
      for (auto& [v, x] : a) q.push_back(IntConstraint::eq(LinExpr::var(v), x));
      EXPECT_EQ(feasible(q), shadow) << str(c.sys) << " projected to " << str(p);
    });
  }
}

TEST(IlpOracle, SimplifyKeepsTheSolutionSet) {
  Rng g(11);
  for (int i = 0; i < 200; ++i) {
    IlpCase c = random_system(g);
    for (auto& v : c.vars) c.sys.push_back(IntConstraint::leq(LinExpr::var(v), 12));
    EXPECT_TRUE(testing_support::equivalent(c.sys, simplify(c.sys))) << str(c.sys);
  }
}

TEST(UnifyOracle, SoundAndCompleteOnRandomSets) {
  Rng g(424242);
  int capped = 0, with_solutions = 0;
  for (int i = 0; i < 500; ++i) {
    UnifyCase u = random_unify_case(g);
    auto v = unify_agrees(u, g);
    ASSERT_TRUE(v.ok) << v.why;
    capped += v.capped;
    with_solutions += v.brute_solutions > 0;
  }
  EXPECT_EQ(capped, 0);
  EXPECT_GT(with_solutions, 50);
}

TEST(TypeModel, CanonicalizationIsIdempotent) {
  for (auto& t : fuzzed_graphs()) {
    TypeGraph c = canonicalize(t);
    EXPECT_EQ(canonicalize(c), c);
  }
}

TEST(TypeModel, TypeEqualIsAnEquivalence) {
  auto& gs = fuzzed_graphs();
  for (std::size_t i = 0; i < gs.size(); ++i) {
    EXPECT_TRUE(type_equal(gs[i], gs[i]));
    for (std::size_t j = 0; j < gs.size(); ++j) {
      bool ij = type_equal(gs[i], gs[j]);
      EXPECT_EQ(ij, type_equal(gs[j], gs[i]));
      if (!ij) continue;
      for (std::size_t k = 0; k < gs.size(); ++k)
        if (type_equal(gs[j], gs[k])) EXPECT_TRUE(type_equal(gs[i], gs[k]));
    }
  }
}

TEST(TypeModel, DiffInftyIsInequalityToInfiniteDelay) {
  for (auto& t : fuzzed_graphs()) {
    if (!is_guarded(t)) continue;
    EXPECT_EQ(diff_infty(t), !type_equal(t, g_infty()));
  }
}

TEST(TypeModel, TailFiniteImpliesInftyFree) {
  for (auto& t : fuzzed_graphs()) {
    if (!is_guarded(t)) continue;
    if (is_tail_finite(t)) EXPECT_TRUE(is_infty_free(t));
  }
}

TEST(TypeModel, PrintParseRoundTrip) {
  for (auto& t : fuzzed_graphs()) {
    if (!is_guarded(t)) continue;
    EXPECT_TRUE(type_equal(parse_type(print_type(t)), t)) << print_type(t);
  }
}

TEST(Expressions, PrintParseRoundTrip) {
  Rng g(3);
  for (int i = 0; i < 500; ++i) {
    ExprPtr e = random_expr(g, static_cast<int>(pick(g, 0, 8)));
    std::string s = print_expr(e);
    EXPECT_TRUE(alpha_equal(parse_expr(s), e)) << s;
  }
}

TEST(Expressions, SubstituteCommutesWithRenaming) {
  Rng g(17);
  for (int i = 0; i < 500; ++i) {
    ExprPtr e = random_expr(g, static_cast<int>(pick(g, 1, 6)));
    ExprPtr f = random_expr(g, static_cast<int>(pick(g, 0, 3)));
    const std::string x = "u";
    ExprPtr lhs = substitute(rename_binders(e), x, f);
    ExprPtr rhs = rename_binders(substitute(e, x, f));
    EXPECT_TRUE(alpha_equal(lhs, rhs)) << print_expr(e) << " [" << print_expr(f) << "/u]";
    EXPECT_TRUE(alpha_equal(rename_binders(e), e));
  }
}

TEST(Evaluation, StepIsTheLeftmostOutermostContraction) {
  Rng g(23);
  int fired = 0;
  for (int i = 0; i < 1000; ++i) {
    ExprPtr e = redex_rich(g, static_cast<int>(pick(g, 1, 6)));
    // follow a few steps so that contracta are exercised too
    for (int k = 0; k < 3; ++k) {
      auto n = step(e);
      if (!n || pick(g, 0, 1)) break;
      e = *n;
    }
    auto a = step(e), b = step(e), o = oracle_step(e);
    fired += a.has_value();
    ASSERT_EQ(a.has_value(), o.has_value()) << print_expr(e);
    if (!a) continue;
    EXPECT_TRUE(alpha_equal(*a, *b));
    EXPECT_TRUE(alpha_equal(*a, *o)) << print_expr(e);
  }
  EXPECT_GT(fired, 150);
}

TEST(Evaluation, NormalFormsDoNotStep) {
  Rng g(29);
  for (int i = 0; i < 300; ++i) {
    auto r = whnf(random_expr(g, 5, true), 200);
    if (r.normal) EXPECT_FALSE(step(r.term));
  }
}

TEST(Evaluation, LevyLongoRefinesBohm) {
  for (auto& t : corpus()) {
    TreeApprox bt = bohm(t.term, 5, 50000);
    if (!bt.has_bot()) EXPECT_FALSE(levy_longo(t.term, 5, 50000).has_bot()) << t.name;
  }
}

TEST(Inference, PredicateMonotonicity) {
  // each entry of a stronger predicate is covered by the weaker result
  const Predicate order[] = {Predicate::TailFinite, Predicate::InftyFree, Predicate::DiffInfty, Predicate::True};
  for (const char* name : {"id", "proj", "nats", "fib", "skip", "fixI", "fixk", "fix", "omega", "ones"}) {
    ExprPtr e = find_corpus_term(name)->term;
    std::vector<InferResult> rs;
    for (auto p : order) rs.push_back(infer(e, p));
    for (std::size_t k = 0; k + 1 < rs.size(); ++k)
      for (auto& en : rs[k].entries) {
        EXPECT_TRUE(holds(order[k + 1], en.instance)) << name;
        EXPECT_TRUE(check_type(rs[k + 1], en.instance).ok) << name << " " << print_type(en.instance);
      }
  }
}

TEST(Inference, DisplayInstancesArePositiveAndGuarded) {
  for (const char* src : {"\\x. x", "\\x. x x", "\\f x. f (f x)", "\\x. <x, x>", "fst <0, \\x. x>"}) {
    for (auto& en : infer(parse_expr(src)).entries) {
      EXPECT_TRUE(feasible(en.E)) << src;
      EXPECT_TRUE(is_guarded(en.instance)) << src;
    }
  }
}
