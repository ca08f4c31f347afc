#include <gtest/gtest.h>

#include "lightmod/corpus.hpp"
#include "lightmod/eval.hpp"

using namespace lightmod;

namespace {

ExprPtr P(const std::string& s) { return parse_expr(s); }
ExprPtr C(const std::string& n) { return find_corpus_term(n)->term; }

}  // namespace

TEST(Step, Beta) {
  auto r = step(P("(\\x. x) 0"));
  ASSERT_TRUE(r);
  EXPECT_TRUE(alpha_equal(*r, P("0")));
  EXPECT_FALSE(step(P("\\x. (\\y. y) x")));  // no reduction under binders
  EXPECT_FALSE(step(P("<(\\y. y) 0, 0>")));
}

TEST(Step, Projections) {
  EXPECT_TRUE(alpha_equal(*step(P("fst <0, 1>")), P("0")));
  EXPECT_TRUE(alpha_equal(*step(P("snd <0, 1>")), P("1")));
  // the redex sits under fst
  EXPECT_TRUE(alpha_equal(*step(P("fst ((\\x. x) <0, 1>)")), P("fst <0, 1>")));
}

TEST(Step, Natrec) {
  EXPECT_TRUE(alpha_equal(*step(P("natrec 0 (\\k r. succ r) 0")), P("0")));
  EXPECT_TRUE(alpha_equal(*step(P("natrec 0 (\\k r. succ r) 2")),
                          P("(\\k r. succ r) 1 (natrec 0 (\\k r. succ r) 1)")));
}

TEST(Step, StuckTermsAreNormal) {
  EXPECT_FALSE(step(P("fst 0")));
  EXPECT_FALSE(step(P("succ (\\x. x)")));
  EXPECT_FALSE(step(P("x 0")));
}

TEST(Whnf, Arithmetic) {
  auto r = whnf(P("natrec 0 (\\k r. succ (succ r)) 3"), 1000);
  ASSERT_TRUE(r.normal);
  // succ is a constructor: the argument is not forced
  EXPECT_EQ(r.term->is_app(), true);
  auto n = hnf(P("natrec 0 (\\k r. succ (succ r)) 3"), 1000);
  ASSERT_TRUE(n);
  EXPECT_EQ(print_expr(*n), "6");
}

TEST(Whnf, FuelRunsOut) {
  auto r = whnf(C("omega"), 100);
  EXPECT_FALSE(r.normal);
  EXPECT_EQ(r.steps, 100u);
  auto p = whnf(C("proj"), 100);
  EXPECT_TRUE(p.normal);
  EXPECT_TRUE(alpha_equal(p.term, P("0")));
}

TEST(Hnf, UnderBinder) {
  auto r = hnf(P("\\x. (\\y. y) x"), 100);
  ASSERT_TRUE(r);
  EXPECT_TRUE(alpha_equal(*r, P("\\x. x")));
  EXPECT_FALSE(hnf(C("omegaI"), 200));
}

TEST(Trees, Streams) {
  EXPECT_EQ(render_text(levy_longo(C("nats"), 3, 50000)), "<0, <1, <2, ...>>>");
  EXPECT_EQ(render_text(bohm(C("nats"), 3, 50000)), "<0, <1, <2, ...>>>");
  EXPECT_EQ(render_text(bohm(C("fib"), 4, 50000)), "<0, <1, <1, <2, ...>>>>");
  EXPECT_FALSE(bohm(C("nats"), 6, 50000).has_bot());
}

TEST(Trees, Bottom) {
  EXPECT_EQ(render_text(levy_longo(C("omega"), 2, 1000)), "_|_");
  EXPECT_EQ(render_text(bohm(C("fixI"), 2, 1000)), "_|_");
  // lambda prefixes are kept by Levy-Longo trees and collapsed by Bohm trees
  EXPECT_EQ(render_text(levy_longo(C("omegaI"), 3, 1000)), "\\x. _|_");
  EXPECT_EQ(render_text(bohm(C("omegaI"), 3, 1000)), "_|_");
  EXPECT_EQ(render_text(levy_longo(C("fixk"), 3, 1000)), "\\y. \\y. \\y. ...");
  EXPECT_EQ(render_text(bohm(C("fixk"), 3, 1000)), "_|_");
}

TEST(Trees, Finite) {
  EXPECT_EQ(render_text(bohm(C("id"), 3, 100)), "\\x. x");
  EXPECT_EQ(render_text(bohm(C("proj"), 3, 1000)), "0");
  EXPECT_EQ(render_text(bohm(P("fst <succ 0, 0>"), 3, 1000)), "1");
}

TEST(Render, Formats) {
  TreeApprox t = bohm(C("id"), 2, 100);
  EXPECT_EQ(render_json(t), "{\"kind\":\"lambda\",\"binder\":\"x\",\"children\":[{\"kind\":\"var\",\"name\":\"x\",\"children\":[]}]}");
  EXPECT_EQ(render_indented(bohm(C("nats"), 2, 50000)), "pair\n  0\n  pair\n    1\n    ...\n");
}
