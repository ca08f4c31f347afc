#include <gtest/gtest.h>

#include "lightmod/expr.hpp"

using namespace lightmod;

namespace {

ExprPtr omega() {
  ExprPtr d = mk_lam("x", mk_app(mk_var("x"), mk_var("x")));
  return mk_app(d, d);
}

}  // namespace

TEST(Parse, Abstraction) {
  ExprPtr e = parse_expr("\\x. x");
  ASSERT_TRUE(e->is_lam());
  EXPECT_EQ(e->lam().binder, "x");
  EXPECT_TRUE(e->lam().body->is_var());
  EXPECT_EQ(e->lam().body->var().name, "x");
}

TEST(Parse, FixIsExpanded) {
  ExprPtr e = parse_expr("fix (\\f.\\x. <fst x, f (snd (snd x))>)");
  // \y. (\x. y (x x)) (\x. y (x x))
  ExprPtr half = mk_lam("x", mk_app(mk_var("y"), mk_app(mk_var("x"), mk_var("x"))));
  ExprPtr fix = mk_lam("y", mk_app(half, half));
  ExprPtr body = mk_lam("f", mk_lam("x", mk_pair(mk_app(mk_const(Const::Fst), mk_var("x")),
                                                  mk_app(mk_var("f"), mk_app(mk_const(Const::Snd),
                                                                             mk_app(mk_const(Const::Snd), mk_var("x")))))));
  EXPECT_TRUE(alpha_equal(e, mk_app(fix, body)));
  EXPECT_TRUE(alpha_equal(mk_fix(), fix));
}

TEST(Parse, LiteralStructure) {
  ExprPtr e = parse_expr("fst <0, (\\x. x x)(\\x. x x)>");
  ExprPtr want = mk_app(mk_const(Const::Fst), mk_app(mk_app(mk_const(Const::Pair), mk_const(Const::Zero)), omega()));
  EXPECT_TRUE(alpha_equal(e, want));
}

TEST(Parse, NumeralsAndApplicationAssociativity) {
  EXPECT_TRUE(alpha_equal(parse_expr("2"), mk_app(mk_const(Const::Succ), mk_app(mk_const(Const::Succ), mk_const(Const::Zero)))));
  EXPECT_TRUE(alpha_equal(parse_expr("f a b"), mk_app(mk_app(mk_var("f"), mk_var("a")), mk_var("b"))));
  // the body of an abstraction extends to the right
  EXPECT_TRUE(alpha_equal(parse_expr("\\x. x y"), mk_lam("x", mk_app(mk_var("x"), mk_var("y")))));
  EXPECT_TRUE(alpha_equal(parse_expr("\\x y. x"), mk_lam("x", mk_lam("y", mk_var("x")))));
}

TEST(Parse, CommentsAndPrimes) {
  ExprPtr e = parse_expr("-- a comment\n\\x'. x' -- trailing\n");
  EXPECT_TRUE(alpha_equal(e, mk_lam("z", mk_var("z"))));
  EXPECT_TRUE(alpha_equal(parse_expr("pair"), mk_const(Const::Pair)));
  EXPECT_TRUE(alpha_equal(parse_expr("natrec"), mk_const(Const::Natrec)));
}

TEST(Parse, FreeVariablesAreAllowed) { EXPECT_EQ(free_vars(parse_expr("\\x. f x")), std::set<std::string>{"f"}); }

TEST(Parse, ErrorsCarryPosition) {
  try {
    parse_expr("\\x.\n  (x");
    FAIL() << "no error";
  } catch (const parse_error& e) {
    EXPECT_EQ(e.line, 2);
    EXPECT_GE(e.column, 1);
  }
  EXPECT_THROW(parse_expr("\\. x"), parse_error);
  EXPECT_THROW(parse_expr("<0, 1"), parse_error);
  EXPECT_THROW(parse_expr("x )"), parse_error);
  EXPECT_THROW(parse_expr(""), parse_error);
}

TEST(Substitute, Variable) {
  ExprPtr f = parse_expr("\\z. z");
  EXPECT_TRUE(alpha_equal(substitute(mk_var("x"), "x", f), f));
}

TEST(Substitute, ShadowedBinder) {
  ExprPtr e = parse_expr("\\x. x");
  EXPECT_TRUE(alpha_equal(substitute(e, "x", mk_var("q")), e));
}

TEST(Substitute, CaptureIsAvoided) {
  ExprPtr r = substitute(parse_expr("\\y. x y"), "x", mk_var("y"));
  ASSERT_TRUE(r->is_lam());
  EXPECT_EQ(r->lam().binder, "y'1");
  EXPECT_TRUE(alpha_equal(r, mk_lam("w", mk_app(mk_var("y"), mk_var("w")))));
  EXPECT_EQ(free_vars(r), std::set<std::string>{"y"});
}

TEST(Print, Examples) {
  EXPECT_EQ(print_expr(mk_lam("x", mk_var("x"))), "\\x. x");
  EXPECT_EQ(print_expr(mk_numeral(2)), "2");
  EXPECT_EQ(print_expr(parse_expr("fst <0, 0>")), "fst <0, 0>");
  EXPECT_EQ(print_expr(parse_expr("fix (\\x. x)")), "fix (\\x. x)");
}

TEST(Print, RoundTrip) {
  for (const char* src : {"\\x. x x", "fst <0, (\\x. x x)(\\x. x x)>", "natrec 0 (\\k r. succ r) 3",
                          "(\\x. x) (\\y. y) z", "\\f. f (\\x. x) (snd <1, 2>)", "succ (f x)"}) {
    ExprPtr e = parse_expr(src);
    EXPECT_TRUE(alpha_equal(parse_expr(print_expr(e)), e)) << src << " printed as " << print_expr(e);
  }
}

TEST(Alpha, Equality) {
  EXPECT_TRUE(alpha_equal(parse_expr("\\x. \\y. x"), parse_expr("\\a. \\b. a")));
  EXPECT_FALSE(alpha_equal(parse_expr("\\x. \\y. x"), parse_expr("\\a. \\b. b")));
  EXPECT_FALSE(alpha_equal(parse_expr("\\x. y"), parse_expr("\\x. z")));
}
