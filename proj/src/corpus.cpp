#include "lightmod/corpus.hpp"

#include <map>

namespace lightmod {
namespace {

using Env = std::vector<std::pair<std::string, ExprPtr>>;

// Parses text and replaces free names by earlier definitions, latest first.
ExprPtr define(const Env& env, const std::string& text) {
  ExprPtr e = parse_expr(text);
  for (auto it = env.rbegin(); it != env.rend(); ++it)
    if (is_free_in(it->first, e)) e = substitute(e, it->first, it->second);
  return e;
}

struct Built {
  Env helpers;
  std::vector<CorpusTerm> terms;
};

const Built& built() {
  static const Built b = [] {
    Built out;
    Env& env = out.helpers;
    auto def = [&](const std::string& name, const std::string& text) { env.push_back({name, define(env, text)}); };
    def("pred", R"(\n. natrec 0 (\m r. m) n)");
    def("plus", R"(\a b. natrec a (\k r. succ r) b)");
    def("times", R"(\a b. natrec 0 (\k r. plus a r) b)");
    def("monus", R"(\a b. natrec a (\k r. pred r) b)");
    def("if", R"(\c t e. natrec t (\k r. e) c)");
    // finite lists only record their length
    def("nil", "0");
    def("consl", R"(\h t. succ t)");
    def("omega", R"((\y. y y) (\y. y y))");
    def("map", R"(fix (\m f x. <f (fst x), m f (snd x)>))");
    def("maap", R"(fix (\m f x. <f (fst x), <f (fst (snd x)), m f (snd (snd x))>>))");
    def("sum", R"(fix (\s x y. <plus (fst x) (fst y), s (snd x) (snd y)>))");
    def("interleave", R"(fix (\i x y. <fst x, i y (snd x)>))");
    def("merge", R"(fix (\m x y. if (monus (fst x) (fst y)) <fst x, m (snd x) y> <fst y, m x (snd y)>))");
    def("nats", R"(fix (\n. <0, map succ n>))");

    const std::string s_nat = "mu S. Nat * @S";
    const std::string s2_nat = "mu S. Nat * @ @ S";
    auto stream = [](const std::string& t) { return "(mu S. " + t + " * @S)"; };
    auto add = [&](const std::string& name, const std::string& text, bool typable, const std::string& type) {
      out.terms.push_back({name, define(env, text), text, typable, type});
    };
    add("skip", R"(fix (\f x. <fst x, f (snd (snd x))>))", true, "(" + s_nat + ") -> " + s2_nat);
    add("map", "map", true, "(A -> B) -> " + stream("A") + " -> " + stream("B"));
    add("maap", "maap", true, "(A -> B) -> " + stream("A") + " -> " + stream("B"));
    add("sum", "sum", true, stream("Nat") + " -> " + stream("Nat") + " -> " + stream("Nat"));
    add("interleave", "interleave", true, stream("A") + " -> " + stream("A") + " -> " + stream("A"));
    add("merge", "merge", true, stream("Nat") + " -> " + stream("Nat") + " -> " + stream("Nat"));
    add("ones", R"(fix (\o. <1, interleave o o>))", true, s_nat);
    add("ones'", R"(fix (\o. <1, interleave o (snd o)>))", true, s_nat);
    add("pairup", R"(fix (\p xs. <<fst xs, fst (snd xs)>, p (snd (snd xs))>))", true,
        "(mu H. A * A * @H) -> mu S. (A * A) * @S");
    add("nats", "nats", true, s_nat);
    add("fib", R"(fix (\f. <0, sum f <1, f>>))", true, s_nat);
    add("fib'", R"(fix (\f. <0, <1, sum f (snd f)>>))", true, s_nat);
    add("naats", R"(<0, maap succ nats>)", true, s_nat);
    add("ham",
        R"(fix (\h. <1, merge (map (\x. times 2 x) h) (merge (map (\x. times 3 x) h) (map (\x. times 5 x) h))>))",
        true, s_nat);
    add("fix", "fix", true, "(@X -> X) -> X");
    add("id", R"(\x. x)", true, "Nat -> Nat");
    add("proj", R"(fst <0, omega>)", true, "Nat");
    add("fixk", R"(fix (\x y. x))", true, "");
    add("take", R"(natrec (\x. nil) (\x y z. consl (fst z) (y (snd z))))", false, "");
    add("get", R"(natrec fst (\x y z. y (snd z)))", false, "");
    add("filter", R"(fix (\f p xs. if (p (fst xs)) <fst xs, f p (snd xs)> (f p (snd xs))))", false, "");
    add("omega", "omega", true, "");
    add("omegaI", R"(\x. omega (\z. z))", false, "");
    add("fixI", R"(fix (\x. x))", true, "");
    return out;
  }();
  return b;
}

}  // namespace

const std::vector<CorpusTerm>& corpus() { return built().terms; }

const CorpusTerm* find_corpus_term(const std::string& name) {
  for (auto& t : corpus())
    if (t.name == name) return &t;
  return nullptr;
}

ExprPtr corpus_helper(const std::string& name) {
  for (auto& [n, e] : built().helpers)
    if (n == name) return e;
  return nullptr;
}

}  // namespace lightmod
