#pragma once

// Shared helpers for the test binaries.

#include <cctype>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lightmod/ilp.hpp"
#include "lightmod/linexpr.hpp"

namespace testing_support {

using namespace lightmod;

inline LinExpr V(const std::string& n, std::int64_t k = 1) { return LinExpr::var(n, k); }

// "2*N1 + N4 - 3"
inline LinExpr parse_lin(const std::string& s) {
  LinExpr out;
  std::size_t i = 0;
  auto skip = [&] {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  };
  int sign = 1;
  bool expect_term = true;
  while (true) {
    skip();
    if (i >= s.size()) break;
    if (s[i] == '+' || s[i] == '-') {
      if (s[i] == '-') sign = -sign;
      ++i;
      expect_term = true;
      continue;
    }
    if (!expect_term) throw std::invalid_argument("bad linear expression: " + s);
    std::int64_t k = 1;
    bool have_num = false;
    if (std::isdigit(static_cast<unsigned char>(s[i]))) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      k = std::stoll(s.substr(i, j - i));
      i = j;
      have_num = true;
      skip();
      if (i < s.size() && s[i] == '*') {
        ++i;
        skip();
      } else {
        out += LinExpr(sign * k);
        sign = 1;
        expect_term = false;
        continue;
      }
    }
    std::size_t j = i;
    while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_' || s[j] == '\'')) ++j;
    if (j == i) throw std::invalid_argument("bad linear expression: " + s);
    out += V(s.substr(i, j - i), sign * (have_num ? k : 1));
    i = j;
    sign = 1;
    expect_term = false;
  }
  return out;
}

// Comma separated; each item may chain, "A >= B >= C". Braces are optional.
inline ConstraintList parse_constraints(std::string s) {
  for (char& c : s)
    if (c == '{' || c == '}') c = ' ';
  ConstraintList out;
  std::stringstream items(s);
  std::string item;
  while (std::getline(items, item, ',')) {
    if (item.find_first_not_of(' ') == std::string::npos) continue;
    std::vector<std::string> sides, rels;
    std::size_t start = 0;
    for (std::size_t i = 0; i < item.size();) {
      std::string rel;
      if (item.compare(i, 2, ">=") == 0 || item.compare(i, 2, "<=") == 0) rel = item.substr(i, 2);
      else if (item[i] == '>' || item[i] == '<' || item[i] == '=') rel = item.substr(i, 1);
      if (rel.empty()) {
        ++i;
        continue;
      }
      sides.push_back(item.substr(start, i - start));
      rels.push_back(rel);
      i += rel.size();
      start = i;
    }
    sides.push_back(item.substr(start));
    for (std::size_t k = 0; k < rels.size(); ++k) {
      LinExpr l = parse_lin(sides[k]), r = parse_lin(sides[k + 1]);
      const std::string& rel = rels[k];
      if (rel == ">=") out.push_back(IntConstraint::geq(l, r));
      else if (rel == "<=") out.push_back(IntConstraint::leq(l, r));
      else if (rel == ">") out.push_back(IntConstraint::gt(l, r));
      else if (rel == "<") out.push_back(IntConstraint::lt(l, r));
      else out.push_back(IntConstraint::eq(l, r));
    }
  }
  return out;
}

// Mutual entailment over the naturals.
inline bool equivalent(const ConstraintList& a, const ConstraintList& b) {
  auto all = [](const ConstraintList& from, const ConstraintList& to) {
    for (auto& c : to) {
      if (c.is_eq()) {
        if (!entails(from, IntConstraint(c.expr(), Rel::Geq)) || !entails(from, IntConstraint(-c.expr(), Rel::Geq)))
          return false;
      } else if (!entails(from, c)) {
        return false;
      }
    }
    return true;
  };
  return all(a, b) && all(b, a);
}

// Every assignment of vars into [0, bound].
template <class F>
void for_each_assignment(const std::vector<std::string>& vars, std::int64_t bound, F f) {
  Assignment a;
  for (auto& v : vars) a[v] = 0;
  while (true) {
    f(static_cast<const Assignment&>(a));
    std::size_t i = 0;
    for (; i < vars.size(); ++i) {
      if (++a[vars[i]] <= bound) break;
      a[vars[i]] = 0;
    }
    if (i == vars.size()) return;
  }
}

}  // namespace testing_support
