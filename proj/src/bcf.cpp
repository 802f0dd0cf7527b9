#include "qtree/bcf.hpp"

#include <algorithm>

#include "qtree/error.hpp"

namespace qtree {

namespace {

BranchedFraction expand_at(const RootedTree& t, int v) {
  BranchedFraction f;
  f.degree = t.degree(v);
  for (int c : t.children(v)) f.children.push_back(expand_at(t, c));
  return f;
}

std::string shape_code(const BranchedFraction& f) {
  std::vector<std::string> k;
  for (const auto& c : f.children) k.push_back(shape_code(c));
  std::sort(k.begin(), k.end());
  std::string s = "(";
  for (auto& x : k) s += x;
  return s + ")";
}

std::string degree_term(int d) { return d == 1 ? "-z" : "-" + std::to_string(d) + "z"; }

void attach(const BranchedFraction& f, int parent, std::vector<int>& parents) {
  int me = static_cast<int>(parents.size());
  parents.push_back(parent);
  for (const auto& c : f.children) attach(c, me, parents);
}

} // namespace

BranchedFraction bcf_expand(const RootedTree& t) {
  if (t.p() < 2) throw Error("single_vertex", "single vertex");
  return expand_at(t, t.root());
}

Rational bcf_eval(const BranchedFraction& f, const Rational& z) {
  Rational r = -Rational(f.degree) * z;
  for (const auto& c : f.children) {
    Rational v = bcf_eval(c, z);
    if (v == 0) throw Error("pole", "pole at z");
    r -= 1 / v;
  }
  return r;
}

std::string bcf_text(const BranchedFraction& f) {
  std::string s = degree_term(f.degree);
  std::vector<std::pair<std::string, const BranchedFraction*>> inner;
  int leaves = 0;
  for (const auto& c : f.children) {
    if (c.children.empty()) ++leaves;
    else inner.push_back({shape_code(c), &c});
  }
  std::sort(inner.begin(), inner.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (const auto& [code, c] : inner) s += "-1/(" + bcf_text(*c) + ")";
  if (leaves > 0) s += "+" + std::to_string(leaves) + "/z";
  return s;
}

RootedTree bcf_to_tree(const BranchedFraction& f) {
  std::vector<int> parents;
  attach(f, -1, parents);
  return from_parents(parents);
}

} // namespace qtree
