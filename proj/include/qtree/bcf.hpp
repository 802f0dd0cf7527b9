#pragma once

#include <string>
#include <vector>

#include "qtree/poly.hpp"
#include "qtree/tree.hpp"

namespace qtree {

// Node value at z: -degree*z - sum over children of 1/child(z).
// A node without children is a pendant vertex and evaluates to -z.
struct BranchedFraction {
  int degree = 1;
  std::vector<BranchedFraction> children;
};

BranchedFraction bcf_expand(const RootedTree& t);
Rational bcf_eval(const BranchedFraction& f, const Rational& z);
std::string bcf_text(const BranchedFraction& f);
RootedTree bcf_to_tree(const BranchedFraction& f);

} // namespace qtree
