#pragma once

#include <vector>

#include "qtree/poly.hpp"
#include "qtree/tree.hpp"

namespace qtree {

// det(-z*diag(deg) + A) over the vertices of t, optionally with the root
// row and column removed. deg is indexed by vertex id of t.
Poly pencil_det(const RootedTree& t, const std::vector<int>& deg, bool drop_root);

// psi(z) = det(-zD + A)
Poly psi(const RootedTree& t);
// psi_hat(z) = det(-zD^ + A^), root deleted, original degrees kept
Poly psi_hat(const RootedTree& t);

// For a hat-subtree U whose root lost its edge to the parent: the pencil of
// U with the root degree raised by one, and its root-deleted minor. These
// are the factor polynomials of psi_hat and their numerators in the
// continued fraction.
Poly psi_mod(const RootedTree& u);
Poly psi_hat_mod(const RootedTree& u);

// Determinant of a square matrix over Z[z] by fraction-free elimination.
Poly bareiss_det(std::vector<std::vector<Poly>> m);

} // namespace qtree
