#pragma once

// Linear finite elements on the metric tree with natural (Kirchhoff-Neumann)
// vertex conditions. The number of negative eigenvalues of the stiffness plus
// lumped potential matrix is the number of negative Neumann eigenvalues.

#include <Eigen/Dense>

#include "qtree/potential.hpp"
#include "qtree/tree.hpp"

namespace oracle {

inline int negative_neumann_count(const qtree::RootedTree& t, const qtree::Potential& pot, int cells = 120) {
  const int p = t.p();
  const int edges = p - 1;
  const int n = p + edges * (cells - 1);
  const double h = pot.ell() / cells;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  int next = p;
  for (int v = 0; v < p; ++v) {
    int u = t.parent(v);
    if (u < 0) continue;
    // nodes along the edge u -> v, x measured from u
    std::vector<int> ids{u};
    for (int i = 1; i < cells; ++i) ids.push_back(next++);
    ids.push_back(v);
    for (int i = 0; i < cells; ++i) {
      int a = ids[i], b = ids[i + 1];
      A(a, a) += 1 / h;
      A(b, b) += 1 / h;
      A(a, b) -= 1 / h;
      A(b, a) -= 1 / h;
      A(a, a) += 0.5 * h * pot.at(i * h);
      A(b, b) += 0.5 * h * pot.at((i + 1) * h);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A, Eigen::EigenvaluesOnly);
  int count = 0;
  for (int i = 0; i < n; ++i)
    if (es.eigenvalues()[i] < 0) ++count;
  return count;
}

} // namespace oracle
