#pragma once

#include <map>
#include <vector>

#include "qtree/poly.hpp"
#include "qtree/tree.hpp"

namespace qtree {

struct CatalogEntry {
  RootedTree tree;   // the hat-subtree U, canonical form
  Poly psi_hat;      // psi_hat_mod(U)
  int root_degree;   // degree of U's root in the host tree
};

// All hat-subtrees with up to max_edges vertices (equivalently, branches
// T_k with up to max_edges edges), keyed by psi_mod.
class Catalog {
public:
  explicit Catalog(int max_edges);

  int max_edges() const { return max_edges_; }
  // distinct keys in ascending (degree, coefficients) order
  const std::vector<Poly>& keys() const { return keys_; }
  const std::vector<CatalogEntry>& lookup(const Poly& key) const;
  // entries whose key equals `key` up to a nonzero rational factor
  std::vector<CatalogEntry> lookup_normalized(const Poly& key) const;
  size_t size() const;

private:
  int max_edges_;
  std::vector<Poly> keys_;
  std::map<Poly, std::vector<CatalogEntry>> by_key_;
  std::map<Poly, std::vector<Poly>> by_norm_;
};

// Content 1, sign chosen so the lead is negative for odd degree and
// positive for even degree.
Poly normalized_key(const Poly& p);

// Shared read-only catalog, built on first use for each size.
const Catalog& shared_catalog(int max_edges);

} // namespace qtree
