#pragma once

#include <string>
#include <utility>
#include <vector>

namespace qtree {

using Edge = std::pair<int, int>;

// Rooted tree on dense vertex ids 0..p-1. Edges are oriented away from the
// root; bfs() lists vertices level by level with children in ascending id.
class RootedTree {
public:
  RootedTree() = default;

  int p() const { return p_; }
  int root() const { return root_; }
  int edge_count() const { return p_ - 1; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<int>& neighbors(int v) const { return adj_.at(v); }
  const std::vector<int>& children(int v) const { return children_.at(v); }
  int parent(int v) const { return parent_.at(v); }
  int degree(int v) const;
  std::vector<int> degrees() const;
  const std::vector<int>& bfs() const { return bfs_; }
  // edge index (0..g-1) of the edge entering v, in bfs order; -1 for root
  int incoming_edge(int v) const { return in_edge_.at(v); }

  friend RootedTree from_edge_list(int p, int root, const std::vector<Edge>& edges);

private:
  int p_ = 0;
  int root_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adj_;
  std::vector<std::vector<int>> children_;
  std::vector<int> parent_;
  std::vector<int> bfs_;
  std::vector<int> in_edge_;
};

RootedTree from_edge_list(int p, int root, const std::vector<Edge>& edges);

// Tree built from a parent array (parent[root] == -1).
RootedTree from_parents(const std::vector<int>& parent);

// Relabel so that the root is 0 and ids follow bfs order.
RootedTree relabel_bfs(const RootedTree& t);

// Apply an arbitrary permutation perm[old] = new.
RootedTree relabel(const RootedTree& t, const std::vector<int>& perm);

std::string canonical_code(const RootedTree& t);
// Inverse of canonical_code; accepts any balanced parenthesis string.
RootedTree from_code(const std::string& code);
bool is_isomorphic(const RootedTree& a, const RootedTree& b);

// Canonical representative: bfs labels with children sorted by code.
RootedTree canonical_form(const RootedTree& t);

// Subtree hanging below v (v becomes the root).
RootedTree subtree_at(const RootedTree& t, int v);

// Tree whose root has the given subtrees as children (each attached by an
// edge to its own root).
RootedTree join_at_root(const std::vector<RootedTree>& kids);

struct SubtreePair {
  RootedTree full;  // root plus edge e_k plus everything below v_k
  RootedTree hat;   // rooted at v_k, root and e_k removed
  // degree of each hat vertex in the original tree
  std::vector<int> hat_degrees;
};

std::vector<SubtreePair> root_subtrees(const RootedTree& t);

// Every rooted tree on p vertices up to rooted isomorphism, sorted by code.
std::vector<RootedTree> enumerate_rooted_trees(int p);

// Remove a pendant root and re-root at its only child. Identity otherwise.
RootedTree absorb_pendant_root(const RootedTree& t);

} // namespace qtree
