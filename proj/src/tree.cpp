#include "qtree/tree.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <queue>
#include <set>

#include "qtree/error.hpp"

namespace qtree {

int RootedTree::degree(int v) const {
  if (v < 0 || v >= p_) throw Error("bad_vertex", "bad vertex id");
  return static_cast<int>(adj_[v].size());
}

std::vector<int> RootedTree::degrees() const {
  std::vector<int> d(p_);
  for (int v = 0; v < p_; ++v) d[v] = static_cast<int>(adj_[v].size());
  return d;
}

RootedTree from_edge_list(int p, int root, const std::vector<Edge>& edges) {
  if (p < 1) throw Error("bad_vertex", "bad vertex id: p must be at least 1");
  if (root < 0 || root >= p) throw Error("bad_vertex", "bad vertex id: root out of range");
  if (static_cast<int>(edges.size()) != p - 1) throw Error("not_a_tree", "not a tree: edge count must be p-1");

  RootedTree t;
  t.p_ = p;
  t.root_ = root;
  t.adj_.assign(p, {});
  std::set<Edge> seen;
  for (auto [a, b] : edges) {
    if (a < 0 || a >= p || b < 0 || b >= p) throw Error("bad_vertex", "bad vertex id in edge list");
    if (a == b) throw Error("not_a_tree", "not a tree: self loop");
    Edge e{std::min(a, b), std::max(a, b)};
    if (!seen.insert(e).second) throw Error("not_a_tree", "not a tree: repeated edge");
    t.adj_[a].push_back(b);
    t.adj_[b].push_back(a);
  }
  for (auto& nb : t.adj_) std::sort(nb.begin(), nb.end());
  t.edges_.assign(seen.begin(), seen.end());

  t.parent_.assign(p, -2);
  t.children_.assign(p, {});
  t.in_edge_.assign(p, -1);
  t.parent_[root] = -1;
  std::queue<int> q;
  q.push(root);
  int next_edge = 0;
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    t.bfs_.push_back(v);
    for (int w : t.adj_[v]) {
      if (w == t.parent_[v]) continue;
      if (t.parent_[w] != -2) throw Error("not_a_tree", "not a tree: cycle");
      t.parent_[w] = v;
      t.children_[v].push_back(w);
      t.in_edge_[w] = next_edge++;
      q.push(w);
    }
  }
  if (static_cast<int>(t.bfs_.size()) != p) throw Error("not_a_tree", "not a tree: disconnected");
  return t;
}

RootedTree from_parents(const std::vector<int>& parent) {
  int p = static_cast<int>(parent.size());
  int root = -1;
  std::vector<Edge> edges;
  for (int v = 0; v < p; ++v) {
    if (parent[v] < 0) {
      if (root >= 0) throw Error("not_a_tree", "not a tree: two roots");
      root = v;
    } else {
      edges.push_back({parent[v], v});
    }
  }
  if (root < 0) throw Error("not_a_tree", "not a tree: no root");
  return from_edge_list(p, root, edges);
}

RootedTree relabel(const RootedTree& t, const std::vector<int>& perm) {
  std::vector<Edge> e;
  for (auto [a, b] : t.edges()) e.push_back({perm.at(a), perm.at(b)});
  return from_edge_list(t.p(), perm.at(t.root()), e);
}

RootedTree relabel_bfs(const RootedTree& t) {
  std::vector<int> perm(t.p());
  for (int i = 0; i < t.p(); ++i) perm[t.bfs()[i]] = i;
  return relabel(t, perm);
}

namespace {

std::string code_at(const RootedTree& t, int v) {
  std::vector<std::string> kids;
  for (int c : t.children(v)) kids.push_back(code_at(t, c));
  std::sort(kids.begin(), kids.end());
  std::string s = "(";
  for (auto& k : kids) s += k;
  return s + ")";
}

void emit_canonical(const RootedTree& t, int v, int parent_new, std::vector<int>& parent_out) {
  int me = static_cast<int>(parent_out.size());
  parent_out.push_back(parent_new);
  std::vector<std::pair<std::string, int>> kids;
  for (int c : t.children(v)) kids.push_back({code_at(t, c), c});
  std::sort(kids.begin(), kids.end());
  for (auto& [code, c] : kids) emit_canonical(t, c, me, parent_out);
}

} // namespace

std::string canonical_code(const RootedTree& t) { return code_at(t, t.root()); }

RootedTree from_code(const std::string& code) {
  std::vector<int> parent;
  std::vector<int> stack;
  for (char ch : code) {
    if (ch == '(') {
      if (stack.empty() && !parent.empty()) throw Error("bad_code", "tree code has more than one root");
      parent.push_back(stack.empty() ? -1 : stack.back());
      stack.push_back(static_cast<int>(parent.size()) - 1);
    } else if (ch == ')') {
      if (stack.empty()) throw Error("bad_code", "unbalanced tree code");
      stack.pop_back();
    } else if (!std::isspace(static_cast<unsigned char>(ch))) {
      throw Error("bad_code", "tree code may only contain parentheses");
    }
  }
  if (parent.empty() || !stack.empty()) throw Error("bad_code", "unbalanced tree code");
  return from_parents(parent);
}

bool is_isomorphic(const RootedTree& a, const RootedTree& b) {
  return a.p() == b.p() && canonical_code(a) == canonical_code(b);
}

RootedTree canonical_form(const RootedTree& t) {
  std::vector<int> parent;
  emit_canonical(t, t.root(), -1, parent);
  return relabel_bfs(from_parents(parent));
}

RootedTree subtree_at(const RootedTree& t, int v) {
  std::vector<int> order{v};
  std::map<int, int> id{{v, 0}};
  std::vector<Edge> e;
  for (size_t i = 0; i < order.size(); ++i) {
    int u = order[i];
    for (int c : t.children(u)) {
      id[c] = static_cast<int>(order.size());
      order.push_back(c);
      e.push_back({id[u], id[c]});
    }
  }
  return from_edge_list(static_cast<int>(order.size()), 0, e);
}

RootedTree join_at_root(const std::vector<RootedTree>& kids) {
  std::vector<Edge> e;
  int next = 1;
  for (const auto& k : kids) {
    int base = next;
    e.push_back({0, base + k.root()});
    for (auto [a, b] : k.edges()) e.push_back({base + a, base + b});
    next += k.p();
  }
  return from_edge_list(next, 0, e);
}

std::vector<SubtreePair> root_subtrees(const RootedTree& t) {
  if (t.p() < 2) throw Error("single_vertex", "single vertex");
  std::vector<SubtreePair> out;
  for (int vk : t.children(t.root())) {
    SubtreePair sp;
    sp.hat = subtree_at(t, vk);
    sp.full = join_at_root({sp.hat});
    // subtree_at numbers vertices in bfs order from vk; replay it for degrees
    std::vector<int> order{vk};
    for (size_t i = 0; i < order.size(); ++i)
      for (int c : t.children(order[i])) order.push_back(c);
    for (int u : order) sp.hat_degrees.push_back(t.degree(u));
    out.push_back(std::move(sp));
  }
  return out;
}

std::vector<RootedTree> enumerate_rooted_trees(int p) {
  if (p < 1 || p > 12) throw Error("p_out_of_range", "p out of range (1..12)");
  std::map<std::string, RootedTree> level;
  RootedTree single = from_edge_list(1, 0, {});
  level.emplace(canonical_code(single), single);
  for (int n = 2; n <= p; ++n) {
    std::map<std::string, RootedTree> next;
    for (const auto& [code, t] : level) {
      for (int v = 0; v < t.p(); ++v) {
        auto e = t.edges();
        e.push_back({v, t.p()});
        RootedTree grown = from_edge_list(t.p() + 1, t.root(), e);
        std::string c = canonical_code(grown);
        if (!next.count(c)) next.emplace(c, canonical_form(grown));
      }
    }
    level = std::move(next);
  }
  std::vector<RootedTree> out;
  for (auto& [code, t] : level) out.push_back(t);
  return out;
}

RootedTree absorb_pendant_root(const RootedTree& t) {
  if (t.p() < 2 || t.degree(t.root()) != 1) return t;
  int child = t.children(t.root())[0];
  std::vector<int> perm(t.p());
  int next = 0;
  for (int v = 0; v < t.p(); ++v)
    if (v != t.root()) perm[v] = next++;
  std::vector<Edge> e;
  for (auto [a, b] : t.edges())
    if (a != t.root() && b != t.root()) e.push_back({perm[a], perm[b]});
  return relabel_bfs(from_edge_list(t.p() - 1, perm[child], e));
}

} // namespace qtree
