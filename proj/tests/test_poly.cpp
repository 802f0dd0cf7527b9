#include <catch_amalgamated.hpp>

#include <random>

#include "qtree/bcf.hpp"
#include "qtree/catalog.hpp"
#include "qtree/error.hpp"
#include "qtree/pencil.hpp"
#include "qtree/tree.hpp"

using namespace qtree;

namespace {

Poly P(std::vector<long long> c) { return Poly::from_ints(c); }

// det(-z D + A) at a rational point by plain Gaussian elimination
Rational det_at(const RootedTree& t, const Rational& z, bool drop_root) {
  std::vector<int> ids;
  for (int v = 0; v < t.p(); ++v)
    if (!(drop_root && v == t.root())) ids.push_back(v);
  const size_t n = ids.size();
  if (n == 0) return 1;
  std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n, 0));
  for (size_t i = 0; i < n; ++i) {
    m[i][i] = -z * t.degree(ids[i]);
    for (size_t j = 0; j < n; ++j)
      for (int w : t.neighbors(ids[i]))
        if (w == ids[j]) m[i][j] = 1;
  }
  Rational det = 1;
  for (size_t c = 0; c < n; ++c) {
    size_t piv = c;
    while (piv < n && m[piv][c] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != c) {
      std::swap(m[piv], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (size_t r = c + 1; r < n; ++r) {
      Rational f = m[r][c] / m[c][c];
      for (size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
    }
  }
  return det;
}

struct Row {
  const char* code;
  Poly psi, psi_hat;
  std::string fraction;
};

std::vector<Row> small_trees() {
  return {
      {"(())", P({-1, 0, 1}), P({0, -1}), "-z+1/z"},
      {"(()())", P({0, 2, 0, -2}), P({0, 0, 1}), "-2z+2/z"},
      {"((()))", P({0, 2, 0, -2}), P({-1, 0, 2}), "-z-1/(-2z+1/z)"},
      {"(((())))", P({1, 0, -5, 0, 4}), P({0, 3, 0, -4}), "-z-1/(-2z-1/(-2z+1/z))"},
      {"((()()))", P({0, 0, -3, 0, 3}), P({0, 2, 0, -3}), "-z-1/(-3z+2/z)"},
      {"(()()())", P({0, 0, -3, 0, 3}), P({0, 0, 0, -1}), "-3z+3/z"},
      {"((())())", P({1, 0, -5, 0, 4}), P({0, 1, 0, -2}), "-2z-1/(-2z+1/z)+1/z"},
  };
}

} // namespace

TEST_CASE("polynomial arithmetic") {
  Poly a = P({-1, 0, 1}), b = P({1, 1});
  CHECK(a * b == P({-1, -1, 1, 1}));
  CHECK(divexact(a, b) == P({-1, 1}));
  CHECK_THROWS_WITH(divexact(a, P({2, 1})), Catch::Matchers::ContainsSubstring("inexact division"));
  auto [q, r] = divmod(P({1, 0, 0, 1}), P({1, 1}));
  CHECK(q == P({1, -1, 1}));
  CHECK(r.is_zero());
  CHECK(gcd(P({-1, 0, 1}), P({1, 2, 1})) == P({1, 1}));
  CHECK(gcd(Poly(), Poly()).is_zero());
  CHECK(P({0, 2, 0, -2}).str() == "-2z^3+2z");
  CHECK(P({-1, 0, 2}).str() == "2z^2-1");
  CHECK(content(P({0, 6, 0, -4})) == 2);
  CHECK(P({3, 0, 1}).derivative() == P({0, 2}));
  CHECK(P({1, 2}).eval(Rational(1, 2)) == 2);
}

TEST_CASE("squarefree decomposition") {
  // z^3 (z^2 - 1)
  auto parts = squarefree_decomposition(P({0, 0, 0, -1, 0, 1}));
  REQUIRE(parts.size() == 3);
  CHECK(parts[0] == P({-1, 0, 1}));
  CHECK(parts[1].degree() == 0);
  CHECK(parts[2] == P({0, 1}));
}

TEST_CASE("small trees: psi, psi_hat and fraction text") {
  for (const auto& row : small_trees()) {
    auto t = from_code(row.code);
    CAPTURE(row.code);
    CHECK(psi(t) == row.psi);
    CHECK(psi_hat(t) == row.psi_hat);
    CHECK(bcf_text(bcf_expand(t)) == row.fraction);
  }
}

TEST_CASE("pencil determinants agree with direct elimination") {
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> num(-40, 40), den(1, 9);
  for (int p = 2; p <= 8; ++p)
    for (const auto& t : enumerate_rooted_trees(p)) {
      Poly a = psi(t), b = psi_hat(t);
      for (int i = 0; i < 3; ++i) {
        Rational z(num(rng), den(rng));
        CHECK(a.eval(z) == det_at(t, z, false));
        CHECK(b.eval(z) == det_at(t, z, true));
      }
    }
}

TEST_CASE("degree, values at +-1 and the root degree ratio") {
  for (int p = 2; p <= 8; ++p)
    for (const auto& t : enumerate_rooted_trees(p)) {
      Poly a = psi(t), b = psi_hat(t);
      CHECK(a.degree() == p);
      CHECK(b.degree() == p - 1);
      CHECK(a.eval(Rational(1)) == 0);
      CHECK(a.eval(Rational(-1)) == 0);
      CHECK(b.eval(Rational(1)) != 0);
      CHECK(b.eval(Rational(-1)) != 0);
      CHECK(a.lead() / (-b.lead()) == t.degree(t.root()));
    }
}

TEST_CASE("branched fraction matches psi / psi_hat at random rationals") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> num(-300, 300), den(1, 97);
  auto trees = enumerate_rooted_trees(7);
  int checked = 0;
  for (int i = 0; checked < 100; ++i) {
    const auto& t = trees[i % trees.size()];
    Rational z(num(rng), den(rng));
    Poly b = psi_hat(t);
    if (b.eval(z) == 0) continue;
    Rational expected = psi(t).eval(z) / b.eval(z);
    try {
      CHECK(bcf_eval(bcf_expand(t), z) == expected);
      ++checked;
    } catch (const Error&) {
      // an inner node has a pole at z; the identity is about the rational function
    }
  }
}

TEST_CASE("fraction for a three-branch root with one deep branch") {
  auto t = from_code("((())()())");
  CHECK(bcf_text(bcf_expand(t)) == "-3z-1/(-2z+1/z)+2/z");
  Rational z(3, 7);
  Rational expected = -3 * z + 2 / z - 1 / (-2 * z + 1 / z);
  CHECK(bcf_eval(bcf_expand(t), z) == expected);
  CHECK(canonical_code(bcf_to_tree(bcf_expand(t))) == canonical_code(t));
}

TEST_CASE("fraction at a pole") {
  CHECK_THROWS_WITH(bcf_eval(bcf_expand(from_code("(())")), Rational(0)),
                    Catch::Matchers::ContainsSubstring("pole"));
}

TEST_CASE("determinant recursion for subtrees") {
  int count = 0;
  for (int p = 2; p <= 7; ++p)
    for (const auto& t : enumerate_rooted_trees(p))
      for (int v = 0; v < t.p(); ++v) {
        if (v == t.root()) continue;
        auto hat = subtree_at(t, v);
        auto branch = join_at_root({hat});
        Poly lhs = pencil_det(branch, branch.degrees(), true);
        Poly rhs = hat.p() == 1 ? P({0, -1}) : psi(hat) - Poly::z() * psi_hat(hat);
        CHECK(lhs == rhs);
        CHECK(lhs == psi_mod(hat));
        ++count;
      }
  CHECK(count > 400);
}

TEST_CASE("psi_hat is the product over root branches") {
  for (int p = 2; p <= 8; ++p)
    for (const auto& t : enumerate_rooted_trees(p)) {
      Poly prod = Poly::constant(1);
      for (const auto& b : root_subtrees(t)) prod = prod * psi_mod(b.hat);
      CHECK(prod == psi_hat(t));
    }
}

TEST_CASE("single vertex has no root minor") {
  CHECK_THROWS_WITH(psi_hat(from_code("()")), Catch::Matchers::ContainsSubstring("single vertex"));
}

TEST_CASE("catalog of lone edges") {
  Catalog c(1);
  REQUIRE(c.keys().size() == 1);
  CHECK(c.keys()[0] == P({0, -1}));
  const auto& e = c.lookup(P({0, -1}));
  REQUIRE(e.size() == 1);
  CHECK(e[0].tree.p() == 1);
  CHECK(e[0].psi_hat == P({1}));
  CHECK(e[0].root_degree == 1);
}

TEST_CASE("catalog lookup for a three-vertex star branch") {
  const Catalog& c = shared_catalog(7);
  const auto& e = c.lookup(P({0, 2, 0, -3}));
  bool found = false;
  for (const auto& x : e)
    if (canonical_code(x.tree) == "(()())") {
      found = true;
      CHECK(x.psi_hat == P({0, 0, 1}));
      CHECK(x.root_degree == 3);
    }
  CHECK(found);
  CHECK(c.lookup_normalized(P({0, -4, 0, 6})).size() == e.size());
  CHECK(c.lookup(P({5, 5, 5})).empty());
}

TEST_CASE("catalog keys are the modified pencils of their entries") {
  const Catalog& c = shared_catalog(6);
  for (const auto& k : c.keys())
    for (const auto& e : c.lookup(k)) {
      CHECK(psi_mod(e.tree) == k);
      CHECK(psi_hat_mod(e.tree) == e.psi_hat);
    }
  CHECK_THROWS_AS(Catalog(0), Error);
  CHECK_THROWS_AS(Catalog(12), Error);
}

TEST_CASE("normalized key") {
  CHECK(normalized_key(P({0, -4, 0, 6})) == P({0, 2, 0, -3}));
  CHECK(normalized_key(P({2, 0, -4})) == P({-1, 0, 2}));
}
