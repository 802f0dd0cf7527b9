#include <catch_amalgamated.hpp>

#include <map>
#include <random>
#include <set>

#include "qtree/catalog.hpp"
#include "qtree/error.hpp"
#include "qtree/inverse.hpp"
#include "qtree/pencil.hpp"

using namespace qtree;

namespace {

Poly P(std::vector<long long> c) { return Poly::from_ints(c); }

// every nondecreasing m-tuple with sum <= cap, by plain enumeration
std::set<std::vector<int>> brute_reciprocals(const Rational& q, int m, int cap) {
  std::set<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(int, int, Rational)> go = [&](int lo, int sum, Rational acc) {
    if (static_cast<int>(cur.size()) == m) {
      if (acc == q) out.insert(cur);
      return;
    }
    for (int d = lo; sum + d * (m - static_cast<int>(cur.size())) <= cap; ++d) {
      cur.push_back(d);
      go(d, sum + d, acc + Rational(1, d));
      cur.pop_back();
    }
  };
  go(1, 0, 0);
  return out;
}

std::set<std::string> codes(const std::vector<RootedTree>& ts) {
  std::set<std::string> s;
  for (const auto& t : ts) s.insert(canonical_code(t));
  return s;
}

ScatteringRecord exact_record(const RootedTree& t) {
  ScatteringRecord rec;
  rec.p = t.p();
  Poly a = psi(t), b = psi_hat(t);
  for (int k = 0; k <= rec.p; ++k) rec.f.push_back(a.eval(Rational(k, rec.p)).convert_to<double>());
  for (int k = 0; k < rec.p; ++k) rec.f_hat.push_back(b.eval(Rational(k, rec.p - 1)).convert_to<double>());
  return rec;
}

} // namespace

TEST_CASE("reciprocal sums against brute force") {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    int m = 1 + trial % 4;
    std::uniform_int_distribution<int> dist(1, 64 / m);
    Rational q = 0;
    for (int i = 0; i < m; ++i) q += Rational(1, dist(rng));
    CAPTURE(m, q.str());
    auto got = diophantine_reciprocals(q, m, 64);
    std::set<std::vector<int>> gs(got.begin(), got.end());
    CHECK(gs.size() == got.size());
    CHECK(gs == brute_reciprocals(q, m, 64));
  }
}

TEST_CASE("reciprocal sums: small cases") {
  auto a = diophantine_reciprocals(Rational(11, 12), 3, 10, true);
  REQUIRE(a.size() == 1);
  CHECK(a[0] == std::vector<int>{3, 3, 4});
  CHECK(diophantine_reciprocals(Rational(1), 2) == std::vector<std::vector<int>>{{2, 2}});
  CHECK(diophantine_reciprocals(Rational(2), 2) == std::vector<std::vector<int>>{{1, 1}});
  CHECK(diophantine_reciprocals(Rational(3), 2).empty());
  CHECK(diophantine_reciprocals(Rational(0), 2).empty());
}

TEST_CASE("root degree from the leading coefficients") {
  CHECK(recover_d0(P({0, 0, -3, 0, 3}), P({0, 0, 0, -1})) == 3);
  CHECK(recover_d0(P({0, 2, 0, -2}), P({-1, 0, 2})) == 1);
  for (int p = 2; p <= 8; ++p)
    for (const auto& t : enumerate_rooted_trees(p)) CHECK(recover_d0(psi(t), psi_hat(t)) == t.degree(t.root()));
  CHECK_THROWS_WITH(recover_d0(P({0, 0, -3, 0, 3}), P({0, 0, 0, 2})),
                    Catch::Matchers::ContainsSubstring("non-integer degree ratio"));
  CHECK_THROWS_AS(recover_d0(P({0, 0, -3, 0, 3}), P({0, 2})), Error);
}

TEST_CASE("reciprocal sum equals the sum of branch contributions") {
  // for a snowflake the coefficient is sum 1/d_k over branch root degrees
  auto t = from_code("((()())(()())(()()()))");
  CHECK(reciprocal_sum(psi(t), psi_hat(t), 3) == Rational(11, 12));
}

TEST_CASE("splitting psi_hat over the catalog") {
  const Catalog& c = shared_catalog(3);
  // star with three leaves: psi_hat = -z^3 = (-z)^3
  auto s = split_psihat(P({0, 0, 0, -1}), 3, c);
  REQUIRE(s.size() == 1);
  CHECK(s[0] == std::vector<Poly>(3, P({0, -1})));
  CHECK(split_psihat(P({0, 0, 0, -1}), 2, c).empty());
  // every tree's own branch factors appear among the splittings
  for (int p = 3; p <= 7; ++p)
    for (const auto& t : enumerate_rooted_trees(p)) {
      std::vector<Poly> own;
      for (const auto& b : root_subtrees(t)) own.push_back(psi_mod(b.hat));
      std::sort(own.begin(), own.end(), [&](const Poly& x, const Poly& y) {
        const auto& keys = shared_catalog(6).keys();
        return std::find(keys.begin(), keys.end(), x) < std::find(keys.begin(), keys.end(), y);
      });
      auto all = split_psihat(psi_hat(t), static_cast<int>(own.size()), shared_catalog(6));
      CHECK(std::find(all.begin(), all.end(), own) != all.end());
    }
}

TEST_CASE("undetermined coefficients recover the branch numerators") {
  int unique = 0;
  for (int p = 3; p <= 7; ++p)
    for (const auto& t : enumerate_rooted_trees(p)) {
      std::vector<Poly> factors, nums;
      std::vector<int> degs;
      std::set<std::string> seen;
      bool distinct = true;
      for (const auto& b : root_subtrees(t)) {
        factors.push_back(psi_mod(b.hat));
        nums.push_back(psi_hat_mod(b.hat));
        degs.push_back(b.hat.degree(b.hat.root()) + 1);
        distinct = distinct && seen.insert(factors.back().str()).second;
      }
      auto r = undetermined_coefficients(psi(t), psi_hat(t), t.degree(t.root()), factors, degs);
      if (!distinct) continue;
      REQUIRE(r.status == CoefficientSolve::Status::Unique);
      CHECK(r.numerators == nums);
      ++unique;
    }
  CHECK(unique > 50);
}

TEST_CASE("undetermined coefficients need the leading terms when factors share a root") {
  // factors -z and 2z - 3z^3 share z = 0
  auto t = from_code("((()())())");
  std::vector<Poly> factors;
  std::vector<int> degs;
  for (const auto& b : root_subtrees(t)) {
    factors.push_back(psi_mod(b.hat));
    degs.push_back(b.hat.degree(b.hat.root()) + 1);
  }
  CHECK(undetermined_coefficients(psi(t), psi_hat(t), 2, factors).status == CoefficientSolve::Status::Singular);
  auto r = undetermined_coefficients(psi(t), psi_hat(t), 2, factors, degs);
  REQUIRE(r.status == CoefficientSolve::Status::Unique);
  for (size_t k = 0; k < factors.size(); ++k) CHECK(r.numerators[k].degree() == factors[k].degree() - 1);
  CHECK(undetermined_coefficients(psi(t), psi_hat(t), 1, factors).status ==
        CoefficientSolve::Status::Inconsistent);
}

TEST_CASE("shape recovery returns exactly the isospectral class") {
  std::map<std::pair<std::string, std::string>, std::set<std::string>> classes;
  std::vector<RootedTree> all;
  for (int p = 2; p <= 8; ++p)
    for (const auto& t : enumerate_rooted_trees(p)) {
      classes[{psi(t).str(), psi_hat(t).str()}].insert(canonical_code(t));
      all.push_back(t);
    }
  CHECK(all.size() == 199);
  for (const auto& t : all) {
    CAPTURE(canonical_code(t));
    auto r = recover_shape(psi(t), psi_hat(t));
    CHECK(codes(r.shapes) == classes[{psi(t).str(), psi_hat(t).str()}]);
  }
}

TEST_CASE("the eleven-vertex pair has one shape") {
  Poly a = P({0, 0, 0, 0, 0, 52, 0, -202, 0, 258, 0, -108});
  Poly b = P({0, 0, 0, 0, -12, 0, 52, 0, -75, 0, 36});
  auto r = recover_shape(a, b);
  REQUIRE(r.shapes.size() == 1);
  CHECK(psi(r.shapes[0]) == a);
  CHECK(psi_hat(r.shapes[0]) == b);
  CHECK_FALSE(r.trace.empty());
}

TEST_CASE("shape recovery rejects impossible input") {
  CHECK_THROWS_AS(recover_shape(P({1, 0, 1}), P({0, -1})), Error);
  CHECK_THROWS_WITH(recover_shape(P({-1, 0, 1}), P({0, -2})),
                    Catch::Matchers::ContainsSubstring("non-integer degree ratio"));
  CHECK_THROWS_AS(recover_shape(P({1}), P({1})), Error);
}

TEST_CASE("ratio-only recovery matches cross multiplication") {
  for (int p = 2; p <= 6; ++p) {
    auto trees = enumerate_rooted_trees(p);
    for (const auto& t : trees) {
      Poly g = gcd(psi(t), psi_hat(t));
      Poly num = divexact(psi(t), g), den = divexact(psi_hat(t), g);
      std::set<std::string> expected;
      for (const auto& u : trees)
        if (psi(u) * psi_hat(t) == psi(t) * psi_hat(u)) expected.insert(canonical_code(u));
      CAPTURE(canonical_code(t));
      CHECK(codes(recover_shape_ratio(num, den, p).shapes) == expected);
    }
  }
}

TEST_CASE("snowflake recovery") {
  auto t = from_code("((()())(()())(()()()))");
  auto s = recover_snowflake(psi(t), psi_hat(t));
  REQUIRE(s.has_value());
  CHECK(canonical_code(*s) == canonical_code(t));
  CHECK_FALSE(recover_snowflake(psi(from_code("(((())))")), psi_hat(from_code("(((())))"))).has_value());
  // whenever it answers, the answer is among the full recovery's shapes
  int answered = 0;
  for (int p = 2; p <= 8; ++p)
    for (const auto& u : enumerate_rooted_trees(p)) {
      auto sf = recover_snowflake(psi(u), psi_hat(u));
      if (!sf) continue;
      ++answered;
      CHECK(codes(recover_shape(psi(u), psi_hat(u)).shapes).count(canonical_code(*sf)) == 1);
    }
  CHECK(answered > 10);
}

TEST_CASE("exact interpolation") {
  std::vector<Rational> x{0, Rational(1, 2), 1}, y{-1, Rational(-3, 4), 0};
  CHECK(interpolate_exact(x, y) == P({-1, 0, 1}));
  CHECK_THROWS_AS(interpolate_exact({0, 0}, {1, 2}), Error);
}

TEST_CASE("records interpolate to integer polynomials") {
  ScatteringRecord rec;
  rec.p = 2;
  rec.f = {-1, -0.75, 0};
  rec.f_hat = {0, -1};
  auto [a, b] = interpolate_polynomials(rec);
  CHECK(a == P({-1, 0, 1}));
  CHECK(b == P({0, -1}));

  for (int p = 2; p <= 7; ++p)
    for (const auto& t : enumerate_rooted_trees(p)) {
      auto [x, y] = interpolate_polynomials(exact_record(t));
      CHECK(x == psi(t));
      CHECK(y == psi_hat(t));
    }
}

TEST_CASE("corrupted records are refused") {
  auto rec = exact_record(from_code("((()())(()))"));
  rec.f[3] += 0.4;
  CHECK_THROWS_WITH(interpolate_polynomials(rec),
                    Catch::Matchers::ContainsSubstring("rounding margin exceeded - increase n_schedule"));

  ScatteringRecord square;
  square.p = 2;
  square.f = {0, 0.25, 1};
  square.f_hat = {0, -1};
  CHECK_THROWS_WITH(interpolate_polynomials(square), Catch::Matchers::ContainsSubstring("psi(+-1) != 0"));

  ScatteringRecord short_rec = square;
  short_rec.f.pop_back();
  CHECK_THROWS_AS(interpolate_polynomials(short_rec), Error);
  square.f[1] = std::nan("");
  CHECK_THROWS_AS(interpolate_polynomials(square), Error);
}
