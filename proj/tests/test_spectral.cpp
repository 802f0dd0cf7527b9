#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "qtree/error.hpp"
#include "qtree/pencil.hpp"
#include "qtree/spectral.hpp"

using namespace qtree;
using Catch::Approx;
using std::numbers::pi;

namespace {

double rel(cplx a, cplx b) { return std::abs(a - b) / (1.0 + std::abs(b)); }

std::vector<double> bump(int n, double depth, double ell = 1.0) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = depth * std::cos(2 * pi * i / (n - 1)) - 1.0 + 0 * ell;
  return v;
}

// classical RK4 for y'' = (q - lambda) y on [0, ell], fixed steps
std::pair<double, double> rk4(const Potential& pot, double lambda, double y0, double dy0, int steps) {
  const double h = pot.ell() / steps;
  double y = y0, dy = dy0;
  auto acc = [&](double x, double yy) { return (pot.at(x) - lambda) * yy; };
  for (int i = 0; i < steps; ++i) {
    double x = i * h;
    double k1y = dy, k1d = acc(x, y);
    double k2y = dy + 0.5 * h * k1d, k2d = acc(x + 0.5 * h, y + 0.5 * h * k1y);
    double k3y = dy + 0.5 * h * k2d, k3d = acc(x + 0.5 * h, y + 0.5 * h * k2y);
    double k4y = dy + h * k3d, k4d = acc(x + h, y + h * k3y);
    y += h / 6 * (k1y + 2 * k2y + 2 * k3y + k4y);
    dy += h / 6 * (k1d + 2 * k2d + 2 * k3d + k4d);
  }
  return {y, dy};
}

Eigen::MatrixXcd mat(std::initializer_list<std::initializer_list<cplx>> rows) {
  Eigen::MatrixXcd m(rows.size(), rows.begin()->size());
  int i = 0;
  for (auto r : rows) {
    int j = 0;
    for (auto x : r) m(i, j++) = x;
    ++i;
  }
  return m;
}

} // namespace

TEST_CASE("fundamental values in closed form") {
  auto fv = fundamental_values(Potential::zero(1.0), pi * pi);
  CHECK(std::abs(fv.c - cplx(-1)) < 1e-14);
  CHECK(std::abs(fv.s) < 1e-14);
  CHECK(std::abs(fv.sp - cplx(-1)) < 1e-14);
  CHECK(std::abs(fv.cp) < 1e-13);

  auto shifted = fundamental_values(Potential::constant(-4.0, 1.0), 0.0);
  CHECK(std::abs(shifted.c - std::cos(2.0)) < 1e-15);

  auto origin = fundamental_values(Potential::zero(2.5), 0.0);
  CHECK(origin.c == cplx(1));
  CHECK(std::abs(origin.s - 2.5) < 1e-15);
}

TEST_CASE("Wronskian is one") {
  std::vector<Potential> pots{Potential::zero(1.0), Potential::constant(-4, 1.0), Potential::constant(3, 0.7),
                              Potential::sampled(bump(65, 3.0))};
  for (const auto& pot : pots)
    for (cplx lam : {cplx(-30), cplx(0.5), cplx(17), cplx(400), cplx(5, 4), cplx(-3, -7)}) {
      auto fv = fundamental_values(pot, lam);
      double scale = 1 + std::abs(fv.c * fv.sp) + std::abs(fv.cp * fv.s);
      CHECK(std::abs(fv.wronskian() - 1.0) / scale < 1e-10);
    }
}

TEST_CASE("symmetric potentials give s' = c and c^2 - 1 = s c'") {
  std::vector<Potential> pots{Potential::constant(-4, 1.0), Potential::sampled(bump(33, 5.0))};
  for (const auto& pot : pots)
    for (cplx lam : {cplx(-12), cplx(1.3), cplx(80), cplx(2, 9)}) {
      auto fv = fundamental_values(pot, lam);
      CHECK(rel(fv.sp, fv.c) < 1e-9);
      CHECK(std::abs(fv.c * fv.c - 1.0 - fv.s * fv.cp) / (1 + std::abs(fv.c * fv.c)) < 1e-9);
    }
}

TEST_CASE("sampled integration against an independent fixed-step solver") {
  Potential pot = Potential::sampled(bump(17, 4.0));
  for (double lam : {-20.0, 0.0, 9.0, 150.0}) {
    auto fv = fundamental_values(pot, lam);
    auto [c, cp] = rk4(pot, lam, 1, 0, 40000);
    auto [s, sp] = rk4(pot, lam, 0, 1, 40000);
    CHECK(std::abs(fv.c.real() - c) < 1e-8 * (1 + std::abs(c)));
    CHECK(std::abs(fv.cp.real() - cp) < 1e-8 * (1 + std::abs(cp)));
    CHECK(std::abs(fv.s.real() - s) < 1e-8 * (1 + std::abs(s)));
    CHECK(std::abs(fv.sp.real() - sp) < 1e-8 * (1 + std::abs(sp)));
  }
}

TEST_CASE("flat sampled data reproduce the constant closed form up to large lambda") {
  Potential flat = Potential::sampled(std::vector<double>(20, -2.0), 1.0);
  Potential cst = Potential::constant(-2.0, 1.0);
  for (double lam : {-50.0, 3.0, 1e4, 1e6}) {
    auto a = fundamental_values(flat, lam), b = fundamental_values(cst, lam);
    double k = std::sqrt(std::abs(lam)) + 1;
    CHECK(rel(a.c, b.c) < 1e-9);
    CHECK(rel(a.s * k, b.s * k) < 1e-9);
    CHECK(rel(a.cp / k, b.cp / k) < 1e-9);
  }
}

TEST_CASE("potential validation") {
  std::vector<double> v(20, 0.0);
  v[2] = 1.0;
  CHECK_THROWS_WITH(Potential::sampled(v), Catch::Matchers::ContainsSubstring("hypothesis violated"));
  CHECK_THROWS_AS(Potential::sampled(std::vector<double>(5, 0.0)), Error);
  auto bad = Potential::sampled_unchecked(v);
  CHECK_FALSE(bad.symmetric());
  CharEvaluator ev(from_code("(())"), bad);
  CHECK_THROWS_WITH(ev.fast(2.0), Catch::Matchers::ContainsSubstring("hypothesis violated"));
}

TEST_CASE("characteristic matrices of a segment") {
  auto fv = fundamental_values(Potential::zero(1.0), 7.0);
  auto m = assemble_phi_matrices(from_code("(())"), fv);
  CHECK((m.D - mat({{1, 0}, {fv.cp, fv.sp}})).norm() == 0);
  CHECK((m.N - mat({{0, 1}, {fv.cp, fv.sp}})).norm() == 0);
}

TEST_CASE("characteristic matrices of the two-edge star") {
  auto fv = fundamental_values(Potential::constant(1.5, 1.0), 4.0);
  auto t = from_edge_list(3, 0, {{0, 1}, {0, 2}});
  auto m = assemble_phi_matrices(t, fv);
  auto c = fv.cp, sp = fv.sp;
  CHECK((m.D - mat({{1, 0, 0, 0}, {0, 1, 0, 0}, {c, 0, sp, 0}, {0, c, 0, sp}})).norm() == 0);
  CHECK((m.N - mat({{1, -1, 0, 0}, {0, 0, 1, 1}, {c, 0, sp, 0}, {0, c, 0, sp}})).norm() == 0);
  auto v = CharEvaluator(t, Potential::constant(1.5, 1.0)).matrix(4.0);
  CHECK(rel(v.phi_D, sp * sp) < 1e-12);
  CHECK(rel(v.phi_N, -2.0 * c * sp) < 1e-12);
}

TEST_CASE("characteristic matrices of the two-edge chain") {
  auto fv = fundamental_values(Potential::zero(1.0), 3.0);
  auto t = from_edge_list(3, 0, {{0, 1}, {1, 2}});
  auto m = assemble_phi_matrices(t, fv);
  auto [c, s, cp, sp] = fv;
  CHECK((m.D - mat({{1, 0, 0, 0}, {c, -1, s, 0}, {cp, 0, sp, -1}, {0, cp, 0, sp}})).norm() == 0);
  CHECK((m.N - mat({{0, 0, 1, 0}, {c, -1, s, 0}, {cp, 0, sp, -1}, {0, cp, 0, sp}})).norm() == 0);
  // raw determinant carries the opposite sign of psi_hat(c); the evaluator normalises it
  CHECK(rel(m.D.determinant(), -(sp * sp + s * cp)) < 1e-12);
  CharEvaluator ev(t, Potential::zero(1.0));
  auto v = ev.matrix(3.0);
  CHECK(rel(v.phi_D, sp * sp + s * cp) < 1e-12);
  CHECK(rel(v.phi_N, -cp * (c + sp)) < 1e-12);
}

TEST_CASE("characteristic matrices of a five-vertex tree") {
  auto fv = fundamental_values(Potential::zero(1.0), 5.0);
  auto t = from_edge_list(5, 0, {{0, 1}, {0, 2}, {0, 3}, {3, 4}});
  auto m = assemble_phi_matrices(t, fv);
  auto [c, s, cp, sp] = fv;
  auto tail = [&](Eigen::MatrixXcd head) {
    Eigen::MatrixXcd full(8, 8);
    full << head, mat({{cp, 0, 0, 0, sp, 0, 0, 0},
                       {0, cp, 0, 0, 0, sp, 0, 0},
                       {0, 0, c, -1, 0, 0, s, 0},
                       {0, 0, cp, 0, 0, 0, sp, -1},
                       {0, 0, 0, cp, 0, 0, 0, sp}});
    return full;
  };
  auto D = tail(mat({{1, 0, 0, 0, 0, 0, 0, 0}, {0, 1, 0, 0, 0, 0, 0, 0}, {0, 0, 1, 0, 0, 0, 0, 0}}));
  auto N = tail(mat({{1, -1, 0, 0, 0, 0, 0, 0}, {1, 0, -1, 0, 0, 0, 0, 0}, {0, 0, 0, 0, 1, 1, 1, 0}}));
  CHECK((m.D - D).norm() == 0);
  CHECK((m.N - N).norm() == 0);
}

TEST_CASE("matrix and closed-form routes agree") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> lam(0.0, 200.0);
  for (int p = 2; p <= 5; ++p)
    for (const auto& t : enumerate_rooted_trees(p)) {
      CharEvaluator ev(t, Potential::zero(1.0));
      for (int i = 0; i < 50; ++i) {
        double l = lam(rng);
        auto a = ev.matrix(l), b = ev.fast(l);
        CHECK(std::abs(a.phi_D - b.phi_D) <= 1e-8 * (1 + std::abs(b.phi_D)));
        CHECK(std::abs(a.phi_N - b.phi_N) <= 1e-8 * (1 + std::abs(b.phi_N)));
      }
    }
}

TEST_CASE("closed forms are finite where s vanishes") {
  auto t = from_code("((())())");
  CharEvaluator ev(t, Potential::zero(1.0));
  auto v = ev.fast(pi * pi);
  CHECK(std::isfinite(v.phi_N.real()));
  auto near = ev.fast(pi * pi * (1 + 1e-7));
  CHECK(std::abs(v.phi_N - near.phi_N) < 1e-4);
  // cos(sqrt(lambda)) = 1 makes phi_N vanish for every tree
  for (const auto& u : enumerate_rooted_trees(6))
    CHECK(std::abs(CharEvaluator(u, Potential::zero(1.0)).fast(4 * pi * pi).phi_N) < 1e-9);
}

TEST_CASE("segment and star closed forms") {
  CharEvaluator seg(from_code("(())"), Potential::zero(1.0));
  CharEvaluator star(from_code("(()()())"), Potential::zero(1.0));
  for (double l : {0.3, 2.0, 11.0, 50.0}) {
    CHECK(rel(seg.eval(l).phi_D, -std::cos(std::sqrt(l))) < 1e-12);
    CHECK(rel(star.eval(l).phi_D, -std::pow(std::cos(std::sqrt(l)), 3)) < 1e-12);
  }
}

TEST_CASE("segment Dirichlet eigenvalues") {
  auto ev = eigenvalues_in_interval(from_code("(())"), Potential::zero(1.0), Problem::D, 0, 30);
  REQUIRE(ev.size() == 2);
  CHECK(std::abs(ev[0].lambda - pi * pi / 4) < 1e-8);
  CHECK(std::abs(ev[1].lambda - 9 * pi * pi / 4) < 1e-8);
  CHECK(ev[0].multiplicity == 1);
  CHECK(ev[0].certified);
}

TEST_CASE("multiplicities come from the polynomial") {
  auto ev = eigenvalues_in_interval(from_code("(()()())"), Potential::zero(1.0), Problem::D, 0, 100);
  REQUIRE(ev.size() == 3);
  for (size_t n = 0; n < ev.size(); ++n) {
    CHECK(std::abs(ev[n].lambda - std::pow(pi / 2 + pi * n, 2)) < 1e-8);
    CHECK(ev[n].multiplicity == 3);
  }
  CharEvaluator star(from_code("(()()())"), Potential::zero(1.0));
  CHECK(exact_multiplicity(star, Problem::D, pi * pi / 4) == 3);
  CHECK(exact_multiplicity(star, Problem::N, pi * pi / 4) == 2);
  CHECK(exact_multiplicity(star, Problem::D, 3.0) == 0);
}

TEST_CASE("eigenvalues against an independent count of zeros of psi(c)") {
  // zero potential: N eigenvalues in (0, L) are the lambda with c = z_r or c' = 0
  auto t = from_code("((()())())");
  auto ev = eigenvalues_in_interval(t, Potential::zero(1.0), Problem::N, 1e-6, 400);
  int total = 0;
  for (const auto& e : ev) {
    total += e.multiplicity;
    CHECK(std::abs(CharEvaluator(t, Potential::zero(1.0)).fast(e.lambda).phi_N) < 1e-7);
  }
  // each period of sqrt(lambda) contributes deg(psi) - 2 level crossings twice plus two zeros of c'
  // sqrt(400) = 20 covers 3 full periods and part of a fourth; count them directly
  Poly q = divexact(psi(t), Poly::from_ints({-1, 0, 1}));
  int expected = 0;
  const int fine = 2000000;
  double prev = q.eval(1.0) * 0.0;
  for (int i = 1; i <= fine; ++i) {
    double k = 20.0 * i / fine;
    double v = q.eval(std::cos(k)) * (-k * std::sin(k));
    if (i > 1 && ((v < 0) != (prev < 0))) ++expected;
    prev = v;
  }
  int sign_changes = 0;
  for (const auto& e : ev) sign_changes += e.multiplicity % 2;
  CHECK(sign_changes == expected);
  CHECK(total >= expected);
}

TEST_CASE("symmetric sampled potential eigenvalues are certified") {
  Potential pot = Potential::sampled(bump(65, 6.0));
  CharEvaluator ev(from_code("(()()())"), pot);
  auto d = eigenvalues_in_interval(ev, Problem::D, -20, 60);
  REQUIRE_FALSE(d.empty());
  for (const auto& e : d) {
    CHECK(e.certified);
    CHECK(e.multiplicity == 3);
    CHECK(std::abs(fundamental_values(pot, e.lambda).c) < 1e-9);
  }
}

TEST_CASE("asymmetric potentials use the determinant scan") {
  std::vector<double> v(40);
  for (int i = 0; i < 40; ++i) v[i] = 4.0 * i / 39.0;
  Potential pot = Potential::sampled_unchecked(v);
  CharEvaluator ev(from_code("(())"), pot);
  auto d = eigenvalues_in_interval(ev, Problem::D, 0, 60);
  REQUIRE(d.size() == 2);
  // pendant root with Dirichlet: zeros of s'(ell)
  for (const auto& e : d) {
    CHECK_FALSE(e.certified);
    CHECK(std::abs(fundamental_values(pot, e.lambda).sp) < 1e-8);
  }
}

TEST_CASE("reduction identities") {
  std::vector<Potential> pots{Potential::zero(1.0), Potential::constant(-3, 1.0)};
  for (const auto& pot : pots)
    for (int p = 2; p <= 6; ++p)
      for (const auto& t : enumerate_rooted_trees(p))
        for (cplx lam : {cplx(0.7), cplx(13.1), cplx(-4.2), cplx(30, 2)}) {
          auto r = reduction_identities_check(t, pot, lam);
          CHECK(r.phindk < 1e-9);
          CHECK(r.lawpf_N < 1e-9);
          CHECK(r.lawpf_D < 1e-9);
          CHECK(phi_D_block_residual(t, pot, lam) < 1e-9);
        }
}

TEST_CASE("a branch joined to a single vertex reduces trivially") {
  // d0 = 1: the second group is a lone vertex and the split must still hold
  auto r = reduction_identities_check(from_code("((()()))"), Potential::zero(1.0), 6.0);
  CHECK(r.lawpf_N < 1e-12);
  CHECK(r.lawpf_D < 1e-12);
}

TEST_CASE("closed forms approach their large-lambda limits at rate 1/sqrt(lambda)") {
  auto t = from_code("((())())");
  Potential pot = Potential::constant(-4.0, 1.0);
  CharEvaluator ev(t, pot);
  std::vector<double> scaled;
  for (int n : {16, 32, 64, 128, 256}) {
    double k = (std::acos(0.3) + 2 * pi * n);
    double lam = k * k;
    double err = std::abs(ev.fast(lam).phi_D.real() - ev.psi_hat().eval(std::cos(k)));
    scaled.push_back(err * k);
  }
  double lo = *std::min_element(scaled.begin(), scaled.end());
  double hi = *std::max_element(scaled.begin(), scaled.end());
  CHECK(hi / lo < 3.0);
  CHECK(hi < 50.0);
}
