#include "qtree/checks.hpp"

#include <algorithm>
#include <cmath>

#include "qtree/pencil.hpp"
#include "qtree/scattering.hpp"
#include "qtree/spectral.hpp"

namespace qtree {

namespace {

std::vector<RootedTree> trees_up_to(int pmin, int pmax) {
  std::vector<RootedTree> out;
  for (int p = pmin; p <= pmax; ++p)
    for (auto& t : enumerate_rooted_trees(p)) out.push_back(std::move(t));
  return out;
}

// symmetric bump on [0, ell]
Potential sample_potential(double ell) {
  std::vector<double> v(65);
  for (size_t i = 0; i < v.size(); ++i) {
    double x = ell * double(i) / double(v.size() - 1);
    v[i] = 3.0 * std::cos(2.0 * M_PI * x / ell) - 1.0;
  }
  return Potential::sampled(v, ell);
}

std::vector<Potential> potentials() {
  return {Potential::zero(1.0), Potential::constant(-4.0, 1.0), Potential::constant(2.5, 1.3),
          sample_potential(1.0)};
}

// lambda values away from the real axis too, so complex arithmetic is exercised
std::vector<cplx> lambdas() {
  return {cplx(-7.3, 0), cplx(0.37, 0), cplx(5.1, 0), cplx(23.9, 0), cplx(61.2, 0),
          cplx(144.7, 0), cplx(12.0, 3.0), cplx(-2.0, 9.5)};
}

struct Acc {
  SuiteResult r;
  Acc(std::string name, double tol) { r.name = std::move(name); r.tolerance = tol; }
  void add(double res) {
    ++r.samples;
    if (!(res <= r.max_residual)) r.max_residual = std::isnan(res) ? INFINITY : std::max(r.max_residual, res);
  }
  SuiteResult done(int min_samples = 20) {
    r.pass = r.samples >= min_samples && r.max_residual <= r.tolerance;
    if (r.samples < min_samples) r.note = "too few samples";
    return r;
  }
};

SuiteResult wronskian() {
  Acc a("wronskian", 1e-10);
  for (const auto& pot : potentials())
    for (cplx lam : lambdas()) {
      auto fv = fundamental_values(pot, lam);
      double scale = 1.0 + std::abs(fv.c * fv.sp) + std::abs(fv.cp * fv.s);
      a.add(std::abs(fv.wronskian() - 1.0) / scale);
    }
  return a.done();
}

SuiteResult lagr() {
  Acc a("lagr", 1e-9);
  for (const auto& pot : potentials())
    for (cplx lam : lambdas()) {
      auto fv = fundamental_values(pot, lam);
      double r1 = std::abs(fv.sp - fv.c) / (1.0 + std::abs(fv.c));
      double r2 = std::abs(fv.c * fv.c - 1.0 - fv.s * fv.cp) /
                  (1.0 + std::abs(fv.c * fv.c) + std::abs(fv.s * fv.cp));
      a.add(std::max(r1, r2));
    }
  return a.done();
}

SuiteResult detf() {
  Acc a("detf", 0);
  for (const auto& t : trees_up_to(2, 7))
    for (int v = 0; v < t.p(); ++v) {
      if (v == t.root()) continue;
      RootedTree hat = subtree_at(t, v);
      RootedTree branch = join_at_root({hat});
      Poly lhs = pencil_det(branch, branch.degrees(), true);
      Poly rhs = hat.p() == 1 ? Poly::monomial(-1, 1) : psi(hat) - Poly::z() * psi_hat(hat);
      a.add(lhs == rhs ? 0.0 : 1.0);
    }
  return a.done();
}

SuiteResult product_exact() {
  Acc a("psi_hat product", 0);
  for (const auto& t : trees_up_to(2, 8)) {
    Poly prod = Poly::constant(1);
    for (const auto& b : root_subtrees(t)) prod = prod * psi_hat(b.full);
    a.add(prod == psi_hat(t) ? 0.0 : 1.0);
  }
  return a.done();
}

SuiteResult product_phi_D() {
  Acc a("phi_D product", 1e-9);
  auto trees = trees_up_to(2, 5);
  for (const auto& pot : potentials())
    for (size_t i = 0; i < trees.size(); i += 3)
      for (cplx lam : lambdas()) {
        cplx whole = CharEvaluator(trees[i], pot).matrix(lam).phi_D;
        cplx prod = 1.0;
        double scale = 1.0 + std::abs(whole);
        for (const auto& b : root_subtrees(trees[i])) prod *= CharEvaluator(b.full, pot).matrix(lam).phi_D;
        a.add(std::abs(whole - prod) / (scale + std::abs(prod)));
      }
  return a.done();
}

SuiteResult reductions(bool lawpf) {
  Acc a(lawpf ? "lawpf" : "phindk", 1e-9);
  auto trees = trees_up_to(2, 5);
  for (const auto& pot : potentials())
    for (size_t i = 0; i < trees.size(); i += 2)
      for (cplx lam : lambdas()) {
        auto rep = reduction_identities_check(trees[i], pot, lam);
        a.add(lawpf ? std::max(rep.lawpf_N, rep.lawpf_D) : rep.phindk);
      }
  return a.done();
}

SuiteResult emat() {
  Acc a("emat", 1e-9);
  auto trees = trees_up_to(2, 5);
  for (const auto& pot : potentials())
    for (size_t i = 0; i < trees.size(); i += 2)
      for (cplx lam : lambdas()) a.add(emat_residual(trees[i], pot, lam));
  return a.done();
}

SuiteResult block() {
  Acc a("phi_D block", 1e-9);
  auto trees = trees_up_to(2, 5);
  for (const auto& pot : potentials())
    for (size_t i = 0; i < trees.size(); i += 2)
      for (cplx lam : lambdas()) a.add(phi_D_block_residual(trees[i], pot, lam));
  return a.done();
}

SuiteResult unitarity() {
  Acc a("unitarity", 1e-10);
  auto trees = trees_up_to(2, 5);
  for (const auto& pot : potentials())
    for (size_t i = 0; i < trees.size(); i += 2) {
      CharEvaluator ev(trees[i], pot);
      for (double k : {0.7, 2.3, 4.4, 9.1, 15.6}) a.add(std::abs(std::abs(s_function(ev, k)) - 1.0));
    }
  return a.done();
}

SuiteResult fast_vs_matrix() {
  Acc a("fast vs matrix", 1e-8);
  auto trees = trees_up_to(2, 5);
  for (const auto& pot : potentials())
    for (const auto& t : trees) {
      CharEvaluator ev(t, pot);
      for (cplx lam : lambdas()) {
        auto m = ev.matrix(lam), f = ev.fast(lam);
        a.add(std::max(std::abs(m.phi_D - f.phi_D) / (1.0 + std::abs(f.phi_D)),
                       std::abs(m.phi_N - f.phi_N) / (1.0 + std::abs(f.phi_N))));
      }
    }
  return a.done();
}

SuiteResult psi_at_pm1() {
  Acc a("psi(+-1) = 0", 0);
  for (const auto& t : trees_up_to(2, 8)) {
    Poly q = psi(t);
    a.add(q.eval(Rational(1)) == 0 && q.eval(Rational(-1)) == 0 ? 0.0 : 1.0);
  }
  return a.done();
}

SuiteResult psi_hat_at_pm1() {
  Acc a("psi_hat(+-1) != 0", 0);
  for (const auto& t : trees_up_to(2, 8)) {
    Poly q = psi_hat(t);
    a.add(q.eval(Rational(1)) != 0 && q.eval(Rational(-1)) != 0 ? 0.0 : 1.0);
  }
  return a.done();
}

} // namespace

std::vector<SuiteResult> run_identity_suites() {
  return {wronskian(),     lagr(),          detf(),           product_exact(),
          product_phi_D(), reductions(false), reductions(true), emat(),
          block(),         unitarity(),     fast_vs_matrix(), psi_at_pm1(),
          psi_hat_at_pm1()};
}

} // namespace qtree
