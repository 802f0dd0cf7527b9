#include "qtree/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include "qtree/error.hpp"
#include "qtree/pencil.hpp"

namespace qtree {

namespace {

std::vector<double> to_doubles(const Poly& p) {
  std::vector<double> v;
  for (const auto& c : p.coeffs()) v.push_back(c.convert_to<double>());
  return v;
}

cplx horner(const std::vector<double>& c, cplx x) {
  cplx r = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * x + *it;
  return r;
}

double horner(const std::vector<double>& c, double x) {
  double r = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * x + *it;
  return r;
}

cplx real_if_expected(const Potential& pot, cplx lambda, cplx v) {
  if (lambda.imag() != 0.0) return v;
  if (std::abs(v.imag()) > 1e-10 * (1.0 + std::abs(v)))
    throw Error("not_real", "characteristic function not real for a real spectral parameter");
  (void)pot;
  return {v.real(), 0.0};
}

double signed_sq(double u) { return u * std::abs(u); }
double signed_sqrt(double l) { return l >= 0 ? std::sqrt(l) : -std::sqrt(-l); }

} // namespace

CharMatrices assemble_phi_matrices(const RootedTree& t, const FundamentalValues& fv) {
  if (t.p() < 2) throw Error("single_vertex", "single vertex");
  const int g = t.edge_count();
  CharMatrices m{Eigen::MatrixXcd::Zero(2 * g, 2 * g), Eigen::MatrixXcd::Zero(2 * g, 2 * g)};
  auto a = [](int e) { return e; };
  auto b = [g](int e) { return g + e; };
  int row = 0;
  for (int v : t.bfs()) {
    const auto& kids = t.children(v);
    if (v == t.root()) {
      const int d0 = static_cast<int>(kids.size());
      for (int k = 0; k < d0; ++k) m.D(row + k, a(t.incoming_edge(kids[k]))) = 1.0;
      if (d0 == 1) {
        m.N(row, b(t.incoming_edge(kids[0]))) = 1.0;
      } else {
        const int e0 = t.incoming_edge(kids[0]);
        for (int k = 1; k < d0; ++k) {
          m.N(row + k - 1, a(e0)) = 1.0;
          m.N(row + k - 1, a(t.incoming_edge(kids[k]))) = -1.0;
        }
        for (int k = 0; k < d0; ++k) m.N(row + d0 - 1, b(t.incoming_edge(kids[k]))) = 1.0;
      }
      row += d0;
      continue;
    }
    const int j = t.incoming_edge(v);
    if (kids.empty()) {
      m.D(row, a(j)) = fv.cp;
      m.D(row, b(j)) = fv.sp;
      m.N.row(row) = m.D.row(row);
      ++row;
      continue;
    }
    for (int k : kids) {
      m.D(row, a(j)) = fv.c;
      m.D(row, b(j)) = fv.s;
      m.D(row, a(t.incoming_edge(k))) = -1.0;
      m.N.row(row) = m.D.row(row);
      ++row;
    }
    m.D(row, a(j)) = fv.cp;
    m.D(row, b(j)) = fv.sp;
    for (int k : kids) m.D(row, b(t.incoming_edge(k))) = -1.0;
    m.N.row(row) = m.D.row(row);
    ++row;
  }
  return m;
}

CharMatrices assemble_phi_matrices(const RootedTree& t, const Potential& pot, cplx lambda) {
  return assemble_phi_matrices(t, fundamental_values(pot, lambda));
}

CharEvaluator::CharEvaluator(const RootedTree& t, const Potential& pot) : tree_(t), pot_(pot) {
  if (t.p() < 2) return;
  psi_ = qtree::psi(t);
  psi_hat_ = qtree::psi_hat(t);
  psi0_ = divexact(psi_, Poly::from_ints({-1, 0, 1}));
  psi_hat_d_ = to_doubles(psi_hat_);
  psi0_d_ = to_doubles(psi0_);
  FundamentalValues degenerate{1.0, 0.0, 0.0, 1.0};
  auto m = assemble_phi_matrices(t, degenerate);
  double det = m.D.partialPivLu().determinant().real();
  int s_det = det > 0 ? 1 : -1;
  int s_hat = psi_hat_.eval(Rational(1)) > 0 ? 1 : -1;
  sign_ = s_det * s_hat;
}

CharValues CharEvaluator::matrix(cplx lambda) const {
  if (tree_.p() < 2) return {1.0, 0.0};
  auto m = assemble_phi_matrices(tree_, pot_, lambda);
  cplx d = double(sign_) * m.D.partialPivLu().determinant();
  cplx n = double(sign_) * m.N.partialPivLu().determinant();
  return {real_if_expected(pot_, lambda, d), real_if_expected(pot_, lambda, n)};
}

CharValues CharEvaluator::fast(const FundamentalValues& fv) const {
  if (tree_.p() < 2) return {1.0, 0.0};
  // evaluating through psi0 keeps phi_N finite where s vanishes
  return {horner(psi_hat_d_, fv.c), fv.cp * horner(psi0_d_, fv.c)};
}

CharValues CharEvaluator::fast(cplx lambda) const {
  if (!fast_available()) throw Error("hypothesis", "hypothesis violated: potential is not symmetric");
  CharValues v = fast(fundamental_values(pot_, lambda));
  return {real_if_expected(pot_, lambda, v.phi_D), real_if_expected(pot_, lambda, v.phi_N)};
}

CharValues char_functions(const RootedTree& t, const Potential& pot, cplx lambda) {
  return CharEvaluator(t, pot).matrix(lambda);
}

CharValues char_functions_fast(const RootedTree& t, const Potential& pot, cplx lambda) {
  return CharEvaluator(t, pot).fast(lambda);
}

// ---------------------------------------------------------------------------
// eigenvalue search

namespace {

struct ExactRoot {
  double z = 0;
  int multiplicity = 0;
  bool at_unit = false;  // zero coming from c' (only for problem N)
};

// Closest root of the target polynomial to z, via squarefree factors.
bool nearest_root(const Poly& target, double z, ExactRoot& out) {
  auto parts = squarefree_decomposition(target);
  double best = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < parts.size(); ++i) {
    if (parts[i].degree() < 1) continue;
    auto g = to_doubles(parts[i]);
    auto dg = to_doubles(parts[i].derivative());
    double x = z;
    for (int it = 0; it < 60; ++it) {
      double d = horner(dg, x);
      if (d == 0) break;
      double step = horner(g, x) / d;
      x -= step;
      if (std::abs(step) < 1e-16 * (1 + std::abs(x))) break;
    }
    double dist = std::abs(x - z);
    if (std::abs(horner(g, x)) < 1e-9 && dist < best) {
      best = dist;
      out.z = x;
      out.multiplicity = static_cast<int>(i) + 1;
    }
  }
  return best < 1e-3;
}

} // namespace

int root_multiplicity_near(const Poly& target, double z, double tol) {
  if (target.degree() < 1) return 0;
  ExactRoot r;
  if (!nearest_root(target, z, r) || std::abs(r.z - z) > tol) return 0;
  return r.multiplicity;
}

int exact_multiplicity(const CharEvaluator& ev, Problem which, double lambda) {
  if (!ev.fast_available()) throw Error("hypothesis", "hypothesis violated: potential is not symmetric");
  if (ev.tree().p() < 2) return 0;
  auto fv = fundamental_values(ev.potential(), lambda);
  double z = fv.c.real();
  if (which == Problem::N && std::abs(fv.cp) < 1e-9 * (1 + std::sqrt(std::abs(lambda)))) return 1;
  const Poly& target = which == Problem::D ? ev.psi_hat() : ev.psi0();
  ExactRoot r;
  if (!nearest_root(target, z, r)) return 0;
  return std::abs(r.z - z) < 1e-7 ? r.multiplicity : 0;
}

namespace {

struct GridPt {
  double u, lambda, c, cp;
};

// Grid in u = signed_sqrt(lambda - shift), refined until c moves by at most
// 0.1 per cell inside the bands and every sign change of c' is pinned
// between two points with |c| close to 1.
std::vector<GridPt> refined_grid(const Potential& pot, double a, double b) {
  const double shift = std::min(0.0, pot.min_value());
  auto make = [&](double u) {
    double lam = signed_sq(u) + shift;
    auto fv = fundamental_values(pot, lam);
    return GridPt{u, lam, fv.c.real(), fv.cp.real()};
  };
  const double du = std::numbers::pi / (16.0 * pot.ell());
  const double ua = signed_sqrt(a - shift), ub = signed_sqrt(b - shift);
  const int steps = std::max(2, static_cast<int>(std::ceil((ub - ua) / du)));
  std::vector<GridPt> base;
  for (int i = 0; i <= steps; ++i) {
    GridPt g = make(i == steps ? ub : ua + (ub - ua) * i / steps);
    if (i == 0) g.lambda = a;
    if (i == steps) g.lambda = b;
    base.push_back(g);
  }
  auto needs_split = [](const GridPt& l, const GridPt& r) {
    if (!(r.u - l.u > 1e-12 * (1 + std::abs(l.u)))) return false;
    bool same_gap = (l.c > 1 && r.c > 1) || (l.c < -1 && r.c < -1);
    if (!same_gap && std::abs(r.c - l.c) > 0.1) return true;
    bool cp_flip = l.cp != 0 && r.cp != 0 && (l.cp < 0) != (r.cp < 0);
    return cp_flip && std::max(1 - std::abs(l.c), 1 - std::abs(r.c)) > 1e-3;
  };
  std::vector<GridPt> out{base.front()};
  for (size_t i = 1; i < base.size(); ++i) {
    std::vector<GridPt> stack{base[i]};
    while (!stack.empty()) {
      const GridPt& l = out.back();
      if (needs_split(l, stack.back())) {
        GridPt m = make(0.5 * (l.u + stack.back().u));
        stack.push_back(m);
      } else {
        out.push_back(stack.back());
        stack.pop_back();
      }
    }
  }
  return out;
}

struct RealRoot {
  double z;
  int multiplicity;
};

// Real roots of an integer polynomial whose roots are all real, from the
// companion matrix of each squarefree factor, polished by Newton.
std::vector<RealRoot> real_roots(const Poly& target) {
  std::vector<RealRoot> out;
  auto parts = squarefree_decomposition(target);
  for (size_t i = 0; i < parts.size(); ++i) {
    const int n = parts[i].degree();
    if (n < 1) continue;
    auto g = to_doubles(parts[i]);
    auto dg = to_doubles(parts[i].derivative());
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k < n; ++k) comp(0, k) = -g[n - 1 - k] / g[n];
    for (int k = 1; k < n; ++k) comp(k, k - 1) = 1.0;
    Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
    for (int k = 0; k < n; ++k) {
      double x = es.eigenvalues()[k].real();
      if (std::abs(es.eigenvalues()[k].imag()) > 1e-6) continue;
      for (int it = 0; it < 50; ++it) {
        double d = horner(dg, x);
        if (d == 0) break;
        double step = horner(g, x) / d;
        x -= step;
        if (std::abs(step) < 1e-17 * (1 + std::abs(x))) break;
      }
      out.push_back({x, static_cast<int>(i) + 1});
    }
  }
  std::sort(out.begin(), out.end(), [](auto& x, auto& y) { return x.z < y.z; });
  return out;
}

std::vector<Eigenvalue> fast_scan(const CharEvaluator& ev, Problem which, double a, double b) {
  const Potential& pot = ev.potential();
  const double shift = std::min(0.0, pot.min_value());
  auto grid = refined_grid(pot, a, b);
  std::vector<Eigenvalue> out;
  auto solve = [&](auto h, const GridPt& l, const GridPt& r, double hl, double hr) {
    auto hu = [&](double u) { return h(fundamental_values(pot, signed_sq(u) + shift)); };
    boost::uintmax_t iters = 200;
    auto res = boost::math::tools::toms748_solve(hu, l.u, r.u, hl, hr,
                                                 boost::math::tools::eps_tolerance<double>(52), iters);
    return signed_sq(0.5 * (res.first + res.second)) + shift;
  };
  // level crossings c(lambda) = z for every root z of psi_hat (D) or psi0 (N)
  const Poly& target = which == Problem::D ? ev.psi_hat() : ev.psi0();
  for (const auto& root : real_roots(target)) {
    auto h = [&](const FundamentalValues& fv) { return fv.c.real() - root.z; };
    for (size_t i = 0; i < grid.size(); ++i) {
      double hl = grid[i].c - root.z;
      if (hl == 0) { out.push_back({grid[i].lambda, root.multiplicity, true}); continue; }
      if (i + 1 == grid.size()) break;
      double hr = grid[i + 1].c - root.z;
      if (hr != 0 && (hl < 0) != (hr < 0))
        out.push_back({solve(h, grid[i], grid[i + 1], hl, hr), root.multiplicity, true});
    }
  }
  if (which == Problem::N) {
    auto h = [](const FundamentalValues& fv) { return fv.cp.real(); };
    for (size_t i = 0; i < grid.size(); ++i) {
      if (grid[i].cp == 0) { out.push_back({grid[i].lambda, 1, true}); continue; }
      if (i + 1 == grid.size()) break;
      if (grid[i + 1].cp != 0 && (grid[i].cp < 0) != (grid[i + 1].cp < 0))
        out.push_back({solve(h, grid[i], grid[i + 1], grid[i].cp, grid[i + 1].cp), 1, true});
    }
  }
  return out;
}

// Sign changes and touches of a real characteristic function; used when
// the closed forms are unavailable.
std::vector<Eigenvalue> generic_scan(const CharEvaluator& ev, Problem which, double a, double b,
                                     double tol) {
  const Potential& pot = ev.potential();
  auto f = [&](double lam) {
    CharValues v = ev.eval(cplx(lam, 0.0));
    return (which == Problem::D ? v.phi_D : v.phi_N).real();
  };
  auto grid = refined_grid(pot, a, b);
  const size_t n = grid.size();
  std::vector<double> fs(n);
  for (size_t i = 0; i < n; ++i) fs[i] = f(grid[i].lambda);
  std::vector<Eigenvalue> out;
  for (size_t i = 0; i < n; ++i) {
    if (fs[i] == 0) out.push_back({grid[i].lambda, 1, false});
    if (i + 1 < n && fs[i] != 0 && fs[i + 1] != 0 && (fs[i] < 0) != (fs[i + 1] < 0)) {
      boost::uintmax_t iters = 200;
      auto r = boost::math::tools::toms748_solve(f, grid[i].lambda, grid[i + 1].lambda, fs[i], fs[i + 1],
                                                 boost::math::tools::eps_tolerance<double>(52), iters);
      out.push_back({0.5 * (r.first + r.second), 1, false});
    }
  }
  for (size_t i = 1; i + 1 < n; ++i) {
    double l = std::abs(fs[i - 1]), m = std::abs(fs[i]), r = std::abs(fs[i + 1]);
    if (fs[i - 1] == 0 || fs[i] == 0 || fs[i + 1] == 0) continue;
    if ((fs[i - 1] < 0) != (fs[i] < 0) || (fs[i] < 0) != (fs[i + 1] < 0)) continue;
    if (!(m <= l && m <= r)) continue;
    auto absf = [&](double lam) { return std::abs(f(lam)); };
    auto mn = boost::math::tools::brent_find_minima(absf, grid[i - 1].lambda, grid[i + 1].lambda, 40);
    if (mn.second <= std::max(tol, 1e-9) * std::max(l, r)) out.push_back({mn.first, 2, false});
  }
  return out;
}

} // namespace

std::vector<double> spectral_grid(const Potential& pot, double a, double b) {
  if (!(a < b)) throw Error("bad_interval", "interval must satisfy a < b");
  std::vector<double> out;
  for (const auto& g : refined_grid(pot, a, b)) out.push_back(g.lambda);
  return out;
}

std::vector<Eigenvalue> eigenvalues_in_interval(const CharEvaluator& ev, Problem which,
                                                double a, double b, double tol) {
  if (!(a < b)) throw Error("bad_interval", "interval must satisfy a < b");
  if (!(tol > 0)) throw Error("bad_tolerance", "tolerance must be positive");
  std::vector<Eigenvalue> out;
  if (ev.tree().p() < 2) return out;
  out = ev.fast_available() ? fast_scan(ev, which, a, b) : generic_scan(ev, which, a, b, tol);
  std::sort(out.begin(), out.end(), [](auto& x, auto& y) { return x.lambda < y.lambda; });
  std::vector<Eigenvalue> merged;
  for (const auto& e : out) {
    if (!merged.empty() && std::abs(merged.back().lambda - e.lambda) <= 1e-8 * (1 + std::abs(e.lambda))) {
      merged.back().multiplicity = std::max(merged.back().multiplicity, e.multiplicity);
      continue;
    }
    merged.push_back(e);
  }
  std::vector<Eigenvalue> inside;
  const double slack = 1e-12 * (1 + std::max(std::abs(a), std::abs(b)));
  for (const auto& e : merged)
    if (e.lambda >= a - slack && e.lambda <= b + slack) inside.push_back(e);
  return inside;
}

std::vector<Eigenvalue> eigenvalues_in_interval(const RootedTree& t, const Potential& pot,
                                                Problem which, double a, double b, double tol) {
  return eigenvalues_in_interval(CharEvaluator(t, pot), which, a, b, tol);
}

// ---------------------------------------------------------------------------
// identities

ReductionReport reduction_identities_check(const RootedTree& t, const Potential& pot, cplx lambda) {
  if (t.p() < 2) throw Error("single_vertex", "single vertex");
  ReductionReport rep;
  CharValues whole = CharEvaluator(t, pot).matrix(lambda);

  auto branches = root_subtrees(t);
  std::vector<CharValues> parts;
  for (const auto& b : branches) parts.push_back(CharEvaluator(b.full, pot).matrix(lambda));
  cplx sum = 0;
  double scale = 1.0 + std::abs(whole.phi_N);
  for (size_t k = 0; k < parts.size(); ++k) {
    cplx term = parts[k].phi_N;
    for (size_t j = 0; j < parts.size(); ++j)
      if (j != k) term *= parts[j].phi_D;
    sum += term;
    scale += std::abs(term);
  }
  rep.phindk = std::abs(whole.phi_N - sum) / scale;

  // T1 = root with its first branch, T2 = root with the remaining ones
  std::vector<RootedTree> rest;
  for (size_t k = 1; k < branches.size(); ++k) rest.push_back(branches[k].hat);
  RootedTree t1 = branches[0].full;
  RootedTree t2 = join_at_root(rest);
  CharValues v1 = CharEvaluator(t1, pot).matrix(lambda);
  CharValues v2 = CharEvaluator(t2, pot).matrix(lambda);
  cplx n_rhs = v1.phi_D * v2.phi_N + v1.phi_N * v2.phi_D;
  cplx d_rhs = v1.phi_D * v2.phi_D;
  rep.lawpf_N = std::abs(whole.phi_N - n_rhs) /
                (1.0 + std::abs(whole.phi_N) + std::abs(v1.phi_D * v2.phi_N) + std::abs(v1.phi_N * v2.phi_D));
  rep.lawpf_D = std::abs(whole.phi_D - d_rhs) / (1.0 + std::abs(whole.phi_D) + std::abs(d_rhs));
  return rep;
}

double phi_D_block_residual(const RootedTree& t, const Potential& pot, cplx lambda) {
  auto m = assemble_phi_matrices(t, pot, lambda);
  const int d0 = t.degree(t.root());
  const int n = static_cast<int>(m.D.rows());
  double structure = (m.D.topLeftCorner(d0, d0) - Eigen::MatrixXcd::Identity(d0, d0)).cwiseAbs().maxCoeff();
  if (n > d0) structure = std::max(structure, m.D.topRightCorner(d0, n - d0).cwiseAbs().maxCoeff());
  cplx full = m.D.partialPivLu().determinant();
  cplx block = n > d0 ? m.D.bottomRightCorner(n - d0, n - d0).partialPivLu().determinant() : cplx(1.0);
  return std::max(structure, std::abs(full - block) / (1.0 + std::abs(full)));
}

} // namespace qtree
