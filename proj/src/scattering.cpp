#include "qtree/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "qtree/error.hpp"

namespace qtree {

namespace {
const cplx I(0.0, 1.0);
}

JostSample jost(const CharEvaluator& ev, cplx k) {
  CharValues v = ev.eval(k * k);
  return {k, v.phi_N + I * k * v.phi_D, v.phi_N - I * k * v.phi_D};
}

JostSample jost(const RootedTree& t, const Potential& pot, cplx k) {
  return jost(CharEvaluator(t, pot), k);
}

cplx s_function(const CharEvaluator& ev, cplx k) {
  JostSample j = jost(ev, k);
  if (!(std::abs(j.E_plus) > 1e-300)) throw Error("pole", "pole of S");
  return j.E_minus / j.E_plus;
}

cplx s_function(const RootedTree& t, const Potential& pot, cplx k) {
  return s_function(CharEvaluator(t, pot), k);
}

cplx ratio_from_s(const CharEvaluator& ev, cplx k) {
  cplx S = s_function(ev, k);
  return I * std::sin(k * ev.potential().ell()) * (1.0 + S) / (1.0 - S);
}

CommonSpectrum common_spectrum(const CharEvaluator& ev, double lo, double hi) {
  CommonSpectrum out;
  auto d = eigenvalues_in_interval(ev, Problem::D, lo, hi);
  auto n = eigenvalues_in_interval(ev, Problem::N, lo, hi);
  for (const auto& x : d) {
    if (!x.certified) out.certified = false;
    for (const auto& y : n) {
      if (std::abs(x.lambda - y.lambda) > 1e-7 * (1 + std::abs(x.lambda))) continue;
      if (!y.certified) out.certified = false;
      if (std::abs(x.lambda) <= 1e-9) break;
      out.eigenvalues.push_back(x.lambda);
      break;
    }
  }
  if (ev.potential().kind() == Potential::Kind::Sampled) out.certified = false;
  if (ev.fast_available() && lo <= 0 && hi >= 0)
    out.m = std::min(exact_multiplicity(ev, Problem::D, 0.0), exact_multiplicity(ev, Problem::N, 0.0));
  return out;
}

CommonSpectrum common_spectrum(const RootedTree& t, const Potential& pot, double lo, double hi) {
  return common_spectrum(CharEvaluator(t, pot), lo, hi);
}

double F_value(const CharEvaluator& ev, double k) {
  CharValues v = ev.eval(cplx(k * k, 0.0));
  return (std::sin(k * ev.potential().ell()) * v.phi_N / k).real();
}

double F_hat_value(const CharEvaluator& ev, double k) {
  return ev.eval(cplx(k * k, 0.0)).phi_D.real();
}

double sample_point(double z, int n, double ell) {
  return (std::acos(std::clamp(z, -1.0, 1.0)) + 2.0 * std::numbers::pi * n) / ell;
}

LimitEstimate extrapolate_limit(const std::vector<double>& h, const std::vector<double>& values,
                                const std::vector<int>& n_schedule, double tol) {
  const size_t J = values.size();
  if (J == 0 || h.size() != J || n_schedule.size() != J)
    throw Error("bad_schedule", "extrapolation needs matching samples");
  LimitEstimate est;
  // Neville tableau evaluated at h = 0; row j uses samples 0..j
  std::vector<double> row;
  for (size_t j = 0; j < J; ++j) {
    est.raw.push_back(values[j]);
    std::vector<double> next{values[j]};
    for (size_t m = 1; m <= j; ++m) {
      size_t i = j - m;
      double v = (h[j] * row[m - 1] - h[i] * next[m - 1]) / (h[j] - h[i]);
      next.push_back(v);
    }
    row = std::move(next);
    est.estimates.push_back(row.back());
    est.value = row.back();
    est.n_used = n_schedule[j];
    if (j >= 1 && std::abs(est.estimates[j] - est.estimates[j - 1]) <= tol) return est;
  }
  throw Error("not_converged", "limit not converged");
}

namespace {

LimitEstimate limit_at(const CharEvaluator& ev, double z, bool hat, const ScatterOptions& opt) {
  std::vector<double> h, v;
  std::vector<int> ns;
  const double ell = ev.potential().ell();
  for (int n : opt.n_schedule) {
    double k = sample_point(z, n, ell);
    h.push_back(1.0 / k);
    v.push_back(hat ? F_hat_value(ev, k) : F_value(ev, k));
    ns.push_back(n);
    if (v.size() >= 2) {
      try {
        return extrapolate_limit(h, v, ns, opt.tol);
      } catch (const Error&) {
        if (v.size() == opt.n_schedule.size()) throw;
      }
    }
  }
  throw Error("not_converged", "limit not converged");
}

} // namespace

ScatteringRecord scattering_info(const RootedTree& t, const Potential& pot, const ScatterOptions& opt) {
  if (t.p() < 2) throw Error("single_vertex", "single vertex");
  if (opt.n_schedule.size() < 2) throw Error("bad_schedule", "n schedule needs at least two values");
  if (!std::is_sorted(opt.n_schedule.begin(), opt.n_schedule.end()) || opt.n_schedule.front() < 1)
    throw Error("bad_schedule", "n schedule must be increasing positive integers");
  if (!(opt.tol > 0)) throw Error("bad_tolerance", "tolerance must be positive");
  CharEvaluator ev(t, pot);
  ScatteringRecord rec;
  rec.p = t.p();
  rec.ell = pot.ell();
  rec.potential = pot;
  rec.window = opt.window;
  const int p = t.p();
  for (int k = 0; k <= p; ++k) {
    auto e = limit_at(ev, double(k) / p, false, opt);
    rec.f.push_back(e.value);
    rec.n_used = std::max(rec.n_used, e.n_used);
  }
  for (int k = 0; k < p; ++k) {
    double z = double(k) / (p - 1);
    auto e = limit_at(ev, z, true, opt);
    rec.f_hat.push_back(e.value);
    rec.n_used = std::max(rec.n_used, e.n_used);
  }
  if (opt.window > 0) {
    auto cs = common_spectrum(ev, 0.0, opt.window);
    rec.m = cs.m;
    rec.common_eigenvalues = cs.eigenvalues;
  }
  return rec;
}

// ---------------------------------------------------------------------------

NegativeCount count_negative_eigenvalues(const RootedTree& t, const Potential& pot) {
  CharEvaluator ev(t, pot);
  if (!ev.fast_available()) throw Error("hypothesis", "hypothesis violated: potential is not symmetric");
  NegativeCount out;
  const double shift = std::min(0.0, pot.min_value());
  const double T = std::sqrt(-shift) + 1.0;
  const double eps = 1e-6 * T;
  out.t_max = T;
  // E(it) = phi_N - t phi_D with lambda = -t^2, scanned on the spectral grid
  // merged with one uniform in t (fine near the axis origin)
  auto e = [&](double lam) {
    CharValues v = ev.fast(cplx(lam, 0.0));
    return (v.phi_N - std::sqrt(-lam) * v.phi_D).real();
  };
  const int steps = 4000;
  std::vector<double> ls = spectral_grid(pot, -T * T, -eps * eps);
  for (int i = 0; i <= steps; ++i) {
    double t = eps + (T - eps) * i / steps;
    ls.push_back(-t * t);
  }
  std::sort(ls.begin(), ls.end());
  ls.erase(std::unique(ls.begin(), ls.end()), ls.end());
  const int n = static_cast<int>(ls.size()) - 1;
  std::vector<double> es(ls.size());
  for (size_t i = 0; i < ls.size(); ++i) es[i] = e(ls[i]);
  if (es.front() == 0 || es.back() == 0 || (es[0] < 0) != (es[1] < 0) || (es[n - 1] < 0) != (es[n] < 0))
    throw Error("endpoint", "root near axis endpoint - enlarge T");

  // a zero of E where psi0 and psi_hat share the root c(lambda) has the
  // order of that shared root; elsewhere it is simple (or double at a touch)
  const Poly shared = gcd(ev.psi0(), ev.psi_hat());
  auto order = [&](double lam, int fallback) {
    int m = root_multiplicity_near(shared, fundamental_values(pot, lam).c.real(), 1e-5);
    return m > 0 ? m : fallback;
  };
  for (int i = 0; i < n; ++i) {
    if (es[i] == 0) { out.via_jost += order(ls[i], 1); continue; }
    if ((es[i] < 0) != (es[i + 1] < 0) && es[i + 1] != 0) {
      boost::uintmax_t iters = 200;
      auto r = boost::math::tools::toms748_solve(e, ls[i], ls[i + 1], es[i], es[i + 1],
                                                 boost::math::tools::eps_tolerance<double>(52), iters);
      out.via_jost += order(0.5 * (r.first + r.second), 1);
    }
  }
  for (int i = 1; i < n; ++i) {
    double l = std::abs(es[i - 1]), m = std::abs(es[i]), r = std::abs(es[i + 1]);
    if ((es[i - 1] < 0) != (es[i] < 0) || (es[i] < 0) != (es[i + 1] < 0) || m > l || m > r) continue;
    if (es[i - 1] == 0 || es[i] == 0 || es[i + 1] == 0) continue;
    auto abse = [&](double lam) { return std::abs(e(lam)); };
    auto mn = boost::math::tools::brent_find_minima(abse, ls[i - 1], ls[i + 1], 40);
    int shared_order = order(mn.first, 0);
    if (shared_order > 0) out.via_jost += shared_order;
    else if (mn.second <= 1e-9 * std::max(l, r)) out.via_jost += 2;
  }
  for (const auto& z : eigenvalues_in_interval(ev, Problem::N, -T * T, -eps * eps))
    out.via_phi_N += z.multiplicity;
  return out;
}

double emat_residual(const RootedTree& t, const Potential& pot, cplx lambda) {
  CharEvaluator ev(t, pot);
  FundamentalValues fv = fundamental_values(pot, lambda);
  if (std::abs(fv.s) < 1e-12) throw Error("s_vanishes", "s vanishes at lambda");
  cplx k = std::sqrt(lambda);
  const int p = t.p();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(p, p);
  for (int v = 0; v < p; ++v) m(v, v) = -fv.c * double(t.degree(v));
  m(t.root(), t.root()) += I * k * fv.s;
  for (auto [a, b] : t.edges()) m(a, b) = m(b, a) = 1.0;
  cplx lhs = m.partialPivLu().determinant();
  CharValues v = ev.matrix(lambda);
  cplx rhs = fv.s * (v.phi_N + I * k * v.phi_D);
  return std::abs(lhs - rhs) / (1.0 + std::abs(rhs));
}

std::vector<STracePoint> s_trace(const CharEvaluator& ev, double k_lo, double k_hi, int count) {
  if (count < 2 || !(k_lo < k_hi)) throw Error("bad_interval", "s trace needs k_lo < k_hi and two points");
  std::vector<STracePoint> out;
  for (int i = 0; i < count; ++i) {
    double k = k_lo + (k_hi - k_lo) * i / (count - 1);
    out.push_back({k, s_function(ev, k)});
  }
  return out;
}

} // namespace qtree
