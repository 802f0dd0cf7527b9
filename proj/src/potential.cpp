#include "qtree/potential.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include <boost/numeric/odeint.hpp>

#include "qtree/error.hpp"

namespace qtree {

namespace {

void check_ell(double ell) {
  if (!(ell > 0) || !std::isfinite(ell)) throw Error("bad_potential", "edge length must be positive");
}

// sin(x)/x with a series near zero
cplx sinc(cplx x) {
  if (std::abs(x) < 1e-3) {
    cplx x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0 - x2 * x2 * x2 / 5040.0;
  }
  return std::sin(x) / x;
}

FundamentalValues closed_form(double q, double ell, cplx lambda) {
  cplx mu2 = lambda - q;
  cplx mu = std::sqrt(mu2);
  FundamentalValues f;
  f.c = std::cos(mu * ell);
  f.s = ell * sinc(mu * ell);
  f.cp = -mu2 * f.s;
  f.sp = f.c;
  return f;
}

using State = std::array<cplx, 4>;

FundamentalValues integrate(const Potential& pot, cplx lambda) {
  namespace odeint = boost::numeric::odeint;
  // scaled unknowns (y, y'/k) keep both components of comparable size
  const double k = std::max(1.0, std::sqrt(std::abs(lambda)));
  State x{cplx(1), cplx(0), cplx(0), cplx(1.0 / k)};
  const auto& v = pot.values();
  const int cells = static_cast<int>(v.size()) - 1;
  const double h = pot.ell() / cells;
  auto stepper = odeint::make_controlled<odeint::runge_kutta_dopri5<State>>(1e-14, 1e-13);
  try {
    for (int i = 0; i < cells; ++i) {
      const double x0 = i * h, q0 = v[i], slope = (v[i + 1] - v[i]) / h;
      auto rhs = [&](const State& y, State& dy, double t) {
        cplx g = (q0 + slope * (t - x0) - lambda) / k;
        dy[0] = k * y[1];
        dy[1] = g * y[0];
        dy[2] = k * y[3];
        dy[3] = g * y[2];
      };
      odeint::integrate_adaptive(stepper, rhs, x, x0, x0 + h, h / 8);
    }
  } catch (const std::exception& e) {
    throw Error("integration", std::string("integration tolerance not met: ") + e.what());
  }
  FundamentalValues f{x[0], x[2], x[1] * k, x[3] * k};
  double w = std::abs(f.wronskian() - 1.0) /
             (1.0 + std::abs(f.c * f.sp) + std::abs(f.cp * f.s));
  if (!std::isfinite(w) || w > 1e-8)
    throw Error("integration", "integration tolerance not met");
  return f;
}

} // namespace

Potential Potential::zero(double ell) {
  check_ell(ell);
  Potential p;
  p.ell_ = ell;
  return p;
}

Potential Potential::constant(double q, double ell) {
  check_ell(ell);
  if (!std::isfinite(q)) throw Error("bad_potential", "potential value must be finite");
  Potential p;
  p.kind_ = Kind::Constant;
  p.ell_ = ell;
  p.q_ = q;
  return p;
}

Potential Potential::sampled_unchecked(std::vector<double> values, double ell) {
  check_ell(ell);
  if (values.size() < 16) throw Error("bad_potential", "sampled potential needs at least 16 values");
  for (double x : values)
    if (!std::isfinite(x)) throw Error("bad_potential", "potential value must be finite");
  Potential p;
  p.kind_ = Kind::Sampled;
  p.ell_ = ell;
  p.values_ = std::move(values);
  return p;
}

Potential Potential::sampled(std::vector<double> values, double ell) {
  Potential p = sampled_unchecked(std::move(values), ell);
  if (!p.symmetric()) throw Error("hypothesis", "hypothesis violated: sampled potential is not symmetric");
  return p;
}

bool Potential::symmetric() const {
  if (kind_ != Kind::Sampled) return true;
  const size_t n = values_.size();
  for (size_t i = 0; i < n / 2; ++i)
    if (std::abs(values_[i] - values_[n - 1 - i]) > 1e-12) return false;
  return true;
}

double Potential::min_value() const {
  switch (kind_) {
    case Kind::Zero: return 0.0;
    case Kind::Constant: return q_;
    case Kind::Sampled: return *std::min_element(values_.begin(), values_.end());
  }
  return 0.0;
}

double Potential::at(double x) const {
  switch (kind_) {
    case Kind::Zero: return 0.0;
    case Kind::Constant: return q_;
    case Kind::Sampled: {
      const int cells = static_cast<int>(values_.size()) - 1;
      double t = std::clamp(x / ell_, 0.0, 1.0) * cells;
      int i = std::min(static_cast<int>(t), cells - 1);
      double w = t - i;
      return (1 - w) * values_[i] + w * values_[i + 1];
    }
  }
  return 0.0;
}

std::string Potential::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::Zero: os << "zero"; break;
    case Kind::Constant: os << "const:" << q_; break;
    case Kind::Sampled: os << "sampled[" << values_.size() << "]"; break;
  }
  os << " ell=" << ell_;
  return os.str();
}

FundamentalValues fundamental_values(const Potential& pot, cplx lambda) {
  switch (pot.kind()) {
    case Potential::Kind::Zero: return closed_form(0.0, pot.ell(), lambda);
    case Potential::Kind::Constant: return closed_form(pot.q(), pot.ell(), lambda);
    case Potential::Kind::Sampled: return integrate(pot, lambda);
  }
  return {};
}

} // namespace qtree
