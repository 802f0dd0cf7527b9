#pragma once

#include <complex>
#include <string>
#include <vector>

namespace qtree {

using cplx = std::complex<double>;

// Edge potential shared by every edge of the tree.
class Potential {
public:
  enum class Kind { Zero, Constant, Sampled };

  static Potential zero(double ell = 1.0);
  static Potential constant(double q, double ell = 1.0);
  // uniform grid on [0, ell], at least 16 values, symmetric about the midpoint
  static Potential sampled(std::vector<double> values, double ell = 1.0);
  // same without the symmetry requirement (only the matrix route accepts it)
  static Potential sampled_unchecked(std::vector<double> values, double ell = 1.0);

  Kind kind() const { return kind_; }
  double ell() const { return ell_; }
  double q() const { return q_; }
  const std::vector<double>& values() const { return values_; }
  bool symmetric() const;
  double min_value() const;
  // value at x in [0, ell], linear interpolation for sampled data
  double at(double x) const;
  std::string describe() const;

private:
  Kind kind_ = Kind::Zero;
  double ell_ = 1.0;
  double q_ = 0.0;
  std::vector<double> values_;
};

// c, s and their x-derivatives at x = ell for the equation -y'' + q y = lambda y.
struct FundamentalValues {
  cplx c, s, cp, sp;
  cplx wronskian() const { return c * sp - cp * s; }
};

FundamentalValues fundamental_values(const Potential& pot, cplx lambda);

} // namespace qtree
