#pragma once

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace qtree {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Dense polynomial over Q, coefficients in ascending powers of z.
// The zero polynomial has no coefficients and degree -1.
class Poly {
public:
  Poly() = default;
  Poly(std::vector<Rational> c);
  static Poly constant(const Rational& c);
  static Poly monomial(const Rational& c, int k);
  static Poly z() { return monomial(1, 1); }
  static Poly from_ints(const std::vector<long long>& c);

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<Rational>& coeffs() const { return c_; }
  Rational coeff(int k) const;
  Rational lead() const;
  // lowest power with a nonzero coefficient (-1 for zero)
  int valuation() const;

  Rational eval(const Rational& x) const;
  double eval(double x) const;
  std::complex<double> eval(std::complex<double> x) const;

  Poly derivative() const;
  bool is_integral() const;

  Poly operator-() const;
  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a, const Poly& b);
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(const Rational& k, const Poly& a);
  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }
  friend bool operator<(const Poly& a, const Poly& b);

  // human form such as -2z^3+2z
  std::string str() const;

private:
  void trim();
  std::vector<Rational> c_;
};

// Quotient and remainder of a by b (b nonzero).
std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b);
// Exact quotient; throws "inexact division" when b does not divide a.
Poly divexact(const Poly& a, const Poly& b);
bool divides(const Poly& b, const Poly& a);
// Monic gcd; gcd(0, 0) = 0.
Poly gcd(const Poly& a, const Poly& b);
Poly monic(const Poly& a);
// Positive gcd of numerators over lcm of denominators; sign of lead kept out.
Rational content(const Poly& a);
// Yun decomposition: result[i] is the product of monic irreducibles of
// multiplicity i+1.
std::vector<Poly> squarefree_decomposition(const Poly& a);

} // namespace qtree
