#include "qtree/poly.hpp"

#include <algorithm>
#include <sstream>

#include "qtree/error.hpp"

namespace qtree {

Poly::Poly(std::vector<Rational> c) : c_(std::move(c)) { trim(); }

Poly Poly::constant(const Rational& c) { return Poly(std::vector<Rational>{c}); }

Poly Poly::monomial(const Rational& c, int k) {
  std::vector<Rational> v(k + 1);
  v[k] = c;
  return Poly(std::move(v));
}

Poly Poly::from_ints(const std::vector<long long>& c) {
  std::vector<Rational> v;
  for (long long x : c) v.emplace_back(x);
  return Poly(std::move(v));
}

void Poly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Rational Poly::coeff(int k) const {
  if (k < 0 || k >= static_cast<int>(c_.size())) return 0;
  return c_[k];
}

Rational Poly::lead() const { return c_.empty() ? Rational(0) : c_.back(); }

int Poly::valuation() const {
  for (size_t k = 0; k < c_.size(); ++k)
    if (c_[k] != 0) return static_cast<int>(k);
  return -1;
}

Rational Poly::eval(const Rational& x) const {
  Rational r = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + *it;
  return r;
}

double Poly::eval(double x) const {
  double r = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + it->convert_to<double>();
  return r;
}

std::complex<double> Poly::eval(std::complex<double> x) const {
  std::complex<double> r = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + it->convert_to<double>();
  return r;
}

Poly Poly::derivative() const {
  if (c_.size() < 2) return {};
  std::vector<Rational> d(c_.size() - 1);
  for (size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * static_cast<long long>(k);
  return Poly(std::move(d));
}

bool Poly::is_integral() const {
  return std::all_of(c_.begin(), c_.end(),
                     [](const Rational& r) { return denominator(r) == 1; });
}

Poly Poly::operator-() const {
  Poly r = *this;
  for (auto& x : r.c_) x = -x;
  return r;
}

Poly operator+(const Poly& a, const Poly& b) {
  std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()));
  for (size_t k = 0; k < a.c_.size(); ++k) c[k] += a.c_[k];
  for (size_t k = 0; k < b.c_.size(); ++k) c[k] += b.c_[k];
  return Poly(std::move(c));
}

Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

Poly operator*(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Rational> c(a.c_.size() + b.c_.size() - 1);
  for (size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i] == 0) continue;
    for (size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
  }
  return Poly(std::move(c));
}

Poly operator*(const Rational& k, const Poly& a) {
  Poly r = a;
  for (auto& x : r.c_) x *= k;
  r.trim();
  return r;
}

bool operator<(const Poly& a, const Poly& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  for (int k = a.degree(); k >= 0; --k)
    if (a.c_[k] != b.c_[k]) return a.c_[k] < b.c_[k];
  return false;
}

std::string Poly::str() const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int k = degree(); k >= 0; --k) {
    const Rational& a = c_[k];
    if (a == 0) continue;
    Rational mag = abs(a);
    if (a < 0) os << "-";
    else if (!first) os << "+";
    bool unit = (mag == 1);
    if (!unit || k == 0) os << mag;
    if (k >= 1) os << "z";
    if (k >= 2) os << "^" << k;
    first = false;
  }
  return os.str();
}

std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw Error("division_by_zero", "division by zero polynomial");
  std::vector<Rational> r = a.coeffs();
  int db = b.degree();
  int dq = a.degree() - db;
  if (dq < 0) return {Poly{}, a};
  std::vector<Rational> q(dq + 1);
  const Rational lb = b.lead();
  for (int k = dq; k >= 0; --k) {
    Rational f = r[k + db] / lb;
    q[k] = f;
    if (f == 0) continue;
    for (int j = 0; j <= db; ++j) r[k + j] -= f * b.coeffs()[j];
  }
  r.resize(db);
  return {Poly(std::move(q)), Poly(std::move(r))};
}

Poly divexact(const Poly& a, const Poly& b) {
  auto [q, r] = divmod(a, b);
  if (!r.is_zero()) throw Error("inexact_division", "inexact division");
  return q;
}

bool divides(const Poly& b, const Poly& a) {
  if (b.is_zero()) return a.is_zero();
  if (a.degree() < b.degree()) return a.is_zero();
  if (a.valuation() < b.valuation()) return false;
  return divmod(a, b).second.is_zero();
}

Poly monic(const Poly& a) {
  if (a.is_zero()) return a;
  return Rational(1) / a.lead() * a;
}

Poly gcd(const Poly& a, const Poly& b) {
  Poly x = a, y = b;
  while (!y.is_zero()) {
    Poly r = divmod(x, y).second;
    x = std::move(y);
    y = monic(r);
  }
  return monic(x);
}

Rational content(const Poly& a) {
  Integer num = 0, den = 1;
  for (const auto& c : a.coeffs()) {
    if (c == 0) continue;
    num = boost::multiprecision::gcd(num, boost::multiprecision::abs(numerator(c)));
    den = boost::multiprecision::lcm(den, denominator(c));
  }
  return Rational(num, den);
}

std::vector<Poly> squarefree_decomposition(const Poly& a) {
  std::vector<Poly> out;
  if (a.degree() < 1) return out;
  Poly f = monic(a);
  Poly fp = f.derivative();
  Poly g = gcd(f, fp);
  Poly b = divexact(f, g);
  Poly c = divexact(fp, g);
  Poly d = c - b.derivative();
  while (b.degree() > 0) {
    Poly h = gcd(b, d);
    out.push_back(h);
    b = divexact(b, h);
    c = divexact(d, h);
    d = c - b.derivative();
  }
  while (!out.empty() && out.back().degree() == 0) out.pop_back();
  return out;
}

} // namespace qtree
