#include "qtree/pencil.hpp"

#include <utility>

#include "qtree/error.hpp"

namespace qtree {

namespace {

// integer polynomial used inside the elimination; exact division only
using IntPoly = std::vector<Integer>;

void trim(IntPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

IntPoly mul(const IntPoly& a, const IntPoly& b) {
  if (a.empty() || b.empty()) return {};
  IntPoly c(a.size() + b.size() - 1);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  }
  trim(c);
  return c;
}

IntPoly sub(IntPoly a, const IntPoly& b) {
  if (a.size() < b.size()) a.resize(b.size());
  for (size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
  trim(a);
  return a;
}

IntPoly divexact_int(IntPoly a, const IntPoly& b) {
  if (a.empty()) return {};
  const int db = static_cast<int>(b.size()) - 1;
  const int dq = static_cast<int>(a.size()) - 1 - db;
  if (dq < 0) throw Error("inexact_division", "inexact division");
  IntPoly q(dq + 1);
  for (int k = dq; k >= 0; --k) {
    Integer num = a[k + db];
    if (num % b.back() != 0) throw Error("inexact_division", "inexact division");
    Integer f = num / b.back();
    q[k] = f;
    if (f == 0) continue;
    for (int j = 0; j <= db; ++j) a[k + j] -= f * b[j];
  }
  for (const auto& r : a)
    if (r != 0) throw Error("inexact_division", "inexact division");
  trim(q);
  return q;
}

IntPoly to_int(const Poly& p) {
  IntPoly r;
  for (const auto& c : p.coeffs()) {
    if (denominator(c) != 1) throw Error("not_integral", "matrix entry must have integer coefficients");
    r.push_back(numerator(c));
  }
  return r;
}

Poly from_int(const IntPoly& a) {
  std::vector<Rational> c(a.begin(), a.end());
  return Poly(std::move(c));
}

} // namespace

Poly bareiss_det(std::vector<std::vector<Poly>> in) {
  const int n = static_cast<int>(in.size());
  if (n == 0) return Poly::constant(1);
  std::vector<std::vector<IntPoly>> m(n, std::vector<IntPoly>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m[i][j] = to_int(in[i][j]);
  IntPoly prev{Integer(1)};
  bool negate = false;
  for (int k = 0; k < n - 1; ++k) {
    if (m[k][k].empty()) {
      int r = k + 1;
      while (r < n && m[r][k].empty()) ++r;
      if (r == n) return {};
      std::swap(m[k], m[r]);
      negate = !negate;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j)
        m[i][j] = divexact_int(sub(mul(m[k][k], m[i][j]), mul(m[i][k], m[k][j])), prev);
      m[i][k].clear();
    }
    prev = m[k][k];
  }
  Poly d = from_int(m[n - 1][n - 1]);
  return negate ? -d : d;
}

Poly pencil_det(const RootedTree& t, const std::vector<int>& deg, bool drop_root) {
  if (static_cast<int>(deg.size()) != t.p()) throw Error("bad_degrees", "degree vector size mismatch");
  std::vector<int> ids;
  std::vector<int> pos(t.p(), -1);
  for (int v = 0; v < t.p(); ++v) {
    if (drop_root && v == t.root()) continue;
    pos[v] = static_cast<int>(ids.size());
    ids.push_back(v);
  }
  const int n = static_cast<int>(ids.size());
  std::vector<std::vector<Poly>> m(n, std::vector<Poly>(n));
  for (int i = 0; i < n; ++i) m[i][i] = Poly::monomial(-deg[ids[i]], 1);
  for (auto [a, b] : t.edges()) {
    if (pos[a] < 0 || pos[b] < 0) continue;
    m[pos[a]][pos[b]] = Poly::constant(1);
    m[pos[b]][pos[a]] = Poly::constant(1);
  }
  return bareiss_det(std::move(m));
}

Poly psi(const RootedTree& t) { return pencil_det(t, t.degrees(), false); }

Poly psi_hat(const RootedTree& t) {
  if (t.p() < 2) throw Error("single_vertex", "single vertex");
  return pencil_det(t, t.degrees(), true);
}

Poly psi_mod(const RootedTree& u) {
  auto d = u.degrees();
  d[u.root()] += 1;
  return pencil_det(u, d, false);
}

Poly psi_hat_mod(const RootedTree& u) {
  auto d = u.degrees();
  d[u.root()] += 1;
  return pencil_det(u, d, true);
}

} // namespace qtree
