#include "qtree/inverse.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>

#include "qtree/error.hpp"
#include "qtree/pencil.hpp"

namespace qtree {

// ---------------------------------------------------------------------------
// interpolation

Poly interpolate_exact(const std::vector<Rational>& x, const std::vector<Rational>& y) {
  const size_t n = x.size();
  if (n == 0 || y.size() != n) throw Error("bad_interpolation", "interpolation needs matching nodes and values");
  // Newton divided differences, then expand to the monomial basis
  std::vector<Rational> dd = y;
  for (size_t j = 1; j < n; ++j)
    for (size_t i = n - 1; i >= j; --i) {
      if (x[i] == x[i - j]) throw Error("bad_interpolation", "repeated interpolation node");
      dd[i] = (dd[i] - dd[i - 1]) / (x[i] - x[i - j]);
    }
  Poly result = Poly::constant(dd[n - 1]);
  for (size_t i = n - 1; i-- > 0;)
    result = result * Poly(std::vector<Rational>{-x[i], Rational(1)}) + Poly::constant(dd[i]);
  return result;
}

namespace {

Poly round_coefficients(const Poly& p, double margin) {
  std::vector<Rational> out;
  for (const auto& c : p.coeffs()) {
    Rational shifted = c + Rational(1, 2);
    Integer fl = numerator(shifted) / denominator(shifted);
    if (shifted < 0 && Rational(fl) != shifted) fl -= 1;
    Rational gap = boost::multiprecision::abs(c - Rational(fl));
    if (gap > Rational(margin))
      throw Error("rounding_margin", "rounding margin exceeded - increase n_schedule");
    out.emplace_back(fl);
  }
  return Poly(std::move(out));
}

Poly fit(const std::vector<double>& values, int denom, double margin) {
  std::vector<Rational> x, y;
  for (size_t k = 0; k < values.size(); ++k) {
    if (!std::isfinite(values[k])) throw Error("bad_record", "record contains a non-finite value");
    x.emplace_back(static_cast<long long>(k), denom);
    y.emplace_back(values[k]);
  }
  return round_coefficients(interpolate_exact(x, y), margin);
}

} // namespace

std::pair<Poly, Poly> interpolate_polynomials(const ScatteringRecord& rec, double margin) {
  const int p = rec.p;
  if (p < 2) throw Error("bad_record", "record needs p >= 2");
  if (static_cast<int>(rec.f.size()) != p + 1 || static_cast<int>(rec.f_hat.size()) != p)
    throw Error("bad_record", "record lengths must be p+1 and p");
  if (!(rec.ell > 0)) throw Error("bad_record", "edge length must be positive");
  Poly psi = fit(rec.f, p, margin);
  Poly psi_hat = fit(rec.f_hat, p - 1, margin);
  if (psi.eval(Rational(1)) != 0 || psi.eval(Rational(-1)) != 0)
    throw Error("consistency", "consistency check failed (psi(+-1) != 0)");
  return {psi, psi_hat};
}

// ---------------------------------------------------------------------------
// steps 1, 2, 4, 5

int recover_d0(const Poly& psi, const Poly& psi_hat) {
  if (psi.is_zero() || psi_hat.is_zero() || psi.degree() != psi_hat.degree() + 1)
    throw Error("inconsistent", "non-integer degree ratio - inconsistent input");
  Rational r = psi.lead() / (-psi_hat.lead());
  if (denominator(r) != 1 || r <= 0)
    throw Error("inconsistent", "non-integer degree ratio - inconsistent input");
  return static_cast<int>(numerator(r));
}

Rational reciprocal_sum(const Poly& psi, const Poly& psi_hat, int d) {
  // psi/psi_hat + d z = R / psi_hat with deg R <= deg psi_hat
  Poly r = psi + Poly::monomial(d, 1) * psi_hat;
  const int m = psi_hat.degree();
  if (r.degree() > m) throw Error("inconsistent", "degree ratio does not cancel the leading term");
  const Rational lq = psi_hat.lead();
  Rational a0 = r.coeff(m) / lq;
  return (r.coeff(m - 1) - a0 * psi_hat.coeff(m - 1)) / lq;
}

std::vector<std::vector<Poly>> split_psihat(const Poly& psi_hat, int parts, const Catalog& catalog) {
  std::vector<std::vector<Poly>> out;
  const auto& keys = catalog.keys();
  std::vector<Poly> cur;
  std::function<void(const Poly&, int, size_t)> rec = [&](const Poly& rem, int left, size_t start) {
    if (left == 0) {
      if (rem == Poly::constant(1)) out.push_back(cur);
      return;
    }
    for (size_t i = start; i < keys.size(); ++i) {
      const Poly& k = keys[i];
      if (k.degree() > rem.degree() - (left - 1)) break;
      if (left == 1) {
        if (k != rem) continue;
        cur.push_back(k);
        out.push_back(cur);
        cur.pop_back();
        continue;
      }
      if (!divides(k, rem)) continue;
      cur.push_back(k);
      rec(divexact(rem, k), left - 1, i);
      cur.pop_back();
    }
  };
  if (parts >= 1) rec(psi_hat, parts, 0);
  return out;
}

std::vector<std::vector<int>> diophantine_reciprocals(const Rational& q, int m, int max_sum, bool exact_sum) {
  std::vector<std::vector<int>> out;
  if (m < 1 || q <= 0) return out;
  std::vector<int> cur;
  std::function<void(const Rational&, int, int, int)> rec = [&](const Rational& rem, int slots, int lo, int sum) {
    if (slots == 1) {
      if (numerator(rem) != 1) return;
      Integer d = denominator(rem);
      if (d < lo) return;
      int di = static_cast<int>(d);
      if (max_sum > 0 && (exact_sum ? sum + di != max_sum : sum + di > max_sum)) return;
      cur.push_back(di);
      out.push_back(cur);
      cur.pop_back();
      return;
    }
    // smallest d with 1/d < rem, largest with slots/d >= rem
    Rational inv = 1 / rem;
    Integer first = numerator(inv) / denominator(inv) + 1;
    if (first < lo) first = lo;
    Rational top = Rational(slots) / rem;
    Integer last = numerator(top) / denominator(top);
    for (Integer d = first; d <= last; ++d) {
      int di = static_cast<int>(d);
      if (max_sum > 0 && sum + di * slots > max_sum) break;
      cur.push_back(di);
      rec(rem - Rational(1, di), slots - 1, di, sum + di);
      cur.pop_back();
    }
  };
  rec(q, m, 1, 0);
  return out;
}

// ---------------------------------------------------------------------------
// step 3

namespace {

enum class LinStatus { Unique, Singular, Inconsistent };

LinStatus solve_rational(std::vector<std::vector<Rational>> a, std::vector<Rational>& x, int unknowns) {
  const int rows = static_cast<int>(a.size());
  int r = 0;
  std::vector<int> pivot_col;
  for (int c = 0; c < unknowns && r < rows; ++c) {
    int piv = -1;
    for (int i = r; i < rows; ++i)
      if (a[i][c] != 0) { piv = i; break; }
    if (piv < 0) continue;
    std::swap(a[r], a[piv]);
    for (int i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      Rational f = a[i][c] / a[r][c];
      for (int j = c; j <= unknowns; ++j) a[i][j] -= f * a[r][j];
    }
    pivot_col.push_back(c);
    ++r;
  }
  for (int i = r; i < rows; ++i)
    if (a[i][unknowns] != 0) return LinStatus::Inconsistent;
  if (r < unknowns) return LinStatus::Singular;
  x.assign(unknowns, 0);
  for (int i = 0; i < r; ++i) x[pivot_col[i]] = a[i][unknowns] / a[i][pivot_col[i]];
  return LinStatus::Unique;
}

} // namespace

CoefficientSolve undetermined_coefficients(const Poly& psi, const Poly& psi_hat, int d,
                                           const std::vector<Poly>& factors,
                                           const std::vector<int>& degrees) {
  CoefficientSolve out{CoefficientSolve::Status::Inconsistent, {}};
  Poly r = psi + Poly::monomial(d, 1) * psi_hat;
  const int m = psi_hat.degree();
  if (r.degree() > m - 1) return out;
  std::vector<Poly> cof;
  std::vector<int> offset;
  int unknowns = 0;
  for (const auto& f : factors) {
    cof.push_back(divexact(psi_hat, f));
    offset.push_back(unknowns);
    unknowns += f.degree();
  }
  std::vector<std::vector<Rational>> a;
  for (int e = 0; e <= m - 1; ++e) {
    std::vector<Rational> row(unknowns + 1);
    for (size_t k = 0; k < factors.size(); ++k)
      for (int i = 0; i < factors[k].degree(); ++i) row[offset[k] + i] = -cof[k].coeff(e - i);
    row[unknowns] = r.coeff(e);
    a.push_back(std::move(row));
  }
  for (size_t k = 0; k < degrees.size() && k < factors.size(); ++k) {
    std::vector<Rational> row(unknowns + 1);
    row[offset[k] + factors[k].degree() - 1] = 1;
    row[unknowns] = -factors[k].lead() / Rational(degrees[k]);
    a.push_back(std::move(row));
  }
  std::vector<Rational> x;
  LinStatus st = solve_rational(std::move(a), x, unknowns);
  if (st == LinStatus::Inconsistent) return out;
  if (st == LinStatus::Singular) {
    out.status = CoefficientSolve::Status::Singular;
    return out;
  }
  for (size_t k = 0; k < factors.size(); ++k) {
    std::vector<Rational> c(x.begin() + offset[k], x.begin() + offset[k] + factors[k].degree());
    Poly num(std::move(c));
    if (num.degree() != factors[k].degree() - 1) {
      out.status = CoefficientSolve::Status::DegreeOverflow;
      out.numerators.clear();
      return out;
    }
    out.numerators.push_back(std::move(num));
  }
  out.status = CoefficientSolve::Status::Unique;
  return out;
}

// ---------------------------------------------------------------------------
// step 6: recursive reconstruction

namespace {

std::string poly_key(const Poly& p) {
  std::string s;
  for (const auto& c : p.coeffs()) s += c.str() + ",";
  return s;
}

class Recovery {
public:
  explicit Recovery(const Catalog& cat) : cat_(cat) {}

  // Trees U (top: T) rooted at the unknown vertex with psi pair (P, Q).
  std::vector<RootedTree> solve(const Poly& P, const Poly& Q, int d, bool top,
                                std::vector<TraceEntry>* trace) {
    std::string key = poly_key(P) + "|" + poly_key(Q) + "|" + std::to_string(d) + (top ? "T" : "I");
    if (!trace) {
      auto it = memo_.find(key);
      if (it != memo_.end()) return it->second;
    }
    auto res = solve_uncached(P, Q, d, top, trace);
    memo_[key] = res;
    return res;
  }

private:
  std::vector<RootedTree> solve_uncached(const Poly& P, const Poly& Q, int d, bool top,
                                         std::vector<TraceEntry>* trace) {
    std::vector<RootedTree> found;
    const int n = P.degree();
    if (Q.is_zero() || n != Q.degree() + 1) return found;
    if (P.lead() != -Rational(d) * Q.lead()) return found;
    const int kids = top ? d : d - 1;
    if (kids == 0) {
      if (P == Poly::monomial(-1, 1) && Q == Poly::constant(1)) found.push_back(from_edge_list(1, 0, {}));
      return found;
    }
    Rational q;
    try {
      q = reciprocal_sum(P, Q, d);
    } catch (const Error&) {
      return found;
    }
    std::map<std::string, RootedTree> unique;
    auto splittings = split_psihat(Q, kids, cat_);
    if (trace && splittings.empty())
      trace->push_back({0, d, {}, {}, "rejected", "no admissible splitting"});
    int branch = 0;
    for (const auto& split : splittings) {
      ++branch;
      auto sols = q > 0 ? diophantine_reciprocals(q, kids, n - 1) : std::vector<std::vector<int>>{};
      size_t before = unique.size();
      std::string reason = sols.empty() ? "no diophantine solution" : "no consistent numerators";
      for (const auto& sol : sols) {
        for (const auto& degs : assignments(split, sol)) {
          for (const auto& nums : numerators(P, Q, d, split, degs)) {
            for (auto& t : assemble(split, nums, degs)) {
              bool ok = top ? (psi(t) == P && psi_hat(t) == Q)
                            : (psi_mod(t) == P && psi_hat_mod(t) == Q);
              if (!ok) { reason = "post-verification failed"; continue; }
              RootedTree c = canonical_form(t);
              unique.emplace(canonical_code(c), c);
            }
          }
        }
      }
      if (trace) {
        bool accepted = unique.size() > before;
        trace->push_back({branch, d, split, sols, accepted ? "accepted" : "rejected",
                          accepted ? "" : reason});
      }
    }
    for (auto& [code, t] : unique) found.push_back(t);
    return found;
  }

  // distinct pairings of factor positions with the degree multiset
  static std::vector<std::vector<int>> assignments(const std::vector<Poly>& split,
                                                   const std::vector<int>& sol) {
    std::vector<std::vector<int>> out;
    std::set<std::vector<std::pair<std::string, int>>> seen;
    std::vector<int> perm = sol;
    std::sort(perm.begin(), perm.end());
    do {
      bool fits = true;
      for (size_t k = 0; k < split.size(); ++k)
        if (perm[k] > split[k].degree()) { fits = false; break; }
      if (!fits) continue;
      std::vector<std::pair<std::string, int>> sig;
      for (size_t k = 0; k < split.size(); ++k) sig.push_back({poly_key(split[k]), perm[k]});
      std::sort(sig.begin(), sig.end());
      if (seen.insert(sig).second) out.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
  }

  // candidate numerator lists: the unique linear solve, or catalog
  // numerators when repeated factors make the system singular
  std::vector<std::vector<Poly>> numerators(const Poly& P, const Poly& Q, int d,
                                            const std::vector<Poly>& split,
                                            const std::vector<int>& degs) {
    auto sol = undetermined_coefficients(P, Q, d, split, degs);
    if (sol.status == CoefficientSolve::Status::Unique) return {sol.numerators};
    if (sol.status != CoefficientSolve::Status::Singular) return {};
    std::vector<std::vector<Poly>> options;
    for (size_t k = 0; k < split.size(); ++k) {
      std::set<Poly> opts;
      for (const auto& e : cat_.lookup(split[k]))
        if (e.root_degree == degs[k]) opts.insert(e.psi_hat);
      if (opts.empty()) return {};
      options.emplace_back(opts.begin(), opts.end());
    }
    Poly rhs = P + Poly::monomial(d, 1) * Q;
    std::vector<std::vector<Poly>> out;
    std::vector<Poly> cur;
    std::function<void(size_t)> rec = [&](size_t k) {
      if (k == split.size()) {
        Poly sum;
        for (size_t j = 0; j < split.size(); ++j) sum = sum + cur[j] * divexact(Q, split[j]);
        if (-sum == rhs) out.push_back(cur);
        return;
      }
      for (const auto& o : options[k]) {
        cur.push_back(o);
        rec(k + 1);
        cur.pop_back();
      }
    };
    rec(0);
    return out;
  }

  std::vector<RootedTree> assemble(const std::vector<Poly>& split, const std::vector<Poly>& nums,
                                   const std::vector<int>& degs) {
    std::vector<std::vector<RootedTree>> choices;
    for (size_t k = 0; k < split.size(); ++k) {
      auto sub = solve(split[k], nums[k], degs[k], false, nullptr);
      if (sub.empty()) return {};
      choices.push_back(std::move(sub));
    }
    std::vector<RootedTree> out;
    std::vector<RootedTree> cur;
    std::function<void(size_t)> rec = [&](size_t k) {
      if (k == choices.size()) {
        out.push_back(join_at_root(cur));
        return;
      }
      for (const auto& c : choices[k]) {
        cur.push_back(c);
        rec(k + 1);
        cur.pop_back();
      }
    };
    rec(0);
    return out;
  }

  const Catalog& cat_;
  std::map<std::string, std::vector<RootedTree>> memo_;
};

int catalog_size_for(int p) { return std::clamp(p - 1, 1, 11); }

} // namespace

RecoveryResult recover_shape(const Poly& psi_in, const Poly& psi_hat_in, const Catalog& catalog) {
  const int p = psi_in.degree();
  if (p < 2) throw Error("bad_input", "psi must have degree at least 2");
  if (!psi_in.is_integral() || !psi_hat_in.is_integral())
    throw Error("bad_input", "psi and psi_hat must have integer coefficients");
  int d0 = recover_d0(psi_in, psi_hat_in);
  RecoveryResult res;
  Recovery r(catalog);
  res.shapes = r.solve(psi_in, psi_hat_in, d0, true, &res.trace);
  if (res.shapes.empty()) throw Error("no_shape", "no shape found");
  return res;
}

RecoveryResult recover_shape(const Poly& psi_in, const Poly& psi_hat_in) {
  const int p = psi_in.degree();
  if (p < 2 || p > 12) throw Error("bad_input", "psi degree out of range (2..12)");
  return recover_shape(psi_in, psi_hat_in, shared_catalog(catalog_size_for(p)));
}

// ---------------------------------------------------------------------------
// ratio-only mode and snowflakes

RecoveryResult recover_shape_ratio(const Poly& num, const Poly& den, int p) {
  if (p < 2 || p > 12) throw Error("bad_input", "p out of range (2..12)");
  if (num.is_zero() || den.is_zero() || num.degree() != den.degree() + 1)
    throw Error("inconsistent", "ratio degrees must differ by one");
  Rational r = num.lead() / (-den.lead());
  if (denominator(r) != 1 || r <= 0) throw Error("inconsistent", "non-integer degree ratio - inconsistent input");
  const int d0 = static_cast<int>(numerator(r));
  // target sum of psi_hat_k/psi_k equals -(num/den + d0 z) = tnum/den
  Poly tnum = -(num + Poly::monomial(d0, 1) * den);
  const Catalog& cat = shared_catalog(catalog_size_for(p));
  std::vector<const CatalogEntry*> entries;
  for (const auto& k : cat.keys())
    for (const auto& e : cat.lookup(k)) entries.push_back(&e);

  RecoveryResult res;
  std::map<std::string, RootedTree> unique;
  std::vector<const CatalogEntry*> cur;
  std::function<void(size_t, int, int, const Poly&, const Poly&)> rec =
      [&](size_t start, int left, int budget, const Poly& sn, const Poly& sd) {
        if (left == 0) {
          if (budget != 0 || sn * den != tnum * sd) return;
          std::vector<RootedTree> kids;
          for (auto* e : cur) kids.push_back(e->tree);
          RootedTree t = join_at_root(kids);
          if (psi(t) * den != psi_hat(t) * num) return;
          RootedTree c = canonical_form(t);
          unique.emplace(canonical_code(c), c);
          return;
        }
        for (size_t i = start; i < entries.size(); ++i) {
          int sz = entries[i]->tree.p();
          if (sz > budget - (left - 1)) continue;
          Poly key = psi_mod(entries[i]->tree);
          cur.push_back(entries[i]);
          rec(i, left - 1, budget - sz, sn * key + entries[i]->psi_hat * sd, sd * key);
          cur.pop_back();
        }
      };
  rec(0, d0, p - 1, Poly{}, Poly::constant(1));
  for (auto& [code, t] : unique) res.shapes.push_back(t);
  res.trace.push_back({1, d0, {}, {}, res.shapes.empty() ? "rejected" : "accepted",
                       res.shapes.empty() ? "no catalog multiset matches the ratio" : ""});
  if (res.shapes.empty()) throw Error("no_shape", "no shape found");
  return res;
}

std::optional<RootedTree> recover_snowflake(const Poly& psi_in, const Poly& psi_hat_in) {
  int d0;
  Rational q;
  try {
    d0 = recover_d0(psi_in, psi_hat_in);
    q = reciprocal_sum(psi_in, psi_hat_in, d0);
  } catch (const Error&) {
    return std::nullopt;
  }
  const int p = psi_in.degree();
  std::vector<RootedTree> hits;
  for (const auto& sol : diophantine_reciprocals(q, d0, p - 1, true)) {
    std::vector<RootedTree> kids;
    for (int dk : sol) {
      std::vector<Edge> e;
      for (int j = 1; j < dk; ++j) e.push_back({0, j});
      kids.push_back(from_edge_list(dk, 0, e));
    }
    RootedTree t = join_at_root(kids);
    if (psi_in * psi_hat(t) == psi(t) * psi_hat_in) hits.push_back(canonical_form(t));
  }
  if (hits.size() != 1) return std::nullopt;
  return hits.front();
}

} // namespace qtree
