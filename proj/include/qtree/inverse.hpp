#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qtree/catalog.hpp"
#include "qtree/poly.hpp"
#include "qtree/scattering.hpp"
#include "qtree/tree.hpp"

namespace qtree {

// Exact Vandermonde solves at z_k = k/p and k/(p-1), coefficients rounded
// to the nearest integer.
std::pair<Poly, Poly> interpolate_polynomials(const ScatteringRecord& rec, double margin = 0.25);

// Exact interpolation through (x_i, y_i) with rational nodes.
Poly interpolate_exact(const std::vector<Rational>& x, const std::vector<Rational>& y);

int recover_d0(const Poly& psi, const Poly& psi_hat);

// Coefficient of 1/z in the expansion of psi/psi_hat + d*z at infinity.
Rational reciprocal_sum(const Poly& psi, const Poly& psi_hat, int d);

std::vector<std::vector<Poly>> split_psihat(const Poly& psi_hat, int parts, const Catalog& catalog);

// All multisets d_1 <= ... <= d_m of positive integers with sum 1/d_i = q.
// max_sum > 0 bounds sum d_i; exact_sum demands equality with max_sum.
std::vector<std::vector<int>> diophantine_reciprocals(const Rational& q, int m, int max_sum = 0,
                                                      bool exact_sum = false);

struct CoefficientSolve {
  enum class Status { Unique, Singular, Inconsistent, DegreeOverflow } status;
  std::vector<Poly> numerators;  // psi_hat_k, filled when Unique
};

// Solves psi + d z psi_hat = -sum_k num_k prod_{j != k} factor_j for num_k of
// degree deg(factor_k) - 1. When degrees are given, the leading coefficient
// of num_k is pinned to -lead(factor_k)/degrees[k].
CoefficientSolve undetermined_coefficients(const Poly& psi, const Poly& psi_hat, int d,
                                           const std::vector<Poly>& factors,
                                           const std::vector<int>& degrees = {});

struct TraceEntry {
  int branch = 0;
  int d0 = 0;
  std::vector<Poly> splitting;
  std::vector<std::vector<int>> diophantine;
  std::string status;  // accepted | rejected
  std::string reason;
};

struct RecoveryResult {
  std::vector<RootedTree> shapes;  // canonical forms, sorted by code
  std::vector<TraceEntry> trace;
};

RecoveryResult recover_shape(const Poly& psi, const Poly& psi_hat);
RecoveryResult recover_shape(const Poly& psi, const Poly& psi_hat, const Catalog& catalog);

// Shapes on p vertices whose psi/psi_hat equals num/den after cancellation.
RecoveryResult recover_shape_ratio(const Poly& num, const Poly& den, int p);

std::optional<RootedTree> recover_snowflake(const Poly& psi, const Poly& psi_hat);

} // namespace qtree
