#pragma once

#include <vector>

#include <Eigen/Dense>

#include "qtree/poly.hpp"
#include "qtree/potential.hpp"
#include "qtree/tree.hpp"

namespace qtree {

enum class Problem { D, N };

struct CharValues {
  cplx phi_D, phi_N;
};

// Rows follow bfs vertex order (d(v) rows per vertex); columns are a_e for
// the g edges in bfs order, then b_e.
struct CharMatrices {
  Eigen::MatrixXcd D, N;
};

CharMatrices assemble_phi_matrices(const RootedTree& t, const FundamentalValues& fv);
CharMatrices assemble_phi_matrices(const RootedTree& t, const Potential& pot, cplx lambda);

// Evaluates the characteristic functions of one tree. Matrix determinants
// are multiplied by a per-tree sign so that both routes agree with
// phi_D = psi_hat(c) and phi_N = psi(c)/s.
class CharEvaluator {
public:
  CharEvaluator(const RootedTree& t, const Potential& pot);

  const RootedTree& tree() const { return tree_; }
  const Potential& potential() const { return pot_; }
  const Poly& psi() const { return psi_; }
  const Poly& psi_hat() const { return psi_hat_; }
  const Poly& psi0() const { return psi0_; }  // psi / (z^2 - 1)
  int sign() const { return sign_; }
  bool fast_available() const { return pot_.symmetric(); }

  CharValues matrix(cplx lambda) const;
  CharValues fast(cplx lambda) const;
  CharValues fast(const FundamentalValues& fv) const;
  CharValues eval(cplx lambda) const { return fast_available() ? fast(lambda) : matrix(lambda); }

private:
  RootedTree tree_;
  Potential pot_;
  Poly psi_, psi_hat_, psi0_;
  std::vector<double> psi_hat_d_, psi0_d_;
  int sign_ = 1;
};

CharValues char_functions(const RootedTree& t, const Potential& pot, cplx lambda);
CharValues char_functions_fast(const RootedTree& t, const Potential& pot, cplx lambda);

struct Eigenvalue {
  double lambda;
  int multiplicity;
  bool certified;  // multiplicity taken from the exact polynomial
};

// Scan points over [a, b] fine enough that c(lambda) moves by at most 0.1
// between neighbours inside the bands.
std::vector<double> spectral_grid(const Potential& pot, double a, double b);

std::vector<Eigenvalue> eigenvalues_in_interval(const CharEvaluator& ev, Problem which,
                                                double a, double b, double tol = 1e-10);
std::vector<Eigenvalue> eigenvalues_in_interval(const RootedTree& t, const Potential& pot,
                                                Problem which, double a, double b,
                                                double tol = 1e-10);

// Multiplicity of lambda as a zero of phi_D or phi_N read off the exact
// polynomials; 0 when lambda is not a zero. Needs the fast path.
int exact_multiplicity(const CharEvaluator& ev, Problem which, double lambda);

// Multiplicity of the root of target closest to z; 0 when none lies within tol.
int root_multiplicity_near(const Poly& target, double z, double tol = 1e-6);

struct ReductionReport {
  double phindk = 0;  // phi_N against the sum over root branches
  double lawpf_N = 0; // split of the root star into two groups
  double lawpf_D = 0;
};

ReductionReport reduction_identities_check(const RootedTree& t, const Potential& pot, cplx lambda);

// Relative gap between det Phi_D and det of its lower-right block, plus the
// largest deviation of the top block row from [I 0].
double phi_D_block_residual(const RootedTree& t, const Potential& pot, cplx lambda);

} // namespace qtree
