#pragma once

#include <vector>

#include "qtree/spectral.hpp"

namespace qtree {

// E(k) = phi_N(k^2) + i k phi_D(k^2) with k = sqrt(lambda); the lead carries
// no potential.
struct JostSample {
  cplx k;
  cplx E_plus;   // E(k)
  cplx E_minus;  // E(-k)
};

JostSample jost(const CharEvaluator& ev, cplx k);
JostSample jost(const RootedTree& t, const Potential& pot, cplx k);

// S(k) = E(-k) / E(k)
cplx s_function(const CharEvaluator& ev, cplx k);
cplx s_function(const RootedTree& t, const Potential& pot, cplx k);

// F / F_hat recovered from S alone: i sin(k ell) (1 + S) / (1 - S).
cplx ratio_from_s(const CharEvaluator& ev, cplx k);

struct CommonSpectrum {
  int m = 0;                  // multiplicity of lambda = 0 as a common zero
  std::vector<double> eigenvalues;  // common zeros in the window, 0 excluded
  bool certified = true;
};

CommonSpectrum common_spectrum(const CharEvaluator& ev, double lo, double hi);
CommonSpectrum common_spectrum(const RootedTree& t, const Potential& pot, double lo, double hi);

struct ScatteringRecord {
  int p = 0;
  double ell = 1.0;
  std::vector<double> f;      // p + 1 values at z_k = k/p
  std::vector<double> f_hat;  // p values at z_k = k/(p-1)
  int m = 0;
  std::vector<double> common_eigenvalues;
  int n_used = 0;
  Potential potential;        // metadata only
  double window = 0;          // common eigenvalues were searched in [0, window]
};

struct ScatterOptions {
  std::vector<int> n_schedule{16, 32, 64, 128, 256};
  double tol = 1e-6;
  double window = 100.0;
};

// F(k) = sin(k ell) phi_N / k and F_hat(k) = phi_D at k^2.
double F_value(const CharEvaluator& ev, double k);
double F_hat_value(const CharEvaluator& ev, double k);

// sqrt(lambda_k^(n)) = (arccos z + 2 pi n) / ell
double sample_point(double z, int n, double ell);

struct LimitEstimate {
  double value = 0;
  int n_used = 0;
  std::vector<double> raw;        // F at each scheduled n that was evaluated
  std::vector<double> estimates;  // successive extrapolants
};

// Polynomial extrapolation in h = 1/sqrt(lambda) to h = 0 over the schedule,
// stopping once two successive extrapolants agree within tol.
LimitEstimate extrapolate_limit(const std::vector<double>& h, const std::vector<double>& values,
                                const std::vector<int>& n_schedule, double tol);

ScatteringRecord scattering_info(const RootedTree& t, const Potential& pot,
                                 const ScatterOptions& opt = {});

struct NegativeCount {
  int via_jost = 0;
  int via_phi_N = 0;
  double t_max = 0;
};

NegativeCount count_negative_eigenvalues(const RootedTree& t, const Potential& pot);

// |det(-zD + i k s D0 + A) - s E(k)| / (1 + |s E(k)|) at z = c, s = s(k, ell).
double emat_residual(const RootedTree& t, const Potential& pot, cplx lambda);

struct STracePoint {
  double k;
  cplx S;
};

std::vector<STracePoint> s_trace(const CharEvaluator& ev, double k_lo, double k_hi, int count);

} // namespace qtree
