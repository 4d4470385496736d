#pragma once

#include <vector>

#include "thz/types.hpp"

namespace thz::est {

struct OmpOptions {
  double eps_o = 1.0;        // residual threshold multiplier
  double noise_scale = 0.0;  // residual stop at eps_o * noise_scale
  int max_atoms = 0;         // 0: min(rows, cols)
};

struct OmpResult {
  VecC x;
  std::vector<int> support;
  double residual_norm = 0.0;
  int iterations = 0;
};

struct FocussOptions {
  double lambda = 1e-3;  // regularization weight
  double p = 1.0;        // target l_p quasi-norm, 0 < p <= 1
  int max_iter = 100;
  double rel_tol = 1e-6;
};

struct FocussResult {
  VecC x;
  int iterations = 0;
  bool converged = false;
  std::vector<double> objective;  // per-iteration value, non-increasing
};

/// Least-squares channel estimate (Phi^H Phi)^{-1} Phi^H y. Requires an
/// over-determined, full-column-rank system; throws otherwise.
VecC ls_estimate(const VecC& y, const MatC& phi);

/// Linear MMSE estimate (R_h^{-1} + Phi^H R_v^{-1} Phi)^{-1} Phi^H R_v^{-1} y
/// for Hermitian PD prior and noise covariances.
VecC mmse_estimate(const VecC& y, const MatC& phi, const MatC& r_h,
                   const MatC& r_v);

/// Orthogonal matching pursuit over the equivalent sensing matrix. Atoms are
/// picked by largest normalized correlation with the residual, followed by a
/// least-squares refit on the selected support.
OmpResult omp_estimate(const VecC& y, const MatC& dict, const OmpOptions& opt);

/// Regularized FOCUSS: iteratively reweighted least squares driving the
/// solution toward small l_p quasi-norm. Majorize-minimize form, so the
/// objective |y - Ax|^2 + lambda * sum|x_i|^p never increases.
FocussResult focuss_estimate(const VecC& y, const MatC& dict,
                             const FocussOptions& opt);

}  // namespace thz::est
