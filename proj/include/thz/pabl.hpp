#pragma once

#include <vector>

#include "thz/bayes.hpp"
#include "thz/channel.hpp"
#include "thz/frame.hpp"
#include "thz/sparsemodel.hpp"
#include "thz/types.hpp"

namespace thz::pabl {

struct PosteriorMoments {
  VecC mu;   // a posteriori mean, G_R G_T
  MatC r_b;  // a posteriori covariance, Hermitian PSD
};

struct Options {
  double eps = 1.0;              // stop when ||Gamma_j - Gamma_{j-1}||_F <= eps
  int max_iterations = 20;       // K_max
  double gamma_floor_rel = 1e-8; // floor = rel * max(gamma), keeps Gamma^{-1} finite
};

// Per-subcarrier EM outcome. loglik holds the marginal log-likelihood
// evaluated at the hyperparameters entering each E-step.
struct SubcarrierEstimate {
  VecC h_b;
  VecD gamma;
  int iterations = 0;
  bool converged = false;
  std::vector<double> loglik;
  std::vector<double> gamma_delta;
};

struct Report {
  std::vector<SubcarrierEstimate> per_k;
  channel::ChannelFrequencyResponse h_hat;
  int max_iterations_used = 0;
};

/// A posteriori moments of the beamspace channel under the prior
/// CN(0, diag(gamma)): R_b = [Psi~^H R_vp^{-1} Psi~ + Gamma^{-1}]^{-1},
/// mu = R_b Psi~^H R_vp^{-1} y_p. gamma entries must be > 0.
PosteriorMoments posterior_moments(const VecC& y_p, const MatC& psi_tilde,
                                   const MatC& r_vp, const VecD& gamma);

/// M-step update: gamma_i = R_b(i,i) + |mu(i)|^2.
VecD update_hyperparameters(const PosteriorMoments& moments);

/// EM hyperparameter estimation for one subcarrier (the pilot-aided loop).
SubcarrierEstimate pabl_estimate(const VecC& y_p, const MatC& psi_tilde,
                                 const MatC& r_vp, const Options& options = {});

/// Runs the per-subcarrier loop for every k and reconstructs H_hat[k]
/// through the dictionaries.
Report pabl_estimate_cfr(const frame::PilotMeasurements& pilots,
                         const sparse::DictionarySet& dict,
                         const std::vector<MatC>& psi_tilde,
                         const Options& options = {});

struct Bcrlb {
  double beamspace;  // Tr(J^{-1})
  double antenna;    // Tr(Psi J^{-1} Psi^H)
};

/// Pilot-aided Bayesian Cramer-Rao lower bound for one subcarrier, with
/// J = Psi~^H R_vp^{-1} Psi~ + Gamma^{-1}.
Bcrlb bcrlb_pa(const MatC& psi_tilde, const MatC& r_vp, const VecD& gamma,
               const MatC& psi);

}  // namespace thz::pabl
